//! Caterpillar left tree, strippable (type 1) right tree with stripping
//! `(s, Q)`.
//!
//! Runs are read from the deepest left leaf upwards. Only the two deepest
//! leaves are interchangeable, so every run is taken over both orders.

use super::cards::{
    card_views, completions, has_label, resolve, run_length, CardView, Region, RightContext,
};
use super::{Method, Outcome};
use crate::error::{Error, Result};
use crate::tanglegram::TanglegramMultideck;
use crate::tree::Tree;

/// Counts of cards whose two deepest left leaves are both, exactly one, or
/// none matched into the core `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreSignature {
    pub both: usize,
    pub one: usize,
    pub none: usize,
}

fn core_hits(v: &CardView<'_>) -> usize {
    let m = v.size();
    [m, m - 1]
        .iter()
        .filter(|&&k| v.region_of_label(k) == Region::Core)
        .count()
}

pub fn core_signature(d: &TanglegramMultideck, right: &Tree) -> CoreSignature {
    let views = card_views(
        d,
        RightContext::Stripped {
            count: right.stripping().count,
        },
    );
    let mut sig = CoreSignature {
        both: 0,
        one: 0,
        none: 0,
    };
    for v in &views {
        match core_hits(v) {
            2 => sig.both += v.multiplicity,
            1 => sig.one += v.multiplicity,
            _ => sig.none += v.multiplicity,
        }
    }
    sig
}

/// Longest bottom run of leaves matched into `kind`.
fn bottom_run(v: &CardView<'_>, kind: Region) -> usize {
    v.bottom_up_orders()
        .iter()
        .map(|seq| run_length(seq, |r| *r == kind))
        .max()
        .unwrap_or(0)
}

/// With exactly one deepest leaf in `Q`: the run of strippable matches
/// starting at the other one.
fn strippable_run_above_core(v: &CardView<'_>) -> usize {
    v.bottom_up_orders()
        .iter()
        .filter(|seq| seq[0] == Region::Core)
        .map(|seq| run_length(&seq[1..], |r| *r == Region::Strippable))
        .max()
        .unwrap_or(0)
}

fn missing(what: &str) -> Error {
    Error::inconsistent(format!("no card {what}"))
}

pub(super) fn reconstruct(d: &TanglegramMultideck, left: &Tree, right: &Tree) -> Result<Outcome> {
    let n = d.parent_size();
    let s = right.stripping().count;
    let views = card_views(d, RightContext::Stripped { count: s });
    let region = |r: usize| {
        if r < s {
            Region::Strippable
        } else {
            Region::Core
        }
    };
    let sig = core_signature(d, right);
    let threshold = n - 2;

    let sets = if sig.both >= threshold || sig.none >= threshold {
        // both deepest leaves on one kind K; the bottom K-run has s + 1 leaves
        let kind = if sig.both >= threshold {
            Region::Core
        } else {
            Region::Strippable
        };
        let s_run = views
            .iter()
            .map(|v| bottom_run(v, kind))
            .min()
            .ok_or_else(|| missing("in the multideck"))?;
        let a = views
            .iter()
            .find(|v| bottom_run(v, kind) == s_run)
            .ok_or_else(|| missing("with the shortest bottom run"))?;
        // opposite kind removed: lost_strippable iff K is the core
        let b = views
            .iter()
            .find(|v| v.lost_strippable() == (kind == Region::Core))
            .ok_or_else(|| missing("with the other kind removed"))?;
        vec![
            completions(a.card, left, right, |ins| {
                has_label(ins.new_left, n, n - s_run..=n) && region(ins.new_right) == kind
            }),
            completions(b.card, left, right, |ins| {
                has_label(ins.new_left, n, 1..n - s_run) && region(ins.new_right) != kind
            }),
        ]
    } else if sig.one >= threshold {
        let exactly_one: Vec<&CardView<'_>> = views.iter().filter(|v| core_hits(v) == 1).collect();
        match sig.both {
            1 => {
                // T - v_{n-1}: all of Q present
                let a = views
                    .iter()
                    .find(|v| core_hits(v) == 2)
                    .ok_or_else(|| missing("with both deepest leaves in Q"))?;
                let b = views
                    .iter()
                    .find(|v| !v.lost_strippable())
                    .ok_or_else(|| missing("with a leaf of Q removed"))?;
                vec![
                    completions(a.card, left, right, |ins| {
                        has_label(ins.new_left, n, [n - 1, n])
                            && region(ins.new_right) == Region::Strippable
                    }),
                    completions(b.card, left, right, |ins| {
                        region(ins.new_right) == Region::Core
                    }),
                ]
            }
            0 => {
                let t = 1 + exactly_one
                    .iter()
                    .map(|v| strippable_run_above_core(v))
                    .min()
                    .ok_or_else(|| missing("with one deepest leaf in Q"))?;
                let first = exactly_one
                    .iter()
                    .find(|v| !v.lost_strippable() && strippable_run_above_core(v) >= t)
                    .ok_or_else(|| missing("with a leaf of Q removed and a full strippable run"))?;
                let second = exactly_one
                    .iter()
                    .find(|v| v.lost_strippable() && strippable_run_above_core(v) + 1 == t)
                    .ok_or_else(|| missing("with a strippable leaf removed"))?;
                vec![
                    completions(first.card, left, right, |ins| {
                        has_label(ins.new_left, n, 1..n - t)
                            && region(ins.new_right) == Region::Core
                    }),
                    completions(second.card, left, right, |ins| {
                        has_label(ins.new_left, n, n - t..=n)
                            && region(ins.new_right) == Region::Strippable
                    }),
                ]
            }
            both => {
                return Err(Error::inconsistent(format!(
                    "{both} cards have both deepest leaves in Q"
                )))
            }
        }
    } else {
        return Err(Error::inconsistent(format!(
            "deepest-pair core counts {sig:?} fit no case"
        )));
    };
    let (t, candidates) = resolve(d, sets)?;
    Ok(Outcome {
        tanglegram: t,
        candidates,
        method: Method::CatType1,
    })
}
