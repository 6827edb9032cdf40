//! Caterpillar left tree, right tree `R_1 ⊕ R_2` with both parts of size at
//! least two.
//!
//! Card sides are only compared with each other: deleting a leaf can swap
//! the canonical order of the two pending subtrees, so side `0` on a card
//! need not be side `0` of the parent.

use super::cards::{
    card_views, completions, has_label, resolve, run_length, CardView, Region, RightContext,
};
use super::{Method, Outcome};
use crate::error::{Error, Result};
use crate::tanglegram::TanglegramMultideck;
use crate::tree::Tree;

fn side_size(v: &CardView<'_>, side: Region) -> usize {
    let (a, b) = v
        .card
        .right()
        .children()
        .expect("card right tree has two sides");
    if side == Region::Side(0) {
        a.size()
    } else {
        b.size()
    }
}

fn deepest_same_side(v: &CardView<'_>) -> bool {
    let m = v.size();
    v.region_of_label(m) == v.region_of_label(m - 1)
}

/// Cards whose two deepest left leaves are matched into the same side.
pub fn same_side_signature(d: &TanglegramMultideck) -> usize {
    card_views(d, RightContext::Split)
        .iter()
        .filter(|v| deepest_same_side(v))
        .map(|v| v.multiplicity)
        .sum()
}

/// Bottom run on one side with the side it lies on. Split deepest pairs
/// give a run of one.
fn bottom_run(v: &CardView<'_>) -> (usize, Region) {
    v.bottom_up_orders()
        .iter()
        .map(|seq| (run_length(seq, |r| *r == seq[0]), seq[0]))
        .max()
        .expect("card is non-empty")
}

/// For a split deepest pair: each `(run, side)` obtained by taking one
/// deepest leaf as `v'_{m}` and running upward from the other.
fn runs_above_split(v: &CardView<'_>) -> Vec<(usize, Region)> {
    v.bottom_up_orders()
        .iter()
        .map(|seq| (run_length(&seq[1..], |r| *r == seq[1]), seq[1]))
        .collect()
}

fn missing(what: &str) -> Error {
    Error::inconsistent(format!("no card {what}"))
}

pub(super) fn reconstruct(d: &TanglegramMultideck, left: &Tree, right: &Tree) -> Result<Outcome> {
    let n = d.parent_size();
    let first = right
        .children()
        .map(|(a, _)| a.size())
        .ok_or(Error::SizeTooSmall { min: 2, got: 1 })?;
    let side = |r: usize| r >= first;
    let views = card_views(d, RightContext::Split);
    let same = same_side_signature(d);

    let sets = if same + 2 >= n {
        // v_n and v_{n-1} on the same side R_i, bottom run of s + 1 leaves
        let s = views
            .iter()
            .map(|v| bottom_run(v).0)
            .min()
            .ok_or_else(|| missing("in the multideck"))?;
        let a = views
            .iter()
            .find(|v| bottom_run(v).0 == s)
            .ok_or_else(|| missing("with the shortest bottom run"))?;
        // cards keeping all of R_i show it at full size on their run side
        let longer: Vec<&CardView<'_>> = views.iter().filter(|v| bottom_run(v).0 > s).collect();
        let b = longer
            .iter()
            .max_by_key(|v| {
                let (_, run_side) = bottom_run(v);
                side_size(v, run_side)
            })
            .ok_or_else(|| missing("with a longer bottom run"))?;
        vec![
            completions(a.card, left, right, |ins| {
                has_label(ins.new_left, n, n - s..=n) && side(ins.new_right) == side(ins.raw[n - 1])
            }),
            completions(b.card, left, right, |ins| {
                has_label(ins.new_left, n, 1..n - s) && side(ins.new_right) != side(ins.raw[n - 1])
            }),
        ]
    } else if same == 1 {
        // T - v_n, with v_{n-1}..v_{n-t} on R_{3-i} and v_n on R_i
        let card1 = views
            .iter()
            .find(|v| deepest_same_side(v))
            .ok_or_else(|| missing("with both deepest leaves on one side"))?;
        let (t, run_side) = bottom_run(card1);
        let r = side_size(card1, run_side);
        let split: Vec<&CardView<'_>> = views.iter().filter(|v| !deepest_same_side(v)).collect();
        // deleting the leaf just above the run lengthens it, and when R_i has
        // two leaves that is the only candidate; features cannot always
        // single the card out, so completions are pooled over all matches
        let card2: Vec<&&CardView<'_>> = split
            .iter()
            .filter(|v| {
                runs_above_split(v)
                    .iter()
                    .any(|&(run, sd)| run >= t && side_size(v, sd) == r)
            })
            .collect();
        if card2.is_empty() {
            return Err(missing("with a leaf of R_i removed"));
        }
        // with |R_1| = |R_2| side sizes cannot tell which part lost a leaf
        let card3: Vec<&&CardView<'_>> = split
            .iter()
            .filter(|v| {
                runs_above_split(v)
                    .iter()
                    .any(|&(run, sd)| run + 1 == t && side_size(v, sd) + 1 == r)
            })
            .collect();
        if card3.is_empty() {
            return Err(missing("with a leaf of R_{3-i} removed"));
        }
        // v_{n-2} sits at index n - 3 and is matched into R_{3-i}
        let far = |raw: &[usize]| side(raw[n - 3]);
        vec![
            completions(card1.card, left, right, |ins| {
                has_label(ins.new_left, n, [n - 1, n])
                    && side(ins.new_right) != far(&ins.raw)
                    && side(ins.raw[n - 2]) != side(ins.raw[n - 1])
            }),
            card2
                .iter()
                .flat_map(|v| {
                    completions(v.card, left, right, |ins| {
                        has_label(ins.new_left, n, 1..n - t) && side(ins.new_right) != far(&ins.raw)
                    })
                })
                .collect(),
            card3
                .iter()
                .flat_map(|v| {
                    completions(v.card, left, right, |ins| {
                        has_label(ins.new_left, n, n - t..=n)
                            && side(ins.new_right) == far(&ins.raw)
                    })
                })
                .collect(),
        ]
    } else {
        return Err(Error::inconsistent(format!(
            "{same} cards have both deepest leaves on one side"
        )));
    };
    let (t, candidates) = resolve(d, sets)?;
    Ok(Outcome {
        tanglegram: t,
        candidates,
        method: Method::CatType2,
    })
}
