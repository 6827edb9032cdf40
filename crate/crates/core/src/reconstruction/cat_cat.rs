//! Both trees caterpillars.
//!
//! Leaves are named by distance-to-root labels: `v_k` on the left, `u_k` on
//! the right, primed on cards. On a caterpillar of size `m` the two deepest
//! leaves share labels `m - 1` and `m`; positions below are normalized so
//! that both read `m - 1` ("the cherry").

use std::collections::BTreeMap;

use super::cards::{completions, has_label, resolve};
use super::oracle::small_case_lookup;
use super::{Method, Outcome};
use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, TanglegramMultideck};
use crate::tree::Tree;

struct Card<'a> {
    card: &'a Tanglegram,
    mult: usize,
    m: usize,
}

impl<'a> Card<'a> {
    fn new(card: &'a Tanglegram, mult: usize) -> Self {
        Card {
            card,
            mult,
            m: card.size(),
        }
    }

    /// Normalized right position of the partner of `v'_k`.
    fn pos(&self, k: usize) -> usize {
        (self.card.partner(k - 1) + 1).min(self.m - 1)
    }

    fn in_cherry(&self, k: usize) -> bool {
        self.pos(k) == self.m - 1
    }

    /// Normalized left label of a left leaf index.
    fn left_label(&self, idx: usize) -> usize {
        (idx + 1).min(self.m - 1)
    }

    /// `pi[k - 1]` = right label matched to `v'_k`, for each choice of
    /// labels on both deepest pairs.
    fn labelings(&self) -> Vec<Vec<usize>> {
        let m = self.m;
        let mut out = Vec::with_capacity(4);
        for lswap in [false, true] {
            for rswap in [false, true] {
                let pi = (0..m)
                    .map(|k| {
                        let l = if lswap && k + 2 >= m {
                            2 * m - 3 - k
                        } else {
                            k
                        };
                        let r = self.card.partner(l);
                        let r = if rswap && r + 2 >= m {
                            2 * m - 3 - r
                        } else {
                            r
                        };
                        r + 1
                    })
                    .collect();
                out.push(pi);
            }
        }
        out
    }

    /// Longest prefix `v'_1..v'_r` with `pi(k) == expect(pi(1), k)`, over all
    /// labelings.
    fn run(&self, expect: impl Fn(usize, usize) -> Option<usize>) -> usize {
        self.labelings()
            .iter()
            .map(|pi| {
                (1..=self.m)
                    .take_while(|&k| expect(pi[0], k) == Some(pi[k - 1]))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

fn cards(d: &TanglegramMultideck) -> Vec<Card<'_>> {
    d.iter().map(|(c, m)| Card::new(c, m)).collect()
}

fn count(cards: &[Card<'_>], pred: impl Fn(&Card<'_>) -> bool) -> usize {
    cards.iter().filter(|c| pred(c)).map(|c| c.mult).sum()
}

fn missing(what: &str) -> Error {
    Error::inconsistent(format!("no card {what}"))
}

/// Cards (with multiplicity) on which `v'_1` is matched into the cherry of
/// the right tree.
pub fn cherry_signature(d: &TanglegramMultideck) -> usize {
    count(&cards(d), |c| c.in_cherry(1))
}

/// Normalized right positions matched to `v'_1`, with card multiplicities.
pub fn first_partner_distribution(d: &TanglegramMultideck) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for c in cards(d) {
        *out.entry(c.pos(1)).or_insert(0) += c.mult;
    }
    out
}

/// Cards on which both `v'_1` and `v'_2` are matched into the cherry.
pub fn double_cherry_signature(d: &TanglegramMultideck) -> usize {
    count(&cards(d), |c| c.in_cherry(1) && c.in_cherry(2))
}

/// Re-inserts the pair `(v_left, u_right)` with labels drawn from the
/// given sets.
fn reinsert(
    card: &Tanglegram,
    n: usize,
    tree: &Tree,
    left: impl IntoIterator<Item = usize> + Clone,
    right: impl IntoIterator<Item = usize> + Clone,
) -> std::collections::BTreeSet<Tanglegram> {
    completions(card, tree, tree, |ins| {
        has_label(ins.new_left, n, left.clone()) && has_label(ins.new_right, n, right.clone())
    })
}

pub(super) fn reconstruct(d: &TanglegramMultideck) -> Result<Outcome> {
    let n = d.parent_size();
    let tree = Tree::caterpillar(n)?;
    let cs = cards(d);
    if count(&cs, |c| c.in_cherry(1)) + 1 >= n {
        return cherry_case(d, &cs, &tree);
    }
    let (card, i) = if count(&cs, |c| c.pos(1) == 1) + 1 >= n {
        // v_1 u_1: the cards from the maximal identity prefix are the ones
        // where it is shortest
        let card = cs
            .iter()
            .min_by_key(|c| c.run(|_, k| Some(k)))
            .ok_or_else(|| missing("in the multideck"))?;
        (card.card, 1)
    } else {
        first_partner_case(&cs)?
    };
    let set = reinsert(card, n, &tree, [1], [i]);
    let (t, candidates) = resolve(d, vec![set])?;
    Ok(Outcome {
        tanglegram: t,
        candidates,
        method: Method::CatCat,
    })
}

/// `v_1` matched to `u_i` with `1 < i < n - 1`: locate `i` and the card
/// `T - v_1 u_i` from the partners of `v'_1`.
fn first_partner_case<'a>(cs: &[Card<'a>]) -> Result<(&'a Tanglegram, usize)> {
    let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
    for c in cs {
        *dist.entry(c.pos(1)).or_insert(0) += c.mult;
    }
    let values: Vec<usize> = dist.keys().copied().collect();
    let with_pos = |p: usize| cs.iter().find(|c| c.pos(1) == p);
    match values[..] {
        [a, b] if b == a + 1 => {
            let i = b;
            let card = if dist[&a] == a {
                // j = i + 1: shortest increasing run
                cs.iter().min_by_key(|c| c.run(|p, k| Some(p + k - 1)))
            } else {
                // j = i - 1: shortest decreasing run
                cs.iter()
                    .min_by_key(|c| c.run(|p, k| (p + 1).checked_sub(k)))
            };
            Ok((card.ok_or_else(|| missing("for v_1"))?.card, i))
        }
        [x, y, z] if y == x + 1 && z == y + 1 => {
            if dist[&z] == 1 {
                let card = with_pos(z).ok_or_else(|| missing("for v_1"))?;
                Ok((card.card, y))
            } else {
                let card = with_pos(x).ok_or_else(|| missing("for v_1"))?;
                Ok((card.card, z))
            }
        }
        [x, y, z] => {
            let (i, odd) = if y == x + 1 {
                (y, z)
            } else if z == y + 1 {
                (z, x)
            } else {
                return Err(Error::inconsistent(
                    "partners of v'_1 have no consecutive pair",
                ));
            };
            let card = with_pos(odd).ok_or_else(|| missing("for v_1"))?;
            Ok((card.card, i))
        }
        _ => Err(Error::inconsistent(format!(
            "v'_1 is matched to {} distinct positions",
            values.len()
        ))),
    }
}

/// `v_1` matched into the right cherry.
fn cherry_case(d: &TanglegramMultideck, cs: &[Card<'_>], tree: &Tree) -> Result<Outcome> {
    let n = d.parent_size();
    if n == 5 {
        let t = small_case_lookup(d)?;
        return Ok(Outcome {
            tanglegram: t,
            candidates: 1,
            method: Method::SmallCaseTable,
        });
    }
    let cherry = [n - 1, n];
    let outside: Vec<&Card<'_>> = cs.iter().filter(|c| !c.in_cherry(1)).collect();
    let (card, k) = match outside[..] {
        // v_2 far from the cherry: T - v_1 u_n is the only card with v'_1
        // outside the cherry
        [only] if only.mult == 1 => (only.card, 1),
        [] => {
            let both = |c: &Card<'_>| c.in_cherry(1) && c.in_cherry(2);
            let c2 = count(cs, both);
            if c2 == n {
                let card = cs
                    .iter()
                    .min_by_key(|c| c.run(|_, k| (c.m + 1).checked_sub(k)))
                    .ok_or_else(|| missing("in the multideck"))?;
                (card.card, 1)
            } else if c2 + 2 == n {
                let card = cs
                    .iter()
                    .find(|c| !both(c))
                    .ok_or_else(|| missing("with v'_2 outside the cherry"))?;
                (card.card, 1)
            } else if c2 == 3 {
                let card = cs
                    .iter()
                    .find(|c| both(c))
                    .ok_or_else(|| missing("with v'_1, v'_2 in the cherry"))?;
                (card.card, 1)
            } else if c2 == 1 {
                let card = cs
                    .iter()
                    .find(|c| both(c))
                    .ok_or_else(|| missing("with v'_1, v'_2 in the cherry"))?;
                // other cards put v'_{k-1} or v'_k beside v'_1 in the cherry
                let k = cs
                    .iter()
                    .filter(|c| !both(c))
                    .filter_map(|c| {
                        (1..c.m)
                            .find(|&l| c.card.partner(l) + 2 >= c.m)
                            .map(|l| c.left_label(l))
                    })
                    .min()
                    .ok_or_else(|| missing("without v'_2 in the cherry"))?;
                (card.card, k + 1)
            } else {
                return Err(Error::inconsistent(format!(
                    "{c2} cards match v'_1 and v'_2 into the cherry"
                )));
            }
        }
        _ => {
            return Err(Error::inconsistent(format!(
                "{} cards have v'_1 outside the cherry",
                count(cs, |c| !c.in_cherry(1))
            )))
        }
    };
    let set = reinsert(card, n, tree, [k], cherry);
    let (t, candidates) = resolve(d, vec![set])?;
    Ok(Outcome {
        tanglegram: t,
        candidates,
        method: Method::CatCat,
    })
}
