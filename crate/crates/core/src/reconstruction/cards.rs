//! Card-level features and re-insertion of a deleted matched pair.
//!
//! Every reconstructor works the same way: count feature-bearing cards to
//! decide which case applies, pick out the card (or cards) whose deleted
//! pair it can locate, and put the pair back. Re-insertion generates every
//! way of hanging one new leaf on each side of the card that reproduces the
//! known parent trees, then keeps those that satisfy what the case analysis
//! established about the deleted pair. Candidate sets from several cards
//! are intersected.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, TanglegramMultideck};
use crate::tree::{Shape, Tree};

/// Where a left leaf's partner sits in the card's right tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// Caterpillar depth label, with the two deepest leaves both reported
    /// as `m - 1`.
    Position(usize),
    /// One of the peeled leaves of a strippable tree.
    Strippable,
    /// The non-strippable core.
    Core,
    /// Maximal pending subtree `0` (canonically first) or `1`.
    Side(u8),
}

/// How to read the right tree of a card.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightContext {
    Caterpillar,
    /// Parent right tree is strippable with this many peeled leaves.
    Stripped {
        count: usize,
    },
    Split,
}

/// One distinct card with the per-leaf predicates the case analyses read.
#[derive(Debug, Clone)]
pub struct CardView<'a> {
    pub card: &'a Tanglegram,
    pub multiplicity: usize,
    /// Left leaf indices by distance-to-root label, `v'_1` first; present
    /// iff the card's left tree is a caterpillar.
    pub left_labeling: Option<Vec<usize>>,
    /// Region of the partner of each left leaf, indexed by left leaf.
    pub regions: Vec<Region>,
    context: RightContext,
}

impl<'a> CardView<'a> {
    pub fn new(card: &'a Tanglegram, multiplicity: usize, context: RightContext) -> Self {
        let left_labeling = card
            .left()
            .is_caterpillar()
            .then(|| card.left().strippable_leaf_labeling().expect("caterpillar"));
        let m = card.size();
        let right = card.right();
        let regions = (0..m)
            .map(|l| {
                let r = card.partner(l);
                match context {
                    RightContext::Caterpillar => {
                        Region::Position((r + 1).min(m.saturating_sub(1).max(1)))
                    }
                    RightContext::Stripped { count } => {
                        let peeled = right.stripping().count.min(count);
                        if r < peeled {
                            Region::Strippable
                        } else {
                            Region::Core
                        }
                    }
                    RightContext::Split => {
                        let first = right.children().map_or(1, |(a, _)| a.size());
                        Region::Side(u8::from(r >= first))
                    }
                }
            })
            .collect();
        CardView {
            card,
            multiplicity,
            left_labeling,
            regions,
            context,
        }
    }

    pub fn size(&self) -> usize {
        self.card.size()
    }

    /// Region of the partner of `v'_label` (1-based).
    pub fn region_of_label(&self, label: usize) -> Region {
        let labeling = self
            .left_labeling
            .as_ref()
            .expect("left tree is a caterpillar");
        self.regions[labeling[label - 1]]
    }

    /// Regions read from the deepest left leaf upwards, `v'_m` first. The
    /// two deepest leaves are interchangeable, so both orders are returned.
    pub fn bottom_up_orders(&self) -> [Vec<Region>; 2] {
        let m = self.size();
        let a: Vec<Region> = (1..=m).rev().map(|k| self.region_of_label(k)).collect();
        let mut b = a.clone();
        if m >= 2 {
            b.swap(0, 1);
        }
        [a, b]
    }

    /// True when a strippable right leaf was deleted to produce this card.
    /// Only meaningful under [`RightContext::Stripped`].
    pub fn lost_strippable(&self) -> bool {
        match self.context {
            RightContext::Stripped { count } => self.card.right().stripping().count < count,
            _ => false,
        }
    }
}

/// Builds views of all distinct cards in canonical order.
pub fn card_views(d: &TanglegramMultideck, context: RightContext) -> Vec<CardView<'_>> {
    d.iter()
        .map(|(c, m)| CardView::new(c, m, context))
        .collect()
}

/// Total multiplicity of the cards satisfying `pred`.
pub fn count_cards<'a>(views: &[CardView<'a>], pred: impl Fn(&CardView<'a>) -> bool) -> usize {
    views
        .iter()
        .filter(|v| pred(v))
        .map(|v| v.multiplicity)
        .sum()
}

/// Length of the initial run of `seq` whose elements satisfy `pred`.
pub fn run_length<T>(seq: &[T], pred: impl Fn(&T) -> bool) -> usize {
    seq.iter().take_while(|x| pred(x)).count()
}

/// A candidate parent: the card with one matched pair put back.
#[derive(Debug, Clone)]
pub struct Insertion {
    /// Parent matching on canonical leaf indices of the parent trees.
    pub raw: Vec<usize>,
    /// Parent index of the re-inserted left leaf.
    pub new_left: usize,
    /// Parent index of the re-inserted right leaf.
    pub new_right: usize,
}

impl Insertion {
    pub fn size(&self) -> usize {
        self.raw.len()
    }
}

fn tree_insertions(t: &Tree, target: &Tree) -> Vec<Vec<usize>> {
    let new_label = t.size();
    let mut seen = BTreeSet::new();
    t.to_shape()
        .insertions(new_label)
        .iter()
        .map(Shape::canonicalize)
        .filter(|(tree, _)| tree == target)
        .map(|(_, order)| order)
        .filter(|order| seen.insert(order.clone()))
        .collect()
}

/// Every re-insertion of a matched pair into `card` giving trees
/// `(left, right)`.
pub fn insertions(card: &Tanglegram, left: &Tree, right: &Tree) -> Vec<Insertion> {
    let m = card.size();
    let lefts = tree_insertions(card.left(), left);
    let rights = tree_insertions(card.right(), right);
    let mut out = Vec::with_capacity(lefts.len() * rights.len());
    for lorder in &lefts {
        for rorder in &rights {
            let mut rpos = vec![0; m + 1];
            for (pos, &w) in rorder.iter().enumerate() {
                rpos[w] = pos;
            }
            let raw: Vec<usize> = lorder
                .iter()
                .map(|&w| {
                    if w == m {
                        rpos[m]
                    } else {
                        rpos[card.partner(w)]
                    }
                })
                .collect();
            let new_left = lorder.iter().position(|&w| w == m).expect("inserted");
            out.push(Insertion {
                raw,
                new_left,
                new_right: rpos[m],
            });
        }
    }
    out
}

/// Canonical parents from `card` whose insertion satisfies `accept`.
pub fn completions(
    card: &Tanglegram,
    left: &Tree,
    right: &Tree,
    accept: impl Fn(&Insertion) -> bool,
) -> BTreeSet<Tanglegram> {
    insertions(card, left, right)
        .into_iter()
        .filter(|ins| accept(ins))
        .map(|ins| Tanglegram::from_raw(left.clone(), right.clone(), &ins.raw))
        .collect()
}

/// Caterpillar label test on a parent of size `n`: does leaf `idx` carry
/// one of `labels` (1-based)? The deepest two leaves carry either of
/// `n - 1`, `n`.
pub fn has_label(idx: usize, n: usize, labels: impl IntoIterator<Item = usize>) -> bool {
    labels.into_iter().any(|k| {
        if n >= 2 && idx + 2 >= n {
            k + 2 > n
        } else {
            idx + 1 == k
        }
    })
}

/// Intersects candidate sets and confirms the survivor against `d`.
///
/// When the identified cards leave more than one completion, the one whose
/// own multideck equals `d` is kept. Returns the parent and how many
/// completions survived the intersection.
pub fn resolve(
    d: &TanglegramMultideck,
    sets: Vec<BTreeSet<Tanglegram>>,
) -> Result<(Tanglegram, usize)> {
    let mut iter = sets.into_iter();
    let mut acc = iter.next().unwrap_or_default();
    for s in iter {
        acc = acc.intersection(&s).cloned().collect();
    }
    let candidates = acc.len();
    let mut agreeing = acc
        .into_iter()
        .filter(|t| t.multideck().map(|m| &m == d).unwrap_or(false));
    match (agreeing.next(), agreeing.next()) {
        (Some(t), None) => Ok((t, candidates)),
        (None, _) => Err(Error::inconsistent(format!(
            "no completion among {candidates} candidates reproduces the multideck"
        ))),
        (Some(_), Some(_)) => Err(Error::Ambiguous {
            size: d.parent_size(),
            count: 2 + agreeing.count(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(n: usize) -> Tree {
        Tree::caterpillar(n).unwrap()
    }

    #[test]
    fn labels_with_deepest_pair() {
        assert!(has_label(0, 5, [1]));
        assert!(has_label(3, 5, [4]));
        assert!(has_label(3, 5, [5]));
        assert!(has_label(4, 5, [4]));
        assert!(!has_label(2, 5, [4, 5]));
        assert!(has_label(2, 5, 3..=3));
    }

    #[test]
    fn insertions_recover_every_parent() {
        let t = Tanglegram::new(cat(5), cat(5), &[2, 4, 0, 1, 3]).unwrap();
        for l in 0..5 {
            let card = t.delete_edge(l).unwrap();
            let all = completions(&card, t.left(), t.right(), |_| true);
            assert!(all.contains(&t));
        }
    }

    #[test]
    fn pinned_insertion() {
        let t = Tanglegram::new(cat(6), cat(6), &[2, 4, 0, 1, 3, 5]).unwrap();
        // delete v_1, which sits at right depth 3
        let card = t.delete_edge(0).unwrap();
        let pinned = completions(&card, t.left(), t.right(), |ins| {
            has_label(ins.new_left, 6, [1]) && has_label(ins.new_right, 6, [3])
        });
        assert_eq!(pinned.len(), 1);
        assert!(pinned.contains(&t));
    }

    #[test]
    fn resolve_filters_by_multideck() {
        let t = Tanglegram::new(cat(5), cat(5), &[2, 4, 0, 1, 3]).unwrap();
        let d = t.multideck().unwrap();
        let card = t.delete_edge(0).unwrap();
        let all = completions(&card, t.left(), t.right(), |_| true);
        let (got, n) = resolve(&d, vec![all.clone()]).unwrap();
        assert_eq!(got, t);
        assert_eq!(n, all.len());
        assert!(resolve(&d, vec![BTreeSet::new()]).is_err());
    }
}
