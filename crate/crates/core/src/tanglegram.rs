//! Tanglegrams: two trees of equal size plus a perfect matching of leaves.
//!
//! The matching is stored as a permutation from canonical left-leaf indices
//! to canonical right-leaf indices, minimized lexicographically over the
//! automorphism groups of both trees. Two [`Tanglegram`] values are equal
//! exactly when the tanglegrams are isomorphic. Left and right are never
//! interchanged by that isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::tree::{Tree, TreeMultideck};

/// Largest tanglegram size accepted. Canonicalization walks the product of
/// both automorphism groups, which grows quickly with symmetric trees.
pub const MAX_TANGLEGRAM_SIZE: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tanglegram {
    left: Tree,
    right: Tree,
    matching: Box<[u8]>,
}

/// Byte key that identifies a tanglegram up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TanglegramCode(Box<[u8]>);

impl TanglegramCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl Tanglegram {
    /// Builds the canonical tanglegram for `matching`, which maps each left
    /// leaf index to a right leaf index.
    pub fn new(left: Tree, right: Tree, matching: &[usize]) -> Result<Tanglegram> {
        if left.size() != right.size() {
            return Err(Error::SizeMismatch {
                left: left.size(),
                right: right.size(),
            });
        }
        let n = left.size();
        if n > MAX_TANGLEGRAM_SIZE {
            return Err(Error::SizeTooLarge {
                max: MAX_TANGLEGRAM_SIZE,
                got: n,
            });
        }
        if matching.len() != n {
            return Err(Error::NotBijection { size: n });
        }
        let mut seen = vec![false; n];
        for &r in matching {
            if r >= n || seen[r] {
                return Err(Error::NotBijection { size: n });
            }
            seen[r] = true;
        }
        Ok(Tanglegram::from_raw(left, right, matching))
    }

    /// Canonicalizes without validation; callers guarantee a bijection.
    pub(crate) fn from_raw(left: Tree, right: Tree, raw: &[usize]) -> Tanglegram {
        let matching = minimal_matching(&left, &right, raw);
        Tanglegram {
            left,
            right,
            matching,
        }
    }

    pub fn size(&self) -> usize {
        self.left.size()
    }

    pub fn left(&self) -> &Tree {
        &self.left
    }

    pub fn right(&self) -> &Tree {
        &self.right
    }

    /// Canonical matching: entry `l` is the right leaf matched to left leaf `l`.
    pub fn matching(&self) -> &[u8] {
        &self.matching
    }

    pub fn partner(&self, left_leaf: usize) -> usize {
        self.matching[left_leaf] as usize
    }

    pub fn canonical_code(&self) -> TanglegramCode {
        fn preorder(t: &Tree, out: &mut Vec<u8>) {
            match t.children() {
                None => out.push(0),
                Some((a, b)) => {
                    out.push(1);
                    preorder(a, out);
                    preorder(b, out);
                }
            }
        }
        let mut out = Vec::with_capacity(5 * self.size());
        preorder(&self.left, &mut out);
        preorder(&self.right, &mut out);
        out.extend_from_slice(&self.matching);
        TanglegramCode(out.into_boxed_slice())
    }

    /// Left and right exchanged.
    pub fn mirror(&self) -> Tanglegram {
        let mut inverse = vec![0; self.size()];
        for (l, &r) in self.matching.iter().enumerate() {
            inverse[r as usize] = l;
        }
        Tanglegram::from_raw(self.right.clone(), self.left.clone(), &inverse)
    }

    /// `T[E]` where `E` is given by the left endpoints of the kept edges.
    pub fn induced_subtanglegram(&self, keep: &[usize]) -> Result<Tanglegram> {
        let mask = self.left.leaf_mask(keep)?;
        Ok(self.induce(&mask))
    }

    pub(crate) fn induce(&self, keep_left: &[bool]) -> Tanglegram {
        let n = self.size();
        let mut keep_right = vec![false; n];
        for l in 0..n {
            if keep_left[l] {
                keep_right[self.partner(l)] = true;
            }
        }
        let (left, left_order) = self.left.induce(keep_left).expect("non-empty edge set");
        let (right, right_order) = self.right.induce(&keep_right).expect("non-empty edge set");
        let mut new_pos = vec![usize::MAX; n];
        for (pos, &old) in right_order.iter().enumerate() {
            new_pos[old] = pos;
        }
        let raw: Vec<usize> = left_order
            .iter()
            .map(|&old| new_pos[self.partner(old)])
            .collect();
        Tanglegram::from_raw(left, right, &raw)
    }

    /// `T - vu` where `v` is the given left leaf.
    pub fn delete_edge(&self, left_leaf: usize) -> Result<Tanglegram> {
        let n = self.size();
        if n < 2 {
            return Err(Error::SizeTooSmall { min: 2, got: n });
        }
        if left_leaf >= n {
            return Err(Error::LeafOutOfRange {
                index: left_leaf,
                size: n,
            });
        }
        let mut mask = vec![true; n];
        mask[left_leaf] = false;
        Ok(self.induce(&mask))
    }

    /// Cards in left-leaf order, one per matched pair, not aggregated.
    pub fn cards(&self) -> Result<Vec<Tanglegram>> {
        (0..self.size()).map(|l| self.delete_edge(l)).collect()
    }

    pub fn multideck(&self) -> Result<TanglegramMultideck> {
        let mut entries = BTreeMap::new();
        for card in self.cards()? {
            *entries.entry(card).or_insert(0) += 1;
        }
        Ok(TanglegramMultideck {
            parent_size: self.size(),
            entries,
        })
    }

    pub fn deck(&self) -> Result<BTreeSet<Tanglegram>> {
        self.cards().map(|cards| cards.into_iter().collect())
    }

    pub fn has_caterpillar_side(&self) -> bool {
        self.left.is_caterpillar() || self.right.is_caterpillar()
    }

    /// True when `raw` is already the minimal matching for these trees.
    pub(crate) fn is_minimal_matching(left: &Tree, right: &Tree, raw: &[usize]) -> bool {
        let ga = left.automorphisms();
        let gb = right.automorphisms();
        let inverses: Vec<Vec<usize>> = ga.iter().map(|a| invert(a)).collect();
        for a_inv in &inverses {
            for b in gb.iter() {
                for p in 0..raw.len() {
                    let c = b[raw[a_inv[p]]];
                    match c.cmp(&raw[p]) {
                        std::cmp::Ordering::Less => return false,
                        std::cmp::Ordering::Greater => break,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
        }
        true
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn minimal_matching(left: &Tree, right: &Tree, raw: &[usize]) -> Box<[u8]> {
    let n = raw.len();
    let ga = left.automorphisms();
    let gb = right.automorphisms();
    let mut best: Vec<u8> = vec![u8::MAX; n];
    let mut cand = vec![0u8; n];
    for a in ga.iter() {
        for b in gb.iter() {
            for l in 0..n {
                cand[a[l]] = b[raw[l]] as u8;
            }
            if cand < best {
                best.copy_from_slice(&cand);
            }
        }
    }
    best.into_boxed_slice()
}

impl std::fmt::Debug for Tanglegram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tanglegram({self})")
    }
}

/// Multiset of the size-`(n-1)` induced subtanglegrams of a size-`n`
/// tanglegram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TanglegramMultideck {
    parent_size: usize,
    entries: BTreeMap<Tanglegram, usize>,
}

impl TanglegramMultideck {
    /// Validates and aggregates `(card, multiplicity)` pairs.
    pub fn new(
        parent_size: usize,
        cards: impl IntoIterator<Item = (Tanglegram, usize)>,
    ) -> Result<Self> {
        if parent_size < 2 {
            return Err(Error::SizeTooSmall {
                min: 2,
                got: parent_size,
            });
        }
        let mut entries = BTreeMap::new();
        for (card, mult) in cards {
            if card.size() + 1 != parent_size {
                return Err(Error::InvalidMultideck(format!(
                    "card {card} has size {}, expected {}",
                    card.size(),
                    parent_size - 1
                )));
            }
            if mult == 0 {
                return Err(Error::InvalidMultideck(format!(
                    "card {card} has multiplicity 0"
                )));
            }
            *entries.entry(card).or_insert(0) += mult;
        }
        let total: usize = entries.values().sum();
        if total != parent_size {
            return Err(Error::InvalidMultideck(format!(
                "multiplicities sum to {total}, expected {parent_size}"
            )));
        }
        Ok(TanglegramMultideck {
            parent_size,
            entries,
        })
    }

    pub fn parent_size(&self) -> usize {
        self.parent_size
    }

    pub fn entries(&self) -> &BTreeMap<Tanglegram, usize> {
        &self.entries
    }

    pub fn multiplicity(&self, card: &Tanglegram) -> usize {
        self.entries.get(card).copied().unwrap_or(0)
    }

    /// Distinct cards with multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Tanglegram, usize)> {
        self.entries.iter().map(|(t, &m)| (t, m))
    }

    /// The deck: the set of distinct cards.
    pub fn support(&self) -> BTreeSet<Tanglegram> {
        self.entries.keys().cloned().collect()
    }

    pub fn left_projection(&self) -> TreeMultideck {
        TreeMultideck::new(
            self.parent_size,
            self.iter().map(|(c, m)| (c.left().clone(), m)),
        )
        .expect("projection of a valid multideck is valid")
    }

    pub fn right_projection(&self) -> TreeMultideck {
        TreeMultideck::new(
            self.parent_size,
            self.iter().map(|(c, m)| (c.right().clone(), m)),
        )
        .expect("projection of a valid multideck is valid")
    }

    /// Every card mirrored.
    pub fn mirror(&self) -> TanglegramMultideck {
        let mut entries = BTreeMap::new();
        for (card, m) in self.iter() {
            *entries.entry(card.mirror()).or_insert(0) += m;
        }
        TanglegramMultideck {
            parent_size: self.parent_size,
            entries,
        }
    }
}
