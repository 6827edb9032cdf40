//! Unlabeled rooted binary trees held in canonical form.
//!
//! A [`Tree`] is either a single leaf or an unordered pair of subtrees. The
//! pair is stored with its children sorted under the canonical order (size
//! first, then smaller child, then larger child), so two trees are equal
//! exactly when they are isomorphic by a root-preserving map.
//!
//! Leaves are indexed `0..size` from left to right in the canonical layout.
//! Every leaf-set operation in this crate speaks in those indices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Tree(Arc<Node>);

struct Node {
    size: usize,
    children: Option<(Tree, Tree)>,
    digest: u64,
    automorphisms: OnceLock<Arc<[Vec<usize>]>>,
}

const LEAF_DIGEST: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over an asymmetric combination
    let mut z = a.rotate_left(23) ^ b.wrapping_mul(0xbf58_476d_1ce4_e5b9) ^ 0x94d0_49bb_1331_11eb;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Peeling count and non-strippable core, `tree = (C_1 ⊕)^count core`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stripping {
    pub count: usize,
    pub core: Tree,
}

impl Stripping {
    /// Folds `C_1 ⊕ ·` back onto the core `count` times.
    pub fn recompose(&self) -> Tree {
        (0..self.count).fold(self.core.clone(), |t, _| Tree::compose(&Tree::leaf(), &t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeType {
    /// Caterpillar.
    Type0,
    /// Strippable but not a caterpillar.
    Type1,
    /// Neither: both maximal pending subtrees have at least two leaves.
    Type2,
}

impl Tree {
    /// The single-leaf tree `C_1`.
    pub fn leaf() -> Tree {
        static LEAF: OnceLock<Tree> = OnceLock::new();
        LEAF.get_or_init(|| {
            Tree(Arc::new(Node {
                size: 1,
                children: None,
                digest: LEAF_DIGEST,
                automorphisms: OnceLock::new(),
            }))
        })
        .clone()
    }

    /// `a ⊕ b`: a new root joined to both arguments. Commutative.
    pub fn compose(a: &Tree, b: &Tree) -> Tree {
        if a <= b {
            Tree::pair(a.clone(), b.clone())
        } else {
            Tree::pair(b.clone(), a.clone())
        }
    }

    // Caller guarantees `small <= large`.
    fn pair(small: Tree, large: Tree) -> Tree {
        debug_assert!(small <= large);
        Tree(Arc::new(Node {
            size: small.size() + large.size(),
            digest: mix(small.0.digest, large.0.digest),
            children: Some((small, large)),
            automorphisms: OnceLock::new(),
        }))
    }

    /// The caterpillar `C_n = C_1 ⊕ C_{n-1}`.
    pub fn caterpillar(n: usize) -> Result<Tree> {
        if n == 0 {
            return Err(Error::SizeTooSmall { min: 1, got: 0 });
        }
        let leaf = Tree::leaf();
        Ok((1..n).fold(leaf.clone(), |t, _| Tree::compose(&leaf, &t)))
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_none()
    }

    /// Children in canonical order, `None` for a leaf.
    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        self.0.children.as_ref().map(|(a, b)| (a, b))
    }

    /// `(T1, T2)` with `T1 ⊕ T2 = self` and `|T1| <= |T2|`.
    pub fn maximal_pending_subtrees(&self) -> Result<(Tree, Tree)> {
        match self.children() {
            Some((a, b)) => Ok((a.clone(), b.clone())),
            None => Err(Error::SizeTooSmall { min: 2, got: 1 }),
        }
    }

    pub fn is_caterpillar(&self) -> bool {
        let mut t = self;
        while let Some((a, b)) = t.children() {
            if !a.is_leaf() {
                return false;
            }
            t = b;
        }
        true
    }

    pub fn stripping(&self) -> Stripping {
        let mut count = 0;
        let mut t = self;
        while let Some((a, b)) = t.children() {
            if !a.is_leaf() {
                break;
            }
            count += 1;
            t = b;
        }
        Stripping {
            count,
            core: t.clone(),
        }
    }

    pub fn classify(&self) -> TreeType {
        if self.is_caterpillar() {
            TreeType::Type0
        } else if self.stripping().count > 0 {
            TreeType::Type1
        } else {
            TreeType::Type2
        }
    }

    /// Root distance of every leaf, in canonical leaf order.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn walk(t: &Tree, depth: usize, out: &mut Vec<usize>) {
            match t.children() {
                None => out.push(depth),
                Some((a, b)) => {
                    walk(a, depth + 1, out);
                    walk(b, depth + 1, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.size());
        walk(self, 0, &mut out);
        out
    }

    /// Distance-to-root labeling of the strippable leaves.
    ///
    /// Entry `k` is the leaf index carrying label `v_{k+1}`. For a caterpillar
    /// the remaining deepest leaf is appended as `v_n`; of the two deepest
    /// leaves the smaller index is `v_{n-1}`.
    pub fn strippable_leaf_labeling(&self) -> Result<Vec<usize>> {
        if self.is_caterpillar() {
            return Ok((0..self.size()).collect());
        }
        match self.stripping().count {
            0 => Err(Error::NotStrippable),
            i => Ok((0..i).collect()),
        }
    }

    /// The tree `T[S]` induced by the leaves in `keep`.
    pub fn induced_subtree(&self, keep: &[usize]) -> Result<Tree> {
        let mask = self.leaf_mask(keep)?;
        Ok(self.induce(&mask).expect("mask is non-empty").0)
    }

    pub(crate) fn leaf_mask(&self, keep: &[usize]) -> Result<Vec<bool>> {
        if keep.is_empty() {
            return Err(Error::EmptyLeafSet);
        }
        let mut mask = vec![false; self.size()];
        for &i in keep {
            if i >= self.size() {
                return Err(Error::LeafOutOfRange {
                    index: i,
                    size: self.size(),
                });
            }
            mask[i] = true;
        }
        Ok(mask)
    }

    /// Induced tree together with the old index of each of its leaves, listed
    /// in the new canonical order. `None` when the mask is empty.
    pub(crate) fn induce(&self, keep: &[bool]) -> Option<(Tree, Vec<usize>)> {
        fn rec(t: &Tree, keep: &[bool], offset: &mut usize) -> Option<(Tree, Vec<usize>)> {
            match t.children() {
                None => {
                    let i = *offset;
                    *offset += 1;
                    keep[i].then(|| (Tree::leaf(), vec![i]))
                }
                Some((a, b)) => {
                    let left = rec(a, keep, offset);
                    let right = rec(b, keep, offset);
                    match (left, right) {
                        (Some(x), Some(y)) => Some(join(x, y)),
                        (Some(x), None) | (None, Some(x)) => Some(x),
                        (None, None) => None,
                    }
                }
            }
        }
        debug_assert_eq!(keep.len(), self.size());
        rec(self, keep, &mut 0)
    }

    /// One card per deleted leaf, aggregated.
    pub fn multideck(&self) -> Result<TreeMultideck> {
        let n = self.size();
        if n < 2 {
            return Err(Error::SizeTooSmall { min: 2, got: n });
        }
        let mut entries = BTreeMap::new();
        let mut mask = vec![true; n];
        for leaf in 0..n {
            mask[leaf] = false;
            let (card, _) = self.induce(&mask).expect("n >= 2");
            *entries.entry(card).or_insert(0) += 1;
            mask[leaf] = true;
        }
        Ok(TreeMultideck {
            parent_size: n,
            entries,
        })
    }

    /// Finds the tree whose multideck is `deck` by searching every tree of
    /// the parent size. Unique for parent sizes of at least 5.
    pub fn from_multideck(deck: &TreeMultideck) -> Result<Tree> {
        let n = deck.parent_size();
        let matches: Vec<Tree> = crate::enumeration::enumerate_trees(n)?
            .into_iter()
            .filter(|t| t.multideck().map(|d| &d == deck).unwrap_or(false))
            .collect();
        match matches.len() {
            0 => Err(Error::NoTreeMatches { size: n }),
            1 => Ok(matches.into_iter().next().unwrap()),
            count => Err(Error::MultipleTreesMatch { size: n, count }),
        }
    }

    /// Automorphism group as leaf permutations: `perm[i]` is the image of
    /// leaf `i`. The identity comes first.
    pub fn automorphisms(&self) -> Arc<[Vec<usize>]> {
        self.0
            .automorphisms
            .get_or_init(|| match self.children() {
                None => Arc::from(vec![vec![0]]),
                Some((a, b)) => {
                    let (na, nb) = (a.size(), b.size());
                    let (ga, gb) = (a.automorphisms(), b.automorphisms());
                    let mut out = Vec::with_capacity(ga.len() * gb.len() * 2);
                    for pa in ga.iter() {
                        for pb in gb.iter() {
                            let mut p: Vec<usize> = pa.clone();
                            p.extend(pb.iter().map(|&x| x + na));
                            out.push(p);
                        }
                    }
                    if a == b {
                        let swapped: Vec<Vec<usize>> = out
                            .iter()
                            .map(|p| p.iter().map(|&x| (x + na) % (na + nb)).collect())
                            .collect();
                        out.extend(swapped);
                    }
                    Arc::from(out)
                }
            })
            .clone()
    }

    /// Labeled copy whose leaf labels are the canonical leaf indices.
    pub(crate) fn to_shape(&self) -> Shape {
        fn rec(t: &Tree, offset: &mut usize) -> Shape {
            match t.children() {
                None => {
                    *offset += 1;
                    Shape::Leaf(*offset - 1)
                }
                Some((a, b)) => {
                    let a = rec(a, offset);
                    let b = rec(b, offset);
                    Shape::Pair(Box::new(a), Box::new(b))
                }
            }
        }
        rec(self, &mut 0)
    }
}

fn join(x: (Tree, Vec<usize>), y: (Tree, Vec<usize>)) -> (Tree, Vec<usize>) {
    let ((ta, mut la), (tb, lb)) = if x.0 <= y.0 { (x, y) } else { (y, x) };
    la.extend(lb);
    (Tree::pair(ta, tb), la)
}

/// A binary tree with labeled leaves in arbitrary child order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Shape {
    Leaf(usize),
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Canonical tree plus the leaf labels read in canonical order.
    pub(crate) fn canonicalize(&self) -> (Tree, Vec<usize>) {
        match self {
            Shape::Leaf(l) => (Tree::leaf(), vec![*l]),
            Shape::Pair(a, b) => join(a.canonicalize(), b.canonicalize()),
        }
    }

    /// Every tree obtained by hanging a new leaf `label` above one node.
    pub(crate) fn insertions(&self, label: usize) -> Vec<Shape> {
        let mut out = vec![Shape::Pair(
            Box::new(Shape::Leaf(label)),
            Box::new(self.clone()),
        )];
        if let Shape::Pair(a, b) = self {
            for x in a.insertions(label) {
                out.push(Shape::Pair(Box::new(x), b.clone()));
            }
            for y in b.insertions(label) {
                out.push(Shape::Pair(a.clone(), Box::new(y)));
            }
        }
        out
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.digest == other.0.digest && self.cmp(other) == Ordering::Equal)
    }
}

impl Eq for Tree {}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| match (self.children(), other.children()) {
                (Some((a1, b1)), Some((a2, b2))) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.digest);
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => f.write_str("*"),
            Some((a, b)) => write!(f, "({a},{b})"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

/// Multiset of the size-`(n-1)` induced subtrees of a size-`n` tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeMultideck {
    parent_size: usize,
    entries: BTreeMap<Tree, usize>,
}

impl TreeMultideck {
    /// Validates and aggregates `(card, multiplicity)` pairs.
    pub fn new(parent_size: usize, cards: impl IntoIterator<Item = (Tree, usize)>) -> Result<Self> {
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
        Ok(TreeMultideck {
            parent_size,
            entries,
        })
    }

    pub fn parent_size(&self) -> usize {
        self.parent_size
    }

    pub fn entries(&self) -> &BTreeMap<Tree, usize> {
        &self.entries
    }

    pub fn multiplicity(&self, card: &Tree) -> usize {
        self.entries.get(card).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, usize)> {
        self.entries.iter().map(|(t, &m)| (t, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(n: usize) -> Tree {
        Tree::caterpillar(n).unwrap()
    }

    fn cherry() -> Tree {
        Tree::compose(&Tree::leaf(), &Tree::leaf())
    }

    #[test]
    fn leaf_basics() {
        let l = Tree::leaf();
        assert_eq!(l.size(), 1);
        assert_eq!(l, cat(1));
        assert_eq!(
            l.stripping(),
            Stripping {
                count: 0,
                core: Tree::leaf()
            }
        );
    }

    #[test]
    fn compose_examples() {
        assert_eq!(cherry(), cat(2));
        assert_eq!(Tree::compose(&Tree::leaf(), &cat(4)), cat(5));
        let balanced = Tree::compose(&cherry(), &cherry());
        assert_eq!(balanced.size(), 4);
        assert_eq!(balanced.stripping().count, 0);
        assert_ne!(balanced, cat(4));
    }

    #[test]
    fn compose_is_commutative_bitwise() {
        let a = cat(3);
        let b = Tree::compose(&cherry(), &cherry());
        let x = Tree::compose(&a, &b);
        let y = Tree::compose(&b, &a);
        assert_eq!(x, y);
        assert_eq!(x.to_string(), y.to_string());
    }

    #[test]
    fn caterpillar_sizes_and_rejects_zero() {
        for n in 1..10 {
            assert_eq!(cat(n).size(), n);
            assert!(cat(n).is_caterpillar());
        }
        assert!(Tree::caterpillar(0).is_err());
        assert_eq!(cat(3).to_string(), "(*,(*,*))");
    }

    #[test]
    fn caterpillar_detection() {
        assert!(cat(7).is_caterpillar());
        assert!(Tree::leaf().is_caterpillar());
        assert!(!Tree::compose(&cherry(), &cherry()).is_caterpillar());
    }

    #[test]
    fn stripping_examples() {
        for n in 1..9 {
            assert_eq!(
                cat(n).stripping(),
                Stripping {
                    count: n - 1,
                    core: Tree::leaf()
                }
            );
        }
        let b4 = Tree::compose(&cherry(), &cherry());
        assert_eq!(
            b4.stripping(),
            Stripping {
                count: 0,
                core: b4.clone()
            }
        );
        let t = Tree::compose(&Tree::leaf(), &b4);
        assert_eq!(
            t.stripping(),
            Stripping {
                count: 1,
                core: b4.clone()
            }
        );
        assert_eq!(t.stripping().recompose(), t);
    }

    #[test]
    fn pending_subtrees() {
        assert_eq!(
            cat(5).maximal_pending_subtrees().unwrap(),
            (Tree::leaf(), cat(4))
        );
        assert_eq!(
            cherry().maximal_pending_subtrees().unwrap(),
            (Tree::leaf(), Tree::leaf())
        );
        let t = Tree::compose(&cat(3), &cherry());
        assert_eq!(t.maximal_pending_subtrees().unwrap(), (cherry(), cat(3)));
        assert!(Tree::leaf().maximal_pending_subtrees().is_err());
    }

    #[test]
    fn classification() {
        let b4 = Tree::compose(&cherry(), &cherry());
        assert_eq!(cat(5).classify(), TreeType::Type0);
        assert_eq!(
            Tree::compose(&Tree::leaf(), &b4).classify(),
            TreeType::Type1
        );
        assert_eq!(
            Tree::compose(&cherry(), &cat(3)).classify(),
            TreeType::Type2
        );
        assert_eq!(b4.classify(), TreeType::Type2);
    }

    #[test]
    fn induced_subtree_edge_cases() {
        let t = Tree::compose(&cat(3), &cherry());
        assert_eq!(t.induced_subtree(&[0, 1, 2, 3, 4]).unwrap(), t);
        assert_eq!(t.induced_subtree(&[3]).unwrap(), Tree::leaf());
        assert_eq!(t.induced_subtree(&[]), Err(Error::EmptyLeafSet));
        assert!(matches!(
            t.induced_subtree(&[5]),
            Err(Error::LeafOutOfRange { .. })
        ));
        // deepest leaves of C_5 are indices 3 and 4
        assert_eq!(cat(5).induced_subtree(&[0, 1, 2, 3]).unwrap(), cat(4));
        assert_eq!(cat(5).induced_subtree(&[0, 1, 2, 4]).unwrap(), cat(4));
    }

    #[test]
    fn induce_reports_old_indices() {
        // (*,(*,*)) ⊕ (*,*) lays out as ((*,*),(*,(*,*)))
        let t = Tree::compose(&cat(3), &cherry());
        let (sub, order) = t.induce(&[false, true, true, true, true]).unwrap();
        assert_eq!(sub, Tree::compose(&Tree::leaf(), &cat(3)));
        assert_eq!(order, vec![1, 2, 3, 4]);
    }

    #[test]
    fn multideck_examples() {
        let d = cat(5).multideck().unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.multiplicity(&cat(4)), 5);
        assert_eq!(cherry().multideck().unwrap().multiplicity(&Tree::leaf()), 2);
        let b4 = Tree::compose(&cherry(), &cherry());
        assert_eq!(b4.multideck().unwrap().multiplicity(&cat(3)), 4);
        assert!(Tree::leaf().multideck().is_err());
    }

    #[test]
    fn caterpillar_deck_degeneracy() {
        for n in 2..=10 {
            let d = cat(n).multideck().unwrap();
            assert_eq!(d.entries().len(), 1);
            assert_eq!(d.multiplicity(&cat(n - 1)), n);
        }
    }

    #[test]
    fn multideck_validation() {
        assert!(TreeMultideck::new(5, [(cat(4), 5)]).is_ok());
        assert!(TreeMultideck::new(5, [(cat(3), 5)]).is_err());
        assert!(TreeMultideck::new(5, [(cat(4), 4)]).is_err());
        assert!(TreeMultideck::new(5, [(cat(4), 5), (cat(4), 0)]).is_err());
    }

    #[test]
    fn from_multideck_examples() {
        let d = TreeMultideck::new(5, [(cat(4), 5)]).unwrap();
        assert_eq!(Tree::from_multideck(&d).unwrap(), cat(5));
        // C_4 and the balanced tree share {C_3: 4}
        let d4 = TreeMultideck::new(4, [(cat(3), 4)]).unwrap();
        assert!(matches!(
            Tree::from_multideck(&d4),
            Err(Error::MultipleTreesMatch { count: 2, .. })
        ));
    }

    #[test]
    fn strippable_labeling() {
        let c5 = cat(5);
        let labels = c5.strippable_leaf_labeling().unwrap();
        let depths = c5.leaf_depths();
        let by_label: Vec<usize> = labels.iter().map(|&i| depths[i]).collect();
        assert_eq!(by_label, vec![1, 2, 3, 4, 4]);

        let b4 = Tree::compose(&cherry(), &cherry());
        let t = Tree::compose(&Tree::leaf(), &Tree::compose(&Tree::leaf(), &b4));
        assert_eq!(t.strippable_leaf_labeling().unwrap().len(), 2);
        assert_eq!(b4.strippable_leaf_labeling(), Err(Error::NotStrippable));
    }

    #[test]
    fn deepest_caterpillar_leaves_are_interchangeable() {
        // swapping the two deepest leaves is an automorphism, so either
        // choice for v_{n-1} yields the same labeled tree up to isomorphism
        let c5 = cat(5);
        let autos = c5.automorphisms();
        assert_eq!(autos.len(), 2);
        assert!(autos
            .iter()
            .any(|p| p[3] == 4 && p[4] == 3 && (0..3).all(|i| p[i] == i)));
        let labels = c5.strippable_leaf_labeling().unwrap();
        assert!(labels[3] < labels[4]);
    }

    #[test]
    fn automorphism_group_sizes() {
        let b4 = Tree::compose(&cherry(), &cherry());
        assert_eq!(b4.automorphisms().len(), 8);
        assert_eq!(cat(6).automorphisms().len(), 2);
        assert_eq!(Tree::leaf().automorphisms().len(), 1);
        for p in b4.automorphisms().iter() {
            let mut q = p.clone();
            q.sort();
            assert_eq!(q, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn insertions_cover_every_edge() {
        let s = cat(3).to_shape();
        assert_eq!(s.insertions(9).len(), 5);
        for ins in s.insertions(9) {
            assert_eq!(ins.canonicalize().0.size(), 4);
        }
    }
}
