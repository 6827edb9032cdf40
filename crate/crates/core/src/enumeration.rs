//! Isomorph-free exhaustive generation of trees and tanglegrams.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, MAX_TANGLEGRAM_SIZE};
use crate::tree::Tree;

/// Largest tanglegram size enumerated without an explicit override.
pub const DEFAULT_CEILING: usize = 7;
/// Largest ceiling an override may request.
pub const MAX_CEILING: usize = 8;

/// All canonical trees with `n` leaves, sorted by canonical order.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>> {
    if n == 0 {
        return Err(Error::SizeTooSmall { min: 1, got: 0 });
    }
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::leaf()]];
    for size in 2..=n {
        let mut level = Vec::new();
        for small in 1..=size / 2 {
            let large = size - small;
            for (i, a) in by_size[small].iter().enumerate() {
                // equal sizes: unordered pairs only
                let start = if small == large { i } else { 0 };
                for b in &by_size[large][start..] {
                    level.push(Tree::compose(a, b));
                }
            }
        }
        level.sort();
        level.dedup();
        by_size.push(level);
    }
    Ok(by_size.swap_remove(n))
}

fn check_ceiling(n: usize, ceiling: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SizeTooSmall { min: 1, got: 0 });
    }
    if ceiling > MAX_CEILING {
        return Err(Error::AboveCeiling {
            n: ceiling,
            ceiling: MAX_CEILING,
        });
    }
    if n > ceiling {
        return Err(Error::AboveCeiling { n, ceiling });
    }
    Ok(())
}

/// Every canonical tanglegram on the given tree pair, sorted by matching.
pub fn tanglegrams_on(left: &Tree, right: &Tree) -> Vec<Tanglegram> {
    let n = left.size();
    assert_eq!(n, right.size());
    assert!(n <= MAX_TANGLEGRAM_SIZE);
    // lexicographic permutation order yields sorted output
    (0..n)
        .permutations(n)
        .filter(|raw| Tanglegram::is_minimal_matching(left, right, raw))
        .map(|raw| Tanglegram::from_raw(left.clone(), right.clone(), &raw))
        .collect()
}

fn enumerate_pairs(pairs: Vec<(Tree, Tree)>) -> Vec<Tanglegram> {
    // distinct tree pairs never produce equal tanglegrams, so the merge is a
    // plain ordered concatenation
    pairs
        .par_iter()
        .map(|(l, r)| tanglegrams_on(l, r))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// All canonical tanglegrams of size `n`, each exactly once, in canonical
/// order. Limited to [`DEFAULT_CEILING`].
pub fn enumerate_tanglegrams(n: usize) -> Result<Vec<Tanglegram>> {
    enumerate_tanglegrams_with_ceiling(n, DEFAULT_CEILING)
}

pub fn enumerate_tanglegrams_with_ceiling(n: usize, ceiling: usize) -> Result<Vec<Tanglegram>> {
    check_ceiling(n, ceiling)?;
    let trees = enumerate_trees(n)?;
    let pairs = trees
        .iter()
        .cartesian_product(trees.iter())
        .map(|(l, r)| (l.clone(), r.clone()))
        .collect();
    Ok(enumerate_pairs(pairs))
}

/// Tanglegrams of size `n` with a caterpillar on at least one side.
pub fn enumerate_caterpillar_tanglegrams(n: usize) -> Result<Vec<Tanglegram>> {
    enumerate_caterpillar_tanglegrams_with_ceiling(n, DEFAULT_CEILING)
}

pub fn enumerate_caterpillar_tanglegrams_with_ceiling(
    n: usize,
    ceiling: usize,
) -> Result<Vec<Tanglegram>> {
    check_ceiling(n, ceiling)?;
    let trees = enumerate_trees(n)?;
    let pairs = trees
        .iter()
        .cartesian_product(trees.iter())
        .filter(|(l, r)| l.is_caterpillar() || r.is_caterpillar())
        .map(|(l, r)| (l.clone(), r.clone()))
        .collect();
    Ok(enumerate_pairs(pairs))
}

/// Trees and tanglegrams of one size.
#[derive(Debug, Clone)]
pub struct EnumerationTable {
    pub size: usize,
    pub trees: Vec<Tree>,
    pub tanglegrams: Vec<Tanglegram>,
}

impl EnumerationTable {
    pub fn build(n: usize, ceiling: usize) -> Result<Self> {
        Ok(EnumerationTable {
            size: n,
            trees: enumerate_trees(n)?,
            tanglegrams: enumerate_tanglegrams_with_ceiling(n, ceiling)?,
        })
    }

    /// `(tree_count, tanglegram_count)`.
    pub fn counts(&self) -> (usize, usize) {
        (self.trees.len(), self.tanglegrams.len())
    }
}
