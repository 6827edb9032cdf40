//! Reconstruction of tanglegrams from their multidecks.
//!
//! When either tree is a caterpillar and the size is at least 5 the
//! tanglegram is recovered by case analysis on card features, dispatched on
//! the type of the other tree. Everything else goes to exhaustive search.

pub mod cards;
mod cat_cat;
mod cat_type1;
mod cat_type2;
mod oracle;

use std::fmt;

use crate::error::{Error, Result};
use crate::tanglegram::{Tanglegram, TanglegramMultideck};
use crate::tree::{Tree, TreeType};

pub use cat_cat::{cherry_signature, double_cherry_signature, first_partner_distribution};
pub use cat_type1::{core_signature, CoreSignature};
pub use cat_type2::same_side_signature;
pub use oracle::{
    oracle_matches, oracle_search, oracle_search_with_ceiling, verify_multideck_uniqueness,
    verify_multideck_uniqueness_with_ceiling, DeckVariant, UniquenessReport,
};

/// Smallest size handled by case analysis.
pub const MIN_CASE_ANALYSIS_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CatCat,
    CatType1,
    CatType2,
    OracleSearch,
    SmallCaseTable,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::CatCat => "cat-cat",
            Method::CatType1 => "cat-type1",
            Method::CatType2 => "cat-type2",
            Method::OracleSearch => "oracle-search",
            Method::SmallCaseTable => "small-case-table",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionResult {
    pub tanglegram: Tanglegram,
    pub method: Method,
    /// The multideck of `tanglegram` equals the input.
    pub self_check: bool,
    /// Sides were swapped so that the caterpillar is on the left.
    pub mirrored: bool,
    /// Completions left by the identified cards before the final multideck
    /// comparison.
    pub candidates: usize,
}

pub(crate) struct Outcome {
    tanglegram: Tanglegram,
    candidates: usize,
    method: Method,
}

/// Recovers both trees from the projected multidecks.
pub fn reconstruct_trees(d: &TanglegramMultideck) -> Result<(Tree, Tree)> {
    Ok((
        Tree::from_multideck(&d.left_projection())?,
        Tree::from_multideck(&d.right_projection())?,
    ))
}

fn finish(d: &TanglegramMultideck, out: Outcome, mirrored: bool) -> Result<ReconstructionResult> {
    let tanglegram = if mirrored {
        out.tanglegram.mirror()
    } else {
        out.tanglegram
    };
    let self_check = tanglegram.multideck()? == *d;
    if !self_check {
        return Err(Error::inconsistent(
            "reconstructed tanglegram does not reproduce the multideck",
        ));
    }
    Ok(ReconstructionResult {
        tanglegram,
        method: out.method,
        self_check,
        mirrored,
        candidates: out.candidates,
    })
}

fn check_size(d: &TanglegramMultideck) -> Result<usize> {
    let n = d.parent_size();
    if n < MIN_CASE_ANALYSIS_SIZE {
        return Err(Error::SizeTooSmall {
            min: MIN_CASE_ANALYSIS_SIZE,
            got: n,
        });
    }
    Ok(n)
}

fn expect_trees(
    d: &TanglegramMultideck,
    left_ok: impl Fn(&Tree) -> bool,
    right_ok: impl Fn(&Tree) -> bool,
    what: &str,
) -> Result<(Tree, Tree)> {
    check_size(d)?;
    let (l, r) = reconstruct_trees(d)?;
    if !left_ok(&l) || !right_ok(&r) {
        return Err(Error::inconsistent(format!(
            "trees are not {what}: ({l}, {r})"
        )));
    }
    Ok((l, r))
}

/// Both trees caterpillars.
pub fn reconstruct_cat_cat(d: &TanglegramMultideck) -> Result<ReconstructionResult> {
    expect_trees(
        d,
        Tree::is_caterpillar,
        Tree::is_caterpillar,
        "two caterpillars",
    )?;
    finish(d, cat_cat::reconstruct(d)?, false)
}

/// Caterpillar on the left, type 1 tree on the right.
pub fn reconstruct_cat_type1(d: &TanglegramMultideck) -> Result<ReconstructionResult> {
    let (l, r) = expect_trees(
        d,
        Tree::is_caterpillar,
        |t| t.classify() == TreeType::Type1,
        "a caterpillar and a type 1 tree",
    )?;
    finish(d, cat_type1::reconstruct(d, &l, &r)?, false)
}

/// Caterpillar on the left, type 2 tree on the right.
pub fn reconstruct_cat_type2(d: &TanglegramMultideck) -> Result<ReconstructionResult> {
    let (l, r) = expect_trees(
        d,
        Tree::is_caterpillar,
        |t| t.classify() == TreeType::Type2,
        "a caterpillar and a type 2 tree",
    )?;
    finish(d, cat_type2::reconstruct(d, &l, &r)?, false)
}

fn dispatch(d: &TanglegramMultideck, l: &Tree, r: &Tree) -> Result<Outcome> {
    debug_assert!(l.is_caterpillar());
    match r.classify() {
        TreeType::Type0 => cat_cat::reconstruct(d),
        TreeType::Type1 => cat_type1::reconstruct(d, l, r),
        TreeType::Type2 => cat_type2::reconstruct(d, l, r),
    }
}

fn by_search(d: &TanglegramMultideck, ceiling: usize) -> Result<ReconstructionResult> {
    let out = Outcome {
        tanglegram: oracle_search_with_ceiling(d, ceiling)?,
        candidates: 1,
        method: Method::OracleSearch,
    };
    finish(d, out, false)
}

/// Reconstructs the tanglegram with multideck `d`.
///
/// Sizes below [`MIN_CASE_ANALYSIS_SIZE`] and tanglegrams without a
/// caterpillar side are searched exhaustively, up to
/// [`DEFAULT_CEILING`](crate::enumeration::DEFAULT_CEILING).
pub fn reconstruct(d: &TanglegramMultideck) -> Result<ReconstructionResult> {
    reconstruct_with_ceiling(d, crate::enumeration::DEFAULT_CEILING)
}

/// [`reconstruct`] with an explicit size ceiling for exhaustive search.
pub fn reconstruct_with_ceiling(
    d: &TanglegramMultideck,
    ceiling: usize,
) -> Result<ReconstructionResult> {
    if d.parent_size() < MIN_CASE_ANALYSIS_SIZE {
        return by_search(d, ceiling);
    }
    let (l, r) = reconstruct_trees(d)?;
    if l.is_caterpillar() {
        finish(d, dispatch(d, &l, &r)?, false)
    } else if r.is_caterpillar() {
        let mirrored = d.mirror();
        finish(d, dispatch(&mirrored, &r, &l)?, true)
    } else {
        by_search(d, ceiling)
    }
}
