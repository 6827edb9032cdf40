//! Rooted binary trees and tanglegrams: canonical forms, decks and
//! multidecks, exhaustive enumeration, and reconstruction of tanglegrams
//! with a caterpillar side from their multidecks.

pub mod enumeration;
pub mod error;
pub mod reconstruction;
pub mod tanglegram;
pub mod text;
pub mod tree;

pub use enumeration::{
    enumerate_caterpillar_tanglegrams, enumerate_tanglegrams, enumerate_trees, EnumerationTable,
};
pub use error::{Error, Result};
pub use reconstruction::{
    reconstruct, reconstruct_trees, reconstruct_with_ceiling, Method, ReconstructionResult,
};
pub use tanglegram::{Tanglegram, TanglegramCode, TanglegramMultideck};
pub use text::Format;
pub use tree::{Stripping, Tree, TreeMultideck, TreeType};
