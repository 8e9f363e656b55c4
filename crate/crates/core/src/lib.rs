//! Equational reasoning for medial groupoids.
//!
//! The crate decides membership of groupoid identities in the varieties
//! generated by the abelian group operations x+y, x-y, -x+y, -x-y, derives
//! interchange laws from the six mutation laws with replayable proof traces,
//! decides which leaf-color count tuples are realized by Klein-colored trees,
//! and decides exactly, through multicirculant spectra, when the interchange
//! laws of a two-generated finite abelian group form a basis for its
//! identities.

pub mod group;
pub mod harness;
pub mod interchange;
pub mod rewrite;
pub mod signature;
pub mod spectral;
pub mod term;
pub mod total_color;
