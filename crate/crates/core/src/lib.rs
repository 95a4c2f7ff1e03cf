//! Non-deterministic self-assembly of one- and two-tile sets on a square lattice.
//!
//! - [`tiles`]: colourings, interactions, symmetry reduction and enumeration.
//! - [`assembly`]: the growth engine and structure files.
//! - [`metrics`]: density, slope of the free-side count, critical
//!   concentrations and box-counting dimension.
//! - [`predictor`]: exact local expansion of the mean change in free sides.
//! - [`behaviour`]: single-tile classes, two-tile flags and the catalogue.
//! - [`render`]: SVG output.
//! - [`sweep`] and [`rng`]: deterministic parallel fan-out and seeding.
//!
//! ```
//! use polyassembly::tiles::{enumerate_pairs, enumerate_singles};
//!
//! assert_eq!(enumerate_singles().len(), 13);
//! assert_eq!(enumerate_pairs().len(), 106);
//! ```

pub mod assembly;
pub mod behaviour;
pub mod error;
pub mod metrics;
pub mod poly;
pub mod predictor;
pub mod render;
pub mod rng;
pub mod sweep;
pub mod tiles;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tiles.md")]
    mod tiles {}
    #[doc = include_str!("../../../book/src/assembly.md")]
    mod assembly {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/predictor.md")]
    mod predictor {}
    #[doc = include_str!("../../../book/src/fractal.md")]
    mod fractal {}
    #[doc = include_str!("../../../book/src/behaviour.md")]
    mod behaviour {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
