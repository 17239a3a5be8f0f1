//! Exact multidimensional Sturmian configurations and indistinguishable
//! asymptotic pairs.
//!
//! Slopes are vectors of quadratic surds, so every symbol, difference set
//! and language is computed exactly. Floating point appears only in
//! frequencies and in tiling geometry.

pub mod combinatorics;
pub mod error;
pub mod exactreal;
pub mod io;
pub mod lattice;
pub mod pairs;
pub mod sturmian;
pub mod tiling;

pub use error::{Error, Result};
pub use exactreal::SurdReal;
pub use lattice::{AffineMap, Pattern, Point, Support, Symbol};
pub use pairs::{AsymptoticPair, Config, Configuration};
pub use sturmian::{Side, SlopeVector, SturmianConfig};
