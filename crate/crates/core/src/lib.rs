//! Exact computer algebra for formal CR geometry.
//!
//! The crate is layered bottom-up:
//!
//! * [`series`]: truncated multivariate power series over the Gaussian rationals;
//! * [`linalg`]: fraction-field arithmetic, determinants and certified generic rank;
//! * [`hypersurface`]: real hypersurfaces in normal coordinates and their classifiers;
//! * [`crmap`]: formal holomorphic maps between such hypersurfaces;
//! * [`prolongation`]: recovery of jets of `b` from jets of `A b`;
//! * [`families`]: constructors for the standard model hypersurfaces and maps;
//! * [`verify`]: theorem statements run as properties over an instance registry.

pub mod crmap;
pub mod families;
pub mod hypersurface;
pub mod linalg;
pub mod prolongation;
pub mod scalar;
pub mod series;
pub mod verdict;
pub mod verify;

pub use scalar::Scalar;
pub use series::{FormalMap, MultiIndex, Order, Series, SeriesError};
pub use verdict::{Status, Verdict, Witness};
