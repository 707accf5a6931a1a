//! Orientations of the n-dimensional hypercube whose in-degrees take exactly
//! two values.
//!
//! The crate decides whether an instance `[a,b]_n` is realizable, builds a
//! witness orientation by reducing the instance to a primitive one (built from
//! thickened Hamming balls and Euler tours), and verifies the result
//! independently. The hat-guessing view of an orientation, exhaustive oracles
//! for small cases, and the k-ary marking generalization live alongside.
//!
//! ```
//! use hypercube_orient::{reductions, verify};
//!
//! let o = reductions::construct(1, 5, 5).unwrap();
//! let report = verify::verify(&o, 1, 5);
//! assert!(report.pass);
//! assert_eq!(report.histogram.to_string(), "{1:20, 5:12}");
//! ```

pub mod cube;
pub mod error;
pub mod euler;
mod exact_cover;
pub mod feasibility;
pub mod hamming;
pub mod io;
pub mod kary;
pub mod primitive;
pub mod reductions;
pub mod verify;

pub use cube::{DegreeHistogram, Orientation, ProblemSpec, Vertex};
pub use error::{Error, Result};
