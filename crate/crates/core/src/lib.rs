//! Graphs with exactly three distinct eigenvalues.
//!
//! The crate certifies membership exactly (integer arithmetic only), computes
//! coherent closures by 2-dimensional Weisfeiler–Leman refinement, builds the
//! design-based and orthogonal-array constructions, and enumerates feasible
//! quasi-symmetric design parameters.
//!
//! ```
//! use g3_core::graph::Graph;
//! use g3_core::wl::coherent_rank;
//!
//! let petersen = Graph::petersen();
//! assert_eq!(coherent_rank(&petersen).unwrap(), 3);
//! ```

pub mod acceptance;
pub mod designs;
pub mod error;
pub mod feasibility;
pub mod field;
pub mod graph;
pub mod intmat;
pub mod numtheory;
pub mod oa;
pub mod spectral;
pub mod wl;

pub use error::{Error, Result};
