//! Exact combinatorics of hyperplane, toric and elliptic arrangements, and
//! rank-one twisted cohomology computed from first principles.

pub mod arrangement;
pub mod covers;
pub mod elliptic;
mod error;
pub mod linalg;
pub mod poset;
pub mod salvetti;
pub mod simplicial;
pub mod toric;

pub use error::{Error, Result};
