pub mod cli;
pub mod error;
pub mod fixtures;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod perm;
pub mod pure;
pub mod random;
pub mod sampler;

pub use error::{Error, Result};
