pub mod ainfty;
pub mod cli;
pub mod error;
pub mod free;
pub mod io;
pub mod lift;
pub mod quiver;
pub mod random;
pub mod scalars;
pub mod tensor;
pub mod trees;

pub use error::{Error, Result};
