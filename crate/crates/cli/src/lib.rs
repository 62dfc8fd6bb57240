//! Model files, query commands and property suites behind the `desir`
//! binary.

pub mod commands;
pub mod model;
pub mod suite;

pub use commands::{ExitStatus, Report};
pub use model::{InputError, Model, ModelFile};
