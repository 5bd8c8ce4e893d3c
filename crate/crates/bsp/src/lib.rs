//! File formats, the acceptance suite and the `bsp` command line on top of `bsp-core`.

pub mod cli;
pub mod format;
pub mod suite;

pub use cli::{run, Cli, Outcome};
