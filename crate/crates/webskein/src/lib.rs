//! File formats, relation suites and the command runner for `webskein`.

pub mod cli;
pub mod format;
pub mod verify;
