//! Ring specs, the test corpus, verification suites and the `witt-lab` CLI.

pub mod checks;
pub mod cli;
pub mod corpus;
pub mod report;
pub mod spec;
pub mod suite;
