//! Command-line companion to [`pfle_core`]: exact-number instance files, a
//! seeded generator, report rendering, and the verbs behind the `pfle`
//! binary.

#![forbid(unsafe_code)]

pub mod commands;
pub mod format;
pub mod generate;
pub mod numeric;
pub mod report;
