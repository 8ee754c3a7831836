//! Library surface of the command-line front end: the DSL and the command
//! implementations, so integration tests can drive them in process.

pub mod commands;
pub mod dsl;
pub mod report;
