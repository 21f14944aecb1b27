//! Parsing, building, and reporting for the `midshift` command-line tool.

pub mod ast;
pub mod build;
pub mod parser;
pub mod report;
