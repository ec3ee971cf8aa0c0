//! Library half of the `conic-zariski` command-line tool.

pub mod commands;
pub mod error;
pub mod file;
pub mod pairfile;
pub mod render;
pub mod report;
