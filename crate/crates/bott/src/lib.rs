//! JSON formats, command line and acceptance suite for `bott-core`.

pub mod acceptance;
pub mod cli;
pub mod json;
