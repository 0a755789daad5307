//! Standard-library companion to `rcplace-core`: the JSON instance format,
//! the benchmark generator and simulator, random layouts for tests, and the
//! `rcplace` command line.

pub mod cli;
pub mod instance;
pub mod layout;
pub mod sim;
