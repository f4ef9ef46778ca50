//! Library half of the `ergolab` binary: run configuration plumbing and
//! the JSON schema checker used to self-validate reports before emission.

pub mod config;
pub mod schema;
