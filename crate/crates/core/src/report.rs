//! Report envelope shared by every emitting command.
//!
//! Reports are deterministic functions of (command, seed, parameters):
//! they carry no timestamps or host details, so the same invocation always
//! produces byte-identical output.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub payload: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, seed: u64, payload: T) -> Self {
        Report {
            tool: "ergolab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            payload,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
