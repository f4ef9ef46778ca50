use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An element was fed to a group it does not belong to.
    #[error("element {element} does not belong to group {group}")]
    EncodingMismatch { group: String, element: String },

    /// Unknown Følner family name for the given group.
    #[error("unknown Følner family `{family}` for group {group}; available: {available}")]
    UnknownFamily {
        family: String,
        group: String,
        available: String,
    },

    /// Window index outside the range the family can enumerate.
    #[error("window index {index} out of range for family `{family}` (limit {limit})")]
    WindowOutOfRange {
        family: String,
        index: u32,
        limit: u32,
    },

    /// Unknown system name in the registry.
    #[error("unknown system `{name}`; run list-systems for the registry")]
    UnknownSystem { name: String },

    /// A malformed or out-of-range parameter.
    #[error("invalid parameter `{name}`: {reason}")]
    BadParameter { name: String, reason: String },

    /// The sample is too small for the requested resolution. Covering
    /// estimates refuse to run below `N = ceil(100 / ε)`.
    #[error(
        "sample of {actual} points is too small for epsilon = {epsilon}: need at least {required}"
    )]
    SampleTooSmall {
        actual: usize,
        required: usize,
        epsilon: f64,
    },

    /// A measure with no support, or a window that thinned away entirely.
    #[error("empty group-measure support")]
    EmptySupport,

    /// Operation not defined for this group or system.
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
