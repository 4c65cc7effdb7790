use crate::family::Subset;

/// Errors shared by all satlab operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ground set size {0} out of range (1..={max})", max = crate::family::N_MAX_CORE)]
    GroundSetSize(u32),

    #[error("subset mask {mask:#x} does not fit a ground set of {n} elements")]
    MaskOutOfRange { mask: u64, n: u32 },

    #[error("element {element} out of range for a ground set of {n} elements")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("operands live on different ground sets ({left} vs {right} elements)")]
    GroundSetMismatch { left: u32, right: u32 },

    #[error("parameter s = {0} is too small (need s >= 2)")]
    STooSmall(usize),

    #[error("family is not increasing (not closed under supersets)")]
    NotIncreasing,

    #[error("family already contains {k} pairwise disjoint sets")]
    ContainsDisjointTuple { k: usize },

    #[error("family sequence is not cross dependant")]
    NotCrossDependant,

    #[error("family sequence is not cross saturated")]
    NotCrossSaturated,

    #[error("family is not {s}-saturated")]
    NotSaturated { s: usize },

    #[error("no exact disjoint decomposition of {target} exists; input violates a precondition")]
    NoDecomposition { target: Subset },

    #[error("{what} = {actual} exceeds the cap {limit}{hint}", hint = if *.overridable { " (raise it with the long-runtime override)" } else { "" })]
    CapExceeded {
        what: &'static str,
        actual: u64,
        limit: u64,
        overridable: bool,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("block family on {block} is not maximal intersecting: {reason}")]
    InvalidBlockFamily { block: Subset, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A checked postcondition failed. On valid inputs this cannot happen;
    /// seeing it means either the input violated a precondition or an
    /// internal invariant is broken.
    #[error("postcondition violated: {0}")]
    PostconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
