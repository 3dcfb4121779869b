use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed balanced-parentheses tree text.
    #[error("cannot parse tree at offset {offset}: {reason}")]
    Parse { offset: usize, reason: &'static str },

    /// A step sequence that is not a Dyck path.
    #[error("malformed Dyck path at step {step}: {reason}")]
    MalformedPath { step: usize, reason: &'static str },

    /// Reduction, age and ancestors are only defined on Catalan-Stanley trees.
    #[error("tree {0} is not a Catalan-Stanley tree")]
    NotCatalanStanley(String),

    #[error("{0}")]
    Domain(String),

    #[error("sampler rejected {rejections} draws without success")]
    SamplingExhausted { rejections: u64 },

    #[error("series order {order} is too small; size {required} needs order at least {required}")]
    Capacity { required: usize, order: usize },

    #[error("{requested} digits requested, at most {max} supported")]
    Precision { requested: u32, max: u32 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
