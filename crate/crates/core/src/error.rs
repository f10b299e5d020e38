use alloc::string::String;

use crate::lattice::DivisorClass;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("class {class} has {found} coordinates, surface expects {expected}")]
    DimensionMismatch {
        class: DivisorClass,
        expected: usize,
        found: usize,
    },
    #[error("Hirzebruch surface F_{0} is not supported (only e = 0, 1)")]
    UnsupportedSurface(u32),
    #[error("the trivial class is not allowed here")]
    ZeroClass,
    #[error("class {0} is not effective")]
    NotEffective(DivisorClass),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("no representative of chi = {chi} in [{lower}, 0) modulo {modulus}")]
    EmptyCandidates { chi: i64, lower: i64, modulus: i64 },
    #[error("index {index} exceeds truncation order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("truncation orders differ: ({0}, {1}) vs ({2}, {3})")]
    TruncationMismatch(usize, usize, usize, usize),
    #[error("n = {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for the variants that signal an arithmetic bug rather than bad input.
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
