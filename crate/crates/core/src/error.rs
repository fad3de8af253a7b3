use thiserror::Error;

pub type Result<T, E = CaError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaError {
    #[error("alphabet mismatch: expected {expected} symbols, found {found}")]
    AlphabetMismatch { expected: u32, found: u32 },

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: u32 },

    #[error("invalid alphabet size {0}")]
    InvalidAlphabet(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {required} entries, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("configuration is not invariant under the shift {v:?}")]
    NotPeriodic { v: (i64, i64) },

    #[error("degenerate pair: {0}")]
    DegeneratePair(String),

    #[error("unknown tile id {0}")]
    UnknownTile(usize),

    #[error("tile at {0:?} has no direction")]
    Undirected((i64, i64)),

    #[error("no valid tiling found: {0}")]
    NoTiling(String),
}

impl CaError {
    pub(crate) fn cap(what: &'static str, required: u128, cap: u128) -> Self {
        CaError::CapExceeded {
            what,
            required,
            cap,
        }
    }
}
