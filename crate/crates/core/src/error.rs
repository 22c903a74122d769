use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block size {size} at position {index} is not positive")]
    NonPositiveBlockSize { index: usize, size: i64 },

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("multiplicity overflow in target block {block}: needs {needed} rows, block has {available}")]
    MultiplicityOverflow {
        block: usize,
        needed: usize,
        available: usize,
    },

    #[error("unitary for target block {block} is off by {deviation:e}")]
    NotUnitary { block: usize, deviation: f64 },

    #[error("morphism is not verified: {0}")]
    NotVerified(String),

    #[error("ranges not orthogonal: u_{left_map}(e_{left_basis}) u_{right_map}(e_{right_basis}) has norm {magnitude:e}")]
    RangesNotOrthogonal {
        left_map: usize,
        left_basis: usize,
        right_map: usize,
        right_basis: usize,
        magnitude: f64,
    },

    #[error("ranges do not commute: [t1(e_{left_basis}), t2(e_{right_basis})] has norm {magnitude:e}{}", .pair.map(|p| format!(" (pair {p})")).unwrap_or_default())]
    RangesDoNotCommute {
        left_basis: usize,
        right_basis: usize,
        magnitude: f64,
        pair: Option<usize>,
    },

    #[error("not an ideal summand: {0}")]
    NotAnIdealSummand(String),
}
