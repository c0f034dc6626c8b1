use thiserror::Error;

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("image list is not a permutation of 0..{degree}")]
    NotAPermutation { degree: usize },

    #[error("a permutation group needs at least one generator")]
    NoGenerators,

    #[error("element is not a member of the group")]
    NotMember,

    #[error("not a subgroup: generator {index} is not a member of the parent group")]
    NotSubgroup { index: usize },

    #[error("coset index {index} exceeds the bound {bound}")]
    IndexTooLarge { index: String, bound: usize },

    #[error("group is not solvable (derived series stabilised at order {order})")]
    NotSolvable { order: String },

    #[error("cannot factor {0}: zero has no factorization")]
    FactorZero(String),

    #[error("unfactored residual {residual} after trial division to 10^6")]
    FactorResidual { residual: String },

    #[error("group of order {order} is not a 2-group")]
    NotTwoGroup { order: String },

    #[error("Frattini quotient rank {rank} exceeds the enumeration bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },

    #[error("matrix is not invertible modulo {p}")]
    NonInvertible { p: u32 },

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: u64, bound: u64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
