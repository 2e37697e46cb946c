use thiserror::Error;

use crate::abelian::GroupElement;
use crate::verdict::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cyclic factor must be at least 1, got {0}")]
    InvalidFactor(u64),

    #[error("element {element:?} does not belong to a group with factors {factors:?}")]
    GroupMismatch {
        element: Vec<u64>,
        factors: Vec<u64>,
    },

    #[error("image matrix has shape {got:?}, expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },

    /// A generator of order `order` cannot map to `value` in a factor of size `modulus`.
    #[error(
        "generator {generator} (order {order}) cannot map to {value} mod {modulus}: not well defined"
    )]
    NotWellDefined {
        generator: usize,
        order: u64,
        value: u64,
        modulus: u64,
    },

    #[error("{what}: size {size} exceeds bound {bound}")]
    BoundExceeded {
        what: String,
        size: u128,
        bound: u64,
    },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("map does not respect the grading for degree {degree}: generator {witness} lands outside the expected part")]
    BlockViolation { degree: u8, witness: GroupElement },

    #[error("element {0} is not homogeneous")]
    NotHomogeneous(GroupElement),

    #[error("{law} fails: {witness}")]
    Axiom { law: &'static str, witness: Witness },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
