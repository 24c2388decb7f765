//! Concrete quiver Hecke algebras over exact fields: normal-form
//! multiplication, cyclotomic quotients, cocenters and the checks built on them.

pub mod algebra;
pub mod checks;
pub mod cocenter;
pub mod field;
pub mod linalg;
pub mod qchoice;
pub mod quotient;
pub mod verify;

use pdklr_core::CartanError;
use thiserror::Error;

pub use algebra::{Element, Klr, Mono};
pub use cocenter::{Cocenter, CocenterReport, TrClass};
pub use field::{Field, PrimeField, Rationals};
pub use qchoice::{QChoice, QEntry};
pub use quotient::{GradedQuotient, QuotientOptions};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("inadmissible Q: {0}")]
    BadQ(String),
    #[error("height {n} exceeds the supported bound {max}")]
    TooLarge { n: usize, max: usize },
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("sequence is not in this block")]
    NotInBlock,
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("exponent {0} too large")]
    ExponentTooLarge(u32),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} outside the window [{lo}, {hi}]")]
    OutsideWindow { degree: i64, lo: i64, hi: i64 },
    #[error("quotient dimension {got} in degree {degree} disagrees with the formula value {expected}")]
    OracleMismatch { degree: i64, got: usize, expected: i64 },
    #[error("characteristic {0} is neither 0 nor a prime below 2^32")]
    BadCharacteristic(u64),
}
