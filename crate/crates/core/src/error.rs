use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a 2-adic unit")]
    NotUnit,
    #[error("division by zero (to the available precision)")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("u must be congruent to 5 mod 8")]
    BadBase,
    #[error("not a square in Q_2")]
    NotSquare,
    #[error("outside convergence contract: valuation {0} < 2")]
    Convergence(i64),
    #[error("interpolation witness failure at level {level}, node {node}: valuation {valuation}")]
    Witness { level: usize, node: usize, valuation: i64 },
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("not squarefree: {0}")]
    NotSquarefree(i64),
    #[error("ideal not coprime to modulus")]
    NotCoprime,
    #[error("no admissible quartic character of conductor {0}")]
    NoCharacter(u64),
    #[error("auxiliary search bound {0} exhausted")]
    SearchExhausted(u64),
    #[error("character identification failed: {0}")]
    Identification(String),
    #[error("divisibility failure: {0}")]
    Divisibility(String),
    #[error("value not 2-integral: {0}")]
    NotIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cutoff insufficient: {0}")]
    Cutoff(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
