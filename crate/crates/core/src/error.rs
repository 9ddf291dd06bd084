use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A real parameter fell outside the domain of the function it was passed to.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// The discriminant under the square root of the threshold function is negative.
    #[error("rho undefined at t = {t}, gamma = {gamma}: discriminant {discriminant} < 0")]
    RhoDomain { t: f64, gamma: f64, discriminant: f64 },

    #[error("{what} = {value} exceeds capacity limit {limit}")]
    Capacity { what: &'static str, value: u64, limit: u64 },

    #[error("{k} is not invertible modulo {modulus}")]
    NotCoprime { k: u64, modulus: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input to {0}")]
    Empty(&'static str),
}
