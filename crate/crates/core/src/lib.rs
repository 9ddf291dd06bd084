//! Sparsity of binary cyclotomic polynomials.
//!
//! For primes `p < q` the number of nonzero coefficients of `Φ_pq` is
//! `θ(pq) = 2·p̄_q·q̄_p − 1`. This crate counts the semiprimes `m = pq ≤ x`
//! with `θ(m) ≤ m^{1/2+γ}` exactly, evaluates the closed-form quantities
//! that govern the asymptotic `C(γ) x^{1/2+γ} / log x`, and measures the
//! exponential sums and discrepancies behind the equidistribution of the
//! fractions `q̄_p / p`.

pub mod analytic;
pub mod arith;
pub mod counting;
pub mod cyclotomic;
pub mod equidist;
pub mod error;
pub mod expsums;

pub use analytic::{DyadicBox, Gamma, RangeClass, ScaleContext};
pub use arith::PrimeTable;
pub use counting::CountRecord;
pub use cyclotomic::PrimePair;
pub use error::{Error, Result};
pub use expsums::{BoundReport, SumValue};

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool").install(f)
}
