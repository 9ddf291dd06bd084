//! Exact enumeration of `H_γ(x) = #{pq ≤ x : p < q, θ(pq) ≤ (pq)^{1/2+γ}}`.
//!
//! The `q` axis is cut into sieve segments that are processed in parallel;
//! each segment contributes integer counts, so the total is identical for
//! any number of workers.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::analytic::{self, Gamma, ScaleContext};
use crate::arith;
use crate::cyclotomic::{self, PrimePair};
use crate::error::{Error, Result};

/// Largest `x` accepted by [`h_gamma_count`].
pub const MAX_COUNT_X: f64 = 1e10;

/// Relative half-width of the band in which the floating-point threshold
/// test is not trusted.
pub const THRESHOLD_GUARD_BAND: f64 = 1e-12;

const Q_SEGMENT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountRecord {
    pub x: f64,
    pub gamma: Gamma,
    pub h_exact: u64,
    pub h_predicted: f64,
    /// `h_exact / h_predicted`
    pub ratio: f64,
    pub pairs_scanned: u64,
    pub elapsed: Duration,
}

/// `θ ≤ m^{1/2+γ}`.
///
/// Decided in floating point away from the boundary. Inside the guard band
/// the comparison is redone exactly as `θ^{2k} ≤ m^{k+2n}` for `γ = n/k`.
pub fn theta_within(theta: u64, m: u64, g: &Gamma) -> bool {
    let bound = (m as f64).powf(g.threshold_exponent());
    let t = theta as f64;
    if t < bound * (1.0 - THRESHOLD_GUARD_BAND) {
        return true;
    }
    if t > bound * (1.0 + THRESHOLD_GUARD_BAND) {
        return false;
    }
    match g.exact() {
        Some((n, k)) => {
            let lhs = BigUint::from(theta).pow(2 * k as u32);
            let rhs = BigUint::from(m).pow((k + 2 * n) as u32);
            lhs <= rhs
        }
        None => {
            log::warn!("theta = {theta}, m = {m}: irrational gamma {} inside guard band, float decision", g.value());
            t <= bound
        }
    }
}

/// `C(γ) x^{1/2+γ} / log x`.
pub fn h_gamma_predicted(ctx: &ScaleContext, g: &Gamma) -> Result<f64> {
    Ok(analytic::c_gamma(g)? * ctx.x.powf(g.threshold_exponent()) / ctx.x.ln())
}

/// Counts `H_γ(x)` exactly with the Carlitz form of `θ`.
pub fn h_gamma_count(ctx: &ScaleContext, g: &Gamma) -> Result<CountRecord> {
    if ctx.x > MAX_COUNT_X {
        return Err(Error::Capacity { what: "x", value: ctx.x as u64, limit: MAX_COUNT_X as u64 });
    }
    let start = Instant::now();
    let x = ctx.x.floor() as u64;
    let (h_exact, pairs_scanned) = if x < 6 { (0, 0) } else { enumerate(x, g) };
    let h_predicted = h_gamma_predicted(ctx, g)?;
    Ok(CountRecord {
        x: ctx.x,
        gamma: *g,
        h_exact,
        h_predicted,
        ratio: h_exact as f64 / h_predicted,
        pairs_scanned,
        elapsed: start.elapsed(),
    })
}

/// `(count, scanned)` over `p < q`, `pq ≤ x`.
fn enumerate(x: u64, g: &Gamma) -> (u64, u64) {
    let q_max = x / 2;
    let base = arith::sieve_primes(x.isqrt().max(2)).expect("within sieve limit");
    let base = base.primes();
    let nseg = (q_max - 3) / Q_SEGMENT + 1;
    (0..nseg)
        .into_par_iter()
        .map(|s| {
            let lo = 3 + s * Q_SEGMENT;
            let hi = (lo + Q_SEGMENT - 1).min(q_max);
            let qs = arith::primes_in_range(lo, hi).expect("segment within guard");
            let mut count = 0;
            let mut scanned = 0;
            for q in qs {
                let p_cap = x / q;
                for &p in base.iter().take_while(|&&p| p < q && p <= p_cap) {
                    scanned += 1;
                    let pair = PrimePair::from_primes_unchecked(p, q);
                    if theta_within(pair.theta, p * q, g) {
                        count += 1;
                    }
                }
            }
            (count, scanned)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// `H_γ(x)` with `θ` read off the exact coefficients of `Φ_pq`, for
/// `x` within the polynomial oracle's range.
pub fn h_gamma_count_oracle(x: u64, g: &Gamma) -> Result<u64> {
    if x > cyclotomic::ORACLE_MAX_M {
        return Err(Error::Capacity { what: "x", value: x, limit: cyclotomic::ORACLE_MAX_M });
    }
    if x < 6 {
        return Ok(0);
    }
    let table = arith::sieve_primes(x / 2)?;
    let ps = table.primes();
    let pairs: Vec<(u64, u64)> =
        ps.iter().flat_map(|&p| ps.iter().filter(move |&&q| q > p && p * q <= x).map(move |&q| (p, q))).collect();
    pairs.par_iter().map(|&(p, q)| Ok(theta_within(cyclotomic::theta_direct(p * q)?, p * q, g) as u64)).sum()
}

/// One [`CountRecord`] per `x`, ascending.
pub fn convergence_table(xs: &[f64], g: &Gamma) -> Result<Vec<CountRecord>> {
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("x values must be ascending".into()));
    }
    xs.iter().map(|&x| h_gamma_count(&ScaleContext::new(x)?, g)).collect()
}
