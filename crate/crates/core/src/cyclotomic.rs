//! Exact cyclotomic polynomials and the nonzero-coefficient count `θ(m)`.
//!
//! `Φ_m` is built from `∏_{d | m} (x^d − 1)^{μ(m/d)}`: multiply in every
//! factor with `μ = +1`, then divide out every factor with `μ = −1`. Both
//! steps are exact sparse operations on a dense integer coefficient vector.
//! For `m = pq` the count is also available in closed form,
//! `θ(pq) = 2·p̄_q·q̄_p − 1`, and the two routes are checked against each other.

use crate::arith::mod_inverse;
use crate::error::{Error, Result};

/// Largest `m` accepted by the dense oracle.
pub const ORACLE_MAX_M: u64 = 100_000;

/// Largest `pq` accepted by [`theta_carlitz`].
pub const MAX_PAIR_PRODUCT: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPoly {
    pub m: u64,
    /// `coeffs[i]` is the coefficient of `x^i`.
    pub coeffs: Vec<i64>,
}

impl CyclotomicPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nonzero_count(&self) -> u64 {
        self.coeffs.iter().filter(|&&c| c != 0).count() as u64
    }
}

fn factor_small(mut m: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            ps.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        ps.push(m);
    }
    ps
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Multiplies `poly` by `x^d − 1` in place.
fn mul_binomial(poly: &mut Vec<i64>, d: usize) {
    let n = poly.len();
    poly.resize(n + d, 0);
    for i in (0..n + d).rev() {
        let shifted = if i >= d { poly[i - d] } else { 0 };
        let own = if i < n { poly[i] } else { 0 };
        poly[i] = shifted.checked_sub(own).expect("coefficient overflow");
    }
}

/// Divides `poly` by `x^d − 1`, asserting an exact quotient.
fn div_binomial(poly: &mut Vec<i64>, d: usize) {
    let n = poly.len();
    assert!(n > d, "division by x^{d} - 1 of a polynomial of degree {}", n - 1);
    let qlen = n - d;
    // P = x^d·Q − Q  ⇒  Q[i] = Q[i − d] − P[i]
    let mut quot = vec![0i64; qlen];
    for i in 0..qlen {
        let prev = if i >= d { quot[i - d] } else { 0 };
        quot[i] = prev.checked_sub(poly[i]).expect("coefficient overflow");
    }
    for i in qlen..n {
        let expect = if i >= d { quot[i - d] } else { 0 };
        assert_eq!(poly[i], expect, "nonzero remainder dividing by x^{d} - 1");
    }
    *poly = quot;
}

/// Exact coefficients of `Φ_m`.
pub fn cyclotomic_coeffs(m: u64) -> Result<CyclotomicPoly> {
    if m == 0 {
        return Err(Error::Domain { what: "m", value: 0.0 });
    }
    if m > ORACLE_MAX_M {
        return Err(Error::Capacity { what: "cyclotomic index", value: m, limit: ORACLE_MAX_M });
    }
    let primes = factor_small(m);
    let rad: u64 = primes.iter().product();
    // Φ_m(x) = Φ_rad(x^{m/rad}); the divisors of the squarefree radical carry
    // μ(rad/d) = (−1)^{ω(rad) − ω(d)}
    let k = primes.len();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for mask in 0u32..(1 << k) {
        let d: u64 = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| primes[b]).product();
        if (k - mask.count_ones() as usize) % 2 == 0 {
            plus.push(d as usize);
        } else {
            minus.push(d as usize);
        }
    }
    let mut poly = vec![1i64];
    for d in plus {
        mul_binomial(&mut poly, d);
    }
    for d in minus {
        div_binomial(&mut poly, d);
    }
    let stretch = (m / rad) as usize;
    let coeffs = if stretch == 1 {
        poly
    } else {
        let mut out = vec![0i64; (poly.len() - 1) * stretch + 1];
        for (i, c) in poly.into_iter().enumerate() {
            out[i * stretch] = c;
        }
        out
    };
    Ok(CyclotomicPoly { m, coeffs })
}

/// `θ(m)` counted from the exact coefficients.
pub fn theta_direct(m: u64) -> Result<u64> {
    Ok(cyclotomic_coeffs(m)?.nonzero_count())
}

/// A pair of primes `p < q` with the inverses that determine `θ(pq)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePair {
    pub p: u64,
    pub q: u64,
    /// `q̄_p ∈ [1, p)`
    pub inv_q_mod_p: u64,
    /// `p̄_q ∈ [1, q)`
    pub inv_p_mod_q: u64,
    pub theta: u64,
}

impl PrimePair {
    /// Builds the pair assuming `p < q` are distinct primes. Only `q̄_p` is
    /// computed by extended Euclid; `p̄_q` follows from
    /// `p·p̄_q + q·q̄_p = pq + 1`.
    pub fn from_primes_unchecked(p: u64, q: u64) -> Self {
        let inv_q_mod_p = mod_inverse(q, p).expect("distinct primes are coprime");
        let pq = p as u128 * q as u128;
        let inv_p_mod_q = ((pq + 1 - q as u128 * inv_q_mod_p as u128) / p as u128) as u64;
        let theta = 2 * inv_p_mod_q as u128 * inv_q_mod_p as u128 - 1;
        PrimePair { p, q, inv_q_mod_p, inv_p_mod_q, theta: theta as u64 }
    }

    /// `q̄_p / p`, the fraction whose distribution governs `θ`.
    pub fn fraction(&self) -> f64 {
        self.inv_q_mod_p as f64 / self.p as f64
    }

    pub fn m(&self) -> u64 {
        self.p * self.q
    }
}

/// `θ(pq)` by the Carlitz closed form.
pub fn theta_carlitz(p: u64, q: u64) -> Result<PrimePair> {
    if p >= q {
        return Err(Error::Precondition(format!("need p < q, got p = {p}, q = {q}")));
    }
    for n in [p, q] {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
    }
    // θ < 2pq must fit in 64 bits
    if p as u128 * q as u128 > MAX_PAIR_PRODUCT as u128 {
        return Err(Error::Capacity { what: "p*q", value: p.saturating_mul(q), limit: MAX_PAIR_PRODUCT });
    }
    Ok(PrimePair::from_primes_unchecked(p, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryStructure {
    pub theta_direct: u64,
    pub theta_carlitz: u64,
    /// All coefficients of `Φ_pq` lie in `{−1, 0, 1}`.
    pub migotti_ok: bool,
    /// `1 ≤ θ ≤ φ(pq) + 1`.
    pub bounds_ok: bool,
    pub carlitz_ok: bool,
}

impl BinaryStructure {
    pub fn all_ok(&self) -> bool {
        self.migotti_ok && self.bounds_ok && self.carlitz_ok
    }
}

pub fn binary_structure_check(p: u64, q: u64) -> Result<BinaryStructure> {
    let pair = theta_carlitz(p, q)?;
    let poly = cyclotomic_coeffs(p * q)?;
    let direct = poly.nonzero_count();
    let phi = (p - 1) * (q - 1);
    Ok(BinaryStructure {
        theta_direct: direct,
        theta_carlitz: pair.theta,
        migotti_ok: poly.coeffs.iter().all(|c| (-1..=1).contains(c)),
        bounds_ok: (1..=phi + 1).contains(&direct),
        carlitz_ok: direct == pair.theta,
    })
}
