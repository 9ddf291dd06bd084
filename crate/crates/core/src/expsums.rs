//! Exponential sums with modular inverses of primes.
//!
//! The central object is the incomplete Kloosterman sum over primes
//! `S_p(a; y, z) = Σ_{y ≤ q ≤ z, q ≠ p} e_p(a q̄_p)`. Alongside it live the
//! complete Kloosterman sum, the bilinear form over two prime ranges, the
//! completion of `S_p` into an average over additive characters mod
//! `N = ⌈2Q⌉`, and reports comparing observed sizes with the three bounds
//! used for medium and large `P`. The reports never assert those bounds:
//! the `p^{o(1)}` factors are unknown, so only the ratio is recorded.
//!
//! Every sum is accumulated term by term in ascending `q` order, so results
//! do not depend on the number of worker threads.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{mod_inverse, PrimeTable};
use crate::cyclotomic::is_prime;
use crate::error::{Error, Result};

/// Beyond this modulus the maximum over `a` is taken over a sample.
pub const EXHAUSTIVE_A_LIMIT: u64 = 5_000;

const SAMPLE_HEAD: u64 = 1_000;
const SAMPLE_RANDOM: usize = 1_000;

pub const DEFAULT_SEED: u64 = 0x5eed_b1c0;

/// Largest modulus for complete sums (one inverse table of this size is built).
pub const MAX_COMPLETE_MODULUS: u64 = 1 << 28;

/// A complex sum together with the number of unit-modulus terms in it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SumValue {
    pub re: f64,
    pub im: f64,
    pub terms: u64,
}

impl SumValue {
    pub fn new(z: Complex64, terms: u64) -> Self {
        SumValue { re: z.re, im: z.im, terms }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

/// `e_m(a) = exp(2πi a/m)`, with `a` reduced mod `m` first.
pub fn unit_phase(a: i64, m: u64) -> Complex64 {
    let r = (a as i128).rem_euclid(m as i128) as f64;
    let (s, c) = (TAU * r / m as f64).sin_cos();
    Complex64::new(c, s)
}

/// `e_m(k)` for every `k ∈ [0, m)`.
fn phase_table(m: u64) -> Vec<Complex64> {
    (0..m).map(|k| unit_phase(k as i64, m)).collect()
}

fn reduce(a: i64, p: u64) -> u64 {
    (a as i128).rem_euclid(p as i128) as u64
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Integer window `[⌈y⌉, ⌊z⌋]` of the real interval.
fn int_window(y: f64, z: f64) -> (u64, u64) {
    (y.max(0.0).ceil() as u64, z.max(0.0).floor() as u64)
}

/// Primes `q ∈ [y, z]` with `q ≠ p`, from the table.
fn window_primes(table: &PrimeTable, p: u64, y: f64, z: f64) -> Result<Vec<u64>> {
    let (lo, hi) = int_window(y, z);
    if lo > hi {
        return Ok(Vec::new());
    }
    table.require(hi)?;
    Ok(table.range(lo, hi).iter().copied().filter(|&q| q != p).collect())
}

/// `S_p(a; y, z)` evaluated term by term.
pub fn kloosterman_prime_sum(p: u64, a: i64, y: f64, z: f64, table: &PrimeTable) -> Result<SumValue> {
    check_prime(p)?;
    if reduce(a, p) == 0 {
        return Err(Error::Precondition(format!("{p} divides a = {a}")));
    }
    if !(y >= 1.0 && y <= z) {
        return Err(Error::Precondition(format!("need 1 ≤ y ≤ z, got y = {y}, z = {z}")));
    }
    let qs = window_primes(table, p, y, z)?;
    let ar = reduce(a, p);
    let mut acc = Complex64::new(0.0, 0.0);
    for &q in &qs {
        let qbar = mod_inverse(q, p)?;
        acc += unit_phase(((ar as u128 * qbar as u128) % p as u128) as i64, p);
    }
    Ok(SumValue::new(acc, qs.len() as u64))
}

/// `q̄_p` for each `q`, precomputed so that many values of `a` can reuse it.
struct InverseWindow {
    p: u64,
    inverses: Vec<u64>,
    phases: Vec<Complex64>,
}

impl InverseWindow {
    fn new(p: u64, qs: &[u64]) -> Self {
        let inverses = qs.iter().map(|&q| mod_inverse(q, p).expect("q ≠ p prime")).collect();
        InverseWindow { p, inverses, phases: phase_table(p) }
    }

    fn sum(&self, a: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &qbar in &self.inverses {
            acc += self.phases[((a as u128 * qbar as u128) % self.p as u128) as usize];
        }
        acc
    }

    /// `max_{gcd(a,p)=1} |S_p(a)|` with the list of `a` values used.
    fn max_over_a(&self, seed: u64) -> (f64, u64, bool) {
        if self.inverses.is_empty() {
            return (0.0, 0, false);
        }
        let (values, sampled) = a_values(self.p, seed);
        let best = values.iter().map(|&a| self.sum(a).norm()).fold(0.0, f64::max);
        (best, values.len() as u64, sampled)
    }
}

/// Residues `a` over which maxima are taken: all of `[1, p)` when
/// `p ≤ 5000`, otherwise `1..=1000` plus 1000 seeded random draws.
pub fn a_values(p: u64, seed: u64) -> (Vec<u64>, bool) {
    if p <= EXHAUSTIVE_A_LIMIT {
        return ((1..p).collect(), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut v: Vec<u64> = (1..=SAMPLE_HEAD).collect();
    v.extend((0..SAMPLE_RANDOM).map(|_| rng.gen_range(1..p)));
    (v, true)
}

/// `K_p(a, b) = Σ_{x=1}^{p−1} e_p(ax + b x̄)`.
pub fn complete_kloosterman(p: u64, a: i64, b: i64) -> Result<SumValue> {
    check_complete_modulus(p)?;
    let inv = inverse_table(p);
    let phases = phase_table(p);
    Ok(complete_with(p, reduce(a, p), reduce(b, p), &inv, &phases))
}

fn check_complete_modulus(p: u64) -> Result<()> {
    if p > MAX_COMPLETE_MODULUS {
        return Err(Error::Capacity { what: "complete sum modulus", value: p, limit: MAX_COMPLETE_MODULUS });
    }
    check_prime(p)
}

/// `x̄` for all `x ∈ [1, p)` via `x̄ = −⌊p/x⌋·(p mod x)̄ mod p`.
fn inverse_table(p: u64) -> Vec<u64> {
    let mut inv = vec![0u64; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for x in 2..p {
        let r = inv[(p % x) as usize];
        inv[x as usize] = (p - (p / x) * r % p) % p;
    }
    inv
}

fn complete_with(p: u64, a: u64, b: u64, inv: &[u64], phases: &[Complex64]) -> SumValue {
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 1..p {
        let k = (a * x + b * inv[x as usize]) % p;
        acc += phases[k as usize];
    }
    SumValue::new(acc, p - 1)
}

/// Largest `|K_p(a, b)| / (2√p)` over all `a, b ∈ [1, p)`.
pub fn weil_ratio_max(p: u64) -> Result<f64> {
    check_complete_modulus(p)?;
    let inv = inverse_table(p);
    let phases = phase_table(p);
    let bound = 2.0 * (p as f64).sqrt();
    let worst = (1..p)
        .into_par_iter()
        .map(|a| (1..p).map(|b| complete_with(p, a, b, &inv, &phases).abs()).fold(0.0, f64::max))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst / bound)
}

/// Observed size of a sum family against a reference bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lemma: String,
    /// The prime `p`, or `P` for averaged and bilinear reports.
    pub p: f64,
    /// `Q`, or `y` for single-prime reports.
    pub q: f64,
    pub y: f64,
    pub z: f64,
    /// Number of `a` values behind each maximum.
    pub a_count: u64,
    pub sampled: bool,
    pub terms: u64,
    pub observed: f64,
    pub reference: f64,
    pub ratio: f64,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        lemma: &str,
        p: f64,
        q: f64,
        y: f64,
        z: f64,
        a_count: u64,
        sampled: bool,
        terms: u64,
        observed: f64,
        reference: f64,
    ) -> Self {
        BoundReport {
            lemma: lemma.to_string(),
            p,
            q,
            y,
            z,
            a_count,
            sampled,
            terms,
            observed,
            reference,
            ratio: observed / reference,
        }
    }
}

/// `Σ_p Σ_q α_p β_q e_p(a q̄_p)` over `q ≠ p`, with its DFI report.
pub fn bilinear_sum(
    alpha: &[Complex64],
    beta: &[Complex64],
    a: i64,
    p_primes: &[u64],
    q_primes: &[u64],
) -> Result<(SumValue, BoundReport)> {
    if alpha.len() != p_primes.len() || beta.len() != q_primes.len() {
        return Err(Error::Precondition("coefficient lists not aligned with prime lists".into()));
    }
    if let Some(c) = alpha.iter().chain(beta).find(|c| c.norm() > 1.0 + 1e-12) {
        return Err(Error::Precondition(format!("coefficient {c} outside the unit disc")));
    }
    if p_primes.is_empty() || q_primes.is_empty() {
        return Err(Error::Empty("bilinear_sum"));
    }
    let big_p = *p_primes.iter().min().unwrap() as f64;
    let big_q = *q_primes.iter().min().unwrap() as f64;
    if a < 1 || a as f64 > big_p * big_q {
        return Err(Error::Precondition(format!("need 1 ≤ a ≤ PQ = {}, got {a}", big_p * big_q)));
    }
    let rows: Vec<(Complex64, u64)> = p_primes
        .par_iter()
        .zip(alpha.par_iter())
        .map(|(&p, &al)| {
            let ar = reduce(a, p);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut n = 0;
            for (&q, &be) in q_primes.iter().zip(beta) {
                if q == p {
                    continue;
                }
                let qbar = mod_inverse(q, p).expect("distinct primes");
                acc += be * unit_phase(((ar as u128 * qbar as u128) % p as u128) as i64, p);
                n += 1;
            }
            (al * acc, n)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    for (v, n) in rows {
        total += v;
        terms += n;
    }
    let value = SumValue::new(total, terms);
    let reference = (big_p * big_q).sqrt() * (big_p.sqrt() + big_q.sqrt() + big_p.min(big_q));
    let report = BoundReport::new(
        "dfi",
        big_p,
        big_q,
        big_q,
        *q_primes.iter().max().unwrap() as f64,
        1,
        false,
        terms,
        value.abs(),
        reference,
    );
    Ok((value, report))
}

/// Direct and completed evaluations of `S_p(a; y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedSum {
    pub direct: SumValue,
    pub completed: SumValue,
    pub modulus: u64,
    pub max_abs_diff: f64,
}

/// Evaluates `S_p(a; y, z)` both directly and as
/// `(1/N) Σ_{h=1}^{N} Σ_{y≤k≤z} e_N(−hk) Σ_{Q≤q≤2Q, q≠p} e_N(hq) e_p(a q̄_p)`
/// with `Q = y` and `N = ⌈2Q⌉`.
pub fn completed_sum_decomposition(p: u64, a: i64, y: f64, z: f64, table: &PrimeTable) -> Result<CompletedSum> {
    let direct = kloosterman_prime_sum(p, a, y, z, table)?;
    let big_q = y;
    let n = (2.0 * big_q).ceil() as u64;
    if z > 2.0 * y {
        return Err(Error::Precondition(format!("completion needs z ≤ 2y, got y = {y}, z = {z}")));
    }
    let outer = window_primes(table, p, big_q, 2.0 * big_q)?;
    let (k_lo, k_hi) = int_window(y, z);
    let ar = reduce(a, p);
    let p_phase = phase_table(p);
    let n_phase = phase_table(n);
    let weights: Vec<Complex64> = outer
        .iter()
        .map(|&q| p_phase[((ar as u128 * mod_inverse(q, p).unwrap() as u128) % p as u128) as usize])
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for h in 1..=n {
        let mut ksum = Complex64::new(0.0, 0.0);
        for k in k_lo..=k_hi {
            ksum += n_phase[((n - h * (k % n) % n) % n) as usize];
        }
        let mut qsum = Complex64::new(0.0, 0.0);
        for (&q, &w) in outer.iter().zip(&weights) {
            qsum += n_phase[(h * (q % n) % n) as usize] * w;
        }
        acc += ksum * qsum;
    }
    acc /= n as f64;
    let completed = SumValue::new(acc, direct.terms);
    Ok(CompletedSum { direct, completed, modulus: n, max_abs_diff: (direct.value() - acc).norm() })
}

/// Observed `max_a |S_p(a; y, z)|` against `y^{15/16}` (Korolev–Changa window).
pub fn kc_bound_report(p: u64, y: f64, z: f64, table: &PrimeTable, seed: u64) -> Result<BoundReport> {
    check_prime(p)?;
    let pf = p as f64;
    if !(z <= pf.powf(1.5) && z >= pf.powf(12.0 / 13.0)) {
        return Err(Error::Precondition(format!("need p^(12/13) ≤ z ≤ p^(3/2), got p = {p}, z = {z}")));
    }
    if !(1.0 <= y && y <= z && z <= 2.0 * y) {
        return Err(Error::Precondition(format!("need 1 ≤ y ≤ z ≤ 2y, got y = {y}, z = {z}")));
    }
    let qs = window_primes(table, p, y, z)?;
    let w = InverseWindow::new(p, &qs);
    let (observed, a_count, sampled) = w.max_over_a(seed);
    Ok(BoundReport::new(
        "korolev_changa",
        pf,
        y,
        y,
        z,
        a_count,
        sampled,
        qs.len() as u64,
        observed,
        y.powf(15.0 / 16.0),
    ))
}

/// One summation window `[y_p, z_p]` for the prime `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub p: u64,
    pub y: f64,
    pub z: f64,
}

/// Windows `y_p = max{Q, p}`, `z_p = min{ξQ, x/p}` for primes `p ∈ (P, 2P]`,
/// dropping primes whose window is empty.
pub fn default_windows(big_p: f64, big_q: f64, x: f64, xi: f64, table: &PrimeTable) -> Result<Vec<Window>> {
    let lo = big_p.floor() as u64 + 1;
    let hi = (2.0 * big_p).floor() as u64;
    table.require(hi)?;
    Ok(table
        .range(lo, hi)
        .iter()
        .map(|&p| Window { p, y: big_q.max(p as f64), z: (xi * big_q).min(x / p as f64) })
        .filter(|w| w.y <= w.z)
        .collect())
}

fn check_average_windows(big_p: f64, big_q: f64, windows: &[Window]) -> Result<()> {
    for w in windows {
        if !((w.p as f64) > big_p && (w.p as f64) <= 2.0 * big_p) {
            return Err(Error::Precondition(format!("prime {} outside (P, 2P] with P = {big_p}", w.p)));
        }
        if !(big_q <= w.y && w.y <= w.z && w.z <= 2.0 * big_q) {
            return Err(Error::Precondition(format!(
                "window [{}, {}] for p = {} outside Q ≤ y ≤ z ≤ 2Q with Q = {big_q}",
                w.y, w.z, w.p
            )));
        }
    }
    Ok(())
}

/// Per-prime rows `(max_a |S_p|, a_count, sampled, terms)` in ascending `p` order.
fn per_prime_maxima(windows: &[Window], table: &PrimeTable, seed: u64) -> Result<Vec<(f64, u64, bool, u64)>> {
    for w in windows {
        check_prime(w.p)?;
        table.require(w.z.floor() as u64)?;
    }
    Ok(windows
        .par_iter()
        .map(|w| {
            let qs = window_primes(table, w.p, w.y, w.z).expect("checked above");
            let (m, n, s) = InverseWindow::new(w.p, &qs).max_over_a(seed);
            (m, n, s, qs.len() as u64)
        })
        .collect())
}

/// Observed `Σ_p max_a |S_p(a; y_p, z_p)|` against
/// `Q^{5/8}P^{5/4} + Q^{9/10}P + Q^{13/18}P^{7/6}` (Irving range).
pub fn irving_average_report(
    big_p: f64,
    big_q: f64,
    windows: &[Window],
    table: &PrimeTable,
    seed: u64,
) -> Result<BoundReport> {
    if !(big_p.powf(1.5) >= 2.0 * big_q && 2.0 * big_q >= (2.0 * big_p).powf(2.0 / 3.0)) {
        return Err(Error::Precondition(format!("need P^(3/2) ≥ 2Q ≥ (2P)^(2/3), got P = {big_p}, Q = {big_q}")));
    }
    check_average_windows(big_p, big_q, windows)?;
    let rows = per_prime_maxima(windows, table, seed)?;
    let observed: f64 = rows.iter().map(|r| r.0).sum();
    let a_count = rows.iter().map(|r| r.1).max().unwrap_or(0);
    let sampled = rows.iter().any(|r| r.2);
    let terms = rows.iter().map(|r| r.3).sum();
    let reference = big_q.powf(5.0 / 8.0) * big_p.powf(5.0 / 4.0)
        + big_q.powf(9.0 / 10.0) * big_p
        + big_q.powf(13.0 / 18.0) * big_p.powf(7.0 / 6.0);
    let (y, z) = window_span(windows, big_q);
    Ok(BoundReport::new("irving", big_p, big_q, y, z, a_count, sampled, terms, observed, reference))
}

/// Observed `Σ_p |S_p(a; y_p, z_p)|` for one `a ≤ PQ` against
/// `(PQ)^{1/2}(P^{1/2} + Q^{1/2} + min{P, Q})`.
pub fn dfi_average_report(
    big_p: f64,
    big_q: f64,
    a: i64,
    windows: &[Window],
    table: &PrimeTable,
) -> Result<BoundReport> {
    if a < 1 || a as f64 > big_p * big_q {
        return Err(Error::Precondition(format!("need 1 ≤ a ≤ PQ, got a = {a}")));
    }
    check_average_windows(big_p, big_q, windows)?;
    let mut observed = 0.0;
    let mut terms = 0;
    for w in windows {
        if reduce(a, w.p) == 0 {
            // the sum degenerates to a prime count; it is not a Kloosterman sum
            continue;
        }
        let s = kloosterman_prime_sum(w.p, a, w.y, w.z, table)?;
        observed += s.abs();
        terms += s.terms;
    }
    let reference = (big_p * big_q).sqrt() * (big_p.sqrt() + big_q.sqrt() + big_p.min(big_q));
    let (y, z) = window_span(windows, big_q);
    Ok(BoundReport::new("dfi_average", big_p, big_q, y, z, 1, false, terms, observed, reference))
}

fn window_span(windows: &[Window], big_q: f64) -> (f64, f64) {
    let y = windows.iter().map(|w| w.y).fold(f64::INFINITY, f64::min);
    let z = windows.iter().map(|w| w.z).fold(f64::NEG_INFINITY, f64::max);
    if windows.is_empty() {
        (big_q, big_q)
    } else {
        (y, z)
    }
}
