//! Integer substrate: segmented prime sieving, modular inverses, the Euler
//! totient and the ξ-adic box grid.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::analytic::{self, DyadicBox, Gamma, ScaleContext};
use crate::error::{Error, Result};

/// Largest limit accepted by [`sieve_primes`].
pub const MAX_SIEVE_LIMIT: u64 = 1 << 40;

/// Widest interval accepted by [`primes_in_range`].
pub const MAX_RANGE_WIDTH: u64 = 1 << 32;

const SEGMENT: u64 = 1 << 18;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Wraps an already-validated list. Callers that read untrusted data
    /// should use [`PrimeTable::from_parts_checked`].
    pub(crate) fn from_parts(limit: u64, primes: Vec<u64>) -> Self {
        PrimeTable { limit, primes }
    }

    /// Builds a table from external data, checking it is strictly ascending
    /// and bounded by `limit`. Primality of each entry is not re-proved.
    pub fn from_parts_checked(limit: u64, primes: Vec<u64>) -> Result<Self> {
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("prime list not strictly ascending".into()));
        }
        if primes.first().is_some_and(|&p| p < 2) || primes.last().is_some_and(|&p| p > limit) {
            return Err(Error::Precondition("prime list outside [2, limit]".into()));
        }
        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes in `[lo, hi]`. The caller must keep `hi ≤ limit`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p < lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        if a >= b {
            &[]
        } else {
            &self.primes[a..b]
        }
    }

    /// `π(n)` for `n ≤ limit`.
    pub fn pi(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    /// Primality by table lookup; `None` when `n` is beyond the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.primes.binary_search(&n).is_ok())
    }

    /// Errors unless the table reaches `n`.
    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::Capacity { what: "prime table bound", value: n, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Plain sieve of Eratosthenes for the base primes.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi]` given every prime up to `√hi` in `base`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p.saturating_mul(p) > hi {
            break;
        }
        let mut start = p * p;
        if start < lo {
            start = lo.div_ceil(p) * p;
        }
        let mut m = start;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| lo + i as u64).collect()
}

/// Sieves `[lo, hi]` in fixed-size segments, in parallel, concatenating in
/// ascending order.
fn segmented(lo: u64, hi: u64) -> Vec<u64> {
    let base = small_primes(hi.isqrt());
    let nseg = (hi - lo) / SEGMENT + 1;
    let parts: Vec<Vec<u64>> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let a = lo + s * SEGMENT;
            let b = (a + SEGMENT - 1).min(hi);
            sieve_segment(a, b, &base)
        })
        .collect();
    parts.concat()
}

/// Every prime `≤ limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::Capacity { what: "sieve limit", value: limit, limit: MAX_SIEVE_LIMIT });
    }
    if limit < 2 {
        return Err(Error::Domain { what: "sieve limit", value: limit as f64 });
    }
    Ok(PrimeTable::from_parts(limit, segmented(2, limit)))
}

/// Primes in `[lo, hi]`, sieved with base primes up to `√hi`.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 2 || lo > hi {
        return Err(Error::Precondition(format!("need 2 ≤ lo ≤ hi, got [{lo}, {hi}]")));
    }
    if hi - lo > MAX_RANGE_WIDTH {
        return Err(Error::Capacity { what: "range width", value: hi - lo, limit: MAX_RANGE_WIDTH });
    }
    Ok(segmented(lo, hi))
}

/// `k̄_ℓ`: the unique integer in `[1, ℓ)` with `k·k̄ ≡ 1 (mod ℓ)`.
pub fn mod_inverse(k: u64, ell: u64) -> Result<u64> {
    if ell < 2 {
        return Err(Error::Precondition(format!("modulus must be ≥ 2, got {ell}")));
    }
    let (mut r0, mut r1) = (ell as i128, (k % ell) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { k, modulus: ell });
    }
    Ok(t0.rem_euclid(ell as i128) as u64)
}

/// Prime factorisation by trial division over `table`.
///
/// A cofactor left after dividing out every table prime is accepted as prime
/// only when it is below `limit²`; otherwise the table is too small.
pub fn factorize(mut m: u64, table: &PrimeTable) -> Result<Vec<(u64, u32)>> {
    if m == 0 {
        return Err(Error::Domain { what: "m", value: 0.0 });
    }
    let mut out = Vec::new();
    for &p in table.primes() {
        if p.saturating_mul(p) > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if m > 1 {
        let lim = table.limit() as u128;
        if (m as u128) > lim * lim {
            return Err(Error::Capacity { what: "unfactored cofactor", value: m, limit: table.limit() });
        }
        out.push((m, 1));
    }
    Ok(out)
}

/// Euler's totient by factorisation over `table`.
pub fn euler_phi(m: u64, table: &PrimeTable) -> Result<u64> {
    if m > 1 << 63 {
        return Err(Error::Capacity { what: "m", value: m, limit: 1 << 63 });
    }
    Ok(factorize(m, table)?.into_iter().map(|(p, e)| (p - 1) * p.pow(e - 1)).product())
}

/// The ξ-adic grid of boxes `[ξ^i, ξ^{i+1}) × [ξ^j, ξ^{j+1})` restricted to
/// the admissible region.
#[derive(Debug, Clone)]
pub struct BoxGrid {
    pub x: f64,
    pub gamma: Gamma,
    pub xi: f64,
    /// `edges[k] = ξ^k`, ascending, the last one above `x`.
    pub edges: Vec<f64>,
    pub boxes: Vec<DyadicBox>,
    index: HashMap<(usize, usize), usize>,
}

impl BoxGrid {
    /// Grid index `k` with `ξ^k ≤ u < ξ^{k+1}`.
    pub fn cell_of(&self, u: f64) -> Option<usize> {
        let k = self.edges.partition_point(|&e| e <= u);
        (k > 0 && k < self.edges.len()).then(|| k - 1)
    }

    /// The box holding the pair `(p, q)`, if it is admissible.
    pub fn locate(&self, p: u64, q: u64) -> Option<&DyadicBox> {
        let i = self.cell_of(p as f64)?;
        let j = self.cell_of(q as f64)?;
        self.index.get(&(i, j)).map(|&k| &self.boxes[k])
    }
}

pub fn dyadic_boxes(ctx: &ScaleContext, g: &Gamma) -> BoxGrid {
    dyadic_boxes_with(ctx, g, analytic::SMALL_P_LOG_POWER)
}

/// [`dyadic_boxes`] with a custom power of `L` in the small-`P` boundary.
pub fn dyadic_boxes_with(ctx: &ScaleContext, g: &Gamma, small_log_power: f64) -> BoxGrid {
    let step = ctx.xi.ln();
    let mut edges = vec![1.0];
    while *edges.last().unwrap() <= ctx.x {
        edges.push((edges.len() as f64 * step).exp());
    }
    let cells = edges.len() - 1;
    let mut boxes = Vec::new();
    let mut index = HashMap::new();
    for j in 0..cells {
        let q_lo = edges[j];
        for i in 0..cells {
            let p_lo = edges[i];
            if p_lo * q_lo > ctx.x || p_lo > ctx.xi * q_lo {
                break;
            }
            if !analytic::box_admissible(p_lo, q_lo, ctx, g) {
                continue;
            }
            index.insert((i, j), boxes.len());
            boxes.push(DyadicBox {
                i,
                j,
                p_lo,
                p_hi: edges[i + 1],
                q_lo,
                q_hi: edges[j + 1],
                admissible: true,
                range_class: analytic::classify_p_range(p_lo, ctx, small_log_power),
            });
        }
    }
    BoxGrid { x: ctx.x, gamma: *g, xi: ctx.xi, edges, boxes, index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_sieves() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert!(sieve_primes(1).is_err());
        assert!(matches!(sieve_primes(MAX_SIEVE_LIMIT + 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn sieve_matches_trial_division_exhaustively() {
        let table = sieve_primes(100_000).unwrap();
        let oracle: Vec<u64> = (2..=100_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(table.primes(), &oracle[..]);
        for n in [2u64, 3, 4, 97, 1000, 65_536, 99_999] {
            let expect: Vec<u64> = oracle.iter().copied().filter(|&p| p <= n).collect();
            assert_eq!(sieve_primes(n).unwrap().primes(), &expect[..], "n = {n}");
        }
    }

    #[test]
    fn pi_of_a_million() {
        let table = sieve_primes(1_000_000).unwrap();
        assert_eq!(table.len(), 78_498);
        let oracle = (2..=1_000_000u64).filter(|&n| trial_division(n)).count();
        assert_eq!(oracle, 78_498);
        // crosses several segment boundaries
        assert_eq!(table.pi(1 << 19), (2..=(1u64 << 19)).filter(|&n| trial_division(n)).count());
    }

    #[test]
    fn ranges() {
        assert_eq!(primes_in_range(90, 100).unwrap(), vec![97]);
        assert_eq!(primes_in_range(15, 15).unwrap(), Vec::<u64>::new());
        assert_eq!(primes_in_range(2, 10_000).unwrap(), sieve_primes(10_000).unwrap().primes());
        assert!(primes_in_range(1, 10).is_err());
        assert!(primes_in_range(10, 9).is_err());
        assert!(matches!(primes_in_range(2, (1 << 33) + 10), Err(Error::Capacity { .. })));
        let far = primes_in_range(1_000_000_000, 1_000_001_000).unwrap();
        assert!(far.iter().all(|&p| trial_division(p)));
        assert_eq!(far.len(), (1_000_000_000..=1_000_001_000u64).filter(|&n| trial_division(n)).count());
        let t = sieve_primes(1000).unwrap();
        assert_eq!(t.range(90, 100), &[97]);
        assert_eq!(t.range(24, 28), &[] as &[u64]);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 5).unwrap(), 2);
        assert_eq!(mod_inverse(10, 17).unwrap(), 12);
        for n in 2..50 {
            assert_eq!(mod_inverse(1, n).unwrap(), 1);
        }
        assert_eq!(mod_inverse(6, 4), Err(Error::NotCoprime { k: 6, modulus: 4 }));
        assert!(mod_inverse(1, 1).is_err());
        let big = (1u64 << 61) - 1;
        let inv = mod_inverse(123_456_789, big).unwrap();
        assert_eq!((123_456_789u128 * inv as u128) % big as u128, 1);
    }

    #[test]
    fn totients() {
        let t = sieve_primes(1000).unwrap();
        assert_eq!(euler_phi(1, &t).unwrap(), 1);
        assert_eq!(euler_phi(15, &t).unwrap(), 8);
        assert_eq!(euler_phi(64 * 81, &t).unwrap(), 1728);
        assert_eq!(euler_phi(999_983, &t).unwrap(), 999_982);
        let small = sieve_primes(10).unwrap();
        assert!(matches!(euler_phi(1009 * 1013, &small), Err(Error::Capacity { .. })));
    }

    #[test]
    fn complement_identity() {
        let t = sieve_primes(2000).unwrap();
        let ps = t.primes();
        for (a, &p) in ps.iter().enumerate() {
            for &q in &ps[a + 1..] {
                let pb = mod_inverse(p, q).unwrap() as u128;
                let qb = mod_inverse(q, p).unwrap() as u128;
                assert_eq!(p as u128 * pb + q as u128 * qb, p as u128 * q as u128 + 1);
            }
        }
    }

    #[test]
    fn box_grid_partitions_pairs() {
        let x = 10_000u64;
        let ctx = ScaleContext::new(x as f64).unwrap();
        let g = Gamma::new(0.45).unwrap();
        let grid = dyadic_boxes(&ctx, &g);
        assert!(grid.boxes.iter().all(|b| b.admissible && b.p_lo <= b.q_lo * ctx.xi));
        let t = sieve_primes(x).unwrap();
        let mut hits = vec![0usize; grid.boxes.len()];
        for &p in t.primes() {
            for &q in t.range(p + 1, x / p) {
                let i = grid.cell_of(p as f64).unwrap();
                let j = grid.cell_of(q as f64).unwrap();
                let inside: Vec<usize> = grid
                    .boxes
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| (b.p_lo..b.p_hi).contains(&(p as f64)) && (b.q_lo..b.q_hi).contains(&(q as f64)))
                    .map(|(k, _)| k)
                    .collect();
                assert!(inside.len() <= 1);
                match grid.locate(p, q) {
                    Some(b) => {
                        assert_eq!((b.i, b.j), (i, j));
                        assert_eq!(inside.len(), 1);
                        hits[inside[0]] += 1;
                    }
                    None => assert!(inside.is_empty()),
                }
            }
        }
        assert!(hits.iter().sum::<usize>() > 0);
    }

    #[test]
    fn box_count_growth() {
        let g = Gamma::new(0.45).unwrap();
        let count = |x: f64| dyadic_boxes(&ScaleContext::new(x).unwrap(), &g).boxes.len() as f64;
        let observed = count(1e6) / count(1e3);
        // cells per axis ≈ log x / log ξ ≈ L·log x
        let cells = |x: f64| (2.0 * x).ln() * x.ln();
        let predicted = (cells(1e6) / cells(1e3)).powi(2);
        println!("box ratio {observed}, (L log x)² ratio {predicted}");
        assert!(observed / predicted <= 3.0 && predicted / observed <= 3.0);
    }
}
