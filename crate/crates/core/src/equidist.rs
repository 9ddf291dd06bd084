//! Distribution of the fractions `q̄_p / p` over ξ-adic boxes.
//!
//! A pair `(p, q)` of a box contributes to `R_γ(P, Q)` when
//! `q̄_p / p ≤ ρ(PQ)`. This module counts `R` and `R_γ` per box (by the
//! fraction test, and independently by summing prime counts over the
//! residue classes `s` with `s̄_p ≤ ρ(PQ)·p`), compares `R_γ` with
//! `½(PQ)^{γ−1/2} R`, and measures the star discrepancy of each box's
//! fractions against the Erdős–Turán bound.
//!
//! The interval endpoint in the discrepancy is called `alpha` here.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{self, ConditionCheck, DyadicBox, Gamma, ScaleContext};
use crate::arith::{self, mod_inverse, PrimeTable};
use crate::error::{Error, Result};
use crate::expsums::unit_phase;

/// Relative tolerance inside which `q̄_p ≤ ρ·p` is treated as a tie.
pub const RHO_GUARD_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FractionSequence {
    pub dyadic_box: DyadicBox,
    pub points: Vec<f64>,
    pub pairs: usize,
}

/// The primes `q` paired with `p` inside `b`: `max{Q, p+1} ≤ q < ξQ`, `q ≤ x/p`.
fn q_window(b: &DyadicBox, p: u64, x: f64) -> (u64, u64) {
    let (q_lo, q_hi) = b.q_int_range();
    let cap = (x / p as f64).floor() as u64;
    (q_lo.max(p + 1), q_hi.min(cap))
}

/// Largest `q` any pair can reach: `x/2`.
fn pair_cap(ctx: &ScaleContext) -> u64 {
    (ctx.x / 2.0).floor() as u64
}

/// Calls `f(p, q)` for every pair in the box, `p` ascending then `q` ascending.
fn for_each_pair(b: &DyadicBox, ctx: &ScaleContext, table: &PrimeTable, mut f: impl FnMut(u64, u64)) -> Result<()> {
    let (p_lo, p_hi) = b.p_int_range();
    let (_, q_hi) = b.q_int_range();
    table.require(q_hi.min(pair_cap(ctx)))?;
    for &p in table.range(p_lo, p_hi) {
        let (lo, hi) = q_window(b, p, ctx.x);
        if lo > hi {
            continue;
        }
        for &q in table.range(lo, hi) {
            f(p, q);
        }
    }
    Ok(())
}

/// The `R(P, Q)` fractions `q̄_p / p` of a box.
pub fn inverse_fractions(b: &DyadicBox, ctx: &ScaleContext, table: &PrimeTable) -> Result<FractionSequence> {
    let mut points = Vec::new();
    for_each_pair(b, ctx, table, |p, q| {
        points.push(mod_inverse(q, p).expect("distinct primes") as f64 / p as f64);
    })?;
    let pairs = points.len();
    Ok(FractionSequence { dyadic_box: *b, points, pairs })
}

/// `D_N = sup_α |#{ξ_n < α}/N − α|` via the sorted-points formula
/// `max_i max(ξ_(i) − (i−1)/N, i/N − ξ_(i))`.
pub fn star_discrepancy(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Empty("star_discrepancy"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().map(|(i, &v)| (v - i as f64 / n).max((i + 1) as f64 / n - v)).fold(0.0, f64::max))
}

/// `3(1/(A+1) + (1/N) Σ_{a=1}^{A} |Σ_n e(a ξ_n)| / a)`.
pub fn erdos_turan_bound(points: &[f64], a_param: u64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Empty("erdos_turan_bound"));
    }
    if a_param == 0 {
        return Err(Error::Precondition("Erdős–Turán parameter A must be ≥ 1".into()));
    }
    let n = points.len() as f64;
    let tail: f64 = (1..=a_param)
        .into_par_iter()
        .map(|a| {
            let s: Complex64 =
                points.iter().map(|&v| Complex64::from_polar(1.0, std::f64::consts::TAU * frac(a as f64 * v))).sum();
            s.norm() / a as f64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(3.0 * (1.0 / (a_param as f64 + 1.0) + tail / n))
}

fn frac(v: f64) -> f64 {
    v - v.floor()
}

/// Erdős–Turán for rational points `k/p`: exact phases via `e_p(a k)`.
fn erdos_turan_rational(residues: &[(u64, u64)], a_param: u64) -> f64 {
    let n = residues.len() as f64;
    let tail: f64 = (1..=a_param)
        .into_par_iter()
        .map(|a| {
            let s: Complex64 =
                residues.iter().map(|&(k, p)| unit_phase(((a as u128 * k as u128) % p as u128) as i64, p)).sum();
            s.norm() / a as f64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    3.0 * (1.0 / (a_param as f64 + 1.0) + tail / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyReport {
    pub p_lo: f64,
    pub q_lo: f64,
    pub n: u64,
    pub d_star: f64,
    pub a_parameter: u64,
    pub et_bound: f64,
}

pub fn discrepancy_report(points: &[f64], a_param: u64) -> Result<DiscrepancyReport> {
    Ok(DiscrepancyReport {
        p_lo: 0.0,
        q_lo: 0.0,
        n: points.len() as u64,
        d_star: star_discrepancy(points)?,
        a_parameter: a_param,
        et_bound: erdos_turan_bound(points, a_param)?,
    })
}

/// `A = P − 1` for a box with lower edge `P`, at least 1.
pub fn default_a_parameter(b: &DyadicBox) -> u64 {
    (b.p_lo.floor() as u64).saturating_sub(1).max(1)
}

/// Discrepancy of a box's fractions with `A` defaulting to `P − 1`;
/// `None` for a box without pairs.
pub fn box_discrepancy(
    b: &DyadicBox,
    ctx: &ScaleContext,
    table: &PrimeTable,
    a_param: Option<u64>,
) -> Result<Option<DiscrepancyReport>> {
    let mut residues = Vec::new();
    for_each_pair(b, ctx, table, |p, q| residues.push((mod_inverse(q, p).expect("distinct primes"), p)))?;
    if residues.is_empty() {
        return Ok(None);
    }
    let points: Vec<f64> = residues.iter().map(|&(k, p)| k as f64 / p as f64).collect();
    let a = a_param.unwrap_or_else(|| default_a_parameter(b));
    Ok(Some(DiscrepancyReport {
        p_lo: b.p_lo,
        q_lo: b.q_lo,
        n: points.len() as u64,
        d_star: star_discrepancy(&points)?,
        a_parameter: a,
        et_bound: erdos_turan_rational(&residues, a),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMode {
    Exact,
    /// `ρ(PQ)` is undefined at this scale; `½(PQ)^{γ−1/2}` is used instead.
    AsymptoticFallback,
}

impl RhoMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RhoMode::Exact => "exact",
            RhoMode::AsymptoticFallback => "asymptotic-fallback",
        }
    }
}

/// `ρ(PQ)` for the box, or its main term when `ρ` is out of domain.
pub fn box_threshold(b: &DyadicBox, g: &Gamma) -> (f64, RhoMode) {
    let t = b.p_lo * b.q_lo;
    match analytic::rho(t, g) {
        Ok(r) => (r, RhoMode::Exact),
        Err(_) => (0.5 * t.powf(g.value() - 0.5), RhoMode::AsymptoticFallback),
    }
}

/// `q̄ ≤ ρ·p`, ties within the guard band resolved as inside.
pub fn fraction_inside(qbar: u64, p: u64, rho: f64) -> bool {
    qbar as f64 <= rho * p as f64 * (1.0 + RHO_GUARD_BAND)
}

fn in_band(qbar: u64, p: u64, rho: f64) -> bool {
    let limit = rho * p as f64;
    (qbar as f64 - limit).abs() <= RHO_GUARD_BAND * limit
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCheck {
    pub dyadic_box: DyadicBox,
    pub r_count: u64,
    pub r_gamma_count: u64,
    pub rho: f64,
    pub rho_mode: RhoMode,
    /// `½(PQ)^{γ−1/2} R(P, Q)`
    pub main_term: f64,
    pub rel_dev: f64,
    pub conditions: ConditionCheck,
    /// Pairs whose fraction fell within the guard band of `ρ`.
    pub band_pairs: u64,
}

/// `R(P, Q)` and `R_γ(P, Q)` for one box by the fraction test.
pub fn box_counts(b: &DyadicBox, ctx: &ScaleContext, g: &Gamma, table: &PrimeTable) -> Result<BoxCheck> {
    let (rho, rho_mode) = box_threshold(b, g);
    let (p_lo, p_hi) = b.p_int_range();
    let (_, q_hi) = b.q_int_range();
    table.require(q_hi.min(pair_cap(ctx)))?;
    // (r, r_gamma, band) per p, summed in p order
    let rows: Vec<(u64, u64, u64)> = table
        .range(p_lo, p_hi)
        .par_iter()
        .map(|&p| {
            let (lo, hi) = q_window(b, p, ctx.x);
            let mut row = (0, 0, 0);
            if lo > hi {
                return row;
            }
            for &q in table.range(lo, hi) {
                let qbar = mod_inverse(q, p).expect("distinct primes");
                row.0 += 1;
                if fraction_inside(qbar, p, rho) {
                    row.1 += 1;
                }
                if in_band(qbar, p, rho) {
                    log::debug!("pair ({p}, {q}) within guard band of rho = {rho}");
                    row.2 += 1;
                }
            }
            row
        })
        .collect();
    let (r_count, r_gamma_count, band_pairs) =
        rows.into_iter().fold((0, 0, 0), |acc, r| (acc.0 + r.0, acc.1 + r.1, acc.2 + r.2));
    let main_term = 0.5 * (b.p_lo * b.q_lo).powf(g.value() - 0.5) * r_count as f64;
    let rel_dev = (r_gamma_count as f64 - main_term).abs() / main_term.max(1.0);
    Ok(BoxCheck {
        dyadic_box: *b,
        r_count,
        r_gamma_count,
        rho,
        rho_mode,
        main_term,
        rel_dev,
        conditions: analytic::condition_check(b.p_lo, ctx, g.value(), analytic::DEFAULT_EPS),
        band_pairs,
    })
}

/// `R_γ(P, Q)` summed over congruence classes:
/// `Σ_p Σ_{s ∈ E(p, ρ)} (π(z_p; p, s) − π(y_p; p, s))` where
/// `E(p, ρ) = {s mod p : s̄_p ≤ ρ p}`.
pub fn r_gamma_by_classes(b: &DyadicBox, ctx: &ScaleContext, g: &Gamma, table: &PrimeTable) -> Result<u64> {
    let (rho, _) = box_threshold(b, g);
    let (p_lo, p_hi) = b.p_int_range();
    let (_, q_hi) = b.q_int_range();
    table.require(q_hi.min(pair_cap(ctx)))?;
    let mut total = 0;
    for &p in table.range(p_lo, p_hi) {
        let (lo, hi) = q_window(b, p, ctx.x);
        if lo > hi {
            continue;
        }
        // E(p, ρ) as the images s = t̄ of the admissible t = s̄
        let mut in_class = vec![false; p as usize];
        for t in (1..p).take_while(|&t| fraction_inside(t, p, rho)) {
            in_class[mod_inverse(t, p)? as usize] = true;
        }
        let mut per_class = vec![0u64; p as usize];
        for &q in table.range(lo, hi) {
            per_class[(q % p) as usize] += 1;
        }
        total += (0..p as usize).filter(|&s| in_class[s]).map(|s| per_class[s]).sum::<u64>();
    }
    Ok(total)
}

/// [`box_counts`] over every admissible box of the grid, in grid order.
pub fn box_sweep(ctx: &ScaleContext, g: &Gamma, table: &PrimeTable) -> Result<Vec<BoxCheck>> {
    box_sweep_with(ctx, g, table, analytic::SMALL_P_LOG_POWER)
}

pub fn box_sweep_with(
    ctx: &ScaleContext,
    g: &Gamma,
    table: &PrimeTable,
    small_log_power: f64,
) -> Result<Vec<BoxCheck>> {
    table.require((ctx.x / 2.0).floor() as u64)?;
    let grid = arith::dyadic_boxes_with(ctx, g, small_log_power);
    grid.boxes.par_iter().map(|b| box_counts(b, ctx, g, table)).collect()
}
