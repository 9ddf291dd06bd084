//! Closed-form quantities: the asymptotic constant `C(γ)`, the fraction
//! threshold `ρ(t)`, the exponent function `H(γ)` and its root, `κ₀`, the
//! box admissibility region and the error-term monomials used to classify
//! boxes.
//!
//! Everything here is a pure function of its arguments.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Default margin below 1/2 for [`Gamma`].
pub const DEFAULT_ETA: f64 = 1e-3;

/// Default `ε` for [`condition_check`].
pub const DEFAULT_EPS: f64 = 1e-3;

/// Default power of `L` in the small-`P` boundary `x^{1/3} L^{-100}`.
pub const SMALL_P_LOG_POWER: f64 = 100.0;

/// Default power of `L` in the large-`PQ` reduction `PQ ≥ x L^{-12}`.
pub const LARGE_PQ_LOG_POWER: f64 = 12.0;

/// Largest denominator searched when recovering an exact rational form of γ.
const MAX_GAMMA_DENOMINATOR: i64 = 10_000;

/// The exponent parameter γ together with its margin η below 1/2.
///
/// When γ is (to double precision) a rational with denominator at most
/// 10⁴, the exact fraction is kept alongside; the counting code uses it to
/// settle threshold ties in integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma {
    value: f64,
    eta: f64,
    exact: Option<(i64, i64)>,
}

impl Gamma {
    pub fn new(value: f64) -> Result<Self> {
        Self::with_eta(value, DEFAULT_ETA)
    }

    pub fn with_eta(value: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::Domain { what: "eta", value: eta });
        }
        if !(value > 0.0) || !(value <= 0.5 - eta) {
            return Err(Error::Domain { what: "gamma", value });
        }
        Ok(Gamma { value, eta, exact: rational_approximation(value) })
    }

    /// γ = `num/den` exactly.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Domain { what: "gamma denominator", value: den as f64 });
        }
        let mut g = Self::new(num as f64 / den as f64)?;
        let r = Ratio::new(num, den);
        g.exact = Some((*r.numer(), *r.denom()));
        Ok(g)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Exact `(numerator, denominator)` when γ is a small-denominator rational.
    pub fn exact(&self) -> Option<(i64, i64)> {
        self.exact
    }

    /// `1/2 + γ`, the exponent in `θ(m) ≤ m^{1/2+γ}`.
    pub fn threshold_exponent(&self) -> f64 {
        0.5 + self.value
    }
}

/// Best rational `n/d` with `d ≤ 10⁴` that reproduces `v` to within a few ulps.
fn rational_approximation(v: f64) -> Option<(i64, i64)> {
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rem = v;
    for _ in 0..40 {
        let a = rem.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_GAMMA_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - v).abs() <= 4.0 * f64::EPSILON * v.abs() {
            return Some((h1, k1));
        }
        let frac = rem - a as f64;
        if frac <= 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    None
}

/// Scale-dependent quantities `L = log 2x` and `ξ = 1 + 1/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleContext {
    pub x: f64,
    pub log_2x: f64,
    pub xi: f64,
}

impl ScaleContext {
    pub fn new(x: f64) -> Result<Self> {
        if !(x >= 2.0) || !x.is_finite() {
            return Err(Error::Domain { what: "x", value: x });
        }
        let log_2x = (2.0 * x).ln();
        Ok(ScaleContext { x, log_2x, xi: 1.0 + 1.0 / log_2x })
    }

    /// `x^{1/3} L^{-k}`; below this `P` is small.
    pub fn small_p_bound(&self, log_power: f64) -> f64 {
        self.x.cbrt() * self.log_2x.powf(-log_power)
    }

    /// `(2x)^{2/5}`; above this `P` is large.
    pub fn large_p_bound(&self) -> f64 {
        (2.0 * self.x).powf(0.4)
    }

    /// `x L^{-k}`, the lower end of the products `PQ` that matter.
    pub fn large_pq_bound(&self, log_power: f64) -> f64 {
        self.x * self.log_2x.powf(-log_power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeClass {
    Small,
    Medium,
    Large,
}

impl RangeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RangeClass::Small => "small",
            RangeClass::Medium => "medium",
            RangeClass::Large => "large",
        }
    }
}

/// One cell `[P, ξP) × [Q, ξQ)` of the ξ-adic decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicBox {
    /// Grid index of the `p` interval.
    pub i: usize,
    /// Grid index of the `q` interval.
    pub j: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    pub admissible: bool,
    pub range_class: RangeClass,
}

impl DyadicBox {
    /// Smallest and largest integers in `[p_lo, p_hi)`.
    pub fn p_int_range(&self) -> (u64, u64) {
        int_range(self.p_lo, self.p_hi)
    }

    pub fn q_int_range(&self) -> (u64, u64) {
        int_range(self.q_lo, self.q_hi)
    }
}

fn int_range(lo: f64, hi: f64) -> (u64, u64) {
    let a = lo.ceil() as u64;
    let b = (hi.ceil() as u64).saturating_sub(1);
    (a, b)
}

/// `C(γ) = 2/(1+2γ) · log((1+2γ)/(1−2γ))`.
pub fn c_gamma(g: &Gamma) -> Result<f64> {
    c_gamma_value(g.value())
}

/// [`c_gamma`] on a bare exponent in `(0, 1/2)`.
pub fn c_gamma_value(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Domain { what: "gamma", value: gamma });
    }
    let s = 1.0 + 2.0 * gamma;
    // ln_1p keeps precision as γ → 0
    Ok(2.0 / s * ((2.0 * gamma).ln_1p() - (-2.0 * gamma).ln_1p()))
}

/// The discriminant `(1 + 1/t)² − 2t⁻¹(t^{1/2+γ} + 1)` of the threshold quadratic.
pub fn rho_discriminant(t: f64, gamma: f64) -> f64 {
    let b = 1.0 + 1.0 / t;
    b * b - 2.0 / t * (t.powf(0.5 + gamma) + 1.0)
}

/// Smallest root `ρ(t)` of `2tρ(1 + 1/t − ρ) − 1 = t^{1/2+γ}`.
///
/// Evaluated in the rationalised form `2c / (b + √(b² − 4c))` with
/// `b = 1 + 1/t`, `c = (t^{1/2+γ} + 1)/(2t)`, which is algebraically the
/// same root but avoids cancellation when `ρ` is small.
pub fn rho(t: f64, g: &Gamma) -> Result<f64> {
    rho_value(t, g.value())
}

pub fn rho_value(t: f64, gamma: f64) -> Result<f64> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::Domain { what: "t", value: t });
    }
    let b = 1.0 + 1.0 / t;
    let c = (t.powf(0.5 + gamma) + 1.0) / (2.0 * t);
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Err(Error::RhoDomain { t, gamma, discriminant: disc });
    }
    Ok(2.0 * c / (b + disc.sqrt()))
}

/// Smallest `t` at which the discriminant is roughly nonnegative: `2^{1/(1/2−γ)}`.
pub fn rho_threshold(gamma: f64) -> f64 {
    2f64.powf(1.0 / (0.5 - gamma))
}

/// Lower end of the range on which `ρ` is known to decrease: four times [`rho_threshold`].
pub fn rho_monotone_from(gamma: f64) -> f64 {
    4.0 * rho_threshold(gamma)
}

/// Relative residual of `ρ` in its defining quadratic.
pub fn rho_residual(t: f64, gamma: f64, r: f64) -> f64 {
    let target = t.powf(0.5 + gamma);
    ((2.0 * t * r * (1.0 + 1.0 / t - r) - 1.0) - target).abs() / target
}

/// `t^{γ−1/2}/2`, the leading term of `ρ(t)`.
pub fn rho_main_term(t: f64, g: &Gamma) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain { what: "t", value: t });
    }
    Ok(0.5 * t.powf(g.value() - 0.5))
}

/// `H(γ) = max{(20γ−6)/9, min{(8γ−1)/5, 10γ−4, (9γ−2)/4}}`.
pub fn h_exponent(gamma: f64) -> f64 {
    let first = (20.0 * gamma - 6.0) / 9.0;
    let inner = ((8.0 * gamma - 1.0) / 5.0).min(10.0 * gamma - 4.0).min((9.0 * gamma - 2.0) / 4.0);
    first.max(inner)
}

/// [`h_exponent`] in exact rational arithmetic.
pub fn h_exponent_exact(gamma: Ratio<i128>) -> Ratio<i128> {
    let r = |n: i128, d: i128| Ratio::new(n, d);
    let first = (r(20, 1) * gamma - r(6, 1)) / r(9, 1);
    let a = (r(8, 1) * gamma - r(1, 1)) / r(5, 1);
    let b = r(10, 1) * gamma - r(4, 1);
    let c = (r(9, 1) * gamma - r(2, 1)) / r(4, 1);
    let inner = a.min(b).min(c);
    first.max(inner)
}

/// Root of `H(γ) = 1/2`, located by bisection on `[2/5, 1/2]` with exact
/// rational evaluation of `H` at each dyadic midpoint.
pub fn gamma_zero() -> f64 {
    let half = Ratio::new(1i128, 2);
    let mut lo = Ratio::new(2i128, 5);
    let mut hi = Ratio::new(1i128, 2);
    let tol = Ratio::new(1i128, 1_000_000_000_000);
    while hi - lo > tol {
        let mid = (lo + hi) / Ratio::from_integer(2);
        if h_exponent_exact(mid) < half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ratio_to_f64(hi)
}

fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `κ₀ = 4^{−2/(1+2γ)}`.
pub fn kappa_zero(gamma: f64) -> f64 {
    4f64.powf(-2.0 / (1.0 + 2.0 * gamma))
}

/// Whether `(P, Q)` lies in `P ≤ ξQ` and `κ₀ Q^{(1−2γ)/(1+2γ)} ≤ P ≤ x/Q`.
pub fn box_admissible(p: f64, q: f64, ctx: &ScaleContext, g: &Gamma) -> bool {
    let gamma = g.value();
    let lower = kappa_zero(gamma) * q.powf((1.0 - 2.0 * gamma) / (1.0 + 2.0 * gamma));
    p <= ctx.xi * q && lower <= p && p <= ctx.x / q
}

/// Small / medium / large split of `P` with configurable power of `L` in
/// the small boundary.
pub fn classify_p_range(p: f64, ctx: &ScaleContext, log_power: f64) -> RangeClass {
    if p < ctx.small_p_bound(log_power) {
        RangeClass::Small
    } else if p > ctx.large_p_bound() {
        RangeClass::Large
    } else {
        RangeClass::Medium
    }
}

/// The error-term monomials for one box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTermBounds {
    pub e1: f64,
    pub e2: f64,
    pub f: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    /// `E₀ / R(P, Q) = 1/P`.
    pub e0_per_count: f64,
}

pub fn error_bounds(p: f64, q: f64) -> ErrorTermBounds {
    ErrorTermBounds {
        e1: p.sqrt() * q,
        e2: p.powf(1.5) * q.sqrt(),
        f: p * q.powf(15.0 / 16.0),
        g1: q.powf(5.0 / 8.0) * p.powf(5.0 / 4.0),
        g2: q.powf(9.0 / 10.0) * p,
        g3: q.powf(13.0 / 18.0) * p.powf(7.0 / 6.0),
        e0_per_count: 1.0 / p,
    }
}

/// Outcome of the two sufficient conditions on `P` for the large range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionCheck {
    /// `P ≤ x^{16γ−7−ε}`
    pub cond1: bool,
    /// `P ≤ x^{min{(8γ−1)/5, 10γ−4, (9γ−2)/4} − ε}`
    pub cond2: bool,
}

pub fn condition_check(p: f64, ctx: &ScaleContext, gamma: f64, eps: f64) -> ConditionCheck {
    let e1 = 16.0 * gamma - 7.0 - eps;
    let e2 = ((8.0 * gamma - 1.0) / 5.0).min(10.0 * gamma - 4.0).min((9.0 * gamma - 2.0) / 4.0) - eps;
    ConditionCheck { cond1: p <= ctx.x.powf(e1), cond2: p <= ctx.x.powf(e2) }
}
