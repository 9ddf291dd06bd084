//! Output row types for each command.

use bcp_core::analytic::ErrorTermBounds;
use bcp_core::equidist::{BoxCheck, DiscrepancyReport};
use bcp_core::{BoundReport, CountRecord, DyadicBox, PrimePair};

use crate::output::{Field, Record};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticRow {
    pub x: f64,
    pub gamma: f64,
    pub eta: f64,
    pub c_gamma: f64,
    pub h_exponent: f64,
    pub kappa_zero: f64,
    pub gamma_zero: f64,
    pub rho_threshold: f64,
    /// `ρ(x)`, absent below the discriminant threshold
    pub rho: Option<f64>,
    pub rho_main_term: f64,
}

impl Record for AnalyticRow {
    const COLUMNS: &'static [&'static str] = &[
        "x",
        "gamma",
        "eta",
        "c_gamma",
        "h_exponent",
        "kappa_zero",
        "gamma_zero",
        "rho_threshold",
        "rho",
        "rho_main_term",
    ];
    fn values(&self) -> Vec<Field> {
        vec![
            self.x.into(),
            self.gamma.into(),
            self.eta.into(),
            self.c_gamma.into(),
            self.h_exponent.into(),
            self.kappa_zero.into(),
            self.gamma_zero.into(),
            self.rho_threshold.into(),
            self.rho.into(),
            self.rho_main_term.into(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRow {
    pub pair: PrimePair,
    /// Absent when `pq` exceeds the polynomial oracle's range.
    pub theta_direct: Option<u64>,
}

impl Record for ThetaRow {
    const COLUMNS: &'static [&'static str] =
        &["p", "q", "m", "inv_q_mod_p", "inv_p_mod_q", "theta_carlitz", "theta_direct", "agree"];
    fn values(&self) -> Vec<Field> {
        let p = &self.pair;
        vec![
            p.p.into(),
            p.q.into(),
            p.m().into(),
            p.inv_q_mod_p.into(),
            p.inv_p_mod_q.into(),
            p.theta.into(),
            self.theta_direct.into(),
            self.theta_direct.map(|d| d == p.theta).into(),
        ]
    }
}

/// A [`CountRecord`] with `elapsed` in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub x: f64,
    pub gamma: f64,
    pub h_exact: u64,
    pub h_predicted: f64,
    pub ratio: f64,
    pub pairs_scanned: u64,
    pub elapsed: f64,
}

impl CountRow {
    /// `elapsed` is zeroed unless `timing` is set, keeping output reproducible.
    pub fn new(r: &CountRecord, timing: bool) -> Self {
        CountRow {
            x: r.x,
            gamma: r.gamma.value(),
            h_exact: r.h_exact,
            h_predicted: r.h_predicted,
            ratio: r.ratio,
            pairs_scanned: r.pairs_scanned,
            elapsed: if timing { r.elapsed.as_secs_f64() } else { 0.0 },
        }
    }
}

impl Record for CountRow {
    const COLUMNS: &'static [&'static str] =
        &["x", "gamma", "h_exact", "h_predicted", "ratio", "pairs_scanned", "elapsed"];
    fn values(&self) -> Vec<Field> {
        vec![
            self.x.into(),
            self.gamma.into(),
            self.h_exact.into(),
            self.h_predicted.into(),
            self.ratio.into(),
            self.pairs_scanned.into(),
            self.elapsed.into(),
        ]
    }
}

fn box_fields(b: &DyadicBox) -> Vec<Field> {
    vec![
        (b.i as u64).into(),
        (b.j as u64).into(),
        b.p_lo.into(),
        b.p_hi.into(),
        b.q_lo.into(),
        b.q_hi.into(),
        b.range_class.as_str().into(),
    ]
}

const BOX_COLUMNS: [&str; 7] = ["i", "j", "p_lo", "p_hi", "q_lo", "q_hi", "range_class"];

#[derive(Debug, Clone, PartialEq)]
pub struct BoxRow(pub BoxCheck);

impl Record for BoxRow {
    const COLUMNS: &'static [&'static str] = &[
        BOX_COLUMNS[0],
        BOX_COLUMNS[1],
        BOX_COLUMNS[2],
        BOX_COLUMNS[3],
        BOX_COLUMNS[4],
        BOX_COLUMNS[5],
        BOX_COLUMNS[6],
        "r_count",
        "r_gamma_count",
        "rho",
        "rho_mode",
        "main_term",
        "rel_dev",
        "cond1",
        "cond2",
        "band_pairs",
        "e1",
        "e2",
        "f",
        "g1",
        "g2",
        "g3",
        "e0",
    ];
    fn values(&self) -> Vec<Field> {
        let c = &self.0;
        let e: ErrorTermBounds = bcp_core::analytic::error_bounds(c.dyadic_box.p_lo, c.dyadic_box.q_lo);
        let mut v = box_fields(&c.dyadic_box);
        v.extend([
            c.r_count.into(),
            c.r_gamma_count.into(),
            c.rho.into(),
            c.rho_mode.as_str().into(),
            c.main_term.into(),
            c.rel_dev.into(),
            c.conditions.cond1.into(),
            c.conditions.cond2.into(),
            c.band_pairs.into(),
            e.e1.into(),
            e.e2.into(),
            e.f.into(),
            e.g1.into(),
            e.g2.into(),
            e.g3.into(),
            (e.e0_per_count * c.r_count as f64).into(),
        ]);
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRow {
    pub dyadic_box: DyadicBox,
    pub report: DiscrepancyReport,
}

impl Record for DiscrepancyRow {
    const COLUMNS: &'static [&'static str] = &[
        BOX_COLUMNS[0],
        BOX_COLUMNS[1],
        BOX_COLUMNS[2],
        BOX_COLUMNS[3],
        BOX_COLUMNS[4],
        BOX_COLUMNS[5],
        BOX_COLUMNS[6],
        "n",
        "d_star",
        "a_parameter",
        "et_bound",
    ];
    fn values(&self) -> Vec<Field> {
        let r = &self.report;
        let mut v = box_fields(&self.dyadic_box);
        v.extend([r.n.into(), r.d_star.into(), r.a_parameter.into(), r.et_bound.into()]);
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow(pub BoundReport);

impl Record for BoundRow {
    const COLUMNS: &'static [&'static str] =
        &["lemma", "p", "q", "y", "z", "a_count", "sampled", "terms", "observed", "reference", "ratio"];
    fn values(&self) -> Vec<Field> {
        let r = &self.0;
        vec![
            r.lemma.as_str().into(),
            r.p.into(),
            r.q.into(),
            r.y.into(),
            r.z.into(),
            r.a_count.into(),
            r.sampled.into(),
            r.terms.into(),
            r.observed.into(),
            r.reference.into(),
            r.ratio.into(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSummaryRow {
    pub limit: u64,
    pub count: u64,
    pub largest: Option<u64>,
}

impl Record for PrimeSummaryRow {
    const COLUMNS: &'static [&'static str] = &["limit", "count", "largest"];
    fn values(&self) -> Vec<Field> {
        vec![self.limit.into(), self.count.into(), self.largest.into()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeRow(pub u64);

impl Record for PrimeRow {
    const COLUMNS: &'static [&'static str] = &["prime"];
    fn values(&self) -> Vec<Field> {
        vec![self.0.into()]
    }
}

/// Outcome of one `verify` check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub id: u64,
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Record for CheckRow {
    const COLUMNS: &'static [&'static str] = &["id", "module", "name", "passed", "detail"];
    fn values(&self) -> Vec<Field> {
        vec![self.id.into(), self.module.into(), self.name.into(), self.passed.into(), self.detail.clone().into()]
    }
}
