//! Command-line front end for `bcp_core`.
//!
//! [`run`] parses arguments, runs one command on a pool of the requested
//! size and writes its records as CSV or JSON. Exit codes: 0 on success,
//! 2 on bad input, 1 on runtime failures and failed `verify` checks.

pub mod cache;
pub mod config;
pub mod criteria;
pub mod error;
pub mod output;
pub mod records;

use std::ffi::OsString;
use std::io::Write;

use bcp_core::analytic::{self, Gamma, ScaleContext};
use bcp_core::{arith, counting, cyclotomic, equidist, expsums};
use clap::Parser;

use crate::config::{Cli, Command, ExpsumArgs, Lemma, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::emit_records;
use crate::records::*;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    match bcp_core::with_workers(cfg.workers, || dispatch(&cfg, out, err)) {
        Ok(code) => code,
        Err(e) if e.is_broken_pipe() => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn gamma(cfg: &RunConfig) -> CliResult<Gamma> {
    Ok(Gamma::with_eta(cfg.gamma, cfg.eta)?)
}

fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let ctx = ScaleContext::new(cfg.x)?;
    match &cfg.command {
        Command::Analytic => {
            let g = gamma(cfg)?;
            let row = AnalyticRow {
                x: cfg.x,
                gamma: g.value(),
                eta: g.eta(),
                c_gamma: analytic::c_gamma(&g)?,
                h_exponent: analytic::h_exponent(g.value()),
                kappa_zero: analytic::kappa_zero(g.value()),
                gamma_zero: analytic::gamma_zero(),
                rho_threshold: analytic::rho_threshold(g.value()),
                rho: analytic::rho(cfg.x, &g).ok(),
                rho_main_term: analytic::rho_main_term(cfg.x, &g)?,
            };
            emit_records(&[row], cfg.format, out)?;
        }
        Command::Theta { p, q } => {
            let pair = cyclotomic::theta_carlitz(*p, *q)?;
            let theta_direct = if pair.m() <= cyclotomic::ORACLE_MAX_M {
                Some(cyclotomic::theta_direct(pair.m())?)
            } else {
                log::warn!("pq = {} beyond the polynomial oracle, Carlitz route only", pair.m());
                None
            };
            emit_records(&[ThetaRow { pair, theta_direct }], cfg.format, out)?;
        }
        Command::Hcount { table } => {
            let g = gamma(cfg)?;
            let xs = if table.is_empty() { vec![cfg.x] } else { table.clone() };
            let rows: Vec<CountRow> =
                counting::convergence_table(&xs, &g)?.iter().map(|r| CountRow::new(r, cfg.timing)).collect();
            emit_records(&rows, cfg.format, out)?;
        }
        Command::Boxes { small_log_power } => {
            let g = gamma(cfg)?;
            warn_collapse(&ctx, *small_log_power, err)?;
            let table = cache::load_or_build(cfg.cache_dir.as_deref(), (cfg.x / 2.0).floor() as u64)?;
            let sweep = equidist::box_sweep_with(&ctx, &g, &table, *small_log_power)?;
            let rows: Vec<BoxRow> = sweep.into_iter().map(BoxRow).collect();
            emit_records(&rows, cfg.format, out)?;
        }
        Command::Discrepancy { a } => {
            let g = gamma(cfg)?;
            warn_collapse(&ctx, analytic::SMALL_P_LOG_POWER, err)?;
            if *a == Some(0) {
                return Err(CliError::Usage("--a must be at least 1".into()));
            }
            let table = cache::load_or_build(cfg.cache_dir.as_deref(), (cfg.x / 2.0).floor() as u64)?;
            let grid = arith::dyadic_boxes(&ctx, &g);
            let mut rows = Vec::new();
            for b in &grid.boxes {
                if let Some(report) = equidist::box_discrepancy(b, &ctx, &table, *a)? {
                    rows.push(DiscrepancyRow { dyadic_box: *b, report });
                }
            }
            emit_records(&rows, cfg.format, out)?;
        }
        Command::Expsum(args) => {
            let rows = expsum_reports(cfg, &ctx, args)?;
            emit_records(&rows, cfg.format, out)?;
        }
        Command::Primes { limit, list } => {
            let limit = limit.unwrap_or(cfg.x.floor() as u64);
            let table = cache::load_or_build(cfg.cache_dir.as_deref(), limit)?;
            if *list {
                let rows: Vec<PrimeRow> = table.primes().iter().map(|&p| PrimeRow(p)).collect();
                emit_records(&rows, cfg.format, out)?;
            } else {
                let row = PrimeSummaryRow { limit, count: table.len() as u64, largest: table.primes().last().copied() };
                emit_records(&[row], cfg.format, out)?;
            }
        }
        Command::Verify => return verify(cfg, out, err),
    }
    Ok(0)
}

/// Warns when an `L`-power threshold has dropped below 1 at this scale.
fn warn_collapse(ctx: &ScaleContext, small_log_power: f64, err: &mut dyn Write) -> CliResult<()> {
    let small = ctx.small_p_bound(small_log_power);
    if small < 1.0 {
        writeln!(
            err,
            "warning: small-P threshold x^(1/3)/L^{small_log_power} = {small:e} < 1 at x = {}; no box is classed small",
            ctx.x
        )?;
    }
    let large = ctx.large_pq_bound(analytic::LARGE_PQ_LOG_POWER);
    if large < 1.0 {
        writeln!(
            err,
            "warning: large-PQ threshold x/L^{} = {large:e} < 1 at x = {}",
            analytic::LARGE_PQ_LOG_POWER,
            ctx.x
        )?;
    }
    Ok(())
}

fn expsum_reports(cfg: &RunConfig, ctx: &ScaleContext, args: &ExpsumArgs) -> CliResult<Vec<BoundRow>> {
    let want = |l: Lemma| args.lemma == Lemma::All || args.lemma == l;
    let y = args.y.unwrap_or(args.p as f64);
    let z = args.z.unwrap_or(2.0 * y);
    let mut limit = 0u64;
    if want(Lemma::KorolevChanga) {
        limit = limit.max(z.floor() as u64);
    }
    if want(Lemma::Irving) || want(Lemma::Dfi) {
        limit = limit.max((2.0 * args.big_p).max(2.0 * args.big_q).floor() as u64);
    }
    let table = cache::load_or_build(cfg.cache_dir.as_deref(), limit.max(2))?;
    let mut rows = Vec::new();
    if want(Lemma::Weil) {
        let ratio = expsums::weil_ratio_max(args.p)?;
        let reference = 2.0 * (args.p as f64).sqrt();
        rows.push(BoundRow(bcp_core::BoundReport {
            lemma: "weil".into(),
            p: args.p as f64,
            q: args.p as f64,
            y: 1.0,
            z: (args.p - 1) as f64,
            a_count: args.p - 1,
            sampled: false,
            terms: args.p - 1,
            observed: ratio * reference,
            reference,
            ratio,
        }));
    }
    if want(Lemma::KorolevChanga) {
        rows.push(BoundRow(expsums::kc_bound_report(args.p, y, z, &table, cfg.seed)?));
    }
    if want(Lemma::Irving) || want(Lemma::Dfi) {
        let windows = expsums::default_windows(args.big_p, args.big_q, ctx.x, ctx.xi, &table)?;
        if want(Lemma::Irving) {
            rows.push(BoundRow(expsums::irving_average_report(args.big_p, args.big_q, &windows, &table, cfg.seed)?));
        }
        if want(Lemma::Dfi) {
            rows.push(BoundRow(expsums::dfi_average_report(args.big_p, args.big_q, args.a, &windows, &table)?));
        }
    }
    Ok(rows)
}

fn verify(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let mut rows = Vec::new();
    let mut code = 0;
    for c in criteria::all() {
        log::info!("verify: {} {}", c.module, c.name);
        let row = c.evaluate(cfg.seed);
        let failed = !row.passed;
        if failed {
            writeln!(err, "verify failed: {}/{}: {}", row.module, row.name, row.detail)?;
        }
        rows.push(row);
        if failed {
            code = 1;
            break;
        }
    }
    emit_records(&rows, cfg.format, out)?;
    Ok(code)
}
