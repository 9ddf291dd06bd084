use bcp_core::analytic::{rho_value, RangeClass};
use bcp_core::arith::{dyadic_boxes, dyadic_boxes_with, mod_inverse, sieve_primes};
use bcp_core::counting::{h_gamma_count, theta_within};
use bcp_core::cyclotomic::PrimePair;
use bcp_core::equidist::{box_counts, box_discrepancy, box_sweep, r_gamma_by_classes, RhoMode};
use bcp_core::{Gamma, ScaleContext};

fn all_pairs(x: u64) -> Vec<(u64, u64)> {
    let table = sieve_primes(x / 2).unwrap();
    let ps = table.primes();
    let mut out = Vec::new();
    for (k, &p) in ps.iter().enumerate() {
        for &q in ps[k + 1..].iter().take_while(|&&q| p * q <= x) {
            out.push((p, q));
        }
    }
    out
}

#[test]
fn two_routes_agree_on_boxes() {
    let table = sieve_primes(50_000).unwrap();
    let mut compared = 0;
    for &(x, gamma) in &[(1e4, 0.45), (5e4, 0.3), (1e5, 0.49), (1e5, 0.2)] {
        let ctx = ScaleContext::new(x).unwrap();
        let g = Gamma::new(gamma).unwrap();
        let grid = dyadic_boxes(&ctx, &g);
        let step = (grid.boxes.len() / 5).max(1);
        for b in grid.boxes.iter().step_by(step).take(5) {
            let fraction = box_counts(b, &ctx, &g, &table).unwrap().r_gamma_count;
            let classes = r_gamma_by_classes(b, &ctx, &g, &table).unwrap();
            assert_eq!(fraction, classes, "x = {x}, box ({}, {})", b.p_lo, b.q_lo);
            compared += 1;
        }
    }
    assert!(compared >= 20);
}

#[test]
fn r_gamma_grows_with_gamma() {
    let ctx = ScaleContext::new(1e5).unwrap();
    let table = sieve_primes(50_000).unwrap();
    let lo = Gamma::new(0.3).unwrap();
    let hi = Gamma::new(0.45).unwrap();
    // both sweeps share boxes present in the smaller-γ grid
    let grid = dyadic_boxes(&ctx, &lo);
    for b in &grid.boxes {
        let a = box_counts(b, &ctx, &lo, &table).unwrap();
        let c = box_counts(b, &ctx, &hi, &table).unwrap();
        assert_eq!(a.r_count, c.r_count);
        assert!(a.r_gamma_count <= c.r_gamma_count);
    }
}

#[test]
fn sweep_counts_every_admissible_pair_once() {
    let x = 10_000u64;
    let ctx = ScaleContext::new(x as f64).unwrap();
    let g = Gamma::new(0.45).unwrap();
    let table = sieve_primes(x / 2).unwrap();
    let grid = dyadic_boxes(&ctx, &g);
    let sweep = box_sweep(&ctx, &g, &table).unwrap();
    let total_r: u64 = sweep.iter().map(|c| c.r_count).sum();
    let pairs = all_pairs(x);
    let located = pairs.iter().filter(|&&(p, q)| grid.locate(p, q).is_some()).count() as u64;
    assert_eq!(total_r, located);
}

#[test]
fn counted_pairs_lie_in_admissible_boxes() {
    let x = 10_000u64;
    let ctx = ScaleContext::new(x as f64).unwrap();
    for gamma in [0.3, 0.45, 0.49] {
        let g = Gamma::new(gamma).unwrap();
        let grid = dyadic_boxes(&ctx, &g);
        for (p, q) in all_pairs(x) {
            if theta_within(PrimePair::from_primes_unchecked(p, q).theta, p * q, &g) {
                assert!(grid.locate(p, q).is_some(), "γ = {gamma}: ({p}, {q}) outside the grid");
            }
        }
    }
}

/// Per-pair threshold: `u = q̄/p` passes when `u ≤ ρ(pq)` or
/// `u ≥ 1 + 1/pq − ρ(pq)`, and every pair passes below the discriminant threshold.
fn pair_passes(p: u64, q: u64, gamma: f64) -> bool {
    let t = (p * q) as f64;
    let u = mod_inverse(q, p).unwrap() as f64 / p as f64;
    match rho_value(t, gamma) {
        Ok(r) => u <= r * (1.0 + 1e-12) || u >= (1.0 + 1.0 / t - r) * (1.0 - 1e-12),
        Err(_) => true,
    }
}

#[test]
fn pairwise_rho_route_reproduces_h() {
    let x = 10_000u64;
    let ctx = ScaleContext::new(x as f64).unwrap();
    for gamma in [0.2, 0.3, 0.45, 0.49] {
        let g = Gamma::new(gamma).unwrap();
        let h = h_gamma_count(&ctx, &g).unwrap().h_exact;
        let via_rho = all_pairs(x).into_iter().filter(|&(p, q)| pair_passes(p, q, gamma)).count() as u64;
        assert_eq!(h, via_rho, "γ = {gamma}");
    }
}

#[test]
fn sweep_reaches_populated_boxes() {
    let x = 1e6;
    let ctx = ScaleContext::new(x).unwrap();
    let g = Gamma::new(0.45).unwrap();
    let table = sieve_primes(500_000).unwrap();
    let sweep = box_sweep(&ctx, &g, &table).unwrap();
    assert!(sweep.iter().any(|c| c.r_count >= 100));
    for c in &sweep {
        assert!(c.r_gamma_count <= c.r_count);
        assert!(c.dyadic_box.admissible);
        if c.rho_mode == RhoMode::Exact {
            assert!(c.rho > 0.0 && c.rho < 0.5);
        }
    }
}

/// A box with a single modulus `p` carries only the points `k/p`, so
/// "largest" is measured by the number of distinct moduli, then by `R`.
#[test]
fn largest_box_is_well_distributed() {
    let x = 1e7;
    let ctx = ScaleContext::new(x).unwrap();
    let g = Gamma::new(0.45).unwrap();
    let table = sieve_primes(5_000_000).unwrap();
    let grid = dyadic_boxes(&ctx, &g);
    let moduli = |b: &bcp_core::DyadicBox| {
        let (lo, hi) = b.p_int_range();
        table.range(lo, hi).len()
    };
    let sweep: Vec<_> = grid.boxes.iter().map(|b| box_counts(b, &ctx, &g, &table).unwrap()).collect();
    let largest = sweep.iter().filter(|c| c.r_count > 0).max_by_key(|c| (moduli(&c.dyadic_box), c.r_count)).unwrap();
    let report = box_discrepancy(&largest.dyadic_box, &ctx, &table, None).unwrap().unwrap();
    println!(
        "P={} Q={} moduli={} r={} D={}",
        largest.dyadic_box.p_lo,
        largest.dyadic_box.q_lo,
        moduli(&largest.dyadic_box),
        largest.r_count,
        report.d_star
    );
    assert!(report.d_star <= 0.05, "D = {}", report.d_star);
}

#[test]
fn class_labels_follow_p() {
    let ctx = ScaleContext::new(1e6).unwrap();
    let g = Gamma::new(0.45).unwrap();
    let grid = dyadic_boxes_with(&ctx, &g, 1.0);
    let mut seen_large = false;
    for b in &grid.boxes {
        if b.range_class == RangeClass::Large {
            assert!(b.p_lo > (2e6f64).powf(0.4));
            seen_large = true;
        }
    }
    assert!(seen_large);
}
