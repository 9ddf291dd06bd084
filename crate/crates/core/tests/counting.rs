use bcp_core::counting::{h_gamma_count, h_gamma_count_oracle, theta_within};
use bcp_core::cyclotomic::theta_direct;
use bcp_core::{arith, with_workers, Gamma, ScaleContext};

fn h(x: f64, g: &Gamma) -> u64 {
    h_gamma_count(&ScaleContext::new(x).unwrap(), g).unwrap().h_exact
}

/// Every semiprime `pq ≤ 2·10⁴` with its polynomial `θ`, ascending in `pq`.
fn oracle_table() -> Vec<(u64, u64)> {
    let table = arith::sieve_primes(10_000).unwrap();
    let ps = table.primes();
    let mut out = Vec::new();
    for (k, &p) in ps.iter().enumerate() {
        for &q in ps[k + 1..].iter().take_while(|&&q| p * q <= 20_000) {
            out.push((p * q, theta_direct(p * q).unwrap()));
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn agrees_with_polynomial_count_exhaustively() {
    let oracle = oracle_table();
    for gamma in [0.1, 0.25, 0.4, 0.45, 0.49] {
        let g = Gamma::new(gamma).unwrap();
        // a sample of semiprime endpoints, plus the right end
        let mut running = 0;
        for (k, &(m, theta)) in oracle.iter().enumerate() {
            running += theta_within(theta, m, &g) as u64;
            if k % 97 == 0 || k + 1 == oracle.len() {
                assert_eq!(h(m as f64, &g), running, "x = {m}, γ = {gamma}");
            }
        }
        assert_eq!(h(20_000.0, &g), running);
    }
}

#[test]
fn oracle_route_matches_at_2e4() {
    for gamma in [0.25, 0.45] {
        let g = Gamma::new(gamma).unwrap();
        assert_eq!(h_gamma_count_oracle(20_000, &g).unwrap(), h(20_000.0, &g));
    }
}

#[test]
fn monotone_in_gamma_and_x() {
    let gammas = [0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.47, 0.49];
    let xs = [100.0, 1e3, 1e4, 1e5, 1e6];
    for &x in &xs {
        let counts: Vec<u64> = gammas.iter().map(|&v| h(x, &Gamma::new(v).unwrap())).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "x = {x}: {counts:?}");
    }
    for &v in &gammas {
        let g = Gamma::new(v).unwrap();
        let counts: Vec<u64> = xs.iter().map(|&x| h(x, &g)).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "γ = {v}: {counts:?}");
    }
}

#[test]
fn same_count_for_any_worker_count() {
    let g = Gamma::new(0.47).unwrap();
    let ctx = ScaleContext::new(3e6).unwrap();
    let runs: Vec<(u64, u64)> = [1, 2, 8]
        .iter()
        .map(|&w| with_workers(w, || h_gamma_count(&ctx, &g).map(|r| (r.h_exact, r.pairs_scanned)).unwrap()))
        .collect();
    assert!(runs.iter().all(|r| *r == runs[0]), "{runs:?}");
}

#[test]
fn records_are_consistent() {
    let g = Gamma::new(0.45).unwrap();
    let rec = h_gamma_count(&ScaleContext::new(1e6).unwrap(), &g).unwrap();
    assert!(rec.h_exact <= rec.pairs_scanned);
    assert!(rec.ratio > 0.0 && rec.ratio.is_finite());
    assert!((rec.ratio - rec.h_exact as f64 / rec.h_predicted).abs() < 1e-15);
    // π₂(10⁶), the number of semiprimes pq ≤ 10⁶ with p < q
    assert_eq!(rec.pairs_scanned, 209_867);
}

#[test]
fn guard_rejects_large_x() {
    assert!(h_gamma_count(&ScaleContext::new(2e10).unwrap(), &Gamma::new(0.3).unwrap()).is_err());
}
