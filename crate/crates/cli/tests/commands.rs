use std::fs;

use bcp_cli::cache::{self, cache_path, decode, encode};
use bcp_cli::output::{read_csv, read_json};
use bcp_core::arith::sieve_primes;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = bcp_cli::run(std::iter::once("bcp").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn theta_reports_both_routes() {
    let (code, out, _) = run(&["theta", "--p", "3", "--q", "5"]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header[5], "theta_carlitz");
    assert_eq!(rows, vec![vec!["3", "5", "15", "2", "2", "7", "7", "true"]]);
}

#[test]
fn theta_beyond_oracle_has_no_direct_value() {
    let (code, out, _) = run(&["theta", "--p", "101", "--q", "1009", "--format", "json"]);
    assert_eq!(code, 0);
    let obj = &read_json(&out).unwrap()[0];
    assert!(obj["theta_direct"].is_null() && obj["agree"].is_null());
    assert!(obj["theta_carlitz"].as_u64().unwrap() % 2 == 1);
}

#[test]
fn analytic_values() {
    let (code, out, _) = run(&["analytic", "--gamma", "0.45", "--format", "json"]);
    assert_eq!(code, 0);
    let obj = &read_json(&out).unwrap()[0];
    assert!((obj["c_gamma"].as_f64().unwrap() - 3.0994095).abs() < 1e-7);
    assert_eq!(obj["h_exponent"].as_f64().unwrap(), 0.5);
    assert!((obj["gamma_zero"].as_f64().unwrap() - 0.45).abs() < 1e-12);
    assert!((obj["kappa_zero"].as_f64().unwrap() - 0.2324088).abs() < 1e-7);
    // x = 10⁶ lies below the discriminant threshold 2^20
    assert!(obj["rho"].is_null());
}

#[test]
fn hcount_json_record() {
    let (code, out, _) = run(&["hcount", "--x", "35", "--gamma", "0.25", "--format", "json"]);
    assert_eq!(code, 0);
    let objs = read_json(&out).unwrap();
    assert_eq!(objs.len(), 1);
    assert_eq!(objs[0]["h_exact"], 5);
    assert_eq!(objs[0]["pairs_scanned"], 10);
    assert_eq!(objs[0]["elapsed"], 0);
    assert_eq!(objs[0].len(), 7);
}

#[test]
fn hcount_table_is_ascending() {
    let (code, out, _) = run(&["hcount", "--table", "100,1000,1e4", "--gamma", "0.3"]);
    assert_eq!(code, 0);
    let (_, rows) = read_csv(&out).unwrap();
    let xs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(xs, vec![100.0, 1000.0, 10_000.0]);
    let (code, _, err) = run(&["hcount", "--table", "1e4,100"]);
    assert_eq!(code, 2);
    assert!(err.contains("ascending"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analytic", "--gamma", "0.7"][..],
        &["analytic", "--gamma", "0.4995"],
        &["hcount", "--x", "1e11"],
        &["theta", "--p", "4", "--q", "5"],
        &["theta", "--p", "5", "--q", "3"],
        &["frobnicate"],
        &["analytic", "--no-such-flag"],
        &["analytic", "--workers", "0"],
        &["analytic", "--x", "1"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (_, _, err) = run(&["analytic", "--gamma", "0.7"]);
    assert!(err.contains("0.7"));
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("hcount"));
}

#[test]
fn boxes_warn_when_thresholds_collapse() {
    let (code, out, err) = run(&["boxes", "--x", "1e4"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning: small-P threshold"));
    let (header, rows) = read_csv(&out).unwrap();
    assert!(header.contains(&"rel_dev".to_string()) && header.contains(&"rho_mode".to_string()));
    assert!(!rows.is_empty());
    let (code, _, err) = run(&["boxes", "--x", "1e4", "--small-log-power", "0"]);
    assert_eq!(code, 0);
    assert!(!err.contains("small-P"));
}

#[test]
fn discrepancy_rows_obey_erdos_turan() {
    let (code, out, _) = run(&["discrepancy", "--x", "1e5", "--format", "json"]);
    assert_eq!(code, 0);
    for obj in read_json(&out).unwrap() {
        assert!(obj["d_star"].as_f64().unwrap() <= obj["et_bound"].as_f64().unwrap());
    }
    let (code, _, _) = run(&["discrepancy", "--x", "1e4", "--a", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn expsum_reports_each_lemma() {
    let (code, out, _) = run(&["expsum", "--format", "json"]);
    assert_eq!(code, 0);
    let lemmas: Vec<String> =
        read_json(&out).unwrap().iter().map(|o| o["lemma"].as_str().unwrap().to_string()).collect();
    assert_eq!(lemmas, ["weil", "korolev_changa", "irving", "dfi_average"]);
    let (code, out, _) = run(&["expsum", "--lemma", "weil", "--p", "101"]);
    assert_eq!(code, 0);
    let (_, rows) = read_csv(&out).unwrap();
    assert!(rows[0][10].parse::<f64>().unwrap() <= 1.0);
    let (code, _, _) = run(&["expsum", "--lemma", "korolev-changa", "--p", "1009", "--y", "10", "--z", "20"]);
    assert_eq!(code, 2);
}

#[test]
fn primes_summary_and_list() {
    let (code, out, _) = run(&["primes", "--limit", "100"]);
    assert_eq!(code, 0);
    assert_eq!(out, "limit,count,largest\n100,25,97\n");
    let (_, out, _) = run(&["primes", "--limit", "10", "--list", "--format", "json"]);
    assert_eq!(read_json(&out).unwrap().len(), 4);
}

#[test]
fn cache_flag_wins_over_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    std::env::set_var("BCP_CACHE_DIR", env_dir.path());
    let (code, _, _) = run(&["primes", "--limit", "1000"]);
    assert_eq!(code, 0);
    assert!(cache_path(env_dir.path(), 1000).exists());
    let flag = flag_dir.path().to_str().unwrap();
    let (code, _, _) = run(&["primes", "--limit", "2000", "--cache-dir", flag]);
    assert_eq!(code, 0);
    assert!(cache_path(flag_dir.path(), 2000).exists());
    assert!(!cache_path(env_dir.path(), 2000).exists());
    std::env::remove_var("BCP_CACHE_DIR");
}

#[test]
fn cache_round_trip_and_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let table = cache::load_or_build(Some(dir.path()), 10_000).unwrap();
    let path = cache_path(dir.path(), 10_000);
    assert_eq!(cache::read_table(&path).unwrap(), table);
    assert_eq!(cache::load_or_build(Some(dir.path()), 10_000).unwrap(), table);
    assert_eq!(table, sieve_primes(10_000).unwrap());
}

#[test]
fn cache_layout_is_exact() {
    let bytes = encode(&sieve_primes(10).unwrap());
    assert_eq!(bytes.len(), 56);
    assert_eq!(&bytes[..4], b"BCPC");
    assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
    assert_eq!(&bytes[8..16], &10u64.to_le_bytes());
    assert_eq!(&bytes[16..24], &4u64.to_le_bytes());
    assert_eq!(&bytes[48..56], &7u64.to_le_bytes());
}

#[test]
fn corrupt_cache_names_the_field() {
    let path = std::path::Path::new("primes-100.bcpc");
    let good = encode(&sieve_primes(100).unwrap());
    let field = |bytes: &[u8]| match decode(bytes, path) {
        Err(bcp_cli::error::CliError::Cache { field, .. }) => field,
        other => panic!("expected a cache error, got {other:?}"),
    };
    let mut bad = good.clone();
    bad[0] = b'X';
    assert_eq!(field(&bad), "magic");
    let mut bad = good.clone();
    bad[4] = 2;
    assert_eq!(field(&bad), "version");
    assert_eq!(field(&good[..good.len() - 8]), "count mismatch");
    assert_eq!(field(&good[..good.len() - 3]), "count mismatch");
    let mut bad = good.clone();
    bad[24..32].copy_from_slice(&5u64.to_le_bytes());
    assert_eq!(field(&bad), "order");
    let mut bad = good.clone();
    bad[8..16].copy_from_slice(&50u64.to_le_bytes());
    assert_eq!(field(&bad), "limit");
}

#[test]
fn corrupt_cache_is_not_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_path(dir.path(), 500);
    let mut bytes = encode(&sieve_primes(500).unwrap());
    bytes.truncate(40);
    fs::write(&path, &bytes).unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, err) = run(&["primes", "--limit", "500", "--cache-dir", d]);
    assert_eq!(code, 1);
    assert!(err.contains("count mismatch"), "{err}");
    assert_eq!(fs::read(&path).unwrap(), bytes);
}

#[test]
fn verify_exit_code_matches_rows() {
    let (code, out, err) = run(&["verify", "--format", "json"]);
    let rows = read_json(&out).unwrap();
    assert!(!rows.is_empty());
    let last = rows.last().unwrap();
    if rows.iter().all(|r| r["passed"] == true) {
        assert_eq!(code, 0);
        assert_eq!(rows.len(), bcp_cli::criteria::all().len());
    } else {
        assert_eq!(code, 1);
        // stops at the first failure, which is the last row
        assert_eq!(last["passed"], false);
        assert!(err.contains(&format!("{}/{}", last["module"].as_str().unwrap(), last["name"].as_str().unwrap())));
    }
}
