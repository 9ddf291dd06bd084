"""Smoke test for the compiled `bcp` extension module."""

import math

import bcp


def main():
    assert bcp.theta_carlitz(3, 5).theta == 7
    assert bcp.theta_direct(15) == 7
    assert bcp.cyclotomic_coeffs(15) == [1, -1, 0, 1, -1, 1, 0, -1, 1]
    assert bcp.cyclotomic_coeffs(105)[7] == -2
    assert bcp.mod_inverse(3, 7) == 5

    g = bcp.Gamma.from_ratio(9, 20)
    assert g.exact == (9, 20)
    assert abs(bcp.c_gamma(g) - 3.0994094517541479) < 1e-12
    assert abs(bcp.gamma_zero() - 0.45) < 1e-12
    assert bcp.h_exponent(0.45) == 0.5
    try:
        bcp.rho(1e6, 0.45)
    except ValueError:
        pass
    else:
        raise AssertionError("rho(1e6, 0.45) should be out of domain")
    assert abs(bcp.rho(1e8, 0.45) - 0.27428688016395641) < 1e-12

    rec = bcp.h_gamma_count(35, 0.25)
    assert (rec.h_exact, rec.pairs_scanned) == (5, 10)
    assert bcp.h_gamma_count(35, 0.49).h_exact == 10
    table = bcp.convergence_table([1e3, 1e4], 0.47)
    assert [r.x for r in table] == [1e3, 1e4]

    primes = bcp.PrimeTable(100)
    assert len(primes) == 25 and primes.pi(10) == 4 and primes.is_prime(97)

    k = bcp.complete_kloosterman(101, 3, 17)
    assert abs(k.imag) < 1e-9 and abs(k) <= 2 * math.sqrt(101)
    assert bcp.star_discrepancy([0.0, 0.25, 0.5, 0.75]) == 0.25

    boxes = bcp.box_sweep(1e4, 0.45)
    assert sum(b.r_count for b in boxes) > 0
    assert all(b.r_gamma_count <= b.r_count for b in boxes)

    report = bcp.kc_bound_report(1009, 5000.0, 9000.0)
    assert report.lemma == "korolev_changa" and math.isfinite(report.ratio)

    print("bcp smoke test passed")


if __name__ == "__main__":
    main()
