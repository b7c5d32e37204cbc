import numpy as np
import pytest

from srgeo.elliptic import Modulus
from srgeo.expmap import exp, exp_quat
from srgeo.pendulum import Region, SRParams
from srgeo.periodic import (
    G1,
    G2,
    PeriodicSpec,
    dG1_dk,
    dG2_dk,
    elliptic_data_for,
    enumerate_periodic,
    solve_periodic,
    verify_closure,
)


class TestClosureFunctions:
    @pytest.mark.parametrize("a", [0.1, 0.35, 0.5, 0.77, 0.93])
    def test_values_at_zero_modulus(self, a):
        z = Modulus.from_k(0.0)
        assert G1(a, z) == pytest.approx(np.pi / (2 * a), abs=1e-12)
        assert G2(a, z) == pytest.approx(np.pi / 2, abs=1e-12)

    def test_monotone_spot(self):
        assert G1(0.6, Modulus.from_k(0.7)) > G1(0.6, Modulus.from_k(0.3))
        assert G2(0.6, Modulus.from_k(0.7)) > G2(0.6, Modulus.from_k(0.3))

    def test_monotone_grid(self):
        ks = np.linspace(0.0, 0.97, 100)
        for a in (0.3, 0.6, 0.9):
            g1 = [G1(a, Modulus.from_k(k)) for k in ks]
            g2 = [G2(a, Modulus.from_k(k)) for k in ks]
            assert np.all(np.diff(g1) > 0)
            assert np.all(np.diff(g2) > 0)

    def test_derivatives_match_finite_differences(self):
        h = 1e-6
        for a in (0.25, 0.6, 0.85):
            for k in np.linspace(0.05, 0.95, 10):
                fd1 = (G1(a, Modulus.from_k(k + h)) - G1(a, Modulus.from_k(k - h))) / (2 * h)
                fd2 = (G2(a, Modulus.from_k(k + h)) - G2(a, Modulus.from_k(k - h))) / (2 * h)
                assert dG1_dk(a, Modulus.from_k(k)) == pytest.approx(fd1, rel=1e-6)
                assert dG2_dk(a, Modulus.from_k(k)) == pytest.approx(fd2, rel=1e-6)


class TestSolve:
    def test_inadmissible_fraction_c1(self):
        # n/m = 1 < 1/0.8
        assert solve_periodic(PeriodicSpec(1, 1, Region.C1), 0.8) is None

    def test_admissible_fraction_c1(self):
        pg = solve_periodic(PeriodicSpec(2, 1, Region.C1), 0.8)
        assert pg is not None
        assert G1(0.8, pg.k) == pytest.approx(np.pi, abs=1e-12)

    def test_boundary_target_not_attained(self):
        # n/m exactly 1/a: the infimum of G1 is pi/(2a), not attained for k > 0
        assert solve_periodic(PeriodicSpec(2, 1, Region.C1), 0.5) is None

    def test_reducible_fraction_rejected(self):
        with pytest.raises(ValueError):
            PeriodicSpec(4, 2, Region.C1)

    def test_uniqueness_between_targets(self):
        a = 0.6
        pg1 = solve_periodic(PeriodicSpec(2, 1, Region.C2), a)
        pg2 = solve_periodic(PeriodicSpec(3, 1, Region.C2), a)
        assert abs(pg1.k.k - pg2.k.k) > 1e-6


class TestClosure:
    @pytest.mark.parametrize("region,n,m", [
        (Region.C1, 2, 1), (Region.C1, 3, 2), (Region.C2, 2, 1),
        (Region.C2, 3, 1), (Region.C2, 3, 2),
    ])
    def test_rotation_closes(self, region, n, m):
        a = 0.75 if region is Region.C1 else 0.55
        pg = solve_periodic(PeriodicSpec(n, m, region), a)
        if pg is None:
            pytest.skip("fraction inadmissible at this a")
        params = SRParams(a)
        err, sign = verify_closure(pg, elliptic_data_for(pg), params)
        assert err <= 1e-8

    def test_mismatched_chart_rejected(self):
        a = 0.6
        params = SRParams(a)
        pg = solve_periodic(PeriodicSpec(2, 1, Region.C2), a)
        wrong = elliptic_data_for(solve_periodic(PeriodicSpec(3, 2, Region.C2), a))
        with pytest.raises(ValueError):
            verify_closure(pg, wrong, params)

    def test_closure_phase_independent(self, rng):
        a = 0.6
        params = SRParams(a)
        pg = solve_periodic(PeriodicSpec(2, 1, Region.C2), a)
        for theta0 in rng.uniform(0.0, 10.0, size=4):
            err, sign = verify_closure(pg, elliptic_data_for(pg, theta0=float(theta0)), params)
            assert err <= 1e-8
            assert sign == -1

    def test_lift_parity_c1(self):
        # oscillating momentum: lift endpoint (-1)^n
        a = 0.9
        params = SRParams(a)
        for n, m in [(2, 1), (3, 2), (3, 1), (5, 4)]:
            pg = solve_periodic(PeriodicSpec(n, m, Region.C1), a)
            if pg is None:
                continue
            _, sign = verify_closure(pg, elliptic_data_for(pg), params)
            assert sign == (-1) ** n
            assert pg.contractible == (n % 2 == 0)

    def test_lift_parity_c2(self):
        # rotating momentum: the azimuth winds m extra turns, so (-1)^(n+m)
        a = 0.6
        params = SRParams(a)
        for n, m in [(2, 1), (3, 1), (3, 2), (5, 4), (4, 3)]:
            pg = solve_periodic(PeriodicSpec(n, m, Region.C2), a)
            if pg is None:
                continue
            _, sign = verify_closure(pg, elliptic_data_for(pg), params)
            assert sign == (-1) ** (n + m)
            assert pg.contractible == ((n + m) % 2 == 0)


class TestRestPointRotations:
    def test_c4_closes_at_two_pi(self):
        params = SRParams(0.5)
        p0 = np.array([1.0, 0.0, 0.0])
        s = exp(p0, params, 2 * np.pi)
        assert np.max(np.abs(s.R - np.eye(3))) <= 1e-10
        q = exp_quat(p0, params, 2 * np.pi)
        assert q[0] == pytest.approx(-1.0, abs=1e-10)  # not contractible

    def test_c5_closes_at_scaled_two_pi(self):
        a = 0.5
        params = SRParams(a)
        p0 = np.array([0.0, 1.0, 0.0])
        T = 2 * np.pi / np.sqrt(1 - a * a)
        s = exp(p0, params, T)
        assert np.max(np.abs(s.R - np.eye(3))) <= 1e-10
        q = exp_quat(p0, params, T)
        assert q[0] == pytest.approx(-1.0, abs=1e-10)


class TestEnumerate:
    def test_small_bounds_empty(self):
        # 1/1 fails both region conditions at a = 0.5
        assert enumerate_periodic(0.5, 1, 1) == []

    def test_c1_admits_three_over_one(self):
        rows = enumerate_periodic(0.5, 3, 1)
        assert any(pg.spec.region is Region.C1 and pg.spec.n == 3 for pg in rows)

    def test_count_monotone_in_bounds(self):
        a = 0.5
        assert len(enumerate_periodic(a, 4, 2)) >= len(enumerate_periodic(a, 3, 2))

    def test_sorted_by_total_time(self):
        rows = enumerate_periodic(0.45, 5, 3)
        times = [pg.total_time for pg in rows]
        assert times == sorted(times)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            enumerate_periodic(0.5, 0, 1)
