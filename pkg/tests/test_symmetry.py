import numpy as np
import pytest

from srgeo.elliptic import Modulus, complete_K
from srgeo.expmap import exp, exp_from_elliptic, exp_quat, quat_lift
from srgeo.pendulum import EllipticData, Region, SRParams, covector_at, to_elliptic
from srgeo.so3 import quat_conj, quat_mul, quat_to_rotation
from srgeo.symmetry import (
    SYMMETRY_IDS,
    TauXi,
    eps_image,
    eps_preimage,
    first_maxwell_time,
    is_fixed_preimage,
    maxwell_condition,
    tau_xi,
)
from oracles import random_covector


class TestPreimageMaps:
    def test_eps4_signs(self):
        params = SRParams(0.5)
        p0 = np.array([0.6, -0.8, 0.3])
        out = eps_preimage(4, 1.0, p0, params)
        assert np.allclose(out, [-0.6, 0.8, 0.3], atol=1e-15)

    def test_eps3_is_involution_on_covectors(self, rng):
        params = SRParams(0.5)
        p0 = random_covector(rng)
        out = eps_preimage(3, 2.0, eps_preimage(3, 2.0, p0, params), params)
        assert np.allclose(out, p0, atol=1e-15)

    def test_eps6_at_time_zero(self, rng):
        params = SRParams(0.5)
        p0 = random_covector(rng)
        assert np.allclose(eps_preimage(6, 0.0, p0, params), -p0, atol=1e-11)

    def test_level_set_preserved(self, rng):
        for _ in range(10):
            params = SRParams(rng.uniform(0.2, 0.9))
            p0 = random_covector(rng)
            t = rng.uniform(0.0, 6.0)
            for i in SYMMETRY_IDS:
                q = eps_preimage(i, t, p0, params)
                assert abs(q[0] ** 2 + q[1] ** 2 - 1.0) <= 1e-12


class TestImageMaps:
    def test_eps6_fixes_identity(self):
        assert np.array_equal(eps_image(6, np.eye(3)), np.eye(3))

    def test_eps3_commutes_with_e2_rotations(self):
        from scipy.linalg import expm
        from srgeo.so3 import A2
        R = expm(0.7 * A2)
        assert np.max(np.abs(eps_image(3, R) - R)) <= 1e-14

    def test_involutions(self, rng):
        R = exp(random_covector(rng), SRParams(0.6), 2.0).R
        for i in SYMMETRY_IDS:
            assert np.max(np.abs(eps_image(i, eps_image(i, R)) - R)) <= 1e-12

    def test_commuting_square_all_symmetries(self, rng):
        for _ in range(50):
            params = SRParams(rng.uniform(0.15, 0.9))
            p0 = random_covector(rng)
            t = rng.uniform(0.2, 7.0)
            R = exp(p0, params, t).R
            for i in SYMMETRY_IDS:
                lhs = eps_image(i, R)
                rhs = exp(eps_preimage(i, t, p0, params), params, t).R
                assert np.max(np.abs(lhs - rhs)) <= 1e-9

    def test_commuting_square_extreme_metric_invariants(self, rng):
        # near the bi-invariant and near the rank-degenerate ends
        for a in (0.02, 0.05, 0.95, 0.98):
            params = SRParams(a)
            for _ in range(5):
                p0 = random_covector(rng)
                t = rng.uniform(5.0, 20.0)
                R = exp(p0, params, t).R
                for i in SYMMETRY_IDS:
                    gap = np.max(np.abs(eps_image(i, R) - exp(eps_preimage(i, t, p0, params), params, t).R))
                    assert gap <= 1e-9


class TestTauXi:
    def test_definition(self):
        params = SRParams(0.6)
        ed = EllipticData(Region.C1, Modulus.from_k(0.5), 0.7)
        tx = tau_xi(ed, params, 2.0)
        assert tx == TauXi(tau=0.6 * (1.0 + 0.7), xi=0.6)
        assert tx.tau + tx.xi == pytest.approx(0.6 * (2.0 + 0.7))
        assert tx.tau - tx.xi == pytest.approx(0.6 * 0.7)


def _c1_chart(a, k, theta0):
    return EllipticData(Region.C1, Modulus.from_k(k), theta0)


def _c2_chart(a, k, theta0):
    return EllipticData(Region.C2, Modulus.from_k(k), theta0)


class TestFixedPoints:
    def test_eps4_never_fixed(self):
        params = SRParams(0.6)
        ed = _c1_chart(0.6, 0.5, 0.3)
        for t in (0.5, 2.0, 9.0):
            assert not is_fixed_preimage(4, ed, params, t)

    def test_eps1_fixed_at_symmetric_phase(self):
        # theta0 = -t/2 gives tau = 0, sn 0 = 0
        params = SRParams(0.6)
        t = 2.0
        ed = _c1_chart(0.6, 0.5, -t / 2)
        assert is_fixed_preimage(1, ed, params, t)

    def test_eps2_impossible_in_c2(self):
        params = SRParams(0.6)
        ed = _c2_chart(0.6, 0.7, 0.4)
        K = complete_K(ed.k)
        for t in np.linspace(0.1, 4 * 0.7 * K / 0.6, 37):
            assert not is_fixed_preimage(2, ed, params, t)

    def test_rest_points_rejected(self):
        params = SRParams(0.6)
        ed = EllipticData(Region.C4, None, 0.0)
        with pytest.raises(ValueError):
            is_fixed_preimage(1, ed, params, 1.0)

    def test_engineered_fixed_points_map_to_self(self):
        a = 0.6
        params = SRParams(a)
        mod = Modulus.from_k(0.55)
        K = complete_K(mod)
        t = 3.0
        cases = [
            (1, _c1_chart(a, 0.55, (2 * K - a * t / 2) / a)),        # sn tau = 0
            (2, _c1_chart(a, 0.55, (K - a * t / 2) / a)),            # cn tau = 0, C1
            (5, EllipticData(Region.C2, mod, (K * mod.k - a * t / 2) / a)),  # cn(tau/k) = 0
        ]
        for i, ed in cases:
            assert is_fixed_preimage(i, ed, params, t)
            p0 = covector_at(ed, params, 0.0)
            assert np.max(np.abs(eps_preimage(i, t, p0, params) - p0)) <= 1e-12
            # fixed geodesics map to themselves in the image too
            R = exp_from_elliptic(ed, params, t).R
            assert np.max(np.abs(eps_image(i, R) - R)) <= 1e-9

    def test_eps1_fixed_in_c2_uses_scaled_phase(self):
        # the rotating-region chart carries the elliptic argument a*theta/k,
        # so the fixed-point phase is tau/k
        a = 0.6
        params = SRParams(a)
        mod = Modulus.from_k(0.7)
        K = complete_K(mod)
        t = 2.4
        theta0 = (2 * K * mod.k - a * t / 2) / a  # sn(tau/k) = sn(2K) = 0
        ed = EllipticData(Region.C2, mod, theta0)
        assert is_fixed_preimage(1, ed, params, t)
        p0 = covector_at(ed, params, 0.0)
        assert np.max(np.abs(eps_preimage(1, t, p0, params) - p0)) <= 1e-12

    def test_impossible_cases_by_dense_scan(self, rng):
        # eps3/eps4/eps6/eps7 never fixed; eps5 impossible in C1; eps2 in C2
        params = SRParams(0.55)
        charts = [_c1_chart(0.55, 0.6, 0.7), _c2_chart(0.55, 0.6, 0.2),
                  EllipticData(Region.C3, None, 0.3, s1=1, s2=1)]
        for ed in charts:
            p0 = covector_at(ed, params, 0.0)
            for t in np.linspace(0.05, 12.0, 120):
                for i in (3, 4, 6, 7):
                    assert np.max(np.abs(eps_preimage(i, t, p0, params) - p0)) > 1e-6
                if ed.region is Region.C1:
                    assert not is_fixed_preimage(5, ed, params, t)
                if ed.region is Region.C2:
                    assert not is_fixed_preimage(2, ed, params, t)


class TestMaxwellConditions:
    def test_origin_has_no_hits(self):
        params = SRParams(0.5)
        p0 = np.array([0.8, -0.6, 0.4])
        ed = to_elliptic(p0, params)
        s = exp_from_elliptic(ed, params, 0.0)
        assert maxwell_condition(s, ed, params) == []

    def test_c4_half_turn_components(self):
        # q(pi) = j: conditions 1, 2, 4 see zeros, but only condition 1 has a
        # distinct partner (eps1/eps2 fix the constant momentum)
        params = SRParams(0.5)
        p0 = np.array([1.0, 0.0, 0.0])
        ed = to_elliptic(p0, params)
        s = exp_from_elliptic(ed, params, np.pi)
        assert np.allclose(s.q, [0, 0, 1, 0], atol=1e-12)
        hits = {h.condition: h for h in maxwell_condition(s, ed, params)}
        assert set(hits) == {1, 2, 4}
        assert hits[1].proviso_ok
        assert not hits[2].proviso_ok
        assert not hits[4].proviso_ok

    def test_c3_hits_flagged_unspecified(self):
        params = SRParams(0.6)
        ed = EllipticData(Region.C3, None, 0.1, s1=1, s2=1)
        # scan for a q2 or q3 zero and confirm the flag
        ts = np.linspace(0.05, 12.0, 2000)
        qs = np.asarray(quat_lift(ed, params, ts))
        for comp, cond in ((2, 3), (3, 4)):
            idx = np.nonzero(qs[:-1, comp] * qs[1:, comp] < 0)[0]
            if idx.size == 0:
                continue
            from srgeo.rootfind import bisect_root
            root = bisect_root(lambda s: float(np.asarray(quat_lift(ed, params, s))[comp]),
                               float(ts[idx[0]]), float(ts[idx[0] + 1]))
            s = exp_from_elliptic(ed, params, root)
            hits = {h.condition: h for h in maxwell_condition(s, ed, params)}
            assert cond in hits
            assert hits[cond].proviso_unspecified

    def test_symmetric_pair_reaches_same_endpoint(self, rng):
        # condition 1 at its first root: the reversed geodesic is distinct but
        # lands on the same endpoint
        params = SRParams(0.65)
        p0 = random_covector(rng)
        res = first_maxwell_time(p0, params, 15.0)
        assert res is not None
        t_star, cond = res
        sym = {1: 6, 2: 1, 3: 5, 4: 2}[cond]
        partner = eps_preimage(sym, t_star, p0, params)
        assert np.max(np.abs(exp(p0, params, t_star).R - exp(partner, params, t_star).R)) <= 1e-8
        assert np.max(np.abs(partner - p0)) > 1e-6


class TestFirstMaxwellTime:
    def test_c4_first_zero(self):
        params = SRParams(0.5)
        res = first_maxwell_time(np.array([1.0, 0.0, 0.0]), params, 8.0)
        assert res is not None
        t, cond = res
        assert cond == 1
        assert t == pytest.approx(np.pi, abs=1e-9)

    def test_c5_first_zero(self):
        a = 0.5
        params = SRParams(a)
        res = first_maxwell_time(np.array([0.0, 1.0, 0.0]), params, 8.0)
        t, cond = res
        assert cond == 1
        assert t == pytest.approx(np.pi / np.sqrt(1 - a * a), abs=1e-9)

    def test_matches_dense_grid_oracle(self, rng):
        # brute-force: scan all components at step 1e-4, refine each crossing,
        # keep the earliest one that is not a self-symmetric intersection
        from srgeo.rootfind import bisect_root
        params = SRParams(0.7)
        ed0 = EllipticData(Region.C1, Modulus.from_k(0.45), 1.3)
        p0 = covector_at(ed0, params, 0.0)
        res = first_maxwell_time(p0, params, 10.0)
        assert res is not None
        t_star, cond = res
        ed = to_elliptic(p0, params)
        ts = np.arange(0.0, 10.0, 1e-4)
        qs = np.asarray(quat_lift(ed, params, ts))
        brute = None
        for comp, c in ((0, 1), (1, 2), (2, 3), (3, 4)):
            sym = {1: 6, 2: 1, 3: 5, 4: 2}[c]
            for j in np.nonzero(qs[:-1, comp] * qs[1:, comp] < 0)[0]:
                root = bisect_root(lambda s: float(np.asarray(quat_lift(ed, params, s))[comp]),
                                   float(ts[j]), float(ts[j + 1]), xtol=1e-11)
                if is_fixed_preimage(sym, ed, params, root, tol=1e-8):
                    continue
                if brute is None or root < brute:
                    brute = root
                break
        assert brute is not None
        assert abs(t_star - brute) <= 1e-3

    def test_skips_self_symmetric_crossing_in_c2(self):
        # a q2 zero at the eps5-fixed phase cn(tau/k) = 0 is not a Maxwell
        # point; the scan must pass over it and return a genuine one
        a = 0.6
        params = SRParams(a)
        mod = Modulus.from_k(0.55)
        K = complete_K(mod)
        t_fixed = 3.0
        ed = EllipticData(Region.C2, mod, (K * mod.k - a * t_fixed / 2) / a)
        p0 = covector_at(ed, params, 0.0)
        s = exp_from_elliptic(ed, params, t_fixed)
        assert abs(s.q[2]) <= 1e-10  # the crossing exists
        res = first_maxwell_time(p0, params, 20.0)
        assert res is not None
        t_star, cond = res
        assert not (cond == 3 and abs(t_star - t_fixed) < 1e-6)
        partner = eps_preimage({1: 6, 2: 1, 3: 5, 4: 2}[cond], t_star, p0, params)
        assert np.max(np.abs(partner - p0)) > 1e-6

    def test_none_below_first_zero(self):
        params = SRParams(0.5)
        assert first_maxwell_time(np.array([1.0, 0.0, 0.0]), params, 1.0) is None

    def test_rejects_nonpositive_horizon(self):
        with pytest.raises(ValueError):
            first_maxwell_time(np.array([1.0, 0.0, 0.0]), SRParams(0.5), 0.0)


class TestChordReflection:
    def test_time_reversal_reflects_through_chord_midpoint(self, rng):
        # The reversed geodesic traced on the sphere R_s e1 is, after the
        # stated axial rotation, the point reflection through the midpoint of
        # the great-circle chord joining e1 and R_t e1.
        params = SRParams(0.62)
        p0 = random_covector(rng)
        t = 2.3
        qt = exp_quat(p0, params, t)
        Rt = quat_to_rotation(qt)
        e1 = np.array([1.0, 0.0, 0.0])
        assert np.linalg.norm(Rt @ e1 - e1) > 1e-3  # chord nondegenerate

        # xzx Euler angles of R_t: R = Rx(a3) Rz(a2) Rx(a1)
        a3 = np.arctan2(Rt[2, 0], Rt[1, 0])
        a1 = np.arctan2(Rt[0, 2], -Rt[0, 1])

        iq = np.array([0.0, 1.0, 0.0, 0.0])

        def conj(q, v):
            return quat_mul(quat_mul(q, v), quat_conj(q))

        axial = np.concatenate([[np.cos((a3 + a1 - np.pi) / 2)],
                                np.sin((a3 + a1 - np.pi) / 2) * e1])
        chord = e1 + Rt @ e1
        for s in np.linspace(0.2, t - 0.2, 7):
            qs = exp_quat(p0, params, t - s)
            traced = conj(qs, iq)[1:]  # R_{t-s} e1
            # half-turn about the chord midpoint direction
            reflected = 2.0 * np.dot(chord, traced) / np.dot(chord, chord) * chord - traced
            claimed = conj(axial, conj(quat_conj(qt), np.concatenate([[0.0], traced])))[1:]
            assert np.max(np.abs(claimed - reflected)) <= 1e-9
