"""Almost-Riemannian geodesics on S^2 by projection from SO(3).

The two-sphere carries the rank-varying frame X1(g) = g x e2,
X2(g) = sqrt(1-a^2) g x e1, degenerate on the singular set (equator z = 0).
Its geodesics are projections gamma_t = R_t^-1 gamma_0 of the SO(3) geodesics
whose momentum satisfies the transversality condition

    <p_vec(0), gamma_0> = p2 x0 + p1 sqrt(1-a^2) y0 + p3 z0 = 0,

where p_vec = (p2, p1 sqrt(1-a^2), p3) is the *transported momentum vector*
(the conserved-length vector of the Lax flow), not the raw covector tuple --
confusing the two breaks transversality.

Maxwell candidates for the tabulated initial sets are roots of residuals
B_s(t) sin phi3(t) + B_c(t) cos phi3(t); the nine cases live in
``MAXWELL_CASES`` as data so tests can iterate the table.  For a start on the
singular set the cut time is the first return to it, i.e. the first root of
sin phi3 = 0, located by bisection of the strictly increasing phi3 on
[0, cut_bound_ar].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .elliptic import complete_K
from .errors import TransversalityError
from .expmap import phi3, rotation_at
from .pendulum import (
    EllipticData,
    Region,
    SRParams,
    conserved_M,
    covector_at,
    to_elliptic,
)
from .rootfind import bisect_root

_UNIT_TOL = 1e-12


def lax_vector(p, params: SRParams) -> np.ndarray:
    """Transported momentum vector (p2, p1 sqrt(1-a^2), p3)."""
    p = np.asarray(p, dtype=float)
    sq = np.sqrt(1.0 - params.a * params.a)
    return np.stack([p[..., 1], p[..., 0] * sq, p[..., 2]], axis=-1)


def check_sphere_point(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (3,):
        raise ValueError("sphere point must have shape (3,)")
    if abs(np.dot(gamma, gamma) - 1.0) > _UNIT_TOL:
        raise ValueError(f"point {gamma} is off the unit sphere")
    return gamma


def singular_set(p) -> bool:
    """Whether the point lies on the equator z = 0 (rank-1 locus)."""
    return bool(abs(np.asarray(p, dtype=float)[2]) <= 1e-12)


def transversality_defect(p0, gamma0, params: SRParams) -> float:
    return float(np.dot(lax_vector(np.asarray(p0, float), params), gamma0))


@dataclass(frozen=True)
class ARGeodesic:
    """Almost-Riemannian geodesic datum: base point, covector, momentum chart."""

    gamma0: np.ndarray
    p0: np.ndarray
    ed: EllipticData


def ar_geodesic(gamma0, p0, params: SRParams) -> ARGeodesic:
    gamma0 = check_sphere_point(gamma0)
    p0 = np.asarray(p0, dtype=float)
    defect = transversality_defect(p0, gamma0, params)
    if abs(defect) > _UNIT_TOL:
        raise TransversalityError(f"transversality defect {defect:.3e} at {gamma0}")
    return ARGeodesic(gamma0=gamma0, p0=p0, ed=to_elliptic(p0, params))


def project(p0, params: SRParams, gamma0, t: float) -> np.ndarray:
    """Geodesic point gamma_t = R_t^-1 gamma_0 (rejects non-transversal p0)."""
    gamma0 = check_sphere_point(gamma0)
    defect = transversality_defect(p0, gamma0, params)
    if abs(defect) > _UNIT_TOL:
        raise TransversalityError(f"transversality defect {defect:.3e}")
    R = rotation_at(to_elliptic(p0, params), params, float(t))
    return R.T @ gamma0


def project_ed(ed: EllipticData, params: SRParams, gamma0, t: float) -> np.ndarray:
    """Projection from a precomputed chart; skips revalidation (hot loops)."""
    return rotation_at(ed, params, float(t)).T @ np.asarray(gamma0, dtype=float)


@dataclass(frozen=True)
class TransversalFamily:
    """One-parameter family of transversal covectors at a base point.

    chart 'psi0' (z0 != 0): parameterized by psi0 in [0, 2pi); p1 = cos psi0,
    p2 = -sin psi0 and p3 is solved from the constraint.
    chart 'p3' (z0 = 0): the constraint restricts psi0 to two antipodal
    roots (picked by ``branch`` = +-1) and p3 is the free parameter.
    """

    gamma0: np.ndarray
    chart: str
    sq: float  # sqrt(1 - a^2)
    psi0_base: float = 0.0  # 'p3' chart: one root of the psi0 constraint

    def covector(self, s: float, branch: int = 1) -> np.ndarray:
        x0, y0, z0 = self.gamma0
        if self.chart == "psi0":
            p1, p2 = np.cos(s), -np.sin(s)
            p3 = -(p2 * x0 + p1 * self.sq * y0) / z0
            return np.array([p1, p2, p3])
        psi = self.psi0_base if branch >= 0 else self.psi0_base + np.pi
        return np.array([np.cos(psi), -np.sin(psi), float(s)])


def transversal_family(gamma0, params: SRParams) -> TransversalFamily:
    """Family of transversal initial covectors at gamma0 (see class docstring)."""
    gamma0 = check_sphere_point(gamma0)
    x0, y0, z0 = gamma0
    sq = np.sqrt(1.0 - params.a * params.a)
    if abs(z0) > _UNIT_TOL:
        return TransversalFamily(gamma0=gamma0, chart="psi0", sq=sq)
    # -sin(psi0) x0 + cos(psi0) sqrt(1-a^2) y0 = 0
    psi0 = float(np.arctan2(sq * y0, x0))
    return TransversalFamily(gamma0=gamma0, chart="p3", sq=sq, psi0_base=psi0)


@dataclass(frozen=True)
class MaxwellCase:
    """One row of the residual table: initial set, target coordinate, B_s/B_c."""

    case_id: int
    initial_set: str
    coordinate: int  # 0=x, 1=y, 2=z component of gamma_t that vanishes
    matches: Callable[[np.ndarray], bool]
    bs_bc: Callable[[ARGeodesic, SRParams], tuple[Callable, Callable]]


def _is_axis(v, idx):
    return abs(abs(v[idx]) - 1.0) <= 1e-12


def _pt(ar, params):
    def p_of(t):
        return covector_at(ar.ed, params, float(t))
    return p_of


def _case1(ar, params):
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    p_of = _pt(ar, params)
    return (lambda t: sq * p_of(t)[2] * p_of(t)[0],
            lambda t: np.sqrt(M) * p_of(t)[1])


def _sin_only(ar, params):
    return (lambda t: 1.0, lambda t: 0.0)


def _case3(ar, params):
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    p_of = _pt(ar, params)
    return (lambda t: -p_of(t)[2] * p_of(t)[1],
            lambda t: np.sqrt(M) * sq * p_of(t)[0])


def _case5(ar, params):
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    p_of = _pt(ar, params)
    return (lambda t: np.sqrt(M) * sq * p_of(t)[0],
            lambda t: p_of(t)[2] * p_of(t)[1])


def _case6(ar, params):
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    p_of = _pt(ar, params)
    return (lambda t: np.sqrt(M) * p_of(t)[1],
            lambda t: -sq * p_of(t)[2] * p_of(t)[0])


def _case8(ar, params):
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    x0, _, z0 = ar.gamma0
    p10 = ar.p0[0]
    p_of = _pt(ar, params)

    def bs(t):
        p = p_of(t)
        return M * z0 * p[1] - (1.0 - params.a ** 2) * x0 * p[2] * p10 * p[0]

    def bc(t):
        p = p_of(t)
        return -sq * np.sqrt(M) * (z0 * p[2] * p[0] + x0 * p10 * p[1])

    return bs, bc


def _case9(ar, params):
    # Expanding the first column of the five-factor rotation and cancelling
    # the constant term via transversality gives, up to the positive factor
    # sqrt(M (M-p3(t)^2)(M-p3(0)^2)), exactly x_t = B_s sin phi3 + B_c cos phi3
    # with the coefficients below (verified against the projection oracle to
    # machine precision).
    M = conserved_M(ar.ed, params)
    sq = np.sqrt(1.0 - params.a ** 2)
    _, y0, z0 = ar.gamma0
    p20 = ar.p0[1]
    p_of = _pt(ar, params)

    def bs(t):
        p = p_of(t)
        return y0 * p20 * p[1] * p[2] - M * sq * z0 * p[0]

    def bc(t):
        p = p_of(t)
        return -np.sqrt(M) * (sq * y0 * p[0] * p20 + z0 * p[2] * p[1])

    return bs, bc


MAXWELL_CASES: tuple[MaxwellCase, ...] = (
    MaxwellCase(1, "x0=+-1", 1, lambda g: _is_axis(g, 0), _case1),
    MaxwellCase(2, "x0=+-1", 2, lambda g: _is_axis(g, 0), _sin_only),
    MaxwellCase(3, "y0=+-1", 0, lambda g: _is_axis(g, 1), _case3),
    MaxwellCase(4, "y0=+-1", 2, lambda g: _is_axis(g, 1), _sin_only),
    MaxwellCase(5, "z0=+-1", 0, lambda g: _is_axis(g, 2), _case5),
    MaxwellCase(6, "z0=+-1", 1, lambda g: _is_axis(g, 2), _case6),
    MaxwellCase(7, "z0=0", 2, lambda g: abs(g[2]) <= 1e-12, _sin_only),
    MaxwellCase(8, "y0=0", 1, lambda g: abs(g[1]) <= 1e-12, _case8),
    MaxwellCase(9, "x0=0", 0, lambda g: abs(g[0]) <= 1e-12, _case9),
)


@dataclass(frozen=True)
class SphereSymmetry:
    """Discrete symmetry of the sphere system: common half-turn on both curves.

    Momentum and point transform by the same rotation I_axis (axis 0 means the
    identity), optionally with time reversal over a horizon t and a sign flip
    of the momentum; the point map carries a free +-1 branch.  The cross
    product is equivariant under a shared rotation, which is what makes the
    common-I_j pairing close the system.
    """

    sym_id: int
    axis: int  # 0 = identity
    time_reversed: bool
    p_sign: int


SPHERE_SYMMETRIES: tuple[SphereSymmetry, ...] = (
    SphereSymmetry(1, 2, True, -1),
    SphereSymmetry(2, 3, True, -1),
    SphereSymmetry(3, 1, False, 1),
    SphereSymmetry(4, 3, False, 1),
    SphereSymmetry(5, 1, True, -1),
    SphereSymmetry(6, 0, True, -1),
    SphereSymmetry(7, 2, False, 1),
)


def maxwell_residual(case: MaxwellCase, t: float, ar: ARGeodesic, params: SRParams) -> float:
    """Residual B_s(t) sin phi3 + B_c(t) cos phi3; roots flag Maxwell candidates."""
    if not case.matches(ar.gamma0):
        raise ValueError(f"initial point {ar.gamma0} not in case set {case.initial_set}")
    bs, bc = case.bs_bc(ar, params)
    ph = float(phi3(ar.ed, params, float(t)))
    return float(bs(t) * np.sin(ph) + bc(t) * np.cos(ph))


def cut_bound_ar(ed: EllipticData, params: SRParams) -> float:
    """Upper bound for the cut time of the projected geodesic (start on z=0)."""
    a = params.a
    if ed.region is Region.C1:
        return 2.0 * complete_K(ed.k) / a
    if ed.region is Region.C2:
        return 2.0 * ed.k.k * complete_K(ed.k) / a
    if ed.region is Region.C4:
        return float(np.pi)
    return float(np.pi / np.sqrt(1.0 - a * a))  # C3 and C5


def cut_bound_sr(ed: EllipticData, params: SRParams) -> float:
    """Cut-time bound upstairs on SO(3): the sphere bound plus a pi-rotation."""
    if ed.region is Region.C4:
        return float(2.0 * np.pi)
    return cut_bound_ar(ed, params) + float(np.pi)


def first_singular_return(ar: ARGeodesic, params: SRParams) -> float:
    """First positive time the geodesic re-enters the singular set.

    Requires gamma0 on the equator; there the return solves phi3(t) = pi, and
    (by the cut bounds) the root is bracketed in (0, cut_bound_ar], where the
    strictly increasing phi3 makes bisection safe.  This first return is the
    cut time for such geodesics.
    """
    if not singular_set(ar.gamma0):
        raise ValueError("first_singular_return requires a start on the singular set z = 0")
    hi = cut_bound_ar(ar.ed, params)
    f = lambda t: float(phi3(ar.ed, params, t)) - np.pi
    fhi = f(hi)
    if abs(fhi) <= 1e-12:
        return hi
    return bisect_root(f, 0.0, hi, xtol=1e-13)
