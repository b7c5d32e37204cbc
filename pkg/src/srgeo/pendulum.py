"""Vertical (momentum) subsystem: pendulum energy strata and elliptic coordinates.

On the arclength level set p1^2 + p2^2 = 1 the momentum obeys

    p1' = p3 p2,   p2' = -p3 p1,   p3' = a^2 p1 p2,

which is a mathematical pendulum in the angle psi (p1 = cos psi, p2 = -sin psi).
The cylinder splits by the pendulum energy E = 2 p3^2 - a^2 (1 - 2 p2^2) into

    C1  oscillation        E in (-a^2, a^2)     k^2 = (E + a^2) / (2 a^2)
    C2  rotation           E > a^2              k^2 = 2 a^2 / (E + a^2)
    C3  separatrix         E = a^2, p3 != 0     hyperbolic functions
    C4  stable rest        E = -a^2             p = (+-1, 0, 0)
    C5  unstable rest      E = a^2, p3 = 0      p = (0, +-1, 0)

and each stratum carries explicit action-angle style formulas for p(t):

    C1: p1 = s1 dn(a th), p2 = -s1 k sn(a th), p3 = a k cn(a th)
    C2: p1 = cn(a th/k),  p2 = -s2 sn(a th/k), p3 = (a s2/k) dn(a th/k)
    C3: p1 = s1 sech(a th), p2 = -s1 s2 tanh(a th), p3 = a s2 sech(a th)

with th = theta0 + t.  The conserved quantity is the squared length of the
transported momentum vector M = p2^2 + p1^2 (1 - a^2) + p3^2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .elliptic import Modulus, complete_K, ellip_F, jacobi_sncndn
from .errors import RegionBoundaryError


class Region(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerance bundle."""

    region: float = 1e-10    # energy distance to a stratum boundary
    level_set: float = 1e-12  # |p1^2 + p2^2 - 1|
    zero: float = 1e-10      # generic zero detection (fixed points, roots)
    proviso: float = 1e-8    # coarser gate for Maxwell provisos
    solver: float = 1e-12    # periodic-geodesic target residual


@dataclass(frozen=True)
class SRParams:
    """Metric invariant a in (0,1) plus tolerances."""

    a: float
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not (0.0 < self.a < 1.0):
            raise ValueError(f"metric invariant a={self.a} must lie in (0, 1)")


@dataclass(frozen=True)
class EllipticData:
    """Action-angle chart of one momentum trajectory.

    ``k`` is None in C3-C5; ``theta0`` is the phase within one period
    (C1/C2), the hyperbolic phase (C3), and unused for the rest points;
    ``n_parity`` fixes the sign branch of the constant covectors in C4/C5.
    """

    region: Region
    k: Modulus | None
    theta0: float
    s1: int = 1
    s2: int = 1
    n_parity: int = 0


def check_covector(p, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise ValueError(f"covector must have shape (3,), got {p.shape}")
    defect = abs(p[0] * p[0] + p[1] * p[1] - 1.0)
    if defect > tol:
        raise ValueError(f"covector off the level set p1^2+p2^2=1 by {defect:.3e}")
    return p


def energy(p, params: SRParams) -> float:
    """Pendulum energy E = 2 p3^2 - a^2 (1 - 2 p2^2)."""
    p = np.asarray(p, dtype=float)
    a2 = params.a * params.a
    return float(2.0 * p[2] * p[2] - a2 * (1.0 - 2.0 * p[1] * p[1]))


def classify(p0, params: SRParams) -> tuple[float, Region]:
    """Energy and region of an initial covector; tolerance decides boundaries."""
    p0 = check_covector(p0, params.tol.level_set)
    a2 = params.a * params.a
    E = energy(p0, params)
    tol = params.tol.region * max(1.0, a2)
    if abs(E + a2) <= tol:
        return E, Region.C4
    if abs(E - a2) <= tol:
        return E, Region.C5 if abs(p0[2]) <= tol else Region.C3
    return E, Region.C1 if E < a2 else Region.C2


def to_elliptic(p0, params: SRParams) -> EllipticData:
    """Recover the action-angle chart (region, k, theta0, signs) of a covector.

    The phase branch is chosen in [0, 4K/a) for C1 and [0, 4kK/a) for C2.
    """
    p0 = check_covector(p0, params.tol.level_set)
    a = params.a
    E, region = classify(p0, params)

    if region is Region.C4:
        return EllipticData(region, None, 0.0, n_parity=0 if p0[0] > 0 else 1)
    if region is Region.C5:
        return EllipticData(region, None, 0.0, n_parity=0 if p0[1] > 0 else 1)
    if region is Region.C3:
        s1 = 1 if p0[0] > 0 else -1
        s2 = 1 if p0[2] > 0 else -1
        theta0 = float(np.arctanh(-p0[1] * s1 * s2) / a)
        return EllipticData(region, None, theta0, s1=s1, s2=s2)

    if region is Region.C1:
        k2 = (E + a * a) / (2.0 * a * a)
        try:
            mod = Modulus.from_m(k2)
        except ValueError as exc:
            raise RegionBoundaryError(
                f"energy E={E} too close to the separatrix for C1 coordinates"
            ) from exc
        s1 = 1 if p0[0] > 0 else -1
        sn0 = -p0[1] / (s1 * mod.k)
        cn0 = p0[2] / (a * mod.k)
        u0 = ellip_F(np.arctan2(sn0, cn0), mod) % (4.0 * complete_K(mod))
        return EllipticData(region, mod, float(u0 / a), s1=s1)

    k2 = 2.0 * a * a / (E + a * a)
    try:
        mod = Modulus.from_m(k2)
    except ValueError as exc:
        raise RegionBoundaryError(
            f"energy E={E} too close to the separatrix for C2 coordinates"
        ) from exc
    s2 = 1 if p0[2] > 0 else -1
    sn0 = -p0[1] * s2
    cn0 = p0[0]
    u0 = ellip_F(np.arctan2(sn0, cn0), mod) % (4.0 * complete_K(mod))
    return EllipticData(Region.C2, mod, float(mod.k * u0 / a), s2=s2)


def _sech(w):
    # overflow-safe 1/cosh
    aw = np.abs(w)
    e = np.exp(-aw)
    return 2.0 * e / (1.0 + e * e)


def covector_at(ed: EllipticData, params: SRParams, t):
    """Momentum (p1, p2, p3) at time t; t may be an array (shape (..., 3))."""
    a = params.a
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    th = ed.theta0 + t

    if ed.region is Region.C1:
        sn, cn, dn = jacobi_sncndn(a * th, ed.k)
        p = np.stack([ed.s1 * dn, -ed.s1 * ed.k.k * np.asarray(sn), a * ed.k.k * np.asarray(cn)], axis=-1)
    elif ed.region is Region.C2:
        sn, cn, dn = jacobi_sncndn(a * th / ed.k.k, ed.k)
        p = np.stack([np.asarray(cn), -ed.s2 * np.asarray(sn), (a * ed.s2 / ed.k.k) * np.asarray(dn)], axis=-1)
    elif ed.region is Region.C3:
        w = a * th
        sech = _sech(w)
        p = np.stack([ed.s1 * sech, -ed.s1 * ed.s2 * np.tanh(w), a * ed.s2 * sech], axis=-1)
    elif ed.region is Region.C4:
        sign = 1.0 if ed.n_parity % 2 == 0 else -1.0
        p = np.broadcast_to(np.array([sign, 0.0, 0.0]), t.shape + (3,)).copy()
    else:
        sign = 1.0 if ed.n_parity % 2 == 0 else -1.0
        p = np.broadcast_to(np.array([0.0, sign, 0.0]), t.shape + (3,)).copy()

    p = np.asarray(p, dtype=float)
    return p.reshape(3) if scalar else p


def conserved_M(ed: EllipticData, params: SRParams) -> float:
    """Squared length of the transported momentum vector, by region formula."""
    a2 = params.a * params.a
    if ed.region is Region.C1:
        return 1.0 - a2 * (1.0 - ed.k.m)
    if ed.region is Region.C2:
        return (ed.k.m + a2 * (1.0 - ed.k.m)) / ed.k.m
    if ed.region is Region.C4:
        return 1.0 - a2
    return 1.0  # C3 and C5


def pendulum_period(ed: EllipticData, params: SRParams) -> float | None:
    """Momentum period: 4K/a in C1, 4kK/a in C2, None in C3, 0 at rest points."""
    if ed.region is Region.C1:
        return 4.0 * complete_K(ed.k) / params.a
    if ed.region is Region.C2:
        return 4.0 * ed.k.k * complete_K(ed.k) / params.a
    if ed.region is Region.C3:
        return None
    return 0.0


def psi_cont(ed: EllipticData, params: SRParams, t):
    """Continuous pendulum angle psi(t) with p1 = cos psi, p2 = -sin psi.

    Solves psi' = p3 exactly; in C2 it winds monotonically (the unwrapped
    amplitude), elsewhere it stays in a bounded branch.  Needed by the
    quaternion lift, whose half-angle factors are branch sensitive.
    """
    from .elliptic import jacobi_am  # local import keeps module init light

    a = params.a
    t = np.asarray(t, dtype=float)
    th = ed.theta0 + t

    if ed.region is Region.C1:
        sn, _, _ = jacobi_sncndn(a * th, ed.k)
        base = np.arcsin(np.clip(ed.k.k * np.asarray(sn), -1.0, 1.0))
        return base if ed.s1 > 0 else np.pi + base
    if ed.region is Region.C2:
        return ed.s2 * jacobi_am(a * th / ed.k.k, ed.k)
    if ed.region is Region.C3:
        base = np.arcsin(np.clip(ed.s2 * np.tanh(a * th), -1.0, 1.0))
        return base if ed.s1 > 0 else np.pi + base
    if ed.region is Region.C4:
        return np.broadcast_to(np.pi * ed.n_parity, t.shape).copy()[()]
    return np.broadcast_to(-np.pi / 2 + np.pi * ed.n_parity, t.shape).copy()[()]  # C5
