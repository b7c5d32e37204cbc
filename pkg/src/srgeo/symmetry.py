"""Discrete symmetries of the exponential map and Maxwell-point detection.

Seven involutive symmetries eps^1..eps^7 act on geodesics; together they
generate Z2 x Z2 x Z2.  In the preimage they act by sign flips of the momentum
evaluated either at the initial time or at the reversed time t (time-reversal
symmetries); in the image by conjugation with the half-turn rotations
I_i = exp(pi A_i) and/or matrix inversion:

    id   preimage (initial covector ->)        image (R_t ->)
    1    ( p1(t), -p2(t),  p3(t))              I1 R^-1 I1
    2    ( p1(t),  p2(t), -p3(t))              I3 R^-1 I3
    3    ( p1(0), -p2(0), -p3(0))              I2 R I2
    4    (-p1(0), -p2(0),  p3(0))              I3 R I3
    5    (-p1(t),  p2(t),  p3(t))              I2 R^-1 I2
    6    (-p1(t), -p2(t), -p3(t))              R^-1
    7    (-p1(0),  p2(0), -p3(0))              I1 R I1

A geodesic is mapped to itself exactly on the fixed sets below (tau is the
midpoint elliptic phase, tau = a(t/2 + theta0) in C1/C3 and a(t/2 + theta0)/k
in C2, matching the argument scaling of the region's elliptic chart):

    eps1 fixed  <=>  sn tau = 0 (C1, C2)  or  tau = 0 (C3)
    eps2 fixed  <=>  cn tau = 0 (C1);   impossible in C2, C3
    eps5 fixed  <=>  cn tau = 0 (C2);   impossible in C1, C3
    eps3, eps4, eps6, eps7: never fixed for C1, C2, C3 momenta

If the endpoint's lift has a vanishing component and the corresponding
symmetry does not fix the geodesic, the symmetric partner is a distinct
geodesic of equal length with the same endpoint -- a Maxwell point, after
which the geodesic is no longer optimal.  The component/symmetry pairing
follows from the quaternion relations (Re(q i) = -q1, Re(q j) = -q2,
Re(q k) = -q3):

    condition 1:  q0 = 0   partner via eps6   (no proviso in C1-C3)
    condition 2:  q1 = 0   partner via eps1   proviso sn tau != 0 / tau != 0
    condition 3:  q2 = 0   partner via eps5   proviso cn tau != 0 in C2
    condition 4:  q3 = 0   partner via eps2   proviso cn tau != 0 in C1

At the rest points C4/C5 the provisos are checked directly by comparing the
mapped constant covector with the original.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import jacobi_sncndn
from .expmap import GeodesicSample, quat_lift
from .pendulum import (
    EllipticData,
    Region,
    SRParams,
    covector_at,
    pendulum_period,
    to_elliptic,
)
from .rootfind import bisect_root
from .so3 import basis_rotation

SYMMETRY_IDS = (1, 2, 3, 4, 5, 6, 7)

_PREIMAGE = {
    1: (np.array([1.0, -1.0, 1.0]), True),
    2: (np.array([1.0, 1.0, -1.0]), True),
    3: (np.array([1.0, -1.0, -1.0]), False),
    4: (np.array([-1.0, -1.0, 1.0]), False),
    5: (np.array([-1.0, 1.0, 1.0]), True),
    6: (np.array([-1.0, -1.0, -1.0]), True),
    7: (np.array([-1.0, 1.0, -1.0]), False),
}

_IMAGE = {
    1: (1, True),
    2: (3, True),
    3: (2, False),
    4: (3, False),
    5: (2, True),
    6: (None, True),
    7: (1, False),
}

# Maxwell condition id -> (quaternion component, partner symmetry)
_CONDITIONS = {1: (0, 6), 2: (1, 1), 3: (2, 5), 4: (3, 2)}


@dataclass(frozen=True)
class TauXi:
    """Midpoint/half-span phases: tau = a(t/2 + theta0), xi = a t/2."""

    tau: float
    xi: float


def tau_xi(ed: EllipticData, params: SRParams, t: float) -> TauXi:
    return TauXi(tau=params.a * (0.5 * t + ed.theta0), xi=0.5 * params.a * t)


def eps_preimage(i: int, t: float, p0, params: SRParams) -> np.ndarray:
    """Initial covector of the eps^i-partner geodesic."""
    signs, at_t = _PREIMAGE[i]
    if at_t:
        ed = to_elliptic(p0, params)
        return signs * covector_at(ed, params, float(t))
    return signs * np.asarray(p0, dtype=float)


def eps_image(i: int, R: np.ndarray) -> np.ndarray:
    """Action of eps^i on an endpoint rotation."""
    axis, invert = _IMAGE[i]
    out = np.asarray(R, dtype=float).T if invert else np.asarray(R, dtype=float)
    if axis is None:
        return out
    I = basis_rotation(axis, np.pi)
    return I @ out @ I


def _elliptic_tau(ed: EllipticData, params: SRParams, t: float) -> float:
    # midpoint phase in the units of the region's elliptic argument
    tau = params.a * (0.5 * t + ed.theta0)
    if ed.region is Region.C2:
        tau /= ed.k.k
    return tau


def is_fixed_preimage(i: int, ed: EllipticData, params: SRParams, t: float,
                      tol: float | None = None) -> bool:
    """Whether eps^i maps the geodesic (ed, t) to itself (C1/C2/C3 momenta only)."""
    if ed.region in (Region.C4, Region.C5):
        raise ValueError("fixed-point classification applies to C1, C2, C3 momenta only")
    if i not in SYMMETRY_IDS:
        raise ValueError(f"symmetry id {i} outside 1..7")
    tol = params.tol.zero if tol is None else tol

    if i in (3, 4, 6, 7):
        return False
    if ed.region is Region.C3:
        if i == 1:
            return abs(params.a * (0.5 * t + ed.theta0)) <= tol
        return False  # eps2, eps5 impossible on the separatrix
    tau = _elliptic_tau(ed, params, t)
    sn, cn, _ = jacobi_sncndn(tau, ed.k)
    if i == 1:
        return abs(sn) <= tol
    if i == 2:
        return ed.region is Region.C1 and abs(cn) <= tol
    return ed.region is Region.C2 and abs(cn) <= tol  # i == 5


def _proviso(i: int, ed: EllipticData, params: SRParams, t: float, p0: np.ndarray,
             tol: float) -> bool:
    # True when the partner symmetry does NOT fix the geodesic.
    if ed.region in (Region.C4, Region.C5):
        mapped = eps_preimage(i, t, p0, params)
        return bool(np.max(np.abs(mapped - p0)) > 1e-9)
    return not is_fixed_preimage(i, ed, params, t, tol=tol)


@dataclass(frozen=True)
class MaxwellHit:
    condition: int
    component: int
    value: float
    proviso_ok: bool
    proviso_unspecified: bool = False


def maxwell_condition(sample: GeodesicSample, ed: EllipticData, params: SRParams,
                      zero_tol: float = 1e-9) -> list[MaxwellHit]:
    """Which of the four endpoint conditions hold at this sample.

    A hit with ``proviso_ok`` signals a Maxwell point (two distinct geodesics
    of equal length meet there).  Hits on the separatrix for conditions 3/4
    are flagged ``proviso_unspecified``: no fixed geodesics exist there, but
    the classification is informational only.
    """
    if sample.t <= 0.0:
        return []  # the conditions concern interior times s0 > 0; q(0) = 1
    p0 = covector_at(ed, params, 0.0)
    hits = []
    for cond, (comp, sym) in _CONDITIONS.items():
        val = float(sample.q[comp])
        if abs(val) > zero_tol:
            continue
        ok = _proviso(sym, ed, params, sample.t, p0, params.tol.proviso)
        unspecified = ed.region is Region.C3 and cond in (3, 4)
        hits.append(MaxwellHit(cond, comp, val, proviso_ok=ok,
                               proviso_unspecified=unspecified))
    return hits


def first_maxwell_time(p0, params: SRParams, t_max: float):
    """Earliest t in (0, t_max] where a Maxwell condition fires.

    Sign-change scan of the four lift components (step tied to the momentum
    period, or t_max/256 when the momentum is aperiodic/constant), refined by
    bisection to 1e-10.  Returns ``(time, condition_id)`` or None.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    ed = to_elliptic(p0, params)
    T = pendulum_period(ed, params)
    step = T / 256.0 if T else t_max / 256.0
    n = int(np.ceil(t_max / step))
    grid = np.linspace(0.0, t_max, n + 1)
    qs = np.asarray(quat_lift(ed, params, grid))
    p0v = covector_at(ed, params, 0.0)

    best = None
    for cond, (comp, sym) in _CONDITIONS.items():
        f = qs[:, comp]
        crossings = np.nonzero(f[:-1] * f[1:] < 0.0)[0]
        for idx in crossings:
            root = bisect_root(
                lambda s: float(np.asarray(quat_lift(ed, params, s))[comp]),
                float(grid[idx]), float(grid[idx + 1]), xtol=1e-10,
            )
            if root <= 1e-12:
                continue
            if not _proviso(sym, ed, params, root, p0v, params.tol.proviso):
                continue  # self-symmetric crossing, not a Maxwell point
            if best is None or root < best[0] - 1e-12:
                best = (root, cond)
            break  # earliest admissible crossing of this component settles it
    return best
