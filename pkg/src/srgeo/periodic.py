"""Periodic geodesics: the monotone closure functions G1, G2 and their solvers.

A geodesic closes after m momentum periods with total turning phi3(mT) = 2 pi n
exactly when

    G1(a, k) = (pi/2) (n/m)   (oscillating momentum, C1, requires n/m > 1/a)
    G2(a, k) = (pi/2) (n/m)   (rotating momentum,   C2, requires n/m > 1)

where

    G1 = sqrt((1 - a^2(1-k^2)) / (a^2(1-a^2))) Pi(a^2 k^2/(a^2-1); k^2),
    G2 = sqrt((k^2 + a^2(1-k^2)) / (a^2(1-a^2))) Pi(a^2/(a^2-1); k^2).

Both are smooth, increasing in k on [0,1) with G1(a,0) = pi/(2a),
G2(a,0) = pi/2 and divergent as k -> 1, so each admissible irreducible
fraction n/m determines a unique modulus (found here by bisection, which the
monotonicity makes unconditionally safe).

Contractibility.  The closed loop lifts to S^3 with endpoint

    q(mT) = (-1)^n           in C1,
    q(mT) = (-1)^(n+m)       in C2,

so a C1 loop is null-homotopic iff n is even, a C2 loop iff n + m is even.
The extra (-1)^m in C2 comes from the momentum azimuth: the rotating pendulum
sweeps a full turn per period, winding the first Euler angle by 2 pi m over
the loop and flipping its half-angle factor m times.  (The C4/C5 rest-point
geodesics are uniform rotations by 2 pi; their lifts end at -1 and they are
never contractible.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import Characteristic, Modulus, complete_E, complete_K, complete_Pi
from .expmap import exp_from_elliptic
from .pendulum import EllipticData, Region, SRParams, conserved_M, pendulum_period


@dataclass(frozen=True)
class PeriodicSpec:
    """Irreducible fraction n/m plus the momentum region."""

    n: int
    m: int
    region: Region

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive integers")
        if math.gcd(self.n, self.m) != 1:
            raise ValueError(f"fraction {self.n}/{self.m} is reducible")
        if self.region not in (Region.C1, Region.C2):
            raise ValueError("periodic families exist only for C1 and C2 momenta")


@dataclass(frozen=True)
class PeriodicGeodesic:
    spec: PeriodicSpec
    k: Modulus
    T: float
    total_time: float
    contractible: bool


def _check_domain(a: float, k: Modulus):
    if not (0.0 < a < 1.0):
        raise ValueError(f"a={a} outside (0,1)")


def G1(a: float, k: Modulus) -> float:
    """Closure function for oscillating momenta; increasing from pi/(2a)."""
    _check_domain(a, k)
    m = k.m
    nu = Characteristic(a * a * m / (a * a - 1.0))
    return float(np.sqrt((1.0 - a * a * (1.0 - m)) / (a * a * (1.0 - a * a))) * complete_Pi(nu, k))


def G2(a: float, k: Modulus) -> float:
    """Closure function for rotating momenta; increasing from pi/2."""
    _check_domain(a, k)
    m = k.m
    nu = Characteristic(a * a / (a * a - 1.0))
    return float(np.sqrt((m + a * a * (1.0 - m)) / (a * a * (1.0 - a * a))) * complete_Pi(nu, k))


def dG1_dk(a: float, k: Modulus) -> float:
    """Closed-form partial of G1 in k."""
    m = k.m
    E, K = complete_E(k), complete_K(k)
    return float((E - (1.0 - m) * K)
                 / (a * a * k.k * (1.0 - m) * np.sqrt(1.0 / (a * a) + m / (1.0 - a * a))))


def dG2_dk(a: float, k: Modulus) -> float:
    """Closed-form partial of G2 in k."""
    m = k.m
    E = complete_E(k)
    return float(k.k * E / (a * a * (1.0 - m) * np.sqrt(1.0 / (1.0 - a * a) + m / (a * a))))


_K_CAP = 1.0 - 1e-9


def solve_periodic(spec: PeriodicSpec, a: float, target_tol: float = 1e-12) -> PeriodicGeodesic | None:
    """Solve G_region(a, k) = (pi/2)(n/m) for k, or None if inadmissible.

    Bisection, with the bracket grown geometrically toward 1 until the target
    is enclosed (capped at k = 1 - 1e-9), then refined until |G - target| <=
    ``target_tol``.  The bisection runs on the parameter m = k^2, which is
    what every downstream elliptic evaluation consumes, and ends by picking
    the better of the two adjacent floats.  Where the root is steep (k near
    1, dG/dk up to ~1e5) one ulp already moves G by more than ``target_tol``;
    there the best representable parameter is accepted when its residual is
    within a few derivative*ulp -- the conditioning floor of binary64.
    Closure quality is unaffected: the rotation-closure defect scales as
    4m * residual.
    """
    G = G1 if spec.region is Region.C1 else G2
    ratio = spec.n / spec.m
    if spec.region is Region.C1 and not ratio > 1.0 / a:
        return None
    if spec.region is Region.C2 and not ratio > 1.0:
        return None
    target = 0.5 * np.pi * ratio

    cap = _K_CAP * _K_CAP
    lo, hi = 0.0, 0.25
    while G(a, Modulus.from_m(hi)) < target:
        hi = 0.5 * (hi + 1.0)
        if hi >= cap:
            hi = cap
            if G(a, Modulus.from_m(hi)) < target:
                return None  # target beyond the supported modulus range
            break
    while np.nextafter(lo, hi) < hi:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if G(a, Modulus.from_m(mid)) < target:
            lo = mid
        else:
            hi = mid
    k = min((Modulus.from_m(lo), Modulus.from_m(hi)),
            key=lambda mod: abs(G(a, mod) - target))
    residual = abs(G(a, k) - target)
    if residual > target_tol:
        dG_dm = (dG1_dk(a, k) if spec.region is Region.C1 else dG2_dk(a, k)) / (2.0 * k.k)
        if residual > 4.0 * abs(dG_dm) * np.spacing(k.m):
            return None

    K = complete_K(k)
    T = 4.0 * K / a if spec.region is Region.C1 else 4.0 * k.k * K / a
    if spec.region is Region.C1:
        contractible = spec.n % 2 == 0
    else:
        contractible = (spec.n + spec.m) % 2 == 0
    return PeriodicGeodesic(spec=spec, k=k, T=T, total_time=spec.m * T,
                            contractible=contractible)


def verify_closure(pg: PeriodicGeodesic, ed: EllipticData, params: SRParams):
    """Run the exponential map over one closure period.

    Returns ``(closure_error, lift_sign)``: the sup-norm distance of R(mT)
    from the identity and the sign of the (real) lift endpoint q(mT) = +-1.
    The closure is independent of the phase theta0 carried by ``ed``.
    """
    if ed.region is not pg.spec.region or ed.k is None or abs(ed.k.k - pg.k.k) > 1e-12:
        raise ValueError("elliptic data does not match the solved periodic geodesic")
    sample = exp_from_elliptic(ed, params, pg.total_time)
    closure_error = float(np.max(np.abs(sample.R - np.eye(3))))
    q0 = float(sample.q[0])
    if abs(abs(q0) - 1.0) > 1e-6:
        raise ValueError(f"lift endpoint {sample.q} is not +-1; geodesic did not close")
    return closure_error, (1 if q0 > 0 else -1)


def enumerate_periodic(a: float, max_n: int, max_m: int) -> list[PeriodicGeodesic]:
    """All admissible irreducible n/m within bounds, solved and sorted by length."""
    if max_n < 1 or max_m < 1:
        raise ValueError("bounds must be >= 1")
    out = []
    for n in range(1, max_n + 1):
        for m in range(1, max_m + 1):
            if math.gcd(n, m) != 1:
                continue
            for region in (Region.C1, Region.C2):
                pg = solve_periodic(PeriodicSpec(n, m, region), a)
                if pg is not None:
                    out.append(pg)
    out.sort(key=lambda pg: pg.total_time)
    return out


def elliptic_data_for(pg: PeriodicGeodesic, theta0: float = 0.0, s1: int = 1, s2: int = 1) -> EllipticData:
    """Action-angle chart of a solved periodic geodesic at a chosen phase."""
    return EllipticData(pg.spec.region, pg.k, theta0, s1=s1, s2=s2)
