"""Closed-form exponential map on SO(3) and its quaternion lift on S^3.

The geodesic through the identity with initial momentum p0 factorizes as

    R_t = e^{-phi1(0) A3} e^{-phi2(0) A1} e^{phi3(t) A3} e^{phi2(t) A1} e^{phi1(t) A3}

with the first two Euler angles read off algebraically from the transported
momentum vector (M = p2^2 + p1^2 (1-a^2) + p3^2),

    cos phi2 = p3 / sqrt(M),                sin phi2 = sqrt((M - p3^2)/M),
    cos phi1 = p1 sqrt(1-a^2) / sqrt(M - p3^2),   sin phi1 = p2 / sqrt(M - p3^2),

and the third angle integrated in closed form per region,

    phi3' = sqrt(M (1-a^2)) / (1 - a^2 p1^2) > 0,

via the incomplete third-kind integral in C1/C2, an arctan in C3, and linear
functions of t at the rest points.  The denominators never vanish
(M - p3^2 >= 1 - a^2 > 0) and phi3 is strictly increasing.

The quaternion lift replaces every rotation factor by its half-angle unit
quaternion.  Half angles are branch sensitive, so the lift uses *continuous*
angle representatives: phi2 = arccos(p3/sqrt(M)) stays in (0, pi), phi3 is
unwrapped by construction, and phi1 is rebuilt from the continuous pendulum
angle psi (phi1 and -psi always share a quadrant, so phi1 = -psi + bounded
correction).  In the rotating region C2 phi1 winds by -s2*2*pi per pendulum
period; ignoring that winding flips the sign of the lift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import so3
from .elliptic import Characteristic, Modulus, ellip_Pi, jacobi_am
from .pendulum import (
    EllipticData,
    Region,
    SRParams,
    conserved_M,
    covector_at,
    psi_cont,
    to_elliptic,
)


@dataclass(frozen=True)
class EulerPhi:
    """Euler-angle data of one sample: two angle pairs plus unwrapped phi3."""

    cos_phi1: float
    sin_phi1: float
    cos_phi2: float
    sin_phi2: float
    phi3: float


@dataclass(frozen=True)
class GeodesicSample:
    t: float
    R: np.ndarray
    q: np.ndarray
    p: np.ndarray
    phi: EulerPhi


def euler_phi12(p, M: float, params: SRParams):
    """Angle pairs (cos phi1, sin phi1, cos phi2, sin phi2) from the momentum."""
    p = np.asarray(p, dtype=float)
    sq = np.sqrt(1.0 - params.a * params.a)
    p1, p2, p3 = p[..., 0], p[..., 1], p[..., 2]
    rem = np.sqrt(np.maximum(M - p3 * p3, 0.0))
    cos2 = p3 / np.sqrt(M)
    sin2 = rem / np.sqrt(M)
    cos1 = p1 * sq / rem
    sin1 = p2 / rem
    return cos1, sin1, cos2, sin2


def _pi_of_u(u, nu: Characteristic, mod: Modulus):
    # Pi(nu; am(u); m) with unwrapped amplitude: globally monotone in u.
    return ellip_Pi(nu, jacobi_am(u, mod), mod)


def phi3(ed: EllipticData, params: SRParams, t):
    """Unwrapped third Euler angle phi3(t), phi3(0) = 0; t may be an array."""
    a = params.a
    t = np.asarray(t, dtype=float)
    one = 1.0 - a * a

    if ed.region is Region.C4:
        return t[()] if t.ndim == 0 else t.copy()
    if ed.region is Region.C5:
        return np.sqrt(one) * t

    if ed.region is Region.C3:
        w0 = a * ed.theta0
        w = a * (ed.theta0 + t)
        r = a / np.sqrt(one)
        return np.sqrt(one) * t + np.arctan(r * np.tanh(w)) - np.arctan(r * np.tanh(w0))

    m = ed.k.m
    if ed.region is Region.C1:
        nu = Characteristic(a * a * m / (a * a - 1.0))
        coef = np.sqrt((1.0 - a * a * (1.0 - m)) / (a * a * one))
        u0 = a * ed.theta0
        u = a * (ed.theta0 + t)
    else:
        nu = Characteristic(a * a / (a * a - 1.0))
        coef = np.sqrt((m + a * a * (1.0 - m)) / (a * a * one))
        u0 = a * ed.theta0 / ed.k.k
        u = a * (ed.theta0 + t) / ed.k.k
    return coef * (_pi_of_u(u, nu, ed.k) - _pi_of_u(u0, nu, ed.k))


def _rot1(c, s):
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot3(c, s):
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_at(ed: EllipticData, params: SRParams, t: float) -> np.ndarray:
    """Closed-form R_t (product of five exact rotation factors)."""
    M = conserved_M(ed, params)
    p0 = covector_at(ed, params, 0.0)
    pt = covector_at(ed, params, float(t))
    c1_0, s1_0, c2_0, s2_0 = euler_phi12(p0, M, params)
    c1_t, s1_t, c2_t, s2_t = euler_phi12(pt, M, params)
    ph3 = float(phi3(ed, params, float(t)))
    return (
        _rot3(c1_0, -s1_0)
        @ _rot1(c2_0, -s2_0)
        @ _rot3(np.cos(ph3), np.sin(ph3))
        @ _rot1(c2_t, s2_t)
        @ _rot3(c1_t, s1_t)
    )


def _wrap_pi(x):
    return (x + np.pi) % (2.0 * np.pi) - np.pi


def _phi1_cont(ed: EllipticData, params: SRParams, t):
    """Continuous representative of phi1 along the geodesic (array-capable)."""
    M = conserved_M(ed, params)
    p = covector_at(ed, params, t)
    c1, s1, _, _ = euler_phi12(p, M, params)
    psi = psi_cont(ed, params, t)
    # phi1 and -psi share a quadrant, so the correction stays in (-pi/2, pi/2)
    # and wrapping it to (-pi, pi] never hits the branch cut.
    return -psi + _wrap_pi(np.arctan2(s1, c1) + psi)


def _qx(angle):
    h = 0.5 * np.asarray(angle, dtype=float)
    z = np.zeros_like(h)
    return np.stack([np.cos(h), np.sin(h), z, z], axis=-1)


def _qz(angle):
    h = 0.5 * np.asarray(angle, dtype=float)
    z = np.zeros_like(h)
    return np.stack([np.cos(h), z, z, np.sin(h)], axis=-1)


def quat_lift(ed: EllipticData, params: SRParams, t, q_init=None):
    """Continuous quaternion lift q(t) with q(0) = q_init (default 1).

    Vectorized over t; returns shape (..., 4).  Projects onto
    :func:`rotation_at` under the double cover.
    """
    M = conserved_M(ed, params)
    t = np.asarray(t, dtype=float)
    pt = covector_at(ed, params, t)
    phi2_t = np.arccos(np.clip(pt[..., 2] / np.sqrt(M), -1.0, 1.0))
    phi1_t = _phi1_cont(ed, params, t)
    phi1_0 = _phi1_cont(ed, params, 0.0)
    p0 = covector_at(ed, params, 0.0)
    phi2_0 = np.arccos(np.clip(p0[2] / np.sqrt(M), -1.0, 1.0))
    ph3 = phi3(ed, params, t)

    q = so3.quat_mul(_qz(-phi1_0 * np.ones_like(t)), _qx(-phi2_0 * np.ones_like(t)))
    q = so3.quat_mul(q, _qz(ph3))
    q = so3.quat_mul(q, _qx(phi2_t))
    q = so3.quat_mul(q, _qz(phi1_t))
    if q_init is not None:
        q = so3.quat_mul(np.asarray(q_init, dtype=float), q)
    return q


def exp_from_elliptic(ed: EllipticData, params: SRParams, t: float) -> GeodesicSample:
    """Geodesic sample at time t from a precomputed action-angle chart."""
    t = float(t)
    M = conserved_M(ed, params)
    pt = covector_at(ed, params, t)
    c1, s1, c2, s2 = euler_phi12(pt, M, params)
    ph3 = float(phi3(ed, params, t))
    R = rotation_at(ed, params, t)
    q = quat_lift(ed, params, t)
    return GeodesicSample(t=t, R=R, q=np.asarray(q), p=pt,
                          phi=EulerPhi(float(c1), float(s1), float(c2), float(s2), ph3))


def exp(p0, params: SRParams, t: float) -> GeodesicSample:
    """Sub-Riemannian exponential map: endpoint data at time t >= 0."""
    if t < 0.0:
        raise ValueError("time must be nonnegative; backward evaluation goes through the time-reversal symmetry")
    return exp_from_elliptic(to_elliptic(p0, params), params, t)


def exp_quat(p0, params: SRParams, t: float, q_init=None) -> np.ndarray:
    """Quaternion lift of the geodesic at time t (q_init defaults to 1)."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    ed = to_elliptic(p0, params)
    return np.asarray(quat_lift(ed, params, float(t), q_init=q_init))


def sample_geodesic(p0, params: SRParams, t_grid) -> list[GeodesicSample]:
    """Samples along a monotone time grid (phi3 stays unwrapped across samples)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if np.any(np.diff(t_grid) < 0.0) or t_grid[0] < 0.0:
        raise ValueError("time grid must be nondecreasing and nonnegative")
    ed = to_elliptic(p0, params)
    return [exp_from_elliptic(ed, params, float(t)) for t in t_grid]
