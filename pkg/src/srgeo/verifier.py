"""Independent fixed-step RK4 oracle for the three Hamiltonian systems.

Integrates the matrix system R' = R (p1 A2 + p2 sqrt(1-a^2) A1) with the
momentum equations p1' = p3 p2, p2' = -p3 p1, p3' = a^2 p1 p2; the quaternion
system q' = (q/2)(p1 j + p2 sqrt(1-a^2} i); and the sphere system
gamma' = gamma x omega with omega = (p2 sqrt(1-a^2), p1, 0).

Fixed step (not adaptive) keeps oracle values deterministic and reproducible
for golden files.  All integrators broadcast over leading batch axes, so a
whole ensemble of initial conditions integrates in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pendulum import SRParams


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-4
    reorthonormalize_every: int = 100

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("step must be positive")


def _momentum_rhs(p, a2):
    p1, p2, p3 = p[..., 0], p[..., 1], p[..., 2]
    return np.stack([p3 * p2, -p3 * p1, a2 * p1 * p2], axis=-1)


def _omega_matrix(p, sq):
    # p1 A2 + p2 sqrt(1-a^2) A1 as a batched 3x3 array
    p1, p2 = p[..., 0], p[..., 1]
    O = np.zeros(p.shape[:-1] + (3, 3))
    O[..., 0, 2] = p1
    O[..., 2, 0] = -p1
    O[..., 1, 2] = -sq * p2
    O[..., 2, 1] = sq * p2
    return O


def _orthonormalize_rows(R):
    r0 = R[..., 0, :]
    r0 = r0 / np.linalg.norm(r0, axis=-1, keepdims=True)
    r1 = R[..., 1, :]
    r1 = r1 - np.sum(r1 * r0, axis=-1, keepdims=True) * r0
    r1 = r1 / np.linalg.norm(r1, axis=-1, keepdims=True)
    r2 = np.cross(r0, r1)
    return np.stack([r0, r1, r2], axis=-2)


def _rk4(state, rhs, t_end, cfg, renorm):
    t = 0.0
    nstep = 0
    while t < t_end - 1e-15:
        h = min(cfg.step, t_end - t)
        k1 = rhs(state)
        k2 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
        k3 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
        k4 = rhs(tuple(s + h * k for s, k in zip(state, k3)))
        state = tuple(
            s + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        )
        t += h
        nstep += 1
        if nstep % cfg.reorthonormalize_every == 0:
            state = renorm(state)
    return renorm(state)


def integrate_so3(p0, params: SRParams, t_end: float, cfg: IntegratorConfig | None = None,
                  t_eval=None):
    """RK4 trajectory of (R, p).  Returns a list of (t, R, p) at ``t_eval``.

    ``p0`` may be a single covector (3,) or a batch (..., 3); rotations start
    at the identity.  ``t_eval`` defaults to [t_end].
    """
    cfg = cfg or IntegratorConfig()
    p = np.array(p0, dtype=float)
    a2 = params.a * params.a
    sq = np.sqrt(1.0 - a2)
    R = np.broadcast_to(np.eye(3), p.shape[:-1] + (3, 3)).copy()

    def rhs(state):
        R_, p_ = state
        return (R_ @ _omega_matrix(p_, sq), _momentum_rhs(p_, a2))

    def renorm(state):
        return (_orthonormalize_rows(state[0]), state[1])

    times = [float(t_end)] if t_eval is None else [float(t) for t in t_eval]
    out = []
    state = (R, p)
    prev = 0.0
    for t in times:
        if t < prev:
            raise ValueError("t_eval must be nondecreasing")
        state = _rk4(state, rhs, t - prev, cfg, renorm)
        prev = t
        out.append((t, state[0].copy(), state[1].copy()))
    return out


def integrate_quat(p0, params: SRParams, t_end: float, cfg: IntegratorConfig | None = None,
                   t_eval=None):
    """RK4 trajectory of (q, p) for the lifted system on S^3, q(0) = 1."""
    cfg = cfg or IntegratorConfig()
    p = np.array(p0, dtype=float)
    a2 = params.a * params.a
    sq = np.sqrt(1.0 - a2)
    q = np.broadcast_to(np.array([1.0, 0.0, 0.0, 0.0]), p.shape[:-1] + (4,)).copy()

    def rhs(state):
        q_, p_ = state
        # q' = q/2 * (p2 sq i + p1 j); right product by an imaginary quaternion
        w, x, y, z = q_[..., 0], q_[..., 1], q_[..., 2], q_[..., 3]
        ox, oy = sq * p_[..., 1], p_[..., 0]
        dq = 0.5 * np.stack(
            [-x * ox - y * oy, w * ox - z * oy, w * oy + z * ox, x * oy - y * ox],
            axis=-1,
        )
        return (dq, _momentum_rhs(p_, a2))

    def renorm(state):
        q_, p_ = state
        return (q_ / np.linalg.norm(q_, axis=-1, keepdims=True), p_)

    times = [float(t_end)] if t_eval is None else [float(t) for t in t_eval]
    out = []
    state = (q, p)
    prev = 0.0
    for t in times:
        if t < prev:
            raise ValueError("t_eval must be nondecreasing")
        state = _rk4(state, rhs, t - prev, cfg, renorm)
        prev = t
        out.append((t, state[0].copy(), state[1].copy()))
    return out


def integrate_sphere(gamma0, p0, params: SRParams, t_end: float,
                     cfg: IntegratorConfig | None = None, t_eval=None):
    """RK4 trajectory of gamma on S^2 driven by the momentum system."""
    cfg = cfg or IntegratorConfig()
    g = np.array(gamma0, dtype=float)
    p = np.array(p0, dtype=float)
    a2 = params.a * params.a
    sq = np.sqrt(1.0 - a2)

    def rhs(state):
        g_, p_ = state
        omega = np.stack([sq * p_[..., 1], p_[..., 0], np.zeros_like(p_[..., 0])], axis=-1)
        return (np.cross(g_, omega), _momentum_rhs(p_, a2))

    def renorm(state):
        g_, p_ = state
        return (g_ / np.linalg.norm(g_, axis=-1, keepdims=True), p_)

    times = [float(t_end)] if t_eval is None else [float(t) for t in t_eval]
    out = []
    state = (g, p)
    prev = 0.0
    for t in times:
        if t < prev:
            raise ValueError("t_eval must be nondecreasing")
        state = _rk4(state, rhs, t - prev, cfg, renorm)
        prev = t
        out.append((t, state[0].copy(), state[1].copy()))
    return out
