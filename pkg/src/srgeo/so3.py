"""Quaternion algebra, so(3) basis, and the double cover S^3 -> SO(3).

Quaternions are numpy arrays ``(q0, q1, q2, q3)`` in w-x-y-z order, rotations
are 3x3 row-major arrays.  The triple identification between so(3) matrices,
imaginary quaternions and R^3 vectors is fixed by ``hat``/``vee`` mapping the
standard basis e1, e2, e3 onto the skew generators A1, A2, A3.
"""

from __future__ import annotations

import numpy as np

from .errors import InvariantViolation

A1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
A2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
A3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

QUAT_ONE = np.array([1.0, 0.0, 0.0, 0.0])


def quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product p*q, renormalized to unit length.

    Broadcasts over leading axes; the renormalization controls drift in long
    factor chains.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    out = np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def quat_conj(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_to_rotation(q: np.ndarray) -> np.ndarray:
    """Project a unit quaternion to SO(3); q and -q map to the same rotation."""
    q0, q1, q2, q3 = np.asarray(q, dtype=float)
    return np.array(
        [
            [q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q0 * q2 + q1 * q3)],
            [2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1)],
            [2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3],
        ]
    )


def axis_angle_quat(axis: np.ndarray, beta: float) -> np.ndarray:
    """Unit quaternion of the rotation about ``axis`` by angle ``beta``."""
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValueError("rotation axis must be nonzero")
    h = 0.5 * beta
    out = np.empty(4)
    out[0] = np.cos(h)
    out[1:] = axis / norm * np.sin(h)
    return out


def hat(v: np.ndarray) -> np.ndarray:
    """R^3 -> so(3): hat(e_i) = A_i, [hat(a), hat(b)] = hat(a x b)."""
    x, y, z = np.asarray(v, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(M: np.ndarray) -> np.ndarray:
    """so(3) -> R^3, inverse of :func:`hat`."""
    M = np.asarray(M, dtype=float)
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def killing_inner(x: np.ndarray, y: np.ndarray) -> float:
    """Killing-form inner product -tr(hat(x) hat(y))/2 = <x, y>."""
    return float(-0.5 * np.trace(hat(x) @ hat(y)))


def basis_rotation(i: int, angle: float) -> np.ndarray:
    """exp(angle * A_i) for i in {1, 2, 3}."""
    c, s = np.cos(angle), np.sin(angle)
    if i == 1:
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if i == 2:
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if i == 3:
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    raise ValueError(f"axis index must be 1, 2 or 3, got {i}")


def check_rotation(R: np.ndarray, tol: float = 1e-10) -> None:
    """Raise InvariantViolation unless R^T R = Id and det R = 1 within tol.

    Deliberately not a repair: silently re-orthonormalizing would mask formula
    bugs upstream.
    """
    R = np.asarray(R, dtype=float)
    defect = np.max(np.abs(R.T @ R - np.eye(3)))
    if defect > tol:
        raise InvariantViolation(f"rotation orthogonality defect {defect:.3e} > {tol:.1e}")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise InvariantViolation(f"rotation determinant {np.linalg.det(R)} != 1")


def check_unit_quaternion(q: np.ndarray, tol: float = 1e-12) -> None:
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > tol:
        raise InvariantViolation(f"quaternion norm {n} deviates from 1 by more than {tol:.1e}")
