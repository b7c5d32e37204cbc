"""Sub-Riemannian geodesics on SO(3) and almost-Riemannian geodesics on S^2.

Closed-form geodesic machinery for the one-parameter family of left-invariant
rank-2 metrics on SO(3) (invariant a in (0,1)): pendulum action-angle
coordinates for the momentum, elliptic-function exponential map and its
quaternion lift, periodic geodesics, symmetry-based Maxwell-point detection,
the projected almost-Riemannian problem on the two-sphere, and cut-time
bounds.  Every closed form is cross-validated against a fixed-step RK4 oracle
(:mod:`srgeo.verifier`).
"""

from .expmap import exp, exp_quat, sample_geodesic
from .pendulum import EllipticData, Region, SRParams, Tolerances, classify, to_elliptic

__all__ = [
    "EllipticData",
    "Region",
    "SRParams",
    "Tolerances",
    "classify",
    "exp",
    "exp_quat",
    "sample_geodesic",
    "to_elliptic",
]
__version__ = "0.1.0"
