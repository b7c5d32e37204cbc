"""Bracketed bisection for monotone / sign-changing scalar functions."""

from __future__ import annotations


def bisect_root(f, lo: float, hi: float, xtol: float = 1e-12, maxiter: int = 200) -> float:
    """Root of f on [lo, hi] given f(lo) and f(hi) of opposite (or zero) sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < xtol:
            return mid
        if (fmid > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
