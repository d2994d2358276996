"""Radial profiles: scalar functions of the area radius with two derivatives.

A profile evaluates its value and first two derivatives at radii inside an
open interval. Derivatives are either supplied in closed form or produced by
central finite differences on the value; the ``mode`` attribute records which,
so callers can pick tolerances accordingly.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, NumericsError

_EPS = float(np.finfo(float).eps)

MODE_CLOSED_FORM = "closed-form"
MODE_FINITE_DIFFERENCE = "finite-difference"


def _fd_step(r):
    # Cube-root-of-eps step, floored so tiny radii do not starve the stencil.
    return np.maximum(_EPS ** (1.0 / 3.0) * (1.0 + np.abs(r)), 1e-6)


class RadialProfile:
    """A scalar function of r on an open interval with two derivatives.

    Parameters
    ----------
    value : callable
        Vectorized map r -> f(r).
    d1, d2 : callable, optional
        Closed-form first and second derivatives. Both must be given for the
        profile to be in closed-form mode; otherwise central differences on
        ``value`` are used and ``mode`` reports "finite-difference".
    domain : pair of floats
        Open interval of validity.
    """

    def __init__(
        self,
        value: Callable,
        d1: Optional[Callable] = None,
        d2: Optional[Callable] = None,
        domain: tuple[float, float] = (0.0, np.inf),
    ):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise DomainError(f"empty profile domain ({lo}, {hi})")
        self._value = value
        self._d1 = d1
        self._d2 = d2
        self.domain = (lo, hi)
        self.mode = MODE_CLOSED_FORM if (d1 is not None and d2 is not None) else MODE_FINITE_DIFFERENCE

    def require_inside(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.domain
        if np.any(r <= lo) or np.any(r >= hi):
            bad = r if r.ndim == 0 else r[(r <= lo) | (r >= hi)][0]
            raise DomainError(f"radius {float(bad)} outside open domain ({lo}, {hi})")

    def _check_finite(self, out, what):
        if not np.all(np.isfinite(out)):
            raise NumericsError(f"profile {what} is non-finite inside the domain")
        return out

    def value(self, r):
        self.require_inside(r)
        out = np.asarray(self._value(np.asarray(r, dtype=float)), dtype=float)
        return self._check_finite(out, "value")[()]

    __call__ = value

    def d1(self, r):
        self.require_inside(r)
        r = np.asarray(r, dtype=float)
        if self._d1 is not None:
            out = np.asarray(self._d1(r), dtype=float)
        else:
            h = self._fd_safe_step(r)
            out = (self._value(r + h) - self._value(r - h)) / (2.0 * h)
        return self._check_finite(out, "first derivative")[()]

    def d2(self, r):
        self.require_inside(r)
        r = np.asarray(r, dtype=float)
        if self._d2 is not None:
            out = np.asarray(self._d2(r), dtype=float)
        else:
            h = self._fd_safe_step(r)
            out = (self._value(r + h) - 2.0 * self._value(r) + self._value(r - h)) / (h * h)
        return self._check_finite(out, "second derivative")[()]

    def _fd_safe_step(self, r):
        # Shrink the stencil near the domain edges so r +/- h stays inside.
        lo, hi = self.domain
        h = _fd_step(r)
        gap = np.minimum(r - lo, hi - r) * 0.5
        h = np.where(gap < h, gap, h)
        if np.any(h <= 0):
            raise DomainError("radius too close to the domain edge for a difference stencil")
        return h


def constant_profile(c: float, domain=(0.0, np.inf)) -> RadialProfile:
    return RadialProfile(
        lambda r: np.full_like(np.asarray(r, dtype=float), float(c)),
        d1=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        d2=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        domain=domain,
    )


def tabulated_profile(radii, values) -> RadialProfile:
    """Cubic-spline profile through strictly increasing sample radii.

    The spline's own derivatives back d1/d2, but interpolation error scales
    like a difference scheme, so the profile reports finite-difference mode
    and callers should use the loose tolerance.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.ndim != 1 or radii.size < 4:
        raise DomainError("need at least 4 samples for a cubic table profile")
    if np.any(np.diff(radii) <= 0):
        raise DomainError("table radii must be strictly increasing")
    if not (np.all(np.isfinite(radii)) and np.all(np.isfinite(values))):
        raise NumericsError("non-finite entries in table")
    spline = CubicSpline(radii, values)
    prof = RadialProfile(spline, domain=(radii[0], radii[-1]))
    # Spline derivatives are exact derivatives of the interpolant; keep them,
    # but leave the mode at finite-difference: accuracy is set by the table.
    prof._d1 = spline.derivative(1)
    prof._d2 = spline.derivative(2)
    prof.mode = MODE_FINITE_DIFFERENCE
    return prof
