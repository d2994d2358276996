"""Pointwise residuals of the static electro-vacuum equations.

Each defining equation gets a short tag; a report stores, per tag, the max
absolute residual over a radial grid, the radius where it is attained, and a
pass/fail verdict against one identity tolerance. Equations that hold
structurally for radial data (closedness of V E-flat, umbilicity of round
slices) are reported as structural passes with residual 0.

The equations, in orthonormal-frame components (rad/tan), with E = |E|:

  E1   Hess V = V (Ric - 2 lam/(n-1) g + 2 E-flat x E-flat - 2E^2/(n-1) g)
  E2   Lap V  = V (2(n-2)/(n-1) E^2 - 2 lam/(n-1))
  E3a  div E = 0
  E3b  d(V E-flat) = 0                        [structural for radial data]
  E4   (dV/dnu) gamma = V B on the boundary   [tangential Robin form]
  TE1  Lap V = V (R - 2n lam/(n-1) - 2 E^2/(n-1))
  TE2  dV/dnu = H/(n-1) V at the boundary radius
  NE1  R = 2 E^2 + 2 lam
  NE2  B = H/(n-1) gamma                      [structural for round slices]
  AE1  Hess V - (Lap V) g - V Ric = 2V (E-flat x E-flat - E^2 g)
  TRACE_AE  Lap V = (-R/(n-1) + 2 E^2) V
  PEM1 Hess V = V Ric + (2/V) dPsi x dPsi - 2/((n-1)V) |dPsi|^2 g
  PEM2 Lap V = 2(n-2)/((n-1)V) |dPsi|^2
  PEM3 div(grad Psi / V) = 0
  PEM4 boundary Robin form of the Psi system  [same form as E4]
  NPEM1 R = 2 |dPsi|^2 / V^2

The lam terms cancel in AE1, so the system/master equivalence is exercised at
any lam; the Psi-form equations are stated for lam = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegeneracyError, DomainError, NumericsError
from .geometry import (
    SphericalStaticData,
    hessian_radial,
    laplacian_radial,
    level_set_geometry,
    ricci_radial,
    scalar_curvature,
)
from .profiles import MODE_CLOSED_FORM

DEGENERATE_V = 1e-9
TOL_CLOSED_FORM = 1e-9
TOL_FINITE_DIFFERENCE = 1e-5

EQUATION_TAGS = {
    "E1": "Hessian equation for the potential",
    "E2": "Laplace equation for the potential",
    "E3a": "divergence-free electric field",
    "E3b": "closedness of V E-flat",
    "E4": "Robin boundary condition (tensor form)",
    "TE1": "traced Hessian equation",
    "TE2": "Robin boundary condition (traced form)",
    "NE1": "scalar curvature identity R = 2E^2 + 2 lam",
    "NE2": "umbilicity of the boundary",
    "AE1": "master equation (potential-independent form)",
    "TRACE_AE": "trace of the master equation",
    "PEM1": "Hessian equation, electric-potential form",
    "PEM2": "Laplace equation, electric-potential form",
    "PEM3": "conservation div(grad Psi / V) = 0",
    "PEM4": "Robin boundary condition, electric-potential form",
    "NPEM1": "scalar curvature identity R = 2|dPsi|^2/V^2",
}


@dataclass(frozen=True)
class TagResult:
    tag: str
    max_residual: float
    worst_radius: Optional[float]
    passed: bool
    note: Optional[str] = None
    skipped: int = 0

    def to_dict(self):
        out = {
            "tag": self.tag,
            "max_residual": self.max_residual,
            "worst_radius": self.worst_radius,
            "passed": self.passed,
        }
        if self.note is not None:
            out["note"] = self.note
        if self.skipped:
            out["skipped_points"] = self.skipped
        return out


@dataclass(frozen=True)
class GridSpec:
    """Radial evaluation grid: count points on [lo, hi], log or linear."""

    lo: float
    hi: float
    count: int = 1000
    spacing: str = "log"

    def __post_init__(self):
        if not (0 <= self.lo < self.hi and np.isfinite(self.hi)):
            raise DomainError(f"bad grid interval [{self.lo}, {self.hi}]")
        if self.count < 2:
            raise DomainError("grid needs at least 2 points")
        if self.spacing not in ("log", "linear"):
            raise DomainError(f"unknown grid spacing {self.spacing!r}")
        if self.spacing == "log" and self.lo <= 0:
            raise DomainError("log spacing needs a positive lower endpoint")

    def radii(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> str:
        return f"{self.count} {self.spacing}-spaced radii in [{self.lo:.6g}, {self.hi:.6g}]"


def default_grid(data: SphericalStaticData, count: int = 1000) -> GridSpec:
    """Grid hugging the data domain: from just above r0 (or half the
    characteristic radius when the domain reaches 0) out to 100 max(1, r0)."""
    r0 = data.domain[0]
    lo = 1.01 * r0 if r0 > 0 else 0.5 * data.r_scale
    hi = 100.0 * max(1.0, r0)
    return GridSpec(lo=lo, hi=hi, count=count, spacing="log")


def default_tolerance(data: SphericalStaticData) -> float:
    profs = [data.A, data.V, data.Emag] + ([data.Psi] if data.Psi is not None else [])
    if all(p.mode == MODE_CLOSED_FORM for p in profs):
        return TOL_CLOSED_FORM
    return TOL_FINITE_DIFFERENCE


@dataclass
class ResidualReport:
    entries: dict[str, TagResult]
    grid: str
    tolerance: float
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def to_dict(self):
        out = {
            "grid": self.grid,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "equations": {tag: e.to_dict() for tag, e in self.entries.items()},
        }
        if self.extras:
            out["extras"] = self.extras
        return out


def _tag_from_values(tag, rs, res, tol, note=None, skipped=0) -> TagResult:
    res = np.abs(np.asarray(res, dtype=float))
    if res.size == 0:
        raise DegeneracyError(f"no checkable grid points for {tag}")
    if not np.all(np.isfinite(res)):
        raise NumericsError(f"non-finite residual for {tag}")
    i = int(np.argmax(res))
    mx = float(res[i])
    worst = float(np.asarray(rs, dtype=float).reshape(-1)[i]) if rs is not None else None
    return TagResult(tag=tag, max_residual=mx, worst_radius=worst,
                     passed=bool(mx <= tol), note=note, skipped=skipped)


def _structural(tag, note) -> TagResult:
    return TagResult(tag=tag, max_residual=0.0, worst_radius=None, passed=True, note=note)


class _Fields:
    """Shared pointwise quantities for the residual formulas."""

    def __init__(self, data: SphericalStaticData, rs: np.ndarray):
        n = data.n
        self.n = n
        self.rs = rs
        self.a = data.a_positive(rs)
        self.sa = np.sqrt(self.a)
        self.ap = data.A.d1(rs)
        self.v = data.V(rs)
        self.vp = data.V.d1(rs)
        self.e = data.Emag(rs)
        self.ep = data.Emag.d1(rs)
        self.ric = ricci_radial(data, rs)
        self.hess = hessian_radial(data, data.V, rs)
        self.lap = laplacian_radial(data, data.V, rs)
        self.R = scalar_curvature(data, rs)
        self.lam = data.lam
        if data.Psi is not None:
            self.psip = data.Psi.d1(rs)
            self.psipp = data.Psi.d2(rs)
            self.dpsi2 = self.psip * self.psip / self.a
        else:
            self.psip = self.psipp = self.dpsi2 = None


def residual_system(data: SphericalStaticData, grid: GridSpec,
                    tol: Optional[float] = None) -> ResidualReport:
    """Residuals of the first-order system E1, E2, E3a (E3b structural)."""
    tol = default_tolerance(data) if tol is None else tol
    rs = grid.radii()
    f = _Fields(data, rs)
    n, lam = f.n, f.lam
    e2 = f.e * f.e

    rhs_rad = f.ric.radial - 2.0 * lam / (n - 1) + 2.0 * e2 - 2.0 * e2 / (n - 1)
    rhs_tan = f.ric.tangential - 2.0 * lam / (n - 1) - 2.0 * e2 / (n - 1)
    e1 = np.maximum(np.abs(f.hess.radial - f.v * rhs_rad),
                    np.abs(f.hess.tangential - f.v * rhs_tan))
    e2_res = f.lap - f.v * (2.0 * (n - 2) / (n - 1) * e2 - 2.0 * lam / (n - 1))
    e3a = (f.ep + (n - 1) * f.e / rs) / f.sa

    entries = {
        "E1": _tag_from_values("E1", rs, e1, tol),
        "E2": _tag_from_values("E2", rs, e2_res, tol),
        "E3a": _tag_from_values("E3a", rs, e3a, tol),
        "E3b": _structural("E3b", "radial 1-form f(r) dr is closed identically"),
    }
    return ResidualReport(entries=entries, grid=grid.describe(), tolerance=tol)


def residual_master(data: SphericalStaticData, grid: GridSpec,
                    tol: Optional[float] = None) -> ResidualReport:
    """Residual of the master equation AE1 (both frame components)."""
    tol = default_tolerance(data) if tol is None else tol
    rs = grid.radii()
    f = _Fields(data, rs)
    e2 = f.e * f.e
    rad = f.hess.radial - f.lap - f.v * f.ric.radial
    tan = f.hess.tangential - f.lap - f.v * f.ric.tangential + 2.0 * f.v * e2
    ae1 = np.maximum(np.abs(rad), np.abs(tan))
    entries = {"AE1": _tag_from_values("AE1", rs, ae1, tol)}
    return ResidualReport(entries=entries, grid=grid.describe(), tolerance=tol)


def residual_traced(data: SphericalStaticData, grid: GridSpec,
                    tol: Optional[float] = None,
                    r_boundary: Optional[float] = None) -> ResidualReport:
    """Residuals of the traced equations TE1 and TRACE_AE on the grid, plus
    the boundary forms TE2/E4 at r_boundary when one is supplied."""
    tol = default_tolerance(data) if tol is None else tol
    rs = grid.radii()
    f = _Fields(data, rs)
    n, lam = f.n, f.lam
    e2 = f.e * f.e

    te1 = f.lap - f.v * (f.R - 2.0 * n * lam / (n - 1) - 2.0 * e2 / (n - 1))
    trace_ae = f.lap - (-f.R / (n - 1) + 2.0 * e2) * f.v
    entries = {
        "TE1": _tag_from_values("TE1", rs, te1, tol),
        "TRACE_AE": _tag_from_values("TRACE_AE", rs, trace_ae, tol),
    }
    if r_boundary is not None:
        geo = level_set_geometry(data, r_boundary)
        vb = data.V(r_boundary)
        te2 = geo.nuV - geo.H / (n - 1) * vb
        e4 = geo.nuV - vb * geo.B_tan
        entries["TE2"] = _tag_from_values("TE2", [r_boundary], [te2], tol)
        entries["E4"] = _tag_from_values(
            "E4", [r_boundary], [e4], tol,
            note="tangential component; round slices are umbilic")
    return ResidualReport(entries=entries, grid=grid.describe(), tolerance=tol)


def residual_pem(data: SphericalStaticData, grid: GridSpec,
                 tol: Optional[float] = None,
                 r_boundary: Optional[float] = None) -> ResidualReport:
    """Residuals of the electric-potential form of the system.

    Grid points with |V| < 1e-9 are skipped and counted, not failed; if every
    point is degenerate there is nothing to check and DegeneracyError is
    raised. Stated for lam = 0 data.
    """
    if data.Psi is None:
        raise DomainError("data has no electric potential; PEM residuals undefined")
    tol = default_tolerance(data) if tol is None else tol
    rs = grid.radii()
    f = _Fields(data, rs)
    n = f.n

    ok = np.abs(f.v) >= DEGENERATE_V
    skipped = int(np.size(ok) - np.count_nonzero(ok))
    if not np.any(ok):
        raise DegeneracyError("V is degenerate on the whole grid")
    rs_ok = rs[ok]
    v = f.v[ok]
    dpsi2 = f.dpsi2[ok]
    note = f"{skipped} grid points with |V| < {DEGENERATE_V:g} skipped" if skipped else None

    pem1_rad = f.hess.radial[ok] - (v * f.ric.radial[ok]
                                    + 2.0 * dpsi2 / v - 2.0 * dpsi2 / ((n - 1) * v))
    pem1_tan = f.hess.tangential[ok] - (v * f.ric.tangential[ok]
                                        - 2.0 * dpsi2 / ((n - 1) * v))
    pem1 = np.maximum(np.abs(pem1_rad), np.abs(pem1_tan))
    pem2 = f.lap[ok] - 2.0 * (n - 2) / (n - 1) * dpsi2 / v

    # div(grad Psi / V): frame component X = Psi'/(sqrt(A) V), divergence
    # X' + (n-1) X / r with X' expanded in closed form.
    a = f.a[ok]
    sa = f.sa[ok]
    ap = f.ap[ok]
    psip = f.psip[ok]
    psipp = f.psipp[ok]
    vp = f.vp[ok]
    X = psip / (sa * v)
    Xp = psipp / (sa * v) - psip * ap / (2.0 * a * sa * v) - psip * vp / (sa * v * v)
    pem3 = Xp + (n - 1) * X / rs_ok
    npem1 = f.R[ok] - 2.0 * dpsi2 / (v * v)

    entries = {
        "PEM1": _tag_from_values("PEM1", rs_ok, pem1, tol, note=note, skipped=skipped),
        "PEM2": _tag_from_values("PEM2", rs_ok, pem2, tol, note=note, skipped=skipped),
        "PEM3": _tag_from_values("PEM3", rs_ok, pem3, tol, note=note, skipped=skipped),
        "NPEM1": _tag_from_values("NPEM1", rs_ok, npem1, tol, note=note, skipped=skipped),
    }
    if r_boundary is not None:
        geo = level_set_geometry(data, r_boundary)
        vb = data.V(r_boundary)
        pem4 = geo.nuV - vb * geo.B_tan
        entries["PEM4"] = _tag_from_values("PEM4", [r_boundary], [pem4], tol)
    return ResidualReport(entries=entries, grid=grid.describe(), tolerance=tol)


def residual_identities(data: SphericalStaticData, grid: GridSpec,
                        tol: Optional[float] = None) -> ResidualReport:
    """Scalar curvature identity NE1 on the grid; NE2 structural."""
    tol = default_tolerance(data) if tol is None else tol
    rs = grid.radii()
    f = _Fields(data, rs)
    ne1 = f.R - 2.0 * f.e * f.e - 2.0 * f.lam
    entries = {
        "NE1": _tag_from_values("NE1", rs, ne1, tol),
        "NE2": _structural("NE2", "round slices are umbilic by construction"),
    }
    return ResidualReport(entries=entries, grid=grid.describe(), tolerance=tol)


def equivalence_property(data: SphericalStaticData, grid: GridSpec,
                         tol: Optional[float] = None) -> bool:
    """True iff the first-order system and the master equation agree on
    whether this data passes (both pass or both fail)."""
    sys_rep = residual_system(data, grid, tol)
    mas_rep = residual_master(data, grid, tol)
    return sys_rep.passed == mas_rep.passed


def verify_all(data: SphericalStaticData, grid: GridSpec,
               tol: Optional[float] = None,
               r_boundary: Optional[float] = None) -> ResidualReport:
    """Every applicable residual tag in one report (PEM only when Psi given)."""
    tol = default_tolerance(data) if tol is None else tol
    entries: dict[str, TagResult] = {}
    entries.update(residual_system(data, grid, tol).entries)
    entries.update(residual_master(data, grid, tol).entries)
    entries.update(residual_traced(data, grid, tol, r_boundary=r_boundary).entries)
    if data.Psi is not None:
        entries.update(residual_pem(data, grid, tol, r_boundary=r_boundary).entries)
    entries.update(residual_identities(data, grid, tol).entries)
    ordered = {t: entries[t] for t in EQUATION_TAGS if t in entries}
    return ResidualReport(entries=ordered, grid=grid.describe(), tolerance=tol)
