"""Sense-preserving harmonic maps ``f = h + conj(g)`` with ``g' = omega h'``.

The analytic part ``h`` is an F(alpha) member (or the identity test double)
and ``omega`` is an analytic self-map of the disk.  Covers both harmonic
pre-Schwarzian conventions, the ``f_t`` extremal family, the univalence test
``|omega| <= 1 - alpha |z| (1 + |z|)`` and the Bloch constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ._complex import from_pair, to_pair
from .blaschke import BlaschkeProduct
from .derivatives import DEFAULT_BUDGET, BoundReport, NormEstimate, hyperbolic_sup
from .errors import (
    AdmissibilityViolation,
    AlphaOutOfTheoremRange,
    DegenerateJacobian,
    InvalidInput,
    NotASquareDilatation,
)
from .family import CertificateReport, DiscreteMeasure, FAlphaFunction, GridSpec, function_from_spec
from .optimize import golden_max

JACOBIAN_FLOOR = 1e-14

ZERO, MOEBIUS, BLASCHKE, SQUARE_OF = "zero", "moebius", "blaschke", "square_of"


@dataclass(frozen=True)
class Dilatation:
    """``omega`` as one of: zero, a disk automorphism ``(z - a)/(1 - conj(a) z)``,
    a finite Blaschke product, or the square of a zero/Moebius/Blaschke ``q``."""

    kind: str
    phi: Optional[BlaschkeProduct] = None
    inner: Optional["Dilatation"] = None

    @classmethod
    def zero(cls) -> "Dilatation":
        return cls(ZERO)

    @classmethod
    def moebius(cls, a: complex) -> "Dilatation":
        return cls(MOEBIUS, BlaschkeProduct((complex(a),)))

    @classmethod
    def blaschke(cls, phi: BlaschkeProduct) -> "Dilatation":
        if phi.degree == 0:
            raise InvalidInput("a unimodular constant dilatation is not sense-preserving")
        return cls(BLASCHKE, phi)

    @classmethod
    def square_of(cls, q: "Dilatation") -> "Dilatation":
        if q.kind not in (ZERO, MOEBIUS, BLASCHKE):
            raise InvalidInput("square_of needs a zero, Moebius or Blaschke inner map")
        return cls(SQUARE_OF, inner=q)

    @property
    def a(self) -> complex:
        if self.kind != MOEBIUS:
            raise AttributeError("only Moebius dilatations have a parameter")
        return self.phi.zeros[0]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == ZERO:
            return np.zeros(z.shape, dtype=complex)[()]
        if self.kind == SQUARE_OF:
            q = self.inner(z)
            return q * q
        return self.phi(z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == ZERO:
            return np.zeros(z.shape, dtype=complex)[()]
        if self.kind == SQUARE_OF:
            return 2.0 * self.inner(z) * self.inner.derivative(z)
        return self.phi.derivative(z)

    def one_minus_abs2(self, z):
        """``1 - |omega(z)|^2`` evaluated without cancellation near the circle."""
        z = np.asarray(z, dtype=complex)
        if self.kind == ZERO:
            return np.ones(z.shape)[()]
        if self.kind == SQUARE_OF:
            q2 = np.abs(self.inner(z)) ** 2
            return self.inner.one_minus_abs2(z) * (1.0 + q2)
        return self.phi.one_minus_abs2(z)

    def to_dict(self) -> dict[str, Any]:
        if self.kind == ZERO:
            return {"kind": ZERO}
        if self.kind == MOEBIUS:
            return {"kind": MOEBIUS, "a": to_pair(self.a)}
        if self.kind == BLASCHKE:
            return {"kind": BLASCHKE, **self.phi.to_dict()}
        return {"kind": SQUARE_OF, "q": self.inner.to_dict()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Dilatation":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidInput("field 'dilatation': expected an object with a 'kind'")
        kind = data["kind"]
        if kind == ZERO:
            return cls.zero()
        if kind == MOEBIUS:
            if "a" not in data:
                raise InvalidInput("field 'dilatation.a' is required for a Moebius dilatation")
            return cls.moebius(from_pair(data["a"], "dilatation.a"))
        if kind == BLASCHKE:
            return cls.blaschke(BlaschkeProduct.from_dict(data))
        if kind == SQUARE_OF:
            if "q" not in data:
                raise InvalidInput("field 'dilatation.q' is required for square_of")
            return cls.square_of(cls.from_dict(data["q"]))
        raise InvalidInput(f"field 'dilatation.kind': unknown kind {kind!r}")


def coupled_dilatation(alpha: float) -> Dilatation:
    """``omega(z) = (z + alpha/3) / (1 + alpha z / 3)``, the dilatation tied to ``alpha``."""
    b = alpha / 3.0
    if not 0.0 < b < 1.0:
        raise InvalidInput(f"alpha/3 = {b} must lie in (0, 1)")
    return Dilatation.moebius(-b)


@dataclass(frozen=True)
class HarmonicMap:
    analytic: Any
    dilatation: Dilatation

    @classmethod
    def with_coupled_dilatation(cls, h) -> "HarmonicMap":
        return cls(h, coupled_dilatation(h.alpha))

    @property
    def alpha(self) -> float:
        return self.analytic.alpha

    def gprime(self, z):
        return self.dilatation(z) * self.analytic.fprime(z)

    def jacobian(self, z):
        return np.abs(self.analytic.fprime(z)) ** 2 * self.dilatation.one_minus_abs2(z)

    def to_spec(self) -> dict[str, Any]:
        return {"analytic": self.analytic.to_spec(), "dilatation": self.dilatation.to_dict()}

    @classmethod
    def from_spec(cls, data: dict[str, Any]) -> "HarmonicMap":
        if not isinstance(data, dict):
            raise InvalidInput("harmonic spec must be a JSON object")
        if "analytic" not in data:
            raise InvalidInput("harmonic spec is missing field 'analytic'")
        if "dilatation" not in data:
            raise InvalidInput("harmonic spec is missing field 'dilatation'")
        return cls(function_from_spec(data["analytic"]), Dilatation.from_dict(data["dilatation"]))


def hm_pre_schwarzian(f: HarmonicMap, z):
    """``(log J_f)_z = h''/h' - conj(omega) omega' / (1 - |omega|^2)``."""
    z = np.asarray(z, dtype=complex)
    gap = f.dilatation.one_minus_abs2(z)
    if np.any(gap < JACOBIAN_FLOOR):
        raise DegenerateJacobian(f"1 - |omega|^2 = {np.min(gap):.3e} below {JACOBIAN_FLOOR}")
    w = f.dilatation(z)
    return f.analytic.log_derivative(z) - np.conj(w) * f.dilatation.derivative(z) / gap


def kks_pre_schwarzian(f: HarmonicMap, z):
    """``2 d/dz log(|h'| + |g'|) = h''/h' + 2 conj(q) q' / (1 + |q|^2)`` for ``omega = q^2``."""
    if f.dilatation.kind != SQUARE_OF:
        raise NotASquareDilatation(f"dilatation of kind {f.dilatation.kind!r} is not declared as a square")
    z = np.asarray(z, dtype=complex)
    q = f.dilatation.inner(z)
    dq = f.dilatation.inner.derivative(z)
    return f.analytic.log_derivative(z) + 2.0 * np.conj(q) * dq / (1.0 + np.abs(q) ** 2)


def hm_pre_schwarzian_norm(f: HarmonicMap, budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Estimated ``||P_f||`` together with the bound ``2 alpha + 1``."""
    est = hyperbolic_sup(1, lambda z: hm_pre_schwarzian(f, z), budget)
    return BoundReport(est, 2.0 * f.alpha + 1.0)


def extremal_member(alpha: float, t: float) -> HarmonicMap:
    """``f_t``: ``h' = (1 - z)^-alpha`` with ``omega_t(z) = (z - t)/(1 - t z)``."""
    h = FAlphaFunction(alpha, DiscreteMeasure.from_pairs([(1.0, 1.0)]))
    return HarmonicMap(h, Dilatation.moebius(t))


# ---------------------------------------------------------------- f_t profile


@dataclass
class FtProfile:
    alpha: float
    t: float
    r0: float
    Mt: float
    Mt_argmax: float
    Mt_printed: float
    flagged: bool

    @property
    def printed_gap(self) -> float:
        return self.Mt_printed - self.Mt

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "t": self.t,
            "r0": self.r0,
            "Mt": self.Mt,
            "Mt_argmax": self.Mt_argmax,
            "Mt_printed_formula": self.Mt_printed,
            "printed_gap": self.printed_gap,
            "flagged": self.flagged,
        }


def ft_ray_profile(alpha: float, t: float, r):
    """``alpha (1 + r) - (r - t)/(1 - t r)``: weighted ``|P_{f_t}|`` on ``[0, 1)``."""
    return alpha * (1.0 + r) - (r - t) / (1.0 - t * r)


def ft_admissible(alpha: float, t: float) -> bool:
    if not 0.0 < t < 1.0 or alpha <= 0.0:
        return False
    if alpha < 1.0:
        lower_ok = t >= math.sqrt(1.0 - alpha)
    else:
        denom = 3.0 - 2.0 * alpha
        lower_ok = denom > 0.0 and t >= (1.0 - 2.0 * alpha) / denom
    if not lower_ok:
        return False
    r0 = (1.0 - math.sqrt((1.0 - t * t) / alpha)) / t
    return 0.0 <= r0 < 1.0


def extremal_ft_profile(alpha: float, t: float, flag_tol: float = 1e-9) -> FtProfile:
    """Closed-form stationary point ``r0`` and the numerically maximized ``M_t``.

    ``M_t`` comes from golden-section on the ray profile; the closed-form value
    ``(1/t)(1 + 2 alpha - 2 alpha sqrt((1 - t^2)/alpha))`` is reported next to
    it and ``flagged`` marks any disagreement beyond ``flag_tol``.
    """
    if not ft_admissible(alpha, t):
        raise AdmissibilityViolation(f"t = {t} is not admissible for alpha = {alpha}")
    root = math.sqrt((1.0 - t * t) / alpha)
    r0 = (1.0 - root) / t
    r_star, m, _ = golden_max(lambda r: ft_ray_profile(alpha, t, r), 0.0, 1.0, tol=1e-12)
    printed = (1.0 + 2.0 * alpha - 2.0 * alpha * root) / t
    return FtProfile(alpha, t, r0, m, r_star, printed, abs(printed - m) > flag_tol)


# ------------------------------------------------------------ univalence test


def univalence_criterion_t52(f: HarmonicMap, grid: GridSpec = GridSpec()) -> CertificateReport:
    """min over the grid of ``1 - alpha |z| (1 + |z|) - |omega(z)|``; needs ``alpha in (0, 1/2)``."""
    alpha = f.alpha
    if not 0.0 < alpha < 0.5:
        raise AlphaOutOfTheoremRange(f"univalence criterion needs alpha in (0, 1/2), got {alpha}")
    z = grid.points()
    r = np.abs(z)
    vals = 1.0 - alpha * r * (1.0 + r) - np.abs(f.dilatation(z))
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    return CertificateReport(float(vals[idx]), complex(z[idx]), grid)


def sense_preserving_certificate(f: HarmonicMap, grid: GridSpec = GridSpec()) -> CertificateReport:
    """min of ``1 - |omega|`` on the grid; also records the smallest Jacobian seen."""
    z = grid.points()
    vals = 1.0 - np.abs(f.dilatation(z))
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    jac = f.jacobian(z)
    return CertificateReport(
        float(vals[idx]), complex(z[idx]), grid, tol=0.0, extra={"jacobian_min": float(jac.min())}
    )


def schwarz_pick_residual(omega: Dilatation, z):
    """``(1 - |omega|^2) - |omega'| (1 - |z|^2)``, nonnegative for self-maps of the disk."""
    z = np.asarray(z, dtype=complex)
    az = np.abs(z)
    return omega.one_minus_abs2(z) - np.abs(omega.derivative(z)) * (1.0 - az) * (1.0 + az)


# ------------------------------------------------------------------- Bloch


def lambda_f(f: HarmonicMap, z):
    """``|h'(z)| (1 + |omega(z)|)``."""
    return np.abs(f.analytic.fprime(z)) * (1.0 + np.abs(f.dilatation(z)))


def bloch_constant(f: HarmonicMap, budget: int = DEFAULT_BUDGET) -> NormEstimate:
    return hyperbolic_sup(1, lambda z: lambda_f(f, z), budget)


def _roots_in_unit_interval(coeffs) -> list[float]:
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if coeffs.size < 2:
        return []
    roots = np.roots(coeffs)
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0)
    return real


def bloch_xi(alpha: float, r):
    return (1.0 - r * r) * (1.0 + r) ** (1.0 - alpha) / (3.0 + alpha * r)


def bloch_bound_t71(alpha: float) -> dict[str, Any]:
    """Three routes to ``(3 + alpha) sup_{0<=r<1} xi(r)``.

    ``direct_sup`` maximizes ``xi`` by golden-section and is authoritative.
    The other entries evaluate the bound at the root in ``(0, 1)`` of the
    quadratic ``3 - 4a + (4a - a^2 - 9) r - (a^2 - 2a) r^2`` and of the quartic
    ``6 - a - 18 r^2 - (4a + 12) r^3 - 3a r^4`` (``None`` when no root lies in
    ``(0, 1)``), plus the root of the stationarity condition of ``xi`` itself,
    ``3 - 4a + (4a - a^2 - 9) r + (a^2 - 2a) r^2 = 0``.
    """
    a = float(alpha)
    if not 0.0 < a < 2.0:
        raise AlphaOutOfTheoremRange(f"Bloch bound needs alpha in (0, 2), got {a}")
    r_star, xi_max, _ = golden_max(lambda r: bloch_xi(a, r), 0.0, 1.0, tol=1e-12)
    scale = 3.0 + a

    def bound_at(roots):
        if not roots:
            return None, None
        r = roots[0]
        return r, scale * float(bloch_xi(a, r))

    quad_r, quad_b = bound_at(_roots_in_unit_interval([-(a * a - 2 * a), 4 * a - a * a - 9, 3 - 4 * a]))
    quart_r, quart_b = bound_at(_roots_in_unit_interval([-3 * a, -(4 * a + 12), -18.0, 0.0, 6 - a]))
    stat_r, stat_b = bound_at(_roots_in_unit_interval([a * a - 2 * a, 4 * a - a * a - 9, 3 - 4 * a]))
    candidates = [b for b in (quad_b, quart_b) if b is not None]
    return {
        "alpha": a,
        "direct_sup": scale * xi_max,
        "direct_argmax": r_star,
        "quadratic_root": quad_r,
        "quadratic_bound": quad_b,
        "quartic_root": quart_r,
        "quartic_bound": quart_b,
        "stationary_root": stat_r,
        "stationary_bound": stat_b,
        "roots_disagree": (quad_r is None) != (quart_r is None)
        or (quad_r is not None and abs(quad_r - quart_r) > 1e-9),
        "direct_dominates": all(scale * xi_max >= b - 1e-12 for b in candidates),
    }


def dilatation_range_check(omega: Dilatation, radii=(0.0, 0.25, 0.5, 0.75, 0.9, 0.99), n_angular: int = 256, tol: float = 1e-10) -> dict[str, Any]:
    """Check ``|r - b|/(1 - r b) <= |omega| <= (r + b)/(1 + r b)`` on circles ``|z| = r``, ``b = |omega(0)|``."""
    if omega.kind != MOEBIUS:
        raise InvalidInput("range check applies to Moebius dilatations")
    b = abs(omega.a)
    if not 0.0 < b < 1.0:
        raise InvalidInput(f"|omega(0)| = {b} must lie in (0, 1)")
    rows = []
    ok = True
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    for r in radii:
        mod = np.abs(omega(r * np.exp(1j * theta)))
        lower = abs(r - b) / (1.0 - r * b)
        upper = (r + b) / (1.0 + r * b)
        row_ok = bool(mod.min() >= lower - tol and mod.max() <= upper + tol)
        ok &= row_ok
        rows.append({"r": r, "lower": lower, "upper": upper, "min": float(mod.min()), "max": float(mod.max()), "ok": row_ok})
    return {"b": b, "rows": rows, "ok": ok}
