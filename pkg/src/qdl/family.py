"""Members of F(alpha) built from discrete probability measures on the circle.

A member is determined by ``alpha`` and atoms ``(zeta_k, t_k)``::

    f'(z)   = prod_k (1 - zeta_k z)^(-alpha t_k)
    f''/f'  = alpha * sum_k t_k zeta_k / (1 - zeta_k z)

Every base ``1 - zeta_k z`` has positive real part on the disk, so principal
logarithms per factor give a branch of ``log f'`` that is continuous on the
whole disk and vanishes at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import quadrature
from ._complex import from_pair, to_pair
from .blaschke import BlaschkeProduct, boundary_decomposition
from .errors import InvalidAlpha, InvalidInput, QDLError

ALPHA_MAX = 3.0
UNIMODULAR_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-10
ATOM_SEPARATION = 1e-10
CERTIFICATE_TOL = 1e-9


@dataclass(frozen=True)
class Atom:
    zeta: complex
    t: float

    def __post_init__(self):
        zeta = complex(self.zeta)
        t = float(self.t)
        if abs(abs(zeta) - 1.0) > UNIMODULAR_TOL:
            raise InvalidInput(f"atom location {zeta} is not on the unit circle")
        if not 0.0 < t <= 1.0:
            raise InvalidInput(f"atom weight {t} is not in (0, 1]")
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms, kept sorted by ``arg(zeta)``."""

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in self.atoms)
        if not atoms:
            raise InvalidInput("a measure needs at least one atom")
        atoms = tuple(sorted(atoms, key=lambda a: math.atan2(a.zeta.imag, a.zeta.real)))
        total = math.fsum(a.t for a in atoms)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidInput(f"atom weights sum to {total!r}, not 1")
        zetas = np.array([a.zeta for a in atoms])
        if len(atoms) > 1:
            gaps = np.abs(zetas[:, None] - zetas[None, :]) + 10.0 * np.eye(len(atoms))
            if gaps.min() <= ATOM_SEPARATION:
                raise InvalidInput("atom locations must be pairwise distinct")
        object.__setattr__(self, "atoms", atoms)

    @property
    def zetas(self) -> np.ndarray:
        return np.array([a.zeta for a in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.t for a in self.atoms])

    def rotated(self, theta: float) -> "DiscreteMeasure":
        rot = complex(math.cos(theta), math.sin(theta))
        return DiscreteMeasure(tuple(Atom(a.zeta * rot / abs(a.zeta * rot), a.t) for a in self.atoms))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[complex, float]]) -> "DiscreteMeasure":
        return cls(tuple(Atom(z, t) for z, t in pairs))

    @classmethod
    def from_density(cls, density: Callable[[np.ndarray], np.ndarray], n: int = 256) -> "DiscreteMeasure":
        """Trapezoidal discretization of ``density(theta) d theta`` on ``n`` equispaced nodes.

        The weights are renormalized to total mass one; nodes where the
        density vanishes are dropped.
        """
        theta = 2.0 * np.pi * np.arange(n) / n
        mass = np.asarray(density(theta), dtype=float) * (2.0 * np.pi / n)
        if np.any(mass < 0):
            raise InvalidInput("density must be nonnegative")
        keep = mass > 0
        mass = mass[keep] / mass[keep].sum()
        return cls(tuple(Atom(complex(math.cos(th), math.sin(th)), m) for th, m in zip(theta[keep], mass)))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= ALPHA_MAX:
        raise InvalidAlpha(f"alpha = {alpha} is outside (0, 3]")
    return alpha


@dataclass(frozen=True)
class FAlphaFunction:
    alpha: float
    measure: DiscreteMeasure

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))

    def _cols(self, z):
        z = np.asarray(z, dtype=complex)
        return z, z[..., None], self.measure.zetas, self.measure.weights

    def log_fprime(self, z):
        z, zc, zeta, t = self._cols(z)
        return -self.alpha * np.sum(t * np.log(1.0 - zeta * zc), axis=-1)

    def fprime(self, z):
        return np.exp(self.log_fprime(z))

    def log_derivative(self, z):
        z, zc, zeta, t = self._cols(z)
        return self.alpha * np.sum(t * zeta / (1.0 - zeta * zc), axis=-1)

    def log_derivative_prime(self, z):
        z, zc, zeta, t = self._cols(z)
        return self.alpha * np.sum(t * zeta**2 / (1.0 - zeta * zc) ** 2, axis=-1)

    def map_point(self, z, **kw) -> complex:
        return map_point(self, z, **kw)

    def rotated(self, theta: float) -> "FAlphaFunction":
        return FAlphaFunction(self.alpha, self.measure.rotated(theta))

    @property
    def is_single_atom(self) -> bool:
        return len(self.measure.atoms) == 1

    def to_spec(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "atoms": [{"zeta": to_pair(a.zeta), "t": a.t} for a in self.measure.atoms],
        }


@dataclass(frozen=True)
class IdentityMap:
    """Test double with ``f(z) = z``, i.e. ``f' = 1``.

    Not a member of any F(alpha); ``alpha`` is carried only so that the
    checkers, which reference it, can be evaluated.
    """

    alpha: float = 1.0

    def log_fprime(self, z):
        return np.zeros(np.shape(z), dtype=complex)[()]

    def fprime(self, z):
        return np.ones(np.shape(z), dtype=complex)[()]

    def log_derivative(self, z):
        return np.zeros(np.shape(z), dtype=complex)[()]

    def log_derivative_prime(self, z):
        return np.zeros(np.shape(z), dtype=complex)[()]

    def map_point(self, z, **kw) -> complex:
        return complex(z)

    def rotated(self, theta: float) -> "IdentityMap":
        return self

    is_single_atom = False

    def to_spec(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "identity": True}


@dataclass(frozen=True)
class GridSpec:
    """Polar certificate grid; radii are Chebyshev-spaced toward ``r_max``."""

    n_radial: int = 64
    n_angular: int = 256
    r_max: float = 0.995

    def __post_init__(self):
        if int(self.n_radial) < 2 or int(self.n_angular) < 4:
            raise InvalidInput("grid needs n_radial >= 2 and n_angular >= 4")
        if not 0.0 < self.r_max <= 1.0 - 1e-6:
            raise InvalidInput(f"r_max = {self.r_max} must lie in (0, 1 - 1e-6]")

    def radii(self) -> np.ndarray:
        i = np.arange(self.n_radial)
        return self.r_max * np.sin(0.5 * np.pi * i / (self.n_radial - 1))

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular

    def points(self) -> np.ndarray:
        return self.radii()[:, None] * np.exp(1j * self.angles())[None, :]

    def to_dict(self) -> dict[str, Any]:
        return {"n_radial": self.n_radial, "n_angular": self.n_angular, "r_max": self.r_max}


@dataclass
class CertificateReport:
    margin: float
    argmin: complex
    grid: Optional[GridSpec] = None
    tol: float = CERTIFICATE_TOL
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol

    def to_dict(self) -> dict[str, Any]:
        out = {"margin": self.margin, "argmin": to_pair(self.argmin)}
        if self.grid is not None:
            out["grid"] = self.grid.to_dict()
        out.update(self.extra)
        return out


def from_measure(alpha: float, measure: DiscreteMeasure) -> FAlphaFunction:
    return FAlphaFunction(alpha, measure)


def _roundtrip_probes(n: int = 32) -> np.ndarray:
    k = np.arange(n)
    return 0.9 * np.sqrt((k + 0.5) / n) * np.exp(1j * k * 2.399963229728653)


def from_blaschke(alpha: float, phi: BlaschkeProduct) -> FAlphaFunction:
    """Member whose ``f''/f' = alpha phi / (1 - z phi)``.

    The atoms sit at the conjugates of the solutions of ``z phi(z) = 1`` on
    the circle with the matching convex weights.
    """
    alpha = _check_alpha(alpha)
    rs = boundary_decomposition(phi)
    atoms = tuple(Atom(z.conjugate() / abs(z), t) for z, t in zip(rs.roots, rs.weights))
    f = FAlphaFunction(alpha, DiscreteMeasure(atoms))
    z = _roundtrip_probes()
    p = phi(z)
    expected = alpha * p / (1.0 - z * p)
    got = f.log_derivative(z)
    err = np.abs(got - expected) / np.maximum(1.0, np.abs(expected))
    if err.max() > 1e-8:
        raise QDLError(f"Blaschke round trip mismatch {err.max():.3e}")
    return f


def fprime(f, z):
    return f.fprime(z)


def log_derivative(f, z):
    return f.log_derivative(z)


def map_point(f, z, rel_tol: float = quadrature.DEFAULT_REL_TOL, max_panels: int = quadrature.DEFAULT_MAX_PANELS) -> complex:
    """``f(z)``: integral of ``f'`` along the segment ``[0, z]``."""
    z = complex(z)
    if z == 0:
        return 0j
    if isinstance(f, IdentityMap):
        return z
    return quadrature.integrate(lambda s: f.fprime(s * z) * z, 0.0, 1.0, rel_tol=rel_tol, max_panels=max_panels)


def _grid_min(values: np.ndarray, pts: np.ndarray):
    idx = np.unravel_index(np.argmin(values), values.shape)
    return float(values[idx]), complex(pts[idx])


def membership_margin(f, grid: GridSpec = GridSpec()) -> CertificateReport:
    """min over the grid of ``Re(1 + z f''/f') - (1 - alpha/2)``."""
    z = grid.points()
    vals = np.real(1.0 + z * f.log_derivative(z)) - (1.0 - 0.5 * f.alpha)
    margin, where = _grid_min(vals, z)
    return CertificateReport(margin, where, grid)


def sharp_inequality_residual(f, z):
    """``Re(z L) + alpha/2 - (1-|z|^2)/(2 alpha) |L|^2`` with ``L = f''/f'``; nonnegative for members."""
    z = np.asarray(z, dtype=complex)
    L = f.log_derivative(z)
    az = np.abs(z)
    return np.real(z * L) + 0.5 * f.alpha - (1.0 - az) * (1.0 + az) / (2.0 * f.alpha) * np.abs(L) ** 2


def subordination_preimage(f, z):
    """Point ``u`` with ``(1 - u)^(-alpha) = f'(z)``, i.e. ``u = 1 - f'(z)^(-1/alpha)``.

    The power is taken on the branch of ``log f'`` that vanishes at 0.  For
    ``alpha <= 2`` this is the principal power.
    """
    return 1.0 - np.exp(-f.log_fprime(z) / f.alpha)


def subordination_check(f, grid: GridSpec = GridSpec()) -> CertificateReport:
    """min over the grid of ``1 - |u(z)|`` where ``u`` is :func:`subordination_preimage`."""
    z = grid.points()
    vals = 1.0 - np.abs(subordination_preimage(f, z))
    margin, where = _grid_min(vals, z)
    return CertificateReport(margin, where, grid)


def derivative_modulus_bounds(f, r: float, n_angular: int = 1024) -> dict[str, Any]:
    """Compare ``min/max |f'|`` on ``|z| = r`` with ``(1+r)^-alpha`` and ``(1-r)^-alpha``.

    Reports which ordering of the two radial extremes the member obeys.
    """
    z = r * np.exp(2j * np.pi * np.arange(n_angular) / n_angular)
    mod = np.abs(f.fprime(z))
    lo, hi = (1.0 + r) ** -f.alpha, (1.0 - r) ** -f.alpha
    tol = 1e-12 * hi
    return {
        "r": r,
        "min_abs_fprime": float(mod.min()),
        "max_abs_fprime": float(mod.max()),
        "one_plus_r_power": lo,
        "one_minus_r_power": hi,
        "holds_with_one_plus_r_below": bool(mod.min() >= lo - tol and mod.max() <= hi + tol),
        "holds_with_one_minus_r_below": bool(mod.min() >= hi - tol and mod.max() <= lo + tol),
    }


def density_refinement_error(alpha: float, density, n: int = 256, probes=None) -> float:
    """Max change of ``f'`` at ``probes`` when the density quadrature goes from ``n`` to ``2n`` nodes."""
    if probes is None:
        probes = _roundtrip_probes()
    f1 = FAlphaFunction(alpha, DiscreteMeasure.from_density(density, n))
    f2 = FAlphaFunction(alpha, DiscreteMeasure.from_density(density, 2 * n))
    return float(np.max(np.abs(f1.fprime(probes) - f2.fprime(probes))))


def function_from_spec(data: dict[str, Any]):
    """Build a member from ``{"alpha", "atoms"}``, ``{"alpha", "blaschke"}`` or ``{"identity": true}``."""
    if not isinstance(data, dict):
        raise InvalidInput("function spec must be a JSON object")
    if "alpha" not in data:
        raise InvalidInput("function spec is missing field 'alpha'")
    try:
        alpha = float(data["alpha"])
    except (TypeError, ValueError):
        raise InvalidInput(f"field 'alpha': expected a number, got {data['alpha']!r}") from None
    if data.get("identity"):
        return IdentityMap(alpha)
    if "atoms" in data:
        atoms = data["atoms"]
        if not isinstance(atoms, list) or not atoms:
            raise InvalidInput("field 'atoms': expected a nonempty list")
        parsed = []
        for i, a in enumerate(atoms):
            if not isinstance(a, dict) or "zeta" not in a or "t" not in a:
                raise InvalidInput(f"field 'atoms[{i}]': expected {{\"zeta\": [re, im], \"t\": t}}")
            try:
                t = float(a["t"])
            except (TypeError, ValueError):
                raise InvalidInput(f"field 'atoms[{i}].t': expected a number") from None
            parsed.append(Atom(from_pair(a["zeta"], f"atoms[{i}].zeta"), t))
        return FAlphaFunction(alpha, DiscreteMeasure(tuple(parsed)))
    if "blaschke" in data:
        return from_blaschke(alpha, BlaschkeProduct.from_dict(data["blaschke"]))
    raise InvalidInput("function spec needs 'atoms', 'blaschke' or 'identity'")
