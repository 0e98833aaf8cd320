"""Finite Blaschke products on the unit disk.

A finite Blaschke product of degree ``m`` is

    phi(z) = c * prod_k (z - b_k) / (1 - conj(b_k) z),   |b_k| < 1, |c| = 1.

Besides evaluation this module solves ``z * phi(z) = 1`` on the unit circle
and extracts the convex weights ``t_k = 1 / (1 + z_k phi'(z_k) / phi(z_k))``
that turn ``phi`` into the atoms of a discrete boundary measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import numpy as np

from ._complex import from_pair, to_pair
from .errors import InvalidInput, RootSeparationFailure, WeightOutOfRange

TWO_PI = 2.0 * math.pi

ZERO_MARGIN = 1e-12
UNIMODULAR_TOL = 1e-12
ROOT_SEPARATION = 1e-8
WEIGHT_EPS = 1e-12
WEIGHT_SUM_TOL = 1e-10
WEIGHT_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class BlaschkeProduct:
    zeros: tuple[complex, ...] = ()
    front_factor: complex = 1.0 + 0.0j

    def __post_init__(self):
        zeros = tuple(complex(b) for b in self.zeros)
        for b in zeros:
            if not abs(b) < 1.0 - ZERO_MARGIN:
                raise InvalidInput(f"Blaschke zero {b} is not strictly inside the disk (|b| = {abs(b)!r})")
        c = complex(self.front_factor)
        if abs(abs(c) - 1.0) > UNIMODULAR_TOL:
            raise InvalidInput(f"front factor {c} is not unimodular")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "front_factor", c)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        return blaschke_eval(self, z)

    def derivative(self, z):
        return blaschke_derivative(self, z)

    def one_minus_abs2(self, z):
        """``1 - |phi(z)|^2`` without cancellation near the circle.

        Uses ``1 - |AB|^2 = (1 - |A|^2) + |A|^2 (1 - |B|^2)`` with the exact
        factor identity ``1 - |B_b(z)|^2 = (1-|b|^2)(1-|z|^2) / |1 - conj(b) z|^2``.
        """
        z = np.asarray(z, dtype=complex)
        az = np.abs(z)
        one_minus_z2 = (1.0 - az) * (1.0 + az)
        acc = np.zeros(z.shape)
        mod2 = np.ones(z.shape)
        for b in self.zeros:
            factor_gap = (1.0 - abs(b) ** 2) * one_minus_z2 / np.abs(1.0 - b.conjugate() * z) ** 2
            acc = acc + mod2 * factor_gap
            mod2 = mod2 * (1.0 - factor_gap)
        return acc

    def rotated(self, theta: float) -> "BlaschkeProduct":
        """Return ``z -> e^{i theta} phi(e^{i theta} z)``.

        The boundary roots of ``z psi(z) = 1`` for the rotated product are the
        original roots multiplied by ``e^{-i theta}``; the weights carry over.
        """
        rot = complex(math.cos(theta), math.sin(theta))
        zeros = tuple(b / rot for b in self.zeros)
        front = self.front_factor * rot ** (self.degree + 1)
        return BlaschkeProduct(zeros, front / abs(front))

    def to_dict(self) -> dict[str, Any]:
        return {"zeros": [to_pair(b) for b in self.zeros], "front_factor": to_pair(self.front_factor)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BlaschkeProduct":
        if not isinstance(data, dict):
            raise InvalidInput("blaschke spec must be a JSON object")
        zeros = data.get("zeros", [])
        if not isinstance(zeros, list):
            raise InvalidInput("field 'zeros': expected a list of [re, im] pairs")
        parsed = [from_pair(b, "zeros") for b in zeros]
        front = from_pair(data.get("front_factor", [1.0, 0.0]), "front_factor")
        return cls(tuple(parsed), front)


@dataclass(frozen=True)
class BoundaryRootSet:
    roots: tuple[complex, ...]
    weights: Optional[tuple[float, ...]] = field(default=None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "roots": [to_pair(z) for z in self.roots],
            "weights": None if self.weights is None else list(self.weights),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BoundaryRootSet":
        roots = tuple(from_pair(z, "roots") for z in data["roots"])
        weights = data.get("weights")
        return cls(roots, None if weights is None else tuple(float(t) for t in weights))


def blaschke_eval(phi: BlaschkeProduct, z):
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, phi.front_factor, dtype=complex)
    for b in phi.zeros:
        out = out * (z - b) / (1.0 - b.conjugate() * z)
    return out[()] if out.ndim == 0 else out


def blaschke_derivative(phi: BlaschkeProduct, z):
    # Product rule rather than phi * (log phi)', so zeros of phi need no special case.
    z = np.asarray(z, dtype=complex)
    m = phi.degree
    if m == 0:
        out = np.zeros(z.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    factors = []
    dfactors = []
    for b in phi.zeros:
        denom = 1.0 - b.conjugate() * z
        factors.append((z - b) / denom)
        dfactors.append((1.0 - abs(b) ** 2) / denom**2)
    prefix = [np.ones(z.shape, dtype=complex)]
    for f in factors[:-1]:
        prefix.append(prefix[-1] * f)
    suffix = np.ones(z.shape, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    for k in range(m - 1, -1, -1):
        total = total + prefix[k] * dfactors[k] * suffix
        suffix = suffix * factors[k]
    out = phi.front_factor * total
    return out[()] if out.ndim == 0 else out


def boundary_argument(phi: BlaschkeProduct, theta):
    """Continuous argument of ``e^{i theta} phi(e^{i theta})`` on the real line.

    Each factor contributes ``theta + 2 Arg(1 - b e^{-i theta})``; the principal
    argument is continuous there because ``1 - b e^{-i theta}`` has positive real part.
    """
    theta = np.asarray(theta, dtype=float)
    psi = math.atan2(phi.front_factor.imag, phi.front_factor.real) + (phi.degree + 1) * theta
    if phi.zeros:
        e = np.exp(-1j * theta)
        for b in phi.zeros:
            psi = psi + 2.0 * np.angle(1.0 - b * e)
    return psi


def _bisect_level(phi: BlaschkeProduct, target: float) -> float:
    lo, hi = 0.0, TWO_PI
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if boundary_argument(phi, mid) < target:
            lo = mid
        else:
            hi = mid
    g_lo = abs(float(boundary_argument(phi, lo)) - target)
    g_hi = abs(float(boundary_argument(phi, hi)) - target)
    return lo if g_lo <= g_hi else hi


def boundary_roots(phi: BlaschkeProduct) -> BoundaryRootSet:
    """Solve ``z phi(z) = 1`` on the unit circle.

    ``z phi(z)`` has a strictly increasing boundary argument with total
    increase ``2 pi (m + 1)``, so every level ``2 pi j`` is crossed exactly
    once on ``[0, 2 pi)`` and bisection brackets each root.  Roots come back
    sorted by principal argument.
    """
    if phi.degree == 0:
        return BoundaryRootSet((phi.front_factor.conjugate(),))
    psi0 = float(boundary_argument(phi, 0.0))
    j0 = math.ceil(psi0 / TWO_PI)
    thetas = [_bisect_level(phi, TWO_PI * (j0 + k)) for k in range(phi.degree + 1)]
    roots = sorted((complex(math.cos(t), math.sin(t)) for t in thetas), key=lambda w: math.atan2(w.imag, w.real))
    arr = np.array(roots)
    gaps = np.abs(arr[:, None] - arr[None, :]) + np.eye(len(arr)) * 10.0
    if gaps.min() <= ROOT_SEPARATION:
        raise RootSeparationFailure(f"boundary roots coincide within {ROOT_SEPARATION} (min gap {gaps.min():.3e})")
    return BoundaryRootSet(tuple(roots))


def weights(phi: BlaschkeProduct, roots: BoundaryRootSet | Iterable[complex]) -> BoundaryRootSet:
    """Fill in ``t_k = 1 / (1 + z_k phi'(z_k) / phi(z_k))`` for each boundary root."""
    if isinstance(roots, BoundaryRootSet):
        roots = roots.roots
    roots = tuple(complex(z) for z in roots)
    if phi.degree == 0:
        return BoundaryRootSet(roots, (1.0,))
    z = np.array(roots)
    s = z * blaschke_derivative(phi, z) / blaschke_eval(phi, z)
    t = 1.0 / (1.0 + s)
    if np.max(np.abs(t.imag)) > WEIGHT_IMAG_TOL:
        raise WeightOutOfRange(f"weights have imaginary residue {np.max(np.abs(t.imag)):.3e}")
    if np.min(s.real) <= 0.0:
        raise WeightOutOfRange("z phi'(z)/phi(z) is not positive at a boundary root")
    t = t.real
    if np.any(t <= WEIGHT_EPS) or np.any(t >= 1.0 - WEIGHT_EPS):
        raise WeightOutOfRange(f"weights {t.tolist()} leave (eps, 1 - eps)")
    if abs(t.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise WeightOutOfRange(f"weights sum to {t.sum()!r}")
    return BoundaryRootSet(roots, tuple(float(x) for x in t))


def boundary_decomposition(phi: BlaschkeProduct) -> BoundaryRootSet:
    return weights(phi, boundary_roots(phi))


def partial_fraction_residual(phi: BlaschkeProduct, rootset: BoundaryRootSet, probes) -> float:
    """Max over ``probes`` of ``|phi/(z phi - 1) - sum t_k/(z - z_k)|``."""
    z = np.asarray(probes, dtype=complex).ravel()
    lhs = blaschke_eval(phi, z)
    lhs = lhs / (z * lhs - 1.0)
    rhs = np.zeros_like(z)
    for zk, tk in zip(rootset.roots, rootset.weights):
        rhs = rhs + tk / (z - zk)
    return float(np.max(np.abs(lhs - rhs)))
