"""Seeded random instances and standard fixtures for property suites."""

from __future__ import annotations

import math

import numpy as np

from .blaschke import BlaschkeProduct
from .family import Atom, DiscreteMeasure, FAlphaFunction
from .harmonic import Dilatation, HarmonicMap


def random_blaschke(rng: np.random.Generator, max_degree: int = 6, max_modulus: float = 0.95, min_degree: int = 0) -> BlaschkeProduct:
    m = int(rng.integers(min_degree, max_degree + 1))
    rad = max_modulus * np.sqrt(rng.uniform(size=m))
    zeros = rad * np.exp(2j * np.pi * rng.uniform(size=m))
    front = np.exp(2j * np.pi * rng.uniform())
    return BlaschkeProduct(tuple(complex(b) for b in zeros), complex(front))


def random_measure(rng: np.random.Generator, max_atoms: int = 5, min_weight: float = 1e-3) -> DiscreteMeasure:
    n = int(rng.integers(1, max_atoms + 1))
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
    t = rng.dirichlet(np.ones(n)) if n > 1 else np.ones(1)
    t = np.maximum(t, min_weight)
    t = t / t.sum()
    return DiscreteMeasure(tuple(Atom(complex(math.cos(a), math.sin(a)), float(w)) for a, w in zip(angles, t)))


def random_member(rng: np.random.Generator, alpha_low: float = 0.0, alpha_high: float = 3.0, max_atoms: int = 5) -> FAlphaFunction:
    """Member with ``alpha`` uniform on the open interval ``(alpha_low, alpha_high)``."""
    alpha = alpha_low
    while not alpha_low < alpha < alpha_high:
        alpha = float(rng.uniform(alpha_low, alpha_high))
    return FAlphaFunction(alpha, random_measure(rng, max_atoms))


def random_dilatation(rng: np.random.Generator, max_modulus: float = 0.9) -> Dilatation:
    if rng.uniform() < 0.5:
        a = max_modulus * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        return Dilatation.moebius(complex(a))
    phi = random_blaschke(rng, max_degree=3, max_modulus=max_modulus, min_degree=1)
    return Dilatation.blaschke(phi)


def random_harmonic(rng: np.random.Generator, alpha_high: float = 3.0) -> HarmonicMap:
    return HarmonicMap(random_member(rng, 0.0, alpha_high), random_dilatation(rng))


def single_atom(alpha: float, zeta: complex = 1.0) -> FAlphaFunction:
    """The extremal member ``f'(z) = (1 - zeta z)^-alpha``."""
    return FAlphaFunction(alpha, DiscreteMeasure((Atom(zeta, 1.0),)))


def two_atom(alpha: float) -> FAlphaFunction:
    """``f'(z) = (1 - z^2)^(-alpha/2)``: atoms at ``1`` and ``-1`` with weight one half."""
    return FAlphaFunction(alpha, DiscreteMeasure((Atom(1.0, 0.5), Atom(-1.0, 0.5))))
