"""Composite Gauss-Legendre quadrature with adaptive panel halving.

Used to integrate ``f'`` along straight segments and circular arcs inside
the disk.  Integrands are complex valued functions of a real parameter and
must accept numpy arrays.
"""

from __future__ import annotations

import heapq
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import QuadratureNoConvergence

NODES_PER_PANEL = 16
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_PANELS = 40


@lru_cache(maxsize=None)
def _rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel(integrand: Callable, a: float, b: float) -> complex:
    x, w = _rule(NODES_PER_PANEL)
    half = 0.5 * (b - a)
    s = a + half * (x + 1.0)
    return complex(half * np.dot(w, integrand(s)))


def integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = 1e-300,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> complex:
    """Integrate ``integrand`` over ``[a, b]``.

    Each panel is compared against the sum over its two halves; the panel with
    the largest gap is halved until the total gap falls below
    ``rel_tol * |estimate|`` (or ``abs_tol``).  Raises
    :class:`QuadratureNoConvergence` once ``max_panels`` is reached.
    """
    if a == b:
        return 0j

    def refine(lo, hi, coarse):
        mid = 0.5 * (lo + hi)
        left = _panel(integrand, lo, mid)
        right = _panel(integrand, mid, hi)
        fine = left + right
        return (-abs(fine - coarse), lo, hi, fine, left, right)

    # heap entries: (-gap, lo, hi, fine, left, right)
    heap = [refine(a, b, _panel(integrand, a, b))]
    total = heap[0][3]
    gap = -heap[0][0]
    while True:
        if gap <= max(rel_tol * abs(total), abs_tol):
            return total
        if len(heap) >= max_panels:
            raise QuadratureNoConvergence(f"no convergence on [{a}, {b}] with {len(heap)} panels", gap)
        neg_gap, lo, hi, fine, left, right = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        heapq.heappush(heap, refine(lo, mid, left))
        heapq.heappush(heap, refine(mid, hi, right))
        total = sum(item[3] for item in heap)
        gap = sum(-item[0] for item in heap)
