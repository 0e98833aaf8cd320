"""Deterministic one-dimensional maximization."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x), evaluations)``.  The endpoints are also examined so
    that monotone functions report the correct boundary maximizer.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)) * 0.5:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    x, fx = (c, fc) if fc >= fd else (d, fd)
    for end in (lo, hi):
        fe = f(end)
        evals += 1
        if fe > fx:
            x, fx = end, fe
    return x, fx, evals
