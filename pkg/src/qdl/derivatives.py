"""Pre-Schwarzian and Schwarzian derivatives and their hyperbolic sup-norms.

    ||P_f|| = sup (1 - |z|^2)   |f''/f'|
    ||S_f|| = sup (1 - |z|^2)^2 |(f''/f')' - (f''/f')^2 / 2|

The supremum over the open disk is estimated by a deterministic search:

1. a polar grid with Chebyshev radii clustered at both ``0`` and ``1 - 1e-6``;
2. alternating golden-section refinement in ``r`` and ``theta`` from the best
   local maxima of the grid;
3. a probe along the best ray at ``r_j = 1 - 2^-j`` that tracks the angle of
   the local peak and extrapolates an increasing tail to ``r = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from ._complex import to_pair
from .blaschke import BlaschkeProduct
from .errors import AlphaOutOfTheoremRange, BudgetExhausted, InvalidInput
from .optimize import golden_max

R_CEILING = 1.0 - 1e-6
N_RADIAL = 96
N_ANGULAR = 384
TOP_CELLS = 8
SWEEPS = 20
DEFAULT_BUDGET = 200_000
MIN_BUDGET = 10_000
# past 1 - r ~ 6e-8, rounding in 1 - zeta*z starts to bias the probe upward
PROBE_MAX_J = 24
TAIL = 5


def pre_schwarzian(f, z):
    return f.log_derivative(z)


def schwarzian(f, z):
    L = f.log_derivative(z)
    return f.log_derivative_prime(z) - 0.5 * L * L


def schwarzian_from_blaschke(alpha: float, phi: BlaschkeProduct, z):
    """``alpha (phi' + (1 - alpha/2) phi^2) / (1 - z phi)^2``, the Schwarzian written through ``phi``."""
    z = np.asarray(z, dtype=complex)
    p = phi(z)
    return alpha * (phi.derivative(z) + (1.0 - 0.5 * alpha) * p * p) / (1.0 - z * p) ** 2


@dataclass
class NormEstimate:
    value: float
    argmax: complex
    coarse_value: float
    evaluations: int
    budget_exhausted: bool = False
    trace: list = field(default_factory=list)

    @property
    def refinement_gap(self) -> float:
        return self.value - self.coarse_value

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "argmax": to_pair(self.argmax),
            "coarse_value": self.coarse_value,
            "refinement_gap": self.refinement_gap,
            "evaluations": self.evaluations,
            "budget_exhausted": self.budget_exhausted,
        }


def chebyshev_radii(n: int = N_RADIAL, r_top: float = R_CEILING) -> np.ndarray:
    i = np.arange(n)
    return 0.5 * r_top * (1.0 - np.cos(np.pi * i / (n - 1)))


class _Counter:
    def __init__(self, evaluator, power, budget):
        self.evaluator = evaluator
        self.power = power
        self.budget = budget
        self.count = 0
        self.refine_count = 0

    def grid(self, r, theta):
        z = r[:, None] * np.exp(1j * theta)[None, :]
        w = ((1.0 - r) * (1.0 + r))[:, None] ** self.power
        self.count += z.size
        return w * np.abs(np.asarray(self.evaluator(z)))

    def point(self, r, theta):
        # hard cap: once spent, report -inf so no pending line search can win
        if self.exhausted:
            return -math.inf
        self.count += 1
        self.refine_count += 1
        z = r * complex(math.cos(theta), math.sin(theta))
        return float(((1.0 - r) * (1.0 + r)) ** self.power * abs(complex(self.evaluator(np.asarray(z)))))

    @property
    def exhausted(self):
        return self.refine_count >= self.budget


def _local_maxima(W: np.ndarray, k: int):
    n_r, n_a = W.shape
    padded = np.pad(W, ((1, 1), (0, 0)), constant_values=-np.inf)
    is_max = np.ones_like(W, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = np.roll(padded, -dj, axis=1)[1 + di:1 + di + n_r]
            is_max &= W >= shifted
    flat = np.argsort(-W, axis=None, kind="stable")
    chosen = [idx for idx in flat if is_max.flat[idx]][:k]
    for idx in flat:
        if len(chosen) >= k:
            break
        if idx not in chosen:
            chosen.append(idx)
    return [np.unravel_index(idx, W.shape) for idx in chosen]


def hyperbolic_sup(
    weight_power: int,
    evaluator: Callable[[np.ndarray], np.ndarray],
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
) -> NormEstimate:
    """Estimate ``sup_{|z|<1} (1 - |z|^2)^p |evaluator(z)|``.

    ``budget`` caps the evaluations spent after the fixed coarse grid.  When it
    runs out the best value so far is returned with ``budget_exhausted`` set
    (or :class:`BudgetExhausted` is raised if ``strict``).
    """
    if weight_power not in (1, 2):
        raise InvalidInput("weight_power must be 1 or 2")
    if budget < MIN_BUDGET:
        raise InvalidInput(f"field 'budget': must be at least {MIN_BUDGET}, got {budget}")
    ctr = _Counter(evaluator, weight_power, budget)
    radii = chebyshev_radii()
    thetas = 2.0 * np.pi * np.arange(N_ANGULAR) / N_ANGULAR
    W = ctr.grid(radii, thetas)
    W = np.where(np.isfinite(W), W, -np.inf)
    i0, j0 = np.unravel_index(np.argmax(W), W.shape)
    coarse = float(W[i0, j0])
    best = (coarse, float(radii[i0]), float(thetas[j0]))
    trace = [{"phase": "grid", "value": coarse}]

    dtheta = 2.0 * np.pi / N_ANGULAR
    for i, j in _local_maxima(W, TOP_CELLS):
        if ctr.exhausted:
            break
        r, th = float(radii[i]), float(thetas[j])
        val = float(W[i, j])
        hr = max(radii[min(i + 1, N_RADIAL - 1)] - radii[i], radii[i] - radii[max(i - 1, 0)])
        hth = dtheta
        for _ in range(SWEEPS):
            if ctr.exhausted:
                break
            prev = val
            lo, hi = max(0.0, r - hr), min(R_CEILING, r + hr)
            r_new, v, _ = golden_max(lambda x: ctr.point(x, th), lo, hi, tol=1e-13)
            if v > val:
                r, val = r_new, v
            t_new, v, _ = golden_max(lambda x: ctr.point(r, x), th - hth, th + hth, tol=1e-13)
            if v > val:
                th, val = t_new, v
            hr *= 0.5
            hth *= 0.5
            if val - prev <= 1e-15 * max(1.0, abs(val)):
                break
        if val > best[0]:
            best = (val, r, th)
    trace.append({"phase": "local", "value": best[0]})

    value, r_best, th = best
    argmax = r_best * complex(math.cos(th), math.sin(th))
    ray = []
    for j in range(1, PROBE_MAX_J + 1):
        if ctr.exhausted:
            break
        rj = 1.0 - 2.0**-j
        w = 3.0 * (1.0 - rj)
        th_j, v, _ = golden_max(lambda x: ctr.point(rj, x), th - w, th + w, tol=1e-15)
        if not math.isfinite(v):
            break
        th = th_j
        ray.append((rj, v, th_j))
        if v > value:
            value, argmax = v, rj * complex(math.cos(th_j), math.sin(th_j))
    if len(ray) >= TAIL:
        tail = ray[-TAIL:]
        vals = [v for _, v, _ in tail]
        if all(b > a for a, b in zip(vals, vals[1:])):
            x = np.array([1.0 + r for r, _, _ in tail])
            slope, intercept = np.polyfit(x, np.array(vals), 1)
            limit = float(slope * 2.0 + intercept)
            if limit > value:
                value = limit
                r_last, _, th_last = tail[-1]
                argmax = r_last * complex(math.cos(th_last), math.sin(th_last))
    trace.append({"phase": "boundary", "value": value})

    est = NormEstimate(value, argmax, coarse, ctr.count, ctr.exhausted, trace)
    if est.budget_exhausted and strict:
        raise BudgetExhausted(est)
    return est


def pre_schwarzian_norm(f, budget: int = DEFAULT_BUDGET) -> NormEstimate:
    return hyperbolic_sup(1, lambda z: pre_schwarzian(f, z), budget)


def schwarzian_norm(f, budget: int = DEFAULT_BUDGET) -> NormEstimate:
    return hyperbolic_sup(2, lambda z: schwarzian(f, z), budget)


@dataclass
class BoundReport:
    estimate: NormEstimate
    bound: Optional[float]
    in_theorem_range: bool = True

    @property
    def slack(self) -> Optional[float]:
        return None if self.bound is None else self.bound - self.estimate.value

    def to_dict(self) -> dict[str, Any]:
        return {
            "norm": self.estimate.value,
            "argmax": to_pair(self.estimate.argmax),
            "bound": self.bound,
            "slack": self.slack,
            "evaluations": self.estimate.evaluations,
            "in_theorem_range": self.in_theorem_range,
            "budget_exhausted": self.estimate.budget_exhausted,
        }


def schwarzian_norm_bound_check(f, budget: int = DEFAULT_BUDGET, allow_out_of_range: bool = False) -> BoundReport:
    """Compare the estimated ``||S_f||`` against ``2 alpha (2 - alpha)``.

    The bound is only claimed for ``alpha in (0, 2)``; outside that range this
    raises unless ``allow_out_of_range``, in which case the estimate is still
    computed and the report is flagged.
    """
    alpha = f.alpha
    in_range = 0.0 < alpha < 2.0
    if not in_range and not allow_out_of_range:
        raise AlphaOutOfTheoremRange(f"Schwarzian bound needs alpha in (0, 2), got {alpha}")
    est = schwarzian_norm(f, budget)
    return BoundReport(est, 2.0 * alpha * (2.0 - alpha) if in_range else None, in_range)


def pre_schwarzian_norm_bound_check(f, budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Compare the estimated ``||P_f||`` against ``2 alpha``."""
    return BoundReport(pre_schwarzian_norm(f, budget), 2.0 * f.alpha)
