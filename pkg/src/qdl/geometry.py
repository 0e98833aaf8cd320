"""Image curves ``f(r T)`` and bounded-turning diagnostics.

The turning constant of a closed sampled curve is

    sup_{a != b} min(diam arc_1(a, b), diam arc_2(a, b)) / |a - b|

over sample pairs, where the two arcs are the pieces of the curve between
``a`` and ``b``.  It is finite for quasicircles and blows up under refinement
at inward cusps.  Arc diameters are taken at sample resolution, so the value
is a lower bound for the continuous curve.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import quadrature
from .errors import InvalidInput
from .jsonio import write_atomic

MAX_EXACT_SAMPLES = 2048
DEFAULT_SAMPLES = 1024
ARC_REL_TOL = 1e-12
ARC_MAX_PANELS = 64


@dataclass(eq=False)
class BoundaryCurve:
    points: np.ndarray
    thetas: np.ndarray
    radius: Optional[float] = None
    closure_drift: float = 0.0

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex)
        self.thetas = np.asarray(self.thetas, dtype=float)
        if self.points.shape != self.thetas.shape or self.points.ndim != 1:
            raise InvalidInput("points and thetas must be 1-D arrays of equal length")

    @property
    def closed(self) -> bool:
        return True

    def __len__(self) -> int:
        return len(self.points)

    @property
    def diameter(self) -> float:
        p = self.points
        return float(np.max(np.abs(p[:, None] - p[None, :])))

    @property
    def relative_drift(self) -> float:
        scale = max(1.0, float(np.max(np.abs(self.points - self.points.mean()))))
        return self.closure_drift / scale

    @classmethod
    def from_points(cls, points: Sequence[complex], radius: Optional[float] = None) -> "BoundaryCurve":
        points = np.asarray(points, dtype=complex)
        return cls(points, 2.0 * np.pi * np.arange(len(points)) / len(points), radius)


def _worker_count() -> int:
    try:
        n = int(os.environ.get("QDL_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def trace_boundary(f, r: float, n: int = DEFAULT_SAMPLES) -> BoundaryCurve:
    """Sample ``f(r e^{i theta_j})`` at ``n`` uniform angles.

    ``f(r)`` comes from the radial segment; every later sample adds the
    integral of ``f'`` over one arc of the circle.  The last arc closes the loop
    and its mismatch with ``f(r)`` is recorded as ``closure_drift``.
    """
    if not 0.0 < r <= 1.0 - 1e-6:
        raise InvalidInput(f"radius {r} must lie in (0, 1 - 1e-6]")
    if n < 64:
        raise InvalidInput("need at least 64 samples")
    thetas = 2.0 * np.pi * np.arange(n + 1) / n
    start = f.map_point(r)

    def integrand(theta):
        z = r * np.exp(1j * theta)
        return f.fprime(z) * 1j * z

    steps = np.empty(n, dtype=complex)
    for j in range(n):
        steps[j] = quadrature.integrate(
            integrand, thetas[j], thetas[j + 1], rel_tol=ARC_REL_TOL, max_panels=ARC_MAX_PANELS
        )
    pts = start + np.concatenate(([0j], np.cumsum(steps)))
    return BoundaryCurve(pts[:n], thetas[:n], r, float(abs(pts[n] - start)))


@dataclass
class TurningReport:
    constant: float
    witness_pair: tuple[int, int]
    samples_used: int

    def to_dict(self) -> dict[str, Any]:
        return {"constant": self.constant, "witness_pair": list(self.witness_pair), "samples_used": self.samples_used}


def bounded_turning_constant(curve: BoundaryCurve) -> TurningReport:
    """Exact sup over all sample pairs of smaller-arc diameter over chord.

    Arc diameters come from the recursion
    ``diam[i..i+L] = max(diam[i..i+L-1], diam[i+1..i+L], |p_i - p_{i+L}|)``
    run over cyclic arcs of every length.
    """
    p = curve.points
    n = len(p)
    if n < 4:
        raise InvalidInput("need at least 4 samples")
    if n > MAX_EXACT_SAMPLES:
        raise InvalidInput(f"exact pair search supports at most {MAX_EXACT_SAMPLES} samples")
    idx = np.arange(n)
    diam = np.zeros((n + 1, n))
    for L in range(1, n + 1):
        chord = np.abs(p - p[(idx + L) % n])
        diam[L] = np.maximum(np.maximum(diam[L - 1], diam[L - 1][(idx + 1) % n]), chord)
    best, witness = 0.0, (0, 1)
    for L in range(1, n):
        other = (idx + L) % n
        chord = np.abs(p - p[other])
        smaller = np.minimum(diam[L], diam[n - L][other])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(chord > 0, smaller / chord, np.inf)
        k = int(np.argmax(ratio))
        if ratio[k] > best:
            best, witness = float(ratio[k]), (k, int(other[k]))
    return TurningReport(best, witness, n)


def is_simple(curve: BoundaryCurve) -> bool:
    """True when no two non-adjacent segments of the closed polygon cross."""
    a = curve.points
    b = np.roll(a, -1)
    n = len(a)

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    d1 = cross(b[i] - a[i], a[j] - a[i])
    d2 = cross(b[i] - a[i], b[j] - a[i])
    d3 = cross(b[j] - a[j], a[i] - a[j])
    d4 = cross(b[j] - a[j], b[i] - a[j])
    hits = (d1 * d2 < 0) & (d3 * d4 < 0)
    return not bool(np.any(hits))


@dataclass
class QuasidiskReport:
    radii: list
    turning: list
    witness_pairs: list
    closure_drift: list = field(default_factory=list)

    @property
    def spread(self) -> float:
        """max/min of the turning constants across radii."""
        return max(self.turning) / min(self.turning)

    def to_dict(self) -> dict[str, Any]:
        return {
            "radii": list(self.radii),
            "turning": list(self.turning),
            "witness_pairs": [list(w) for w in self.witness_pairs],
            "closure_drift": list(self.closure_drift),
            "spread": self.spread,
        }


def quasidisk_diagnostic(f, radii: Sequence[float], n: int = DEFAULT_SAMPLES) -> QuasidiskReport:
    """Turning constants of ``f(r T)`` for increasing ``r``.

    A sequence that stays bounded as ``r -> 1`` is the numerical sign of a
    quasidisk image; it certifies nothing on its own.
    """
    radii = [float(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidInput("radii must be nonempty and strictly increasing")

    def one(r):
        curve = trace_boundary(f, r, n)
        return curve, bounded_turning_constant(curve)

    with ThreadPoolExecutor(max_workers=min(_worker_count(), len(radii))) as pool:
        results = list(pool.map(one, radii))
    return QuasidiskReport(
        radii,
        [rep.constant for _, rep in results],
        [rep.witness_pair for _, rep in results],
        [c.closure_drift for c, _ in results],
    )


# ------------------------------------------------------------ synthetic curves


def circle_curve(n: int, radius: float = 1.0) -> BoundaryCurve:
    theta = 2.0 * np.pi * np.arange(n) / n
    return BoundaryCurve(radius * np.exp(1j * theta), theta, None)


def ellipse_curve(n: int, a: float = 2.0, b: float = 1.0) -> BoundaryCurve:
    theta = 2.0 * np.pi * np.arange(n) / n
    return BoundaryCurve(a * np.cos(theta) + 1j * b * np.sin(theta), theta, None)


def cusp_curve(n: int, depth: float = 0.5, width: float = 0.5, exponent: float = 0.25) -> BoundaryCurve:
    """Unit circle pinched inward at ``theta = 0`` into a cusp.

    The radius dips to ``1 - depth`` following ``1 - depth (1 - (|theta|/width)^exponent)``,
    so both sides of the notch meet tangentially at the tip.
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    s = np.angle(np.exp(1j * theta))
    u = np.minimum(np.abs(s) / width, 1.0)
    rho = 1.0 - depth * (1.0 - u**exponent)
    return BoundaryCurve(rho * np.exp(1j * theta), theta, None)


# -------------------------------------------------------------------- output


def curve_csv(curve: BoundaryCurve) -> str:
    rows = ["theta,re,im"]
    rows += [f"{t:.17g},{z.real:.17g},{z.imag:.17g}" for t, z in zip(curve.thetas, curve.points)]
    return "\n".join(rows) + "\n"


def curve_svg(curve: BoundaryCurve, size: int = 1024, margin: float = 0.05) -> str:
    p = curve.points
    lo_x, hi_x = p.real.min(), p.real.max()
    lo_y, hi_y = p.imag.min(), p.imag.max()
    extent = max(hi_x - lo_x, hi_y - lo_y) or 1.0
    scale = size * (1.0 - 2.0 * margin) / extent
    cx, cy = 0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)
    xs = size / 2 + (p.real - cx) * scale
    ys = size / 2 - (p.imag - cy) * scale
    cmds = [f"M {xs[0]:.4f} {ys[0]:.4f}"] + [f"L {x:.4f} {y:.4f}" for x, y in zip(xs[1:], ys[1:])] + ["Z"]
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">\n'
        f'<path d="{" ".join(cmds)}" fill="none" stroke="black" stroke-width="2"/>\n'
        "</svg>\n"
    )


def emit_curve(curve: BoundaryCurve, fmt: str, path) -> None:
    fmt = fmt.lower()
    if fmt == "csv":
        write_atomic(path, curve_csv(curve))
    elif fmt == "svg":
        write_atomic(path, curve_svg(curve))
    else:
        raise InvalidInput(f"unknown curve format {fmt!r}")
