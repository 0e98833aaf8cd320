"""Acceptance criteria 1-10, one test per criterion at the stated tolerance.

Each test records a one-line PASS/FAIL verdict; the lines are printed in the
pytest terminal summary and by ``python3 tests/test_acceptance.py``.
"""

import cmath
import json
import math
import sys
import tempfile
from pathlib import Path

import numpy as np

from qdl import cli
from qdl.blaschke import boundary_decomposition, partial_fraction_residual
from qdl.derivatives import pre_schwarzian_norm_bound_check, schwarzian_norm, schwarzian_norm_bound_check
from qdl.family import (
    GridSpec,
    IdentityMap,
    from_blaschke,
    sharp_inequality_residual,
    subordination_check,
    subordination_preimage,
)
from qdl.geometry import bounded_turning_constant, circle_curve, cusp_curve, quasidisk_diagnostic
from qdl.harmonic import (
    Dilatation,
    HarmonicMap,
    bloch_bound_t71,
    bloch_constant,
    extremal_ft_profile,
    extremal_member,
    ft_admissible,
    hm_pre_schwarzian_norm,
)
from qdl.samples import random_blaschke, random_harmonic, random_member, single_atom

SEED = 20261015
RESULTS = {}


def _record(n, ok, detail):
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def _random_disk_points(rng, n, r_max=0.999):
    return r_max * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


# ----------------------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(SEED)
    probes = _random_disk_points(rng, 32, 0.9)
    worst_root = worst_sum = worst_pf = 0.0
    weights_ok = True
    for _ in range(100):
        phi = random_blaschke(rng, max_degree=6, min_degree=1)
        d = boundary_decomposition(phi)
        z = np.array(d.roots)
        t = np.array(d.weights)
        worst_root = max(worst_root, float(np.max(np.abs(z * phi(z) - 1))))
        worst_sum = max(worst_sum, abs(t.sum() - 1))
        weights_ok &= bool(np.all((t > 0) & (t < 1)))
        worst_pf = max(worst_pf, partial_fraction_residual(phi, d, probes))
    ok = worst_root < 1e-10 and weights_ok and worst_sum < 1e-10 and worst_pf < 1e-8
    return ok, f"root residual {worst_root:.1e}, |sum t - 1| {worst_sum:.1e}, partial fractions {worst_pf:.1e}"


def criterion_2():
    errs = []
    for alpha in (0.25, 0.5, 1.0, 1.5, 1.9):
        errs.append(abs(schwarzian_norm(single_atom(alpha)).value - 2 * alpha * (2 - alpha)))
    return max(errs) < 1e-4, f"max |estimate - 2a(2-a)| = {max(errs):.1e}"


def criterion_3():
    rng = np.random.default_rng(SEED)
    violations = []
    for _ in range(50):
        f = random_member(rng, 0.0, 2.0)
        rep = schwarzian_norm_bound_check(f)
        if rep.slack < -1e-6:
            violations.append((f.alpha, rep.estimate.value, rep.bound))
    if not violations:
        return True, "50/50 members within 2a(2-a) + 1e-6"
    a, v, b = max(violations, key=lambda x: x[1] - x[2])
    lowest = min(x[0] for x in violations)
    return False, (
        f"{len(violations)}/50 members exceed the bound, smallest such alpha {lowest:.3f}; "
        f"worst alpha={a:.3f}: estimate {v:.4f} > bound {b:.4f}"
    )


def _admissible_grid(alpha, n=8):
    lo = next(t for t in np.linspace(1e-3, 1 - 1e-6, 20001) if ft_admissible(alpha, t))
    return [lo + (1 - lo) * (1 - 2.0**-k) for k in range(n)] + [1 - 1e-6]


def criterion_4():
    parts = []
    ok = True
    analytic = max(
        abs(pre_schwarzian_norm_bound_check(single_atom(a)).estimate.value - 2 * a) for a in (0.25, 0.5, 1.0, 1.5, 2.5)
    )
    ok &= analytic < 1e-4
    parts.append(f"analytic |P - 2a| {analytic:.1e}")
    for alpha in (0.1, 1.0):
        ts = _admissible_grid(alpha)
        vals = [hm_pre_schwarzian_norm(extremal_member(alpha, t)).estimate.value for t in ts]
        mono = all(b >= a - 1e-8 for a, b in zip(vals, vals[1:]))
        short = 2 * alpha + 1 - vals[-1]
        ok &= mono and short <= 1e-3
        parts.append(f"f_t a={alpha}: monotone={mono}, shortfall at t=1-1e-6 {short:.2e}")
    rng = np.random.default_rng(SEED)
    worst = min(hm_pre_schwarzian_norm(random_harmonic(rng)).slack for _ in range(30))
    ok &= worst >= -1e-6
    parts.append(f"random F_H min slack {worst:.1e}")
    return ok, "; ".join(parts)


def criterion_5():
    p = extremal_ft_profile(1.0, 0.8)
    q = extremal_ft_profile(1.0, 1 - 1e-8)
    ok = (
        abs(p.Mt - 2.0) <= 1e-9
        and abs(p.r0 - 0.5) <= 1e-9
        and p.flagged
        and abs(p.Mt_printed - 2.25) < 1e-12
        and abs(q.Mt - 3.0) <= 1e-3
        and abs(q.Mt_printed - 3.0) <= 1e-3
    )
    return ok, (
        f"M_t={p.Mt:.12f}, r0={p.r0:.12f}, printed={p.Mt_printed}, flagged={p.flagged}; "
        f"t=1-1e-8: {q.Mt:.6f} / {q.Mt_printed:.6f}"
    )


def criterion_6():
    rng = np.random.default_rng(SEED)
    worst = math.inf
    for _ in range(50):
        f = random_member(rng)
        worst = min(worst, float(np.min(sharp_inequality_residual(f, _random_disk_points(rng, 1000)))))
    eq = 0.0
    for _ in range(10):
        f = single_atom(float(rng.uniform(0.01, 3.0)), cmath.exp(2j * math.pi * rng.uniform()))
        eq = max(eq, float(np.max(np.abs(sharp_inequality_residual(f, _random_disk_points(rng, 1000))))))
    return worst >= -1e-10 and eq < 1e-10, f"min residual {worst:.2e}; single-atom max |residual| {eq:.1e}"


def criterion_7():
    rng = np.random.default_rng(SEED)
    grid = GridSpec()
    members = [random_member(rng) for _ in range(50)]
    members += [from_blaschke(float(rng.uniform(0.05, 3.0)), random_blaschke(rng)) for _ in range(20)]
    worst = min(subordination_check(f, grid).margin for f in members)
    zeta = cmath.exp(1j * math.pi / 3)
    z = grid.points()
    pre = max(
        float(np.max(np.abs(subordination_preimage(single_atom(a, zeta), z) - zeta * z))) for a in (0.5, 1.0, 2.0, 3.0)
    )
    return worst >= -1e-9 and pre < 1e-9, f"min margin {worst:.3e} over 70 members; rotated preimage error {pre:.1e}"


def criterion_8():
    z_map = Dilatation.moebius(0.0)
    b1 = bloch_constant(HarmonicMap(IdentityMap(), z_map)).value
    b0 = bloch_constant(HarmonicMap(IdentityMap(), Dilatation.zero())).value
    t = bloch_bound_t71(1e-6)
    disagree = bloch_bound_t71(0.5)["roots_disagree"]
    ok = abs(b1 - 32 / 27) < 1e-6 and abs(b0 - 1) < 1e-9 and abs(t["direct_sup"] - 32 / 27) < 1e-4 and disagree
    return ok, (
        f"B(z)={b1:.10f}, B(0)={b0:.12f}, bound at a->0 {t['direct_sup']:.8f}, "
        f"root disagreement reported={disagree}"
    )


def criterion_9():
    circ = max(abs(bounded_turning_constant(circle_curve(n)).constant - 1) for n in (64, 256, 1024))
    cusp = [bounded_turning_constant(cusp_curve(n)).constant for n in (256, 512, 1024)]
    growth = min(b / a for a, b in zip(cusp, cusp[1:]))
    spreads = {a: quasidisk_diagnostic(single_atom(a), [0.9, 0.99, 0.999]).spread for a in (1.0, 2.0, 2.7)}
    ok = circ < 1e-6 and growth > 1.5 and all(s < 2 for s in spreads.values())
    sp = ", ".join(f"a={a}: {s:.3f}" for a, s in spreads.items())
    return ok, f"circle |K-1| {circ:.1e}; cusp growth per doubling {growth:.2f}; max/min {sp}"


def criterion_10():
    spec = json.dumps({"alpha": 0.8, "atoms": [{"zeta": [1, 0], "t": 0.3}, {"zeta": [0, 1], "t": 0.7}]})
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a.json", Path(tmp) / "b.json"
        codes = [cli.main(["report", "--spec", spec, "--out", str(p)]) for p in (a, b)]
        same = a.read_bytes() == b.read_bytes()
        size = a.stat().st_size
    return same and all(c in (0, 2) for c in codes), f"byte-identical={same} ({size} bytes), exit codes {codes}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


def _check(n):
    ok, detail = CRITERIA[n]()
    assert _record(n, ok, detail), RESULTS[n]


def test_criterion_01_blaschke_weights():
    _check(1)


def test_criterion_02_extremal_schwarzian_norm():
    _check(2)


def test_criterion_03_schwarzian_bound_random_members():
    _check(3)


def test_criterion_04_pre_schwarzian_norms():
    _check(4)


def test_criterion_05_ft_profile_cross_check():
    _check(5)


def test_criterion_06_sharp_inequality():
    _check(6)


def test_criterion_07_subordination():
    _check(7)


def test_criterion_08_bloch():
    _check(8)


def test_criterion_09_quasidisk():
    _check(9)


def test_criterion_10_determinism():
    _check(10)


if __name__ == "__main__":
    failed = 0
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        _record(n, ok, detail)
        failed += not ok
        print(RESULTS[n], flush=True)
    sys.exit(1 if failed else 0)
