"""Command-line front end.

    qdl construct --blaschke in.json --alpha 2
    qdl membership --spec f.json
    qdl norm --kind schwarzian --spec f.json
    qdl boundary --spec f.json --r 0.99 --n 1024 --out curve.csv --svg curve.svg
    qdl quasi --spec f.json --radii 0.9,0.99,0.999
    qdl harmonic-norm --spec hm.json
    qdl bloch --spec hm.json --bound-alpha 0.5
    qdl report --spec f.json

``--spec`` and ``--blaschke`` take a file path or inline JSON.  Reports go to
stdout unless ``--out`` is given.  Exit status is 0 on success, 2 when a
certificate or bound check fails, 1 on error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import derivatives, family, geometry, harmonic, jsonio
from .blaschke import BlaschkeProduct
from .errors import InvalidInput, QDLError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2

MARGIN_TOL = 1e-9
SLACK_TOL = 1e-6
RESIDUAL_TOL = 1e-10

COMMANDS = ("construct", "membership", "norm", "boundary", "quasi", "harmonic-norm", "bloch", "report")
NORM_COMMANDS = {"norm", "harmonic-norm", "bloch", "report"}
DEFAULT_RADII = (0.9, 0.99, 0.999)


@dataclass
class RunConfig:
    command: str
    input_spec: Optional[str] = None
    output: Optional[str] = None
    alpha: Optional[float] = None
    kind: str = "schwarzian"
    r: Optional[float] = None
    n: int = geometry.DEFAULT_SAMPLES
    svg: Optional[str] = None
    radii: tuple = DEFAULT_RADII
    bound_alpha: Optional[float] = None
    grid: family.GridSpec = field(default_factory=family.GridSpec)
    budget: int = derivatives.DEFAULT_BUDGET
    # only randomized test suites consume the seed; every command is deterministic
    seed: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidInput(f"field 'command': unknown command {self.command!r}")
        if self.command in NORM_COMMANDS and self.budget < derivatives.MIN_BUDGET:
            raise InvalidInput(f"field 'budget': must be at least {derivatives.MIN_BUDGET}, got {self.budget}")


def load_json_arg(value: Optional[str], name: str) -> Any:
    """Parse ``value`` as a path to a JSON file or as inline JSON."""
    if value is None:
        raise InvalidInput(f"field '{name}': required")
    text = value
    if not value.lstrip().startswith(("{", "[")):
        path = Path(value)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InvalidInput(f"field '{name}': cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"field '{name}': malformed JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None


def _load_function(cfg: RunConfig):
    return family.function_from_spec(load_json_arg(cfg.input_spec, "spec"))


def _load_harmonic(cfg: RunConfig) -> harmonic.HarmonicMap:
    data = load_json_arg(cfg.input_spec, "spec")
    if isinstance(data, dict) and "analytic" not in data and "alpha" in data:
        # bare analytic spec: pair it with the coupled dilatation
        return harmonic.HarmonicMap.with_coupled_dilatation(family.function_from_spec(data))
    return harmonic.HarmonicMap.from_spec(data)


# ------------------------------------------------------------------ commands


def cmd_construct(cfg: RunConfig):
    if cfg.alpha is None:
        raise InvalidInput("field 'alpha': required for construct")
    phi = BlaschkeProduct.from_dict(load_json_arg(cfg.input_spec, "blaschke"))
    return family.from_blaschke(cfg.alpha, phi).to_spec(), True


def _membership(f, grid):
    rep = family.membership_margin(f, grid)
    return rep.to_dict(), rep.margin >= -MARGIN_TOL


def cmd_membership(cfg: RunConfig):
    return _membership(_load_function(cfg), cfg.grid)


def _norm_report(f, kind: str, budget: int):
    if kind == "pre":
        rep = derivatives.pre_schwarzian_norm_bound_check(f, budget)
    elif kind == "schwarzian":
        rep = derivatives.schwarzian_norm_bound_check(f, budget, allow_out_of_range=True)
    else:
        raise InvalidInput(f"field 'kind': expected 'pre' or 'schwarzian', got {kind!r}")
    out = {"kind": kind, **rep.to_dict(), "estimate": rep.estimate.to_dict()}
    ok = rep.slack is None or rep.slack >= -SLACK_TOL
    return out, ok


def cmd_norm(cfg: RunConfig):
    return _norm_report(_load_function(cfg), cfg.kind, cfg.budget)


def cmd_boundary(cfg: RunConfig):
    if cfg.r is None:
        raise InvalidInput("field 'r': required for boundary")
    if cfg.output is None:
        raise InvalidInput("field 'out': boundary needs a CSV output path")
    curve = geometry.trace_boundary(_load_function(cfg), cfg.r, cfg.n)
    geometry.emit_curve(curve, "csv", cfg.output)
    if cfg.svg:
        geometry.emit_curve(curve, "svg", cfg.svg)
    summary = {
        "radius": cfg.r,
        "samples": len(curve),
        "closure_drift": curve.closure_drift,
        "relative_drift": curve.relative_drift,
        "simple": geometry.is_simple(curve),
        "csv": str(cfg.output),
        "svg": cfg.svg,
    }
    return summary, True


def cmd_quasi(cfg: RunConfig):
    rep = geometry.quasidisk_diagnostic(_load_function(cfg), cfg.radii, cfg.n)
    return rep.to_dict(), True


def cmd_harmonic_norm(cfg: RunConfig):
    f = _load_harmonic(cfg)
    rep = harmonic.hm_pre_schwarzian_norm(f, cfg.budget)
    out = {**rep.to_dict(), "estimate": rep.estimate.to_dict(), "map": f.to_spec()}
    return out, rep.slack >= -SLACK_TOL


def cmd_bloch(cfg: RunConfig):
    f = _load_harmonic(cfg)
    est = harmonic.bloch_constant(f, cfg.budget)
    out: dict[str, Any] = {"bloch": est.value, "estimate": est.to_dict(), "map": f.to_spec()}
    bound_alpha = cfg.bound_alpha
    if bound_alpha is None and 0.0 < f.alpha < 2.0 and not isinstance(f.analytic, family.IdentityMap):
        bound_alpha = f.alpha
    out["bound_t71"] = None if bound_alpha is None else harmonic.bloch_bound_t71(bound_alpha)
    return out, True


def cmd_report(cfg: RunConfig):
    f = _load_function(cfg)
    grid = cfg.grid
    checks = {}
    membership, ok_m = _membership(f, grid)
    z = grid.points()
    resid = family.sharp_inequality_residual(f, z)
    k = np.unravel_index(np.argmin(resid), resid.shape)
    residual = {"min": float(resid[k]), "argmin": complex(z[k])}
    ok_r = residual["min"] >= -RESIDUAL_TOL
    sub = family.subordination_check(f, grid)
    pre, ok_p = _norm_report(f, "pre", cfg.budget)
    sch, ok_s = _norm_report(f, "schwarzian", cfg.budget)
    quasi = geometry.quasidisk_diagnostic(f, cfg.radii, cfg.n).to_dict()
    checks = {
        "membership": ok_m,
        "sharp_residual": ok_r,
        "subordination": sub.passed,
        "pre_schwarzian_bound": ok_p,
        "schwarzian_bound": ok_s,
    }
    out = {
        "spec": f.to_spec(),
        "membership": membership,
        "sharp_residual": residual,
        "subordination": sub.to_dict(),
        "pre_schwarzian": pre,
        "schwarzian": sch,
        "quasidisk": quasi,
        "checks": checks,
    }
    return out, all(checks.values())


HANDLERS = {
    "construct": cmd_construct,
    "membership": cmd_membership,
    "norm": cmd_norm,
    "boundary": cmd_boundary,
    "quasi": cmd_quasi,
    "harmonic-norm": cmd_harmonic_norm,
    "bloch": cmd_bloch,
    "report": cmd_report,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Dispatch ``cfg`` and emit its JSON report; returns the exit status."""
    stdout = stdout or sys.stdout
    payload, ok = HANDLERS[cfg.command](cfg)
    text = jsonio.dumps(payload)
    if cfg.output and cfg.command != "boundary":
        jsonio.write_atomic(cfg.output, text)
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ------------------------------------------------------------------- parsing


def _radii(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdl", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="function spec: path or inline JSON")
    common.add_argument("--out", help="write the report (or the CSV for boundary) here")
    common.add_argument("--budget", type=int, default=derivatives.DEFAULT_BUDGET, help="refinement evaluations for norm searches")
    common.add_argument("--grid-radial", type=int, default=family.GridSpec.n_radial)
    common.add_argument("--grid-angular", type=int, default=family.GridSpec.n_angular)
    common.add_argument("--grid-rmax", type=float, default=family.GridSpec.r_max)
    common.add_argument("--n", type=int, default=geometry.DEFAULT_SAMPLES, help="boundary samples")
    common.add_argument("--radii", type=_radii, default=DEFAULT_RADII, help="comma-separated radii")
    common.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="atoms from a Blaschke product")
    p.add_argument("--blaschke", required=True, help="Blaschke product: path or inline JSON")
    p.add_argument("--alpha", type=float, required=True)
    sub.add_parser("membership", parents=[common], help="grid membership margin")
    p = sub.add_parser("norm", parents=[common], help="pre-Schwarzian or Schwarzian norm")
    p.add_argument("--kind", choices=("pre", "schwarzian"), default="schwarzian")
    p = sub.add_parser("boundary", parents=[common], help="trace f(r T) to CSV and SVG")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--svg")
    sub.add_parser("quasi", parents=[common], help="turning constants over radii")
    sub.add_parser("harmonic-norm", parents=[common], help="harmonic pre-Schwarzian norm")
    p = sub.add_parser("bloch", parents=[common], help="Bloch constant estimate")
    p.add_argument("--bound-alpha", type=float)
    sub.add_parser("report", parents=[common], help="every check in one JSON document")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    grid = family.GridSpec(ns.grid_radial, ns.grid_angular, ns.grid_rmax)
    return RunConfig(
        command=ns.command,
        input_spec=getattr(ns, "blaschke", None) if ns.command == "construct" else ns.spec,
        output=ns.out,
        alpha=getattr(ns, "alpha", None),
        kind=getattr(ns, "kind", "schwarzian"),
        r=getattr(ns, "r", None),
        n=ns.n,
        svg=getattr(ns, "svg", None),
        radii=ns.radii,
        bound_alpha=getattr(ns, "bound_alpha", None),
        grid=grid,
        budget=ns.budget,
        seed=ns.seed,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return run(config_from_args(ns))
    except (QDLError, OSError) as exc:
        print(f"qdl {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
