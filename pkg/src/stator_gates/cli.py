"""Command-line front end: ``stator-gates <command> [flags]``.

Exit codes: 0 success, 1 failed verification, 2 bad arguments or output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import analysis
from .improved import params_from_nb, run_improved_protocol
from .linalg import Z_AXIS, PauliAxis, StateVector
from .multiparty import MultipartySpec, run_multiparty_protocol
from .protocol import (
    GateSpec,
    deterministic_config,
    fpt_config,
    optimal_alpha,
    run_general_protocol,
    smallxi_config,
)
from .rng import DEFAULT_SEED, SplitMix64
from .stator import ProtocolReport
from .verify import all_passed, verify_all

COMMANDS = ("deterministic", "fpt", "smallxi", "improved", "curves", "plan", "multiparty", "verify-all")
CURVE_HEADER = ("n", "xi", "E0", "E0_exact", "EFPT", "F")
BRANCH_HEADER = ("path", "probability", "success", "distance")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    xi: float | None = None
    n: float | None = None
    b: float = analysis.DEFAULT_B
    F_target: float | None = None
    alpha: float | None = None
    N: int | None = None
    mode: str = "deterministic"
    charlie: bool = False
    axis_a: PauliAxis = Z_AXIS
    axis_b: PauliAxis = Z_AXIS
    axis_c: PauliAxis = Z_AXIS
    axes: tuple[PauliAxis, ...] = ()
    points: int = analysis.GRID_POINTS
    n_max: float = analysis.N_MAX
    target: str = "random"
    seed: int = DEFAULT_SEED
    format: str = "json"
    output: str | None = None
    params: dict[str, Any] = field(default_factory=dict)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            flags = ", ".join("--F" if m == "F_target" else f"--{m}" for m in missing)
            raise UsageError(f"{self.command} requires {flags}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _axis(text: str) -> PauliAxis:
    try:
        x, y, z = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"axis must be 'x,y,z', got {text!r}") from exc
    return PauliAxis.normalize(x, y, z)


def _axes(text: str) -> tuple[PauliAxis, ...]:
    return tuple(_axis(t) for t in text.split(";") if t.strip())


def _target_state(cfg: RunConfig, labels: tuple[str, ...]) -> StateVector:
    if cfg.target == "random":
        return SplitMix64(cfg.seed).random_state(labels)
    try:
        idx = int(cfg.target)
    except ValueError as exc:
        raise UsageError(f"--target must be a basis index or 'random', got {cfg.target!r}") from exc
    if not 0 <= idx < 2 ** len(labels):
        raise UsageError(f"--target index {idx} out of range for {len(labels)} qubits")
    return StateVector.basis(labels, idx)


def _operator_pairs(K: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(K).reshape(-1)]


def report_to_dict(cfg: RunConfig, rep: ProtocolReport) -> dict[str, Any]:
    return {
        "command": cfg.command,
        "params": cfg.params,
        "branches": [
            {
                "path": [list(kv) for kv in br.path],
                "probability": br.probability,
                "success": br.success,
                "distance": br.distance,
                "operator": _operator_pairs(br.conditional_operator),
            }
            for br in rep.branches
        ],
        "F": rep.F,
        "E": rep.E,
        "classical_bits": rep.classical_bits,
    }


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def report_to_csv(rep: ProtocolReport) -> str:
    rows = [
        (";".join(f"{k}={v}" for k, v in br.path), _fmt(br.probability), int(br.success), _fmt(br.distance))
        for br in rep.branches
    ]
    return _csv(BRANCH_HEADER, rows)


def curve_to_csv(curve: analysis.Curve) -> str:
    rows = [tuple(_fmt(v) for v in (p.n, p.xi_opt, p.E0, p.E0_exact, p.E_FPT, p.F)) for p in curve]
    return _csv(CURVE_HEADER, rows)


def _gate(cfg: RunConfig) -> GateSpec:
    return GateSpec(cfg.xi, cfg.axis_a, cfg.axis_b)


def _run_protocol(cfg: RunConfig) -> ProtocolReport:
    cmd = cfg.command
    if cmd == "multiparty":
        return _run_multiparty(cfg)
    cfg.require("xi")
    g = _gate(cfg)
    target = _target_state(cfg, ("A", "B"))
    cfg.params.update(xi=g.xi, axis_a=g.axis_a.as_tuple(), axis_b=g.axis_b.as_tuple(),
                      target=cfg.target, seed=cfg.seed)
    if cmd == "deterministic":
        spec, angles = deterministic_config(g)
    elif cmd == "fpt":
        cfg.require("F_target")
        spec, angles = fpt_config(g, cfg.F_target)
        cfg.params["F_target"] = cfg.F_target
    elif cmd == "smallxi":
        alpha = optimal_alpha(g) if cfg.alpha is None else cfg.alpha
        spec, angles = smallxi_config(g, alpha)
        cfg.params["alpha"] = alpha
    elif cmd == "improved":
        n = analysis.plan_for_xi(g.xi, cfg.b).n if cfg.n is None else cfg.n
        if n is None:
            raise UsageError(f"xi={g.xi} is in the FPT regime; pass --n explicitly")
        cfg.params.update(n=n, b=cfg.b)
        return run_improved_protocol(params_from_nb(n, cfg.b, g.xi), g, target)
    else:  # pragma: no cover - guarded by argparse choices
        raise UsageError(f"unknown command {cmd}")
    cfg.params.update(lam=list(spec.lam), delta0=angles.delta0, delta1=angles.delta1)
    return run_general_protocol(spec, angles, g, target)


def _run_multiparty(cfg: RunConfig) -> ProtocolReport:
    cfg.require("xi", "N")
    axes = cfg.axes or (Z_AXIS,) * cfg.N
    g = GateSpec(cfg.xi)
    kw: dict[str, Any] = {}
    if cfg.mode == "deterministic":
        spec, kw["angles"] = deterministic_config(g)
    elif cfg.mode == "fpt":
        cfg.require("F_target")
        spec, kw["angles"] = fpt_config(g, cfg.F_target)
    elif cfg.mode == "improved":
        n = analysis.plan_for_xi(g.xi, cfg.b).n if cfg.n is None else cfg.n
        if n is None:
            raise UsageError(f"xi={g.xi} is in the FPT regime; pass --n explicitly")
        p = params_from_nb(n, cfg.b, g.xi)
        spec, kw["improved"] = p.resource(), p
        cfg.params.update(n=n, b=cfg.b)
    else:
        raise UsageError(f"unknown multiparty mode {cfg.mode!r}")
    mspec = MultipartySpec(cfg.N, spec, axes, cfg.axis_c, cfg.charlie)
    cfg.params.update(xi=g.xi, N=cfg.N, mode=cfg.mode, charlie=cfg.charlie,
                      axes=[a.as_tuple() for a in mspec.axes], target=cfg.target, seed=cfg.seed)
    return run_multiparty_protocol(mspec, g.xi, _target_state(cfg, mspec.targets), **kw)


def render(cfg: RunConfig) -> tuple[str, int]:
    """Run the command and return (serialized output, exit code)."""
    if cfg.command == "curves":
        grid = analysis.default_grid(cfg.b, cfg.points, cfg.n_max)
        curve = analysis.generate_curve(cfg.b, grid)
        if cfg.format == "csv":
            return curve_to_csv(curve), 0
        cfg.params.update(b=cfg.b, points=cfg.points, n_max=cfg.n_max)
        body = {"command": cfg.command, "params": cfg.params,
                "points": [asdict(p) for p in curve], "skipped": curve.skipped}
        return json.dumps(body, indent=2) + "\n", 0
    if cfg.command == "plan":
        cfg.require("xi")
        plan = analysis.plan_for_xi(cfg.xi, cfg.b)
        if cfg.format == "csv":
            n = "" if plan.n is None else _fmt(plan.n)
            return _csv(("method", "xi", "n", "E0", "F"),
                        [(plan.method, _fmt(plan.xi), n, _fmt(plan.E0), _fmt(plan.F))]), 0
        body = {"command": "plan", "params": {"xi": cfg.xi, "b": cfg.b}, "method": plan.method,
                "n": plan.n, "E0": plan.E0, "F": plan.F}
        return json.dumps(body, indent=2) + "\n", 0
    if cfg.command == "verify-all":
        lines: list[str] = []
        checks = verify_all(echo=lines.append)
        prov = analysis.n0_provenance(cfg.b)
        code = 0 if all_passed(checks) else 1
        if cfg.format == "json":
            body = {"command": "verify-all", "passed": code == 0,
                    "checks": [asdict(c) for c in checks], "n0_provenance": prov}
            return json.dumps(body, indent=2) + "\n", code
        lines.append("n0 provenance: " + ", ".join(f"{k}={v:.6f}" for k, v in prov.items()))
        lines.append("ALL PASS" if code == 0 else "SOME CHECKS FAILED")
        return "\n".join(lines) + "\n", code
    rep = _run_protocol(cfg)
    if cfg.format == "csv":
        return report_to_csv(rep), 0
    return json.dumps(report_to_dict(cfg, rep), indent=2) + "\n", 0


def dispatch(cfg: RunConfig) -> int:
    try:
        text, code = render(cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.output is None:
        sys.stdout.write(text)
        return code
    try:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
        return 2
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--xi", type=float)
    common.add_argument("--n", type=float)
    common.add_argument("--b", type=float, default=analysis.DEFAULT_B)
    common.add_argument("--F", dest="F_target", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--N", type=int)
    common.add_argument("--mode", choices=("deterministic", "fpt", "improved"), default="deterministic")
    common.add_argument("--charlie", action="store_true", help="add Charlie's own target qubit")
    common.add_argument("--axis-a", type=_axis, default=Z_AXIS)
    common.add_argument("--axis-b", type=_axis, default=Z_AXIS)
    common.add_argument("--axis-c", type=_axis, default=Z_AXIS)
    common.add_argument("--axes", type=_axes, default=(), help="'x,y,z;x,y,z;...' one per partner")
    common.add_argument("--points", type=int, default=analysis.GRID_POINTS)
    common.add_argument("--n-max", type=float, default=analysis.N_MAX)
    common.add_argument("--target", default="random", help="basis index or 'random'")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--output", "-o")

    parser = argparse.ArgumentParser(prog="stator-gates", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fmt = ns.format or ("csv" if ns.command == "curves" else "json" if ns.command != "verify-all" else "text")
    return RunConfig(
        command=ns.command, xi=ns.xi, n=ns.n, b=ns.b, F_target=ns.F_target, alpha=ns.alpha,
        N=ns.N, mode=ns.mode, charlie=ns.charlie, axis_a=ns.axis_a, axis_b=ns.axis_b,
        axis_c=ns.axis_c, axes=ns.axes, points=ns.points, n_max=ns.n_max, target=ns.target,
        seed=ns.seed, format=fmt, output=ns.output,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
