"""Command-line entry point: ``sqwalk <group> <command> [flags]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__, kernels
from .errors import DomainError, SqwalkError
from .experiments import (
    COLUMNS,
    SweepSpec,
    run_fig2,
    run_fig5,
    run_fig6,
    run_fig34,
    run_noise_study,
    run_reconstruct,
    run_simulate,
    spec_hash,
)

EXIT_OK = 0
EXIT_INVALID_SPEC = 2
EXIT_DECODE_FAILURE = 3


def angle(text: str) -> float:
    """Radians, or degrees when suffixed with ``deg`` (e.g. ``23.6deg``)."""
    text = text.strip().lower()
    try:
        if text.endswith("deg"):
            return math.radians(float(text[:-3]))
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    d = SweepSpec()
    p.add_argument("--alpha-start", type=float, default=d.alpha_start)
    p.add_argument("--alpha-end", type=float, default=d.alpha_end)
    p.add_argument("--points", type=int, default=d.points)
    p.add_argument("--steps", type=int, default=d.steps)
    p.add_argument("--theta", type=angle, default=d.theta, help="coin angle (radians, or e.g. 45deg)")
    p.add_argument("--phi0", type=angle, default=d.phi_0, help="phase step (radians, or e.g. 23.6deg)")
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--noise-sigma", type=float, default=d.noise_sigma)
    p.add_argument("--via-codec", action="store_true", help="use states reconstructed from ratios")
    p.add_argument("--strict", action="store_true", help="exit with status 3 on any decode failure")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=None, help="output path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqwalk", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    walk = groups.add_parser("walk", help="simulate or reconstruct one-particle walks")
    walk_cmds = walk.add_subparsers(dest="command", required=True)
    sim = walk_cmds.add_parser("simulate", help="final amplitudes per alpha")
    _add_sweep_flags(sim)
    sim.add_argument("--summary", action="store_true", help="one row per alpha with mean, variance, std")
    rec = walk_cmds.add_parser("reconstruct", help="single-qubit readout and fidelity per alpha")
    _add_sweep_flags(rec)

    figs = groups.add_parser("figures", help="theory curves for each figure")
    fig_cmds = figs.add_subparsers(dest="command", required=True)
    for name in ("fig2", "fig34", "fig5", "fig6"):
        _add_sweep_flags(fig_cmds.add_parser(name))

    noise = groups.add_parser("noise", help="reconstruction under ratio noise")
    noise_cmds = noise.add_subparsers(dest="command", required=True)
    study = noise_cmds.add_parser("study")
    _add_sweep_flags(study)
    study.add_argument("--step-range", type=int_list, default=[1, 3, 5, 7])
    study.add_argument("--sigma-range", type=float_list, default=[0.0, 1e-5, 1e-4, 1e-3, 1e-2])
    study.add_argument("--seeds", type=int, default=100)
    study.add_argument("--alpha", type=float, default=1 / math.sqrt(2))
    return parser


def _spec_from_args(args) -> SweepSpec:
    return SweepSpec(
        alpha_start=args.alpha_start,
        alpha_end=args.alpha_end,
        points=args.points,
        steps=args.steps,
        theta=args.theta,
        phi_0=args.phi0,
        seed=args.seed,
        noise_sigma=args.noise_sigma,
        via_codec=args.via_codec,
        strict=args.strict,
    )


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def render(rows: list, columns: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _run(args) -> tuple[str, list]:
    spec = _spec_from_args(args)
    key = f"{args.group} {args.command}"
    if key == "walk simulate":
        return ("simulate_summary" if args.summary else "simulate"), run_simulate(spec, args.summary, args.workers)
    if key == "walk reconstruct":
        return "reconstruct", run_reconstruct(spec, args.workers)
    if key == "noise study":
        if args.seeds < 1 or any(n < 0 for n in args.step_range) or any(s < 0 for s in args.sigma_range):
            raise DomainError("seeds must be >= 1, steps and sigmas >= 0")
        return "noise", run_noise_study(spec, args.step_range, args.sigma_range, args.seeds, args.alpha, args.workers)
    runners = {"fig2": run_fig2, "fig34": run_fig34, "fig5": run_fig5, "fig6": run_fig6}
    return args.command, runners[args.command](spec, workers=args.workers)


def _sidecar(args, schema: str) -> dict:
    spec = _spec_from_args(args)
    payload = {"command": f"{args.group} {args.command}", "schema": schema, "spec": spec.to_json()}
    if args.group == "noise":
        payload["noise"] = {
            "step_range": args.step_range,
            "sigma_range": args.sigma_range,
            "seeds": args.seeds,
            "alpha": args.alpha,
        }
    if args.group == "walk" and args.command == "simulate":
        payload["summary"] = args.summary
    return {
        **payload,
        "columns": COLUMNS[schema],
        "tool": "sqwalk",
        "version": __version__,
        "backend": kernels.BACKEND,
        "input_hash": spec_hash(payload),
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        schema, rows = _run(args)
    except DomainError as exc:
        print(f"sqwalk: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID_SPEC
    except SqwalkError as exc:
        print(f"sqwalk: decode failure: {exc}", file=sys.stderr)
        return EXIT_DECODE_FAILURE
    text = render(rows, COLUMNS[schema], args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        meta = args.out.with_name(args.out.name + ".meta.json")
        meta.write_text(json.dumps(_sidecar(args, schema), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
