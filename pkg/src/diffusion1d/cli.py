"""Command-line front end.

Subcommands: validate, hamza, merge, core, energy, hitprob, simulate.
Exit codes: 0 success/affirmative, 1 negative verdict, 2 parse error,
3 undecidable, 4 precondition failure.  CSV output uses a header row, LF
line endings, and 17 significant digits, so identical runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import io
import sys

from . import dirichlet, simulate, smoothcore
from .config import ConfigError, load_document
from .measures import Interval
from .simulate import ChainError, SimConfig
from .smoothcore import SmoothContainmentError
from .xreal import INF, fmt

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_UNDECIDABLE = 3
EXIT_PRECONDITION = 4


def _emit(lines: list[str], rows: list[dict], args) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        if rows:
            header = list(rows[0].keys())
            buf.write(",".join(header) + "\n")
            for row in rows:
                buf.write(",".join(_csv_cell(row[h]) for h in header) + "\n")
        text = buf.getvalue()
    else:
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _header(args, doc) -> list[str]:
    lines = [f"command: {args.command}", f"config: {args.config}", f"digest: {doc.digest}"]
    if doc.label:
        lines.append(f"label: {doc.label}")
    return lines


def _need_spec(doc):
    if doc.spec is None:
        raise ConfigError("this command needs state_space/speed_measure/effective_intervals")
    return doc.spec


def cmd_validate(args, doc) -> int:
    spec = _need_spec(doc)
    report = dirichlet.validate(spec)
    lines = _header(args, doc) + report.to_text().splitlines()
    rows = [
        {"check": c.name, "result": "PASS" if c.passed else ("UNDECIDABLE" if c.passed is None else "FAIL"), "detail": c.detail}
        for c in report.checks
    ]
    _emit(lines, rows, args)
    if report.ok:
        return EXIT_OK
    return EXIT_UNDECIDABLE if report.undecidable else EXIT_NEGATIVE


def cmd_hamza(args, doc) -> int:
    if doc.density is None:
        raise ConfigError("hamza needs a 'density' section")
    decision = smoothcore.hamza_closable(doc.density)
    lines = _header(args, doc)
    rows: list[dict] = []
    if not decision.closable:
        lines.append(f"closable: NO ({decision.reason})")
        _emit(lines, rows, args)
        return EXIT_NEGATIVE
    spec = smoothcore.intervals_from_density(doc.density)
    lines.append(f"closable: YES; {len(spec.intervals)} effective interval(s)")
    for n, ei in enumerate(spec.intervals):
        iv = ei.interval
        s = ei.scale
        lines.append(
            f"interval {n}: {iv}; scale limits ({fmt(s.limit_left())}, {fmt(s.limit_right())})"
        )
        rows.append(
            {
                "interval": n,
                "a": iv.a,
                "b": iv.b,
                "a_member": int(iv.left_closed),
                "b_member": int(iv.right_closed),
                "scale_left": s.limit_left(),
                "scale_right": s.limit_right(),
            }
        )
    if decision.regular is not None and decision.regular.truncated:
        for note in decision.regular.notes:
            lines.append(f"note: {note}")
    _emit(lines, rows, args)
    return EXIT_OK


def cmd_core(args, doc) -> int:
    spec = _need_spec(doc)
    report = smoothcore.is_special_standard_core(spec)
    lines = _header(args, doc) + report.to_lines()
    rows = [{"verdict": report.verdict}]
    _emit(lines, rows, args)
    if report.verdict == "yes":
        return EXIT_OK
    if report.verdict == "no-smooth-containment":
        return EXIT_PRECONDITION
    return EXIT_NEGATIVE


def cmd_merge(args, doc) -> int:
    spec = _need_spec(doc)
    try:
        result = smoothcore.cinf_merge(spec)
    except SmoothContainmentError as exc:
        _emit(_header(args, doc) + [f"precondition failed: {exc}"], [], args)
        return EXIT_PRECONDITION
    lines = _header(args, doc) + result.to_lines()
    _emit(lines, result.csv_rows(), args)
    return EXIT_OK


def cmd_energy(args, doc) -> int:
    spec = _need_spec(doc)
    if doc.test_function is None:
        raise ConfigError("energy needs a 'test_function' section")
    value = dirichlet.energy(spec, doc.test_function)
    verdict = dirichlet.in_domain(spec, doc.test_function)
    lines = _header(args, doc) + [
        f"energy: {fmt(value)}",
        f"in_domain: {'yes' if verdict.ok else 'no'}",
    ]
    lines.extend(f"  reason: {r}" for r in verdict.reasons)
    rows = [{"energy": value, "in_domain": int(verdict.ok)}]
    _emit(lines, rows, args)
    return EXIT_OK


def cmd_hitprob(args, doc) -> int:
    spec = _need_spec(doc)
    p = dirichlet.hitting_probability(spec, args.start, args.left, args.right)
    lines = _header(args, doc) + [
        f"start: {fmt(args.start)}  targets: ({fmt(args.left)}, {fmt(args.right)})",
        f"exact: {fmt(p)}",
    ]
    rows = [{"start": args.start, "left": args.left, "right": args.right, "exact": p}]
    _emit(lines, rows, args)
    return EXIT_OK


def cmd_simulate(args, doc) -> int:
    spec = _need_spec(doc)
    cfg = SimConfig(
        delta_s=args.delta_s,
        n_paths=args.paths,
        rng_seed=args.seed,
        max_steps=args.max_steps,
        workers=args.workers,
    )
    n = args.interval
    if args.kind == "hitting":
        window = Interval(args.left, args.right, True, True)
        chain = simulate.build_chain(spec, n, window, cfg)
        res = simulate.estimate_hitting(chain, args.start, args.left, args.right, cfg)
        lines = _header(args, doc) + [
            f"interval: {n}  start: {fmt(args.start)}  targets: ({fmt(args.left)}, {fmt(args.right)})",
            f"exact (tridiagonal): {fmt(res.exact)}",
            f"estimate: {fmt(res.estimate)}  se: {fmt(res.stderr)}",
            f"paths: {res.n_paths}  unresolved: {res.n_unresolved}  seed: {res.seed}",
        ]
        rows = [
            {
                "spec": doc.digest,
                "kind": "hitting",
                "interval": n,
                "start": args.start,
                "left": args.left,
                "right": args.right,
                "exact": res.exact,
                "estimate": res.estimate,
                "se": res.stderr,
                "n_paths": res.n_paths,
                "seed": res.seed,
            }
        ]
        _emit(lines, rows, args)
        return EXIT_OK

    window = Interval(args.left, args.right, True, True)
    ei = spec.intervals[n].interval
    window = Interval(
        args.left, args.right, ei.contains(args.left), ei.contains(args.right)
    )
    chain = simulate.build_chain(spec, n, window, cfg)
    res = simulate.occupation_profile(chain, args.start, args.steps, cfg)
    se = res.cell_stderr()
    lines = _header(args, doc) + [
        f"interval: {n}  steps: {args.steps}  seed: {cfg.rng_seed}",
        "grid_x  time_share  expected_share  se",
    ]
    rows = []
    for k, x in enumerate(chain.grid_x):
        lines.append(
            f"{fmt(float(x))}  {fmt(float(res.time_share[k]))}  "
            f"{fmt(float(res.expected_share[k]))}  {fmt(float(se[k]))}"
        )
        rows.append(
            {
                "spec": doc.digest,
                "kind": "occupation",
                "interval": n,
                "grid_x": float(x),
                "time_share": float(res.time_share[k]),
                "expected_share": float(res.expected_share[k]),
                "se": float(se[k]),
                "steps": args.steps,
                "seed": cfg.rng_seed,
            }
        )
    _emit(lines, rows, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", required=True, help="path to the JSON config")
    shared.add_argument("--format", choices=("text", "csv"), default="text")
    shared.add_argument("--out", default=None, help="write the report to a file")

    parser = argparse.ArgumentParser(
        prog="diffusion1d",
        description="Effective-interval systems of symmetric one-dimensional diffusions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[shared])
    sub.add_parser("hamza", parents=[shared])
    sub.add_parser("merge", parents=[shared])
    sub.add_parser("core", parents=[shared])
    sub.add_parser("energy", parents=[shared])

    hp = sub.add_parser("hitprob", parents=[shared])
    hp.add_argument("--start", type=float, required=True)
    hp.add_argument("--left", type=float, required=True)
    hp.add_argument("--right", type=float, required=True)

    sim = sub.add_parser("simulate", parents=[shared])
    sim.add_argument("--kind", choices=("hitting", "occupation"), default="hitting")
    sim.add_argument("--interval", type=int, default=0)
    sim.add_argument("--start", type=float, required=True)
    sim.add_argument("--left", type=float, required=True)
    sim.add_argument("--right", type=float, required=True)
    sim.add_argument("--paths", type=int, default=10000)
    sim.add_argument("--delta-s", dest="delta_s", type=float, default=None)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--steps", type=int, default=1_000_000, help="occupation horizon")
    sim.add_argument("--max-steps", dest="max_steps", type=int, default=1_000_000)
    sim.add_argument("--workers", type=int, default=1)
    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "hamza": cmd_hamza,
    "merge": cmd_merge,
    "core": cmd_core,
    "energy": cmd_energy,
    "hitprob": cmd_hitprob,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = load_document(args.config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return _COMMANDS[args.command](args, doc)
    except ConfigError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ChainError, SmoothContainmentError, dirichlet.SpanError, dirichlet.ExtendError) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    raise SystemExit(main())
