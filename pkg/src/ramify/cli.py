"""Command-line front end.

Exit codes: 0 success, 1 invalid input or failed validation, 2 counterexample
to the theorem found, 3 unreadable input file, 4 series precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .filtration import (
    DomainError,
    FiltrationSpec,
    SpecError,
    as_fraction,
    herbrand_phi,
    upper_jumps,
    validate_spec,
)
from .hasse_arf import (
    EmptyGridError,
    GridBounds,
    ShapeError,
    TowerShape,
    enumerate_and_verify,
    theorem_check,
    validate_shape,
)
from .monomial_basis import monomial_valuation, rr_basis
from .semigroup import weierstrass_semigroup

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_PARSE = 3
EXIT_PRECISION = 4


class InputError(Exception):
    """Input file missing or not parseable."""


@dataclass
class RunConfig:
    subcommand: str
    paths: list[str] = field(default_factory=list)
    fmt: str = "human"
    strict: bool = True
    workers: int = 1
    precision: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        paths = [args.file] if getattr(args, "file", None) else []
        return cls(args.command, paths, args.format, not args.no_strict,
                   getattr(args, "workers", 1), args.precision)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path} must contain a JSON object")
    return data


def _load_spec(path: str, strict: bool) -> FiltrationSpec:
    try:
        return FiltrationSpec.from_json(_load_json(path), strict=strict)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load_shape(path: str, strict: bool) -> TowerShape:
    try:
        return TowerShape.from_json(_load_json(path), strict=strict)
    except ValueError as exc:
        if isinstance(exc, ShapeError):
            raise
        raise InputError(str(exc)) from None


def _emit(cfg: RunConfig, payload: dict, human: Sequence[str]) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif cfg.fmt == "tsv":
        for key, value in payload.items():
            if isinstance(value, (list, tuple)):
                value = ",".join(map(str, value))
            print(f"{key}\t{value}")
    else:
        for line in human:
            print(line)


def cmd_validate(cfg: RunConfig) -> int:
    data = _load_json(cfg.paths[0])
    try:
        if "exps" in data:
            shape = TowerShape.from_json(data, strict=cfg.strict)
            report = validate_spec(shape.spec, strict=cfg.strict)
            problems = list(report.violations) or validate_shape(shape)
            ok = not problems
            lines = ["PASS" if ok else "FAIL"] + [f"violation: {v}" for v in problems]
            lines += [f"warning: {w}" for w in report.warnings]
            payload = {"ok": ok, "violations": problems, "warnings": list(report.warnings)}
        else:
            spec = FiltrationSpec.from_json(data, strict=cfg.strict)
            report = validate_spec(spec, strict=cfg.strict)
            ok, lines, payload = report.ok, report.lines(), report.to_json()
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    _emit(cfg, payload, lines)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_phi(cfg: RunConfig, at: Optional[str], jumps: bool) -> int:
    spec = _load_spec(cfg.paths[0], cfg.strict)
    if jumps:
        values = upper_jumps(spec)
        _emit(cfg, {"upper_jumps": [str(q) for q in values]}, [" ".join(map(str, values))])
    else:
        u = as_fraction(at)
        value = herbrand_phi(spec, u)
        _emit(cfg, {"u": str(u), "phi": str(value)}, [str(value)])
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    shape = _load_shape(cfg.paths[0], cfg.strict)
    verdict = theorem_check(shape)
    lines = [verdict.summary(), "upper_jumps=" + " ".join(map(str, verdict.upper))]
    if verdict.counterexample:
        lines.append("COUNTEREXAMPLE " + json.dumps(verdict.counterexample, sort_keys=True))
    _emit(cfg, verdict.to_json(), lines)
    return EXIT_OK if verdict.equivalent else EXIT_COUNTEREXAMPLE


def _parse_primes(values: Sequence[str]) -> tuple[int, ...]:
    out = []
    for v in values:
        out += [int(x) for x in v.split(",") if x.strip()]
    return tuple(out)


def cmd_enumerate(cfg: RunConfig, args: argparse.Namespace) -> int:
    grid = GridBounds(primes=_parse_primes(args.p or ["5"]), min_h=args.min_h,
                      max_h=args.max_h, min_n=args.min_n, max_n=args.max_n,
                      min_b1=args.min_b1, max_b1=args.max_b1, cap=args.cap,
                      nu0_bound=args.nu0_bound,
                      increasing_poles_only=args.increasing_poles_only)
    bad_p = [p for p in grid.primes if validate_spec(FiltrationSpec(p, (1,), (1,)), cfg.strict).violations]
    if bad_p:
        print(f"error: primes {bad_p} rejected (not prime, or below 5 in strict mode)", file=sys.stderr)
        return EXIT_INVALID
    report = enumerate_and_verify(grid, workers=cfg.workers)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if cfg.fmt == "json":
            out.write(json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n")
        else:
            if cfg.fmt == "tsv" or args.rows:
                for line in report.tsv_lines():
                    out.write(line + "\n")
            for ce in report.counterexamples:
                out.write("# COUNTEREXAMPLE " + json.dumps(ce, sort_keys=True) + "\n")
            out.write("# " + report.summary_line() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.output:
        print("# " + report.summary_line())
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def cmd_semigroup(cfg: RunConfig, m: Optional[int]) -> int:
    spec = _load_spec(cfg.paths[0], cfg.strict)
    sg = weierstrass_semigroup(spec)
    payload = {"generators": list(sg.generators),
               "minimal_generators": list(sg.minimal_generators())}
    lines = [f"generators={' '.join(map(str, sg.generators))}",
             f"minimal_generators={' '.join(map(str, sg.minimal_generators()))}"]
    if m is not None:
        payload["count_up_to"] = sg.count_up_to(m)
        payload["elements"] = sg.elements_up_to(m)
        lines.append(f"count_up_to({m})={payload['count_up_to']}")
        lines.append("elements=" + " ".join(map(str, payload["elements"])))
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_instance(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .tower import TowerError, TowerInstance

    try:
        inst = TowerInstance.from_json(_load_json(cfg.paths[0]), strict=cfg.strict)
    except TowerError as exc:
        raise InputError(str(exc)) from None
    action = args.action
    if action == "verify":
        report = inst.verify()
        shape = inst.measured_shape()
        lines = report.lines() + [f"min-term exponents: {shape.encode_exps()}"]
        payload = dict(report.to_json(), exps=[ev.to_json() for ev in shape.exps])
        _emit(cfg, payload, lines)
        return EXIT_OK if report.ok else EXIT_INVALID
    if action == "jump":
        t = inst.element(args.uniformizer) if args.uniformizer else None
        meas = inst.jump_of(args.sigma, t)
        _emit(cfg, {"sigma": meas.sigma, "uniformizer": meas.uniformizer,
                    "difference_valuation": meas.difference_valuation, "jump": meas.jump},
              [f"jump={meas.jump}",
               f"v(sigma t - t)={meas.difference_valuation} t={meas.uniformizer}"])
        return EXIT_OK
    if action == "valuation":
        e = inst.element(args.expr)
        v = inst.valuation(e)
        _emit(cfg, {"expr": args.expr, "valuation": v}, [str(v)])
        return EXIT_OK
    if action == "basis":
        basis = rr_basis(inst.spec, args.m)
        rows, lines = [], []
        for mono in basis.monomials:
            predicted = monomial_valuation(inst.spec, mono)
            measured = inst.valuation(inst.monomial_element((mono.l0,) + mono.padded(inst.k)))
            label = mono.label(inst.names)
            rows.append({"monomial": label, "predicted": predicted, "measured": measured})
            lines.append(f"{label}\t{predicted}\t{measured}")
        _emit(cfg, {"m": args.m, "basis": rows}, [f"dim L({args.m}P)={len(rows)}"] + lines)
        return EXIT_OK if all(r["predicted"] == r["measured"] for r in rows) else EXIT_INVALID
    raise AssertionError(action)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "tsv"), default="human")
    common.add_argument("--no-strict", action="store_true",
                        help="accept p = 2, 3 with a warning instead of rejecting")
    common.add_argument("--precision", type=int, default=None,
                        help="series precision (overrides RAMIFY_PRECISION)")

    parser = argparse.ArgumentParser(prog="ramify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a spec or shape file")
    p.add_argument("file")

    p = sub.add_parser("phi", parents=[common], help="Herbrand function and upper jumps")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--at", help="evaluate phi at a rational u")
    g.add_argument("--jumps", action="store_true", help="print the upper jumps")

    p = sub.add_parser("check", parents=[common], help="check the theorem on one shape")
    p.add_argument("file")

    p = sub.add_parser("enumerate", parents=[common], help="exhaustive grid verification")
    p.add_argument("--p", action="append", help="prime(s), repeatable or comma separated")
    p.add_argument("--min-h", type=int, default=2)
    p.add_argument("--max-h", type=int, default=3)
    p.add_argument("--min-n", type=int, default=1)
    p.add_argument("--max-n", type=int, default=1)
    p.add_argument("--min-b1", type=int, default=1)
    p.add_argument("--max-b1", type=int, default=10)
    p.add_argument("--cap", type=int, default=200, help="largest allowed b_{h-1}")
    p.add_argument("--nu0-bound", type=int, default=None)
    p.add_argument("--increasing-poles-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--rows", action="store_true", help="print per-shape rows in human mode")
    p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("semigroup", parents=[common], help="Weierstrass semigroup of a spec")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("instance", help="explicit tower computations")
    p.add_argument("file")
    acts = p.add_subparsers(dest="action", required=True)
    acts.add_parser("verify", parents=[common])
    a = acts.add_parser("jump", parents=[common])
    a.add_argument("--sigma", required=True)
    a.add_argument("--uniformizer", help="expression for the uniformizer (default: searched)")
    a = acts.add_parser("valuation", parents=[common])
    a.add_argument("--expr", required=True)
    a = acts.add_parser("basis", parents=[common])
    a.add_argument("--m", type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .tower import PrecisionError, TowerError

    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig.from_args(args)
    if cfg.precision is not None:
        os.environ["RAMIFY_PRECISION"] = str(cfg.precision)
    if cfg.paths and not Path(cfg.paths[0]).is_file():
        print(f"error: no such file {cfg.paths[0]}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if cfg.subcommand == "validate":
            return cmd_validate(cfg)
        if cfg.subcommand == "phi":
            return cmd_phi(cfg, args.at, args.jumps)
        if cfg.subcommand == "check":
            return cmd_check(cfg)
        if cfg.subcommand == "enumerate":
            return cmd_enumerate(cfg, args)
        if cfg.subcommand == "semigroup":
            return cmd_semigroup(cfg, args.m)
        if cfg.subcommand == "instance":
            return cmd_instance(cfg, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PrecisionError as exc:
        print(f"error: {exc}; raise --precision / RAMIFY_PRECISION or widen the "
              "'o' bounds of the input series", file=sys.stderr)
        return EXIT_PRECISION
    except (SpecError, ShapeError, DomainError, EmptyGridError, TowerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    raise AssertionError(cfg.subcommand)


if __name__ == "__main__":
    sys.exit(main())
