"""Command-line front end: certification, dual-space experiments, recovery, example reproduction.

Exit codes: 0 certified yes (or success), 1 certified no (or a failed
reproduction), 2 unknown, 64 malformed input, 70 any other error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import kernel as K
from .artifacts import variety_svg
from .combinatorics import Outcome, Verdict, _jsonable, complement_property, is_full_spark, mrc_check, spark
from .corpus import corpus_text
from .duals import (DualFamily, ShapeError, _parse_box, distance_less_than, dyadic_in, evaluate_P, excess1_closed_form, excess1_duals,
                    excess1_frame, failure_variety, nearest_pr_dual, openness_witness, sample_pr_duals)
from .frames import COMPLEX, EXACT, FLOAT, FrameError, NotAFrameError, frame_from_json, validate_frame
from .kernel import TolerancePolicy
from .lift import certify_pr_via_lambda
from .recovery import recover_real
from .reproduce import figure_1, run_example
from .retrieval import certify_norm_retrieval_real, certify_phase_retrieval, decide_weak_phase_real

EXIT_YES, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_MALFORMED, EXIT_ERROR = 64, 70

PROPERTIES = ("phase", "norm", "weak-phase", "complement", "full-spark", "spark", "mrc")


class InputError(ValueError):
    """Bad user input; maps to exit code 64."""


def _digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _read_input(spec: str | None) -> tuple[bytes, dict]:
    """Raw bytes and parsed JSON of ``--input``; ``corpus:NAME`` reads a bundled frame."""
    if not spec:
        raise InputError("--input is required")
    try:
        if spec.startswith("corpus:"):
            raw = corpus_text(spec[len("corpus:"):]).encode("utf-8")
        else:
            raw = Path(spec).read_bytes()
    except (OSError, KeyError) as exc:
        raise InputError(f"cannot read input {spec!r}: {exc}") from None
    try:
        return raw, json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}") from None


def _load_frame(args):
    raw, data = _read_input(args.input)
    if not isinstance(data, dict):
        raise InputError("frame JSON must be an object")
    phi = frame_from_json(data)
    policy = TolerancePolicy(args.tol) if args.tol is not None else None
    if args.mode == FLOAT and phi.mode == EXACT:
        vecs = [[complex(x) if phi.field == COMPLEX else float(x) for x in v] for v in phi.vectors]
        phi = validate_frame(vecs, dim=phi.dim, field=phi.field, mode=FLOAT, policy=policy)
    elif args.mode == EXACT and phi.mode == FLOAT:
        raise InputError("a float-mode frame cannot be certified in exact mode")
    elif policy is not None:
        phi = validate_frame(phi.vectors, dim=phi.dim, field=phi.field, mode=phi.mode, policy=policy)
    return raw, phi


def _fractions(text: str, what: str) -> tuple:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what} must be a comma-separated list of rationals, got {text!r}") from None


def _box(text: str | None):
    if text is None:
        return None
    parts = [p for p in text.split(";") if p]
    ranges = [_fractions(p, "--box") for p in parts]
    if any(len(r) != 2 or r[0] >= r[1] for r in ranges):
        raise InputError("--box takes lo,hi (or lo,hi;lo,hi;... per parameter) with lo < hi")
    return ranges[0] if len(ranges) == 1 else ranges


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


# certification


def _certify(args, phi):
    prop = args.property
    if prop == "phase":
        if args.method == "lift":
            return certify_pr_via_lambda(phi, budget=args.budget, seed=args.seed)
        return certify_phase_retrieval(phi, budget=args.budget, seed=args.seed)
    if prop == "norm":
        return certify_norm_retrieval_real(phi)
    if prop == "weak-phase":
        kw = {"seed": args.seed}
        if args.budget is not None:
            kw["budget"] = args.budget
        return decide_weak_phase_real(phi, **kw)
    if prop == "complement":
        return complement_property(phi)
    if prop == "full-spark":
        return is_full_spark(phi)
    if prop == "spark":
        s = spark(phi)
        details = {"spark": s.value, "n": phi.dim, "m": phi.m}
        if s.value == phi.dim + 1:
            return Verdict(Outcome.YES, "spark", reason="spark equals n + 1", details=details)
        if s.independent:
            return Verdict(Outcome.YES, "spark", reason="linearly independent family", details=details)
        return Verdict(Outcome.NO, "spark", witness=list(s.witness), reason="dependent subfamily below n + 1",
                       details=details)
    if prop == "mrc":
        r = args.r if args.r is not None else phi.dim - 1
        return mrc_check(phi, r)
    raise InputError(f"unknown property {prop!r}")


def cmd_certify(args):
    raw, phi = _load_frame(args)
    v = _certify(args, phi)
    code = {Outcome.YES: EXIT_YES, Outcome.NO: EXIT_NO, Outcome.UNKNOWN: EXIT_UNKNOWN}[v.outcome]
    inputs = {"frame": phi.to_json(), "property": args.property, "mode": phi.mode, "method": args.method,
              "budget": args.budget, "r": args.r, "tol": args.tol}
    return _digest(raw), inputs, v.to_json(), code, None


# dual-space experiments


def _dual_json(phi, U, fam: DualFamily):
    H = fam.dual(U)
    P = evaluate_P(fam, U)
    return {"params": [K.format_scalar(t) for t in U], "vectors": [[K.format_scalar(x) for x in v] for v in H.vectors],
            "P": K.format_scalar(P), "phase_retrieval": P != 0}


def cmd_duals(args):
    sub = args.duals_command
    inputs = {"subcommand": sub}
    if sub == "excess1":
        if not args.alphas:
            raise InputError("excess1 needs --alphas")
        alphas = _fractions(args.alphas, "--alphas")
        n = len(alphas)
        x = _fractions(args.x, "--x") if args.x else (Fraction(0),) * n
        if len(x) != n:
            raise InputError(f"--x needs {n} values")
        phi = excess1_frame(alphas)
        G = excess1_duals(alphas, x)
        closed = excess1_closed_form(alphas, x)
        var = failure_variety(phi, seed=args.seed)
        result = {"frame": phi.to_json(),
                  "dual": {"params": [K.format_scalar(t) for t in x],
                           "vectors": [[K.format_scalar(t) for t in v] for v in G.vectors],
                           "full_spark": not var.contains(x)},
                  "closed_form_agrees": [tuple(v) for v in G.vectors] == [tuple(v) for v in closed],
                  "variety": var.to_json()}
        inputs.update({"alphas": [K.format_scalar(a) for a in alphas], "x": [K.format_scalar(t) for t in x]})
        raw = json.dumps(inputs, sort_keys=True).encode("utf-8")
        if args.csv:
            _write(args.csv, var.to_csv())
        return _digest(raw), inputs, result, EXIT_YES, None

    raw, phi = _load_frame(args)
    if not phi.exact:
        raise InputError("dual-space experiments run in exact mode only")
    inputs["frame"] = phi.to_json()
    if sub == "sample":
        fam = DualFamily(phi)
        box = _box(args.box)
        rng = random.Random(args.seed)
        ranges = _parse_box(box, fam.p)
        pts = [tuple(dyadic_in(rng, lo, hi) for lo, hi in ranges) for _ in range(args.samples)]
        result = {"names": fam.names, "samples": [_dual_json(phi, U, fam) for U in pts]}
        inputs.update({"samples": args.samples, "box": args.box})
    elif sub == "density":
        result = sample_pr_duals(phi, box=_box(args.box), count=args.samples, seed=args.seed)
        inputs.update({"samples": args.samples, "box": args.box})
        if args.center is not None:
            if args.delta is None:
                raise InputError("--center needs --delta")
            centre = _fractions(args.center, "--center")
            fam = DualFamily(phi)
            fam.check_params(centre)
            count = args.openness_samples
            result["openness"] = openness_witness(phi, centre, Fraction(args.delta), count=count, seed=args.seed)
            inputs.update({"center": args.center, "delta": args.delta, "openness_samples": count})
    elif sub == "nearest":
        if not args.from_params:
            raise InputError("nearest needs --from-params")
        U0 = _fractions(args.from_params, "--from-params")
        eps = Fraction(args.eps)
        fam = DualFamily(phi)
        fam.check_params(U0)
        res = nearest_pr_dual(phi, U0, eps, seed=args.seed)
        G = fam.dual(U0)
        recheck = distance_less_than(G, res.dual, eps)
        result = res.to_json()
        result.update({"eps": K.format_scalar(eps), "verified": recheck.less,
                       "start_on_variety": evaluate_P(fam, U0) == 0,
                       "dual": _dual_json(phi, res.params, fam)})
        inputs.update({"from_params": args.from_params, "eps": args.eps})
    elif sub == "variety":
        var = failure_variety(phi, seed=args.seed)
        result = var.to_json()
        marks = {}
        for m in args.mark or []:
            name, _, coords = m.partition("=")
            if not coords:
                raise InputError(f"--mark takes NAME=x,y, got {m!r}")
            marks[name] = _fractions(coords, "--mark")
        if marks:
            result["marks"] = {k: {"params": [K.format_scalar(t) for t in v], "on_variety": var.contains(v)}
                               for k, v in marks.items()}
        if args.csv:
            _write(args.csv, var.to_csv())
        if args.svg:
            if len(var.names) != 2:
                raise ShapeError("SVG output needs a two-parameter family (n = 2, m = 3)")
            _write(args.svg, variety_svg(var, marks))
        inputs.update({"marks": args.mark or []})
    else:
        raise InputError(f"unknown duals subcommand {sub!r}")
    return _digest(raw), inputs, result, EXIT_YES, None


# recovery and examples


def cmd_recover(args):
    raw, phi = _load_frame(args)
    if phi.field == COMPLEX:
        raise InputError("recovery needs a real frame: complex signals carry a continuous phase ambiguity "
                         "that sign enumeration cannot resolve")
    if not phi.exact:
        raise InputError("recovery runs in exact mode only")
    if not args.magnitudes:
        raise InputError("recover needs --magnitudes")
    mraw, mdata = _read_input(args.magnitudes)
    M = mdata.get("squared") if isinstance(mdata, dict) else mdata
    if not isinstance(M, list):
        raise InputError('magnitudes file must be {"squared": [...]} or a JSON list')
    if any(isinstance(t, float) for t in M):
        raise InputError("squared magnitudes must be strings like 'p/q' or integers")
    try:
        res = recover_real(phi, M)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    inputs = {"frame": phi.to_json(), "squared": [str(t) for t in M]}
    return _digest(raw + b"\n" + mraw), inputs, res.to_json(), EXIT_YES, None


def cmd_examples(args):
    eid = args.example_id
    if eid == "fig1":
        rep, svg, csv = figure_1()
        if args.svg:
            _write(args.svg, svg)
        if args.csv:
            _write(args.csv, csv)
    else:
        rep = run_example(eid, seed=args.seed)
    inputs = {"example": eid}
    raw = json.dumps(inputs, sort_keys=True).encode("utf-8")
    return _digest(raw), inputs, rep.to_json(), EXIT_YES if rep.passed else EXIT_NO, rep.table()


# argument parsing


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", help="frame JSON path, or corpus:NAME for a bundled frame")
    p.add_argument("--mode", choices=(EXACT, FLOAT), default=None, help="arithmetic mode (default: from the file)")
    p.add_argument("--tol", type=float, default=None, help="float-mode relative tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="search budget for the heuristic searches")
    p.add_argument("--report", help="write the report JSON here instead of stdout")
    p.add_argument("--stable", action="store_true", help="omit wall time so reruns are byte-identical")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="framecert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"framecert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common], help="certify a retrieval or combinatorial property")
    c.add_argument("--property", required=True, choices=PROPERTIES)
    c.add_argument("--method", choices=("auto", "lift"), default="auto",
                   help="phase only: 'lift' forces the Hermitian-lift search")
    c.add_argument("--r", type=int, default=None, help="mrc: number of erasures (default n - 1)")
    c.set_defaults(func=cmd_certify)

    d = sub.add_parser("duals", help="dual-frame parameterization experiments")
    dsub = d.add_subparsers(dest="duals_command", required=True)
    for name, hlp in (("sample", "list sampled duals with their verdicts"),
                      ("density", "phase-retrieval fraction over a parameter box"),
                      ("nearest", "phase-retrieval dual near a failing one"),
                      ("variety", "failure variety as JSON, CSV and SVG"),
                      ("excess1", "closed-form duals of an excess-one frame")):
        q = dsub.add_parser(name, parents=[common], help=hlp)
        q.set_defaults(func=cmd_duals)
        if name in ("sample", "density"):
            q.add_argument("--samples", type=int, default=10 if name == "sample" else 1000)
            q.add_argument("--box", default="-1,1", help="lo,hi for every parameter, or lo,hi;lo,hi;...")
        if name == "density":
            q.add_argument("--center", help="openness check centre (parameter point)")
            q.add_argument("--delta", help="openness radius, e.g. 1/100")
            q.add_argument("--openness-samples", type=int, default=500)
        if name == "nearest":
            q.add_argument("--from-params", help="failing parameter point, e.g. 1,-2/3")
            q.add_argument("--eps", default="1e-3")
        if name == "variety":
            q.add_argument("--mark", action="append", help="NAME=x,y point to mark (repeatable)")
        if name in ("variety", "excess1"):
            q.add_argument("--csv", help="write hyperplane coefficients as CSV")
        if name == "variety":
            q.add_argument("--svg", help="write the failure lines as SVG (two parameters only)")
        if name == "excess1":
            q.add_argument("--alphas", help="coefficients of the redundant vector, e.g. 1,2,-1/2")
            q.add_argument("--x", help="dual parameters (default all zero)")

    r = sub.add_parser("recover", parents=[common], help="recover a real signal from squared magnitudes")
    r.add_argument("--magnitudes", help='JSON file {"squared": ["p/q", ...]}')
    r.set_defaults(func=cmd_recover)

    e = sub.add_parser("examples", parents=[common], help="reproduce a worked example")
    e.add_argument("example_id", choices=("2.5", "2.6", "2.7", "fig1"))
    e.add_argument("--svg", help="fig1: write the figure SVG")
    e.add_argument("--csv", help="fig1: write the line coefficients as CSV")
    e.set_defaults(func=cmd_examples)
    return parser


def _command_line(args) -> str:
    return args.command + (" " + args.duals_command if args.command == "duals" else "")


# flags whose values may start with "-" (e.g. ``--box -1,1``)
_SIGNED_FLAGS = ("--box", "--from-params", "--center", "--x", "--alphas", "--mark", "--eps", "--delta")


def _glue_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code not in (0, None) else 0
    start = time.perf_counter()
    try:
        digest, inputs, result, code, table = args.func(args)
    except (InputError, FrameError, NotAFrameError, ShapeError) as exc:
        print(f"framecert: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except Exception as exc:  # noqa: BLE001 - every other failure maps to one exit code
        print(f"framecert: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = {"command": _command_line(args), "input_digest": digest, "seed": args.seed,
              "inputs": _jsonable(inputs), "result": _jsonable(result), "exit_code": code,
              "version": __version__}
    if not args.stable:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.report:
        _write(args.report, text)
        if table:
            print(table)
    else:
        sys.stdout.write(text)
        if table:
            print(table, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
