"""Command-line front end: ``statecert check | gen | report``.

Exit codes: 0 state certified, 1 rejected, 2 inconclusive, 3 input or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import criteria as C
from . import phase_space as P
from .generators import random_density, with_spectrum
from .io import (
    FormatError,
    parse_kernel_file,
    parse_matrix_file,
    parse_wigner_file,
    write_kernel_file,
    write_matrix_file,
    write_wigner_file,
)
from .kernel import kernel_to_matrix, mixture_kernel
from .linalg import ToleranceConfig

EXIT_OK, EXIT_REJECTED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3

KINDS = ("matrix", "kernel", "wigner", "mixture")

_MATRIX_ALIASES = {cid.lower(): (cid,) for cid in C.ALL_CRITERIA + (C.GATES,)}
_MATRIX_ALIASES.update({"pure": C.PURITY_CRITERIA, "positivity": C.POSITIVITY_CRITERIA,
                        "all": C.ALL_CRITERIA})
_PHASE_ALIASES = {cid.lower()[2:]: (cid,) for cid in P.PHASE_CRITERIA + (P.W_GATES,)}
_PHASE_ALIASES.update({cid.lower(): (cid,) for cid in P.PHASE_CRITERIA + (P.W_GATES,)})
_PHASE_ALIASES.update({"positivity": P.PHASE_POSITIVITY, "all": P.PHASE_CRITERIA})

# The monitored series around the identity stalls on the large null space
# of a discretized kernel, so it is opt-in for that input kind.
_KERNEL_DEFAULT = tuple(c for c in C.ALL_CRITERIA if c != C.SQRT_SERIES)


class InputError(Exception):
    pass


def _parse_fraction_list(text: str) -> list[Fraction]:
    try:
        values = [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse coefficient list {text!r}") from None
    if not values:
        raise InputError("coefficient list is empty")
    return values


def _select_criteria(text: str | None, kind: str) -> tuple[str, ...]:
    phase = kind in ("wigner", "mixture")
    if text is None:
        if phase:
            return P.PHASE_CRITERIA
        return _KERNEL_DEFAULT if kind == "kernel" else C.ALL_CRITERIA
    aliases = _PHASE_ALIASES if phase else _MATRIX_ALIASES
    out: list[str] = []
    for tok in text.split(","):
        key = tok.strip().lower()
        if key not in aliases:
            raise InputError(f"criterion {tok.strip()!r} is not valid for kind {kind!r}; "
                             f"choose from {', '.join(sorted(aliases))}")
        out.extend(c for c in aliases[key] if c not in out)
    return tuple(out)


def _tolerances(args, kind: str) -> ToleranceConfig:
    base = P.PHASE_TOLERANCES if kind == "wigner" else ToleranceConfig()
    changes = {}
    for flag, name in (("tol_hermiticity", "hermiticity_tol"), ("tol_sum", "sum_tol"),
                       ("tol_series", "series_tol"), ("max_terms", "max_terms"),
                       ("divergence_threshold", "divergence_threshold")):
        value = getattr(args, flag)
        if value is not None:
            changes[name] = value
    try:
        return base.replace(**changes)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _jsonable(obj):
    """Convert report contents into deterministic JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if hasattr(obj, "as_dict"):
        return _jsonable(obj.as_dict())
    return obj


def summarize(reports: dict) -> dict:
    """Overall verdict and exit code from per-criterion verdicts.

    Positivity criteria decide whether a state is certified; purity
    criteria decide only when no positivity criterion was run.
    """
    positivity = C.POSITIVITY_CRITERIA + P.PHASE_POSITIVITY
    deciding = {k: r for k, r in reports.items() if k in positivity}
    if not deciding:
        deciding = dict(reports)
    verdicts = [r["verdict"] for r in deciding.values()]
    first_failure = None
    for cid, r in deciding.items():
        if r["verdict"] == C.REJECT:
            label = next((c["label"] for c in r["checks"] if not c["passed"]), None)
            first_failure = f"{cid}: {label}"
            break
    if C.REJECT in verdicts:
        verdict, code = "rejected", EXIT_REJECTED
    elif C.ACCEPT in verdicts:
        verdict, code = "certified", EXIT_OK
    else:
        verdict, code = "inconclusive", EXIT_INCONCLUSIVE
    pure = [reports[k]["verdict"] for k in reports
            if k in C.PURITY_CRITERIA or k == P.W_PURE]
    return {
        "verdict": verdict,
        "exit_code": code,
        "first_failure": first_failure,
        "is_pure": (all(v == C.ACCEPT for v in pure) if pure else None),
    }


def run_check(args) -> dict:
    kind = args.kind
    selected = _select_criteria(args.criteria, kind)
    cfg = _tolerances(args, kind)
    meta = {"tool": "statecert", "version": __version__, "kind": kind,
            "input": args.input, "config": cfg.as_dict(), "seed": args.seed,
            "criteria": list(selected)}
    if kind == "mixture":
        if not args.coeffs:
            raise InputError("--kind mixture needs --coeffs")
        mix = P.OrthogonalMixture(args.hbar, _parse_fraction_list(args.coeffs))
        meta.update(coeffs=[str(c) for c in mix.coeffs], hbar=args.hbar, m_max=args.m_max)
        reps = {r.criterion_id: r for r in P.mixture_criteria(mix, args.m_max)}
        reports = {cid: reps[cid].as_dict() for cid in selected}
    else:
        if args.input is None:
            raise InputError(f"--kind {kind} needs an input file")
        try:
            if kind == "matrix":
                m = parse_matrix_file(args.input)
            elif kind == "kernel":
                k = parse_kernel_file(args.input)
                m = kernel_to_matrix(k)
                meta.update(grid={"x_min": k.x_min, "x_max": k.x_max, "n_points": k.n_points})
            else:
                w = parse_wigner_file(args.input)
                g = w.grid
                meta.update(grid={"q_min": g.q_min, "q_max": g.q_max, "p_min": g.p_min,
                                  "p_max": g.p_max, "n_q": g.n_q, "n_p": g.n_p}, hbar=w.hbar)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror or exc}") from None
        if kind == "wigner":
            meta["m_max"] = args.m_max
            reps = P.run_phase_criteria(w, cfg, args.m_max, selected)
        else:
            meta["n_max"] = args.n_max
            meta["dim"] = int(m.shape[0])
            reps = C.run_all(m, cfg, args.n_max, selected).reports
        reports = {cid: r.as_dict() for cid, r in reps.items()}
    reports = _jsonable(reports)
    return {**_jsonable(meta), "reports": reports, "summary": summarize(reports)}


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def render_human(result: dict) -> str:
    lines = [f"kind: {result['kind']}" + (f"  input: {result['input']}" if result.get("input") else "")]
    if "dim" in result:
        lines[0] += f"  dim: {result['dim']}"
    for cid, r in result["reports"].items():
        fail = next((c for c in r["checks"] if not c["passed"]), None)
        detail = (f"failed {fail['label']}"
                  + (f" (value {_fmt(fail['value'])})" if fail.get("value") is not None else "")
                  if fail
                  else "all conditions hold" if r["verdict"] == C.ACCEPT
                  else "truncation reached without a decision")
        extra = []
        diag = r.get("diagnostics", {})
        for key in ("witness", "trace_sqrt_square", "trace_sqrt_sum", "limit", "terms"):
            if diag.get(key) is not None:
                extra.append(f"{key}={_fmt(diag[key])}")
        sums = diag.get("sums")
        if sums:
            extra.append(f"first sums={_fmt(sums[:4])}")
        lines.append(f"  {cid:<18} {r['verdict']:<12} {detail}"
                     + (f"; {', '.join(extra)}" if extra else ""))
    s = result["summary"]
    tail = f"verdict: {s['verdict']}"
    if s["first_failure"]:
        tail += f" ({s['first_failure']})"
    if s["is_pure"] is not None:
        tail += f"; pure: {'yes' if s['is_pure'] else 'no'}"
    lines.append(tail)
    return "\n".join(lines)


def write_csv(path, result: dict) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["criterion", "index", "value"])
        for cid, r in result["reports"].items():
            for i, v in enumerate(r.get("diagnostics", {}).get("sums") or []):
                writer.writerow([cid, i, v])


def _emit(result: dict, args) -> None:
    text = (json.dumps(result, indent=2) if args.json
            else render_human(result)) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "csv", None):
        write_csv(args.csv, result)


def cmd_check(args) -> int:
    result = run_check(args)
    _emit(result, args)
    return result["summary"]["exit_code"]


def cmd_gen(args) -> int:
    if not args.output:
        raise InputError("gen needs -o PATH")
    grid = P.PhaseGrid(-args.extent, args.extent, -args.extent, args.extent,
                       args.grid_points, args.grid_points)
    what = args.what
    if what == "fock":
        write_wigner_file(args.output, P.fock_wigner(args.n, grid, args.hbar))
    elif what == "tatarskij":
        write_wigner_file(args.output, P.build_tatarskij(grid, args.hbar))
    elif what == "wigner-mixture":
        coeffs = _parse_fraction_list(args.coeffs or "1")
        write_wigner_file(args.output, P.fock_mixture(coeffs, grid, args.hbar))
    elif what == "density":
        write_matrix_file(args.output, random_density(args.dim, args.seed, args.rank))
    elif what == "spectrum":
        eigs = [float(c) for c in _parse_fraction_list(args.coeffs or "1")]
        m = np.diag(eigs).astype(complex) if args.seed is None else with_spectrum(eigs, args.seed)
        write_matrix_file(args.output, m)
    elif what == "kernel":
        if args.coeffs:
            coeffs = [float(c) for c in _parse_fraction_list(args.coeffs)]
        else:
            coeffs = [0.0] * args.n + [1.0]
        write_kernel_file(args.output, mixture_kernel(coeffs, args.hbar, -args.extent,
                                                      args.extent, args.kernel_points))
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        result = json.loads(Path(args.report).read_text())
        text = render_human(result)
        code = int(result["summary"]["exit_code"])
    except OSError as exc:
        raise InputError(f"cannot read {args.report}: {exc.strerror or exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.report} is not a check report: {exc}") from None
    sys.stdout.write(text + "\n")
    return code


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit code 3 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="statecert",
                     description="Certify quantum states from matrices, "
                                 "kernels and Wigner functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run recognition criteria on an input")
    chk.add_argument("input", nargs="?", help="input file (not used for --kind mixture)")
    chk.add_argument("--kind", choices=KINDS + ("wigner-grid",), default="matrix")
    chk.add_argument("--criteria", help="comma-separated criterion names (default: all)")
    chk.add_argument("--coeffs", help="mixture coefficients, e.g. 2/3,2/3,-1/3")
    chk.add_argument("--hbar", type=_positive_float, default=1.0)
    chk.add_argument("--tol-hermiticity", type=float)
    chk.add_argument("--tol-sum", type=float)
    chk.add_argument("--tol-series", type=float)
    chk.add_argument("--max-terms", type=int)
    chk.add_argument("--divergence-threshold", type=float)
    chk.add_argument("--n-max", type=_nonnegative_int, default=C.DEFAULT_N_MAX)
    chk.add_argument("--m-max", type=_nonnegative_int, default=P.DEFAULT_M_MAX)
    chk.add_argument("--json", action="store_true", help="machine-readable output")
    chk.add_argument("--csv", help="write sum sequences as criterion,index,value rows")
    chk.add_argument("--seed", type=int, help="recorded in the report for reproducibility")
    chk.add_argument("-o", "--output", help="write the report here instead of stdout")
    chk.set_defaults(func=cmd_check)

    gen = sub.add_parser("gen", help="generate test inputs")
    gen.add_argument("what", choices=("fock", "tatarskij", "wigner-mixture", "density",
                                      "spectrum", "kernel"))
    gen.add_argument("--n", type=int, default=0, help="Fock / oscillator level")
    gen.add_argument("--coeffs", help="coefficients or eigenvalues, e.g. 2/3,2/3,-1/3")
    gen.add_argument("--dim", type=int, default=4)
    gen.add_argument("--rank", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--hbar", type=_positive_float, default=1.0)
    gen.add_argument("--extent", type=_positive_float, default=8.0,
                     help="grid covers [-extent, extent] per axis")
    gen.add_argument("--grid-points", type=int, default=256)
    gen.add_argument("--kernel-points", type=int, default=801)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen)

    rep = sub.add_parser("report", help="print a saved JSON report as a summary")
    rep.add_argument("report")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) == "wigner-grid":
        args.kind = "wigner"
    try:
        return args.func(args)
    except (InputError, FormatError, ValueError) as exc:
        print(f"statecert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
