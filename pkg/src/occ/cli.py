"""``occ`` command-line driver.

Every verification subcommand writes one JSON object per check to standard
output::

    {"check": ..., "paper_ref": ..., "residual": ..., "threshold": ..., "pass": ...}

and a short summary table to standard error.  Exit status: 0 if every check
passes, 1 if some residual exceeds its threshold, 2 on input or usage errors.
The environment variable ``OCC_TOL`` overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from . import moduli
from .detline import DepthError, gamma_report
from .fusioncat import CategoryError, CheckResult, coherence_report, load_category
from .openclosed import (
    build_open_closed_from_center,
    check_algebra,
    check_commutative_trivial_twist,
    check_mu_clop_axioms,
    check_open_closed,
    check_T_algebra,
    left_center,
    load_algebra,
    round_trip_residuals,
)
from .sewing import SewabilityWarning, SewingError, sew_boundary, sew_interior, sew_sphere
from .suites import SUITES, RunConfig, run_suite

__all__ = ["main", "build_parser", "report_summary", "emit"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Unreadable or schema-violating input."""


def _default_tol() -> float:
    raw = os.environ.get("OCC_TOL")
    if raw is None:
        return 1e-8
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"OCC_TOL must be a number, got {raw!r}") from None
    if not tol > 0:
        raise InputError("OCC_TOL must be positive")
    return tol


def emit(results: Iterable[CheckResult], out: TextIO) -> list[CheckResult]:
    """Write ``results`` as JSON lines and return them."""
    done = []
    for r in results:
        out.write(json.dumps(r.as_dict()) + "\n")
        done.append(r)
    out.flush()
    return done


def report_summary(records: Sequence[dict], err: TextIO) -> int:
    """Aggregate pass/fail counts and worst residual per module prefix; returns the exit code."""
    if not records:
        err.write("warning: no checks were run\n")
        return EXIT_INPUT
    groups: dict[str, list[dict]] = defaultdict(list)
    for rec in records:
        groups[rec["check"].split(":", 1)[0]].append(rec)
    err.write(f"{'group':<28}{'pass':>6}{'fail':>6}{'max residual':>16}\n")
    failed = 0
    for g, recs in groups.items():
        n_fail = sum(not r["pass"] for r in recs)
        failed += n_fail
        worst = max(r["residual"] for r in recs)
        err.write(f"{g:<28}{len(recs) - n_fail:>6}{n_fail:>6}{worst:>16.3e}\n")
    err.write(f"{len(records)} checks, {failed} failed\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _with_tol(results: Iterable[CheckResult], tol: float | None) -> list[CheckResult]:
    if tol is None:
        return list(results)
    return [CheckResult(r.check, r.residual, tol, r.paper_ref, r.detail) for r in results]


def _prefixed(prefix: str, results: Iterable[CheckResult]) -> list[CheckResult]:
    return [CheckResult(f"{prefix}:{r.check}", r.residual, r.threshold, r.paper_ref, r.detail) for r in results]


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_element(path: str):
    try:
        return moduli.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed moduli element: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_verify_category(args, cfg: RunConfig, tol_given: float | None) -> list[CheckResult]:
    cat = load_category(args.data, check=False)
    return _with_tol(coherence_report(cat, min(cfg.tol, 1e-9), morphism_level=not args.index_only), tol_given)


def _cmd_verify_algebra(args, cfg: RunConfig, tol_given: float | None) -> list[CheckResult]:
    A = load_algebra(args.algebra)
    tol = min(cfg.tol, 1e-9)
    out = _prefixed("algebra", check_algebra(A, tol))
    if A.square:
        out += _prefixed("algebra", check_commutative_trivial_twist(A, tol))
        out += _prefixed("T-algebra", check_T_algebra(A, tol))
    return _with_tol(out, tol_given)


def _cmd_left_center(args, cfg: RunConfig, tol_given: float | None) -> list[CheckResult]:
    A = load_algebra(args.algebra)
    Cl, e = left_center(A)
    tol = min(cfg.tol, 1e-9)
    out = _prefixed("left-center", check_algebra(Cl, tol))
    cat = A.cat
    I = cat.identity(A.obj)
    f = e.tensor(I)
    central = (A.mu @ cat.braiding(A.obj, A.obj) @ f).distance(A.mu @ f)
    out.append(CheckResult("left-center:centrality", central, tol, "§3.2: left center of A"))
    if A.square:
        out += _prefixed("left-center", check_commutative_trivial_twist(Cl, tol))
    summary = {str(k): v for k, v in Cl.obj.multiplicities().items()}
    sys.stderr.write(f"left center summands: {json.dumps(summary)}\n")
    if args.out:
        Path(args.out).write_text(json.dumps({"summands": [[*(k if isinstance(k, tuple) else (k,)), v] for k, v in Cl.obj.multiplicities().items()]}) + "\n")
    return _with_tol(out, tol_given)


def _cmd_build_oc(args, cfg: RunConfig, tol_given: float | None) -> list[CheckResult]:
    A = load_algebra(args.algebra)
    sub = None
    if args.sub:
        sub = [tuple(s.split(",")) if A.square else s for s in args.sub]
    X = build_open_closed_from_center(A, sub)
    tol = min(cfg.tol, 1e-9)
    out = _prefixed("open-closed", check_open_closed(X, tol))
    out += _prefixed("open-closed", round_trip_residuals(X))
    out += _prefixed("open-closed", check_mu_clop_axioms(X, tol=tol))
    return _with_tol(out, tol_given)


def _cmd_sew(args, cfg: RunConfig, tol_given: float | None) -> None:
    P, Q = _load_element(args.lhs), _load_element(args.rhs)
    expected = {
        "sphere": (moduli.SphereElement, moduli.SphereElement),
        "boundary": (moduli.DiskElement, moduli.DiskElement),
        "interior": (moduli.DiskElement, moduli.SphereElement),
    }[args.kind]
    if not (isinstance(P, expected[0]) and isinstance(Q, expected[1])):
        raise InputError(
            f"--kind {args.kind} expects {expected[0].__name__} ∘ {expected[1].__name__}, "
            f"got {type(P).__name__} ∘ {type(Q).__name__}"
        )
    sew = {"sphere": sew_sphere, "boundary": sew_boundary, "interior": sew_interior}[args.kind]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SewabilityWarning)
        R = sew(moduli.with_order(P, cfg.order), args.index, moduli.with_order(Q, cfg.order))
    _write_result(moduli.to_json(R), args.out)


def _cmd_double(args, cfg: RunConfig, tol_given: float | None) -> None:
    P = _load_element(args.input)
    if not isinstance(P, moduli.DiskElement):
        raise InputError("double expects a disk element")
    _write_result(moduli.to_json(moduli.double(P)), args.out)


def _cmd_gamma(args, cfg: RunConfig, tol_given: float | None) -> None:
    def parse(s: str) -> list[complex]:
        try:
            return [complex(x.replace(" ", "")) for x in s.split(",") if x.strip()]
        except ValueError as exc:
            raise InputError(f"cannot parse coefficient list {s!r}") from exc

    A, B = parse(args.A), parse(args.B)
    (a0,) = parse(args.a0) or [1.0]
    rep = gamma_report(A, B, a0, cfg.depth, cfg.charges)
    res = {
        "gamma": [rep.value.real, rep.value.imag],
        "per_charge": [[g.real, g.imag] for g in rep.per_charge],
        "depth": rep.depth,
        "linearity_residual": rep.linearity_residual,
    }
    _write_result(res, args.out)


def _cmd_props(args, cfg: RunConfig, tol_given: float | None) -> list[CheckResult]:
    return run_suite(args.suite, cfg)


def _write_result(obj: dict, out: str | None) -> None:
    text = json.dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=8, help="series truncation order (2..16)")
    common.add_argument("--depth", type=int, default=8, help="Virasoro depth for Γ")
    common.add_argument("--tol", type=float, default=None, help="residual threshold (default 1e-8 or $OCC_TOL)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for randomized suites")
    common.add_argument("--trials", type=int, default=20, help="random instances per check")
    common.add_argument("--charges", type=str, default="1,26", help="central charges used to extract Γ")

    p = argparse.ArgumentParser(prog="occ", description="Open-closed sewing and algebra verification tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-category", parents=[common], help="coherence checks of braided fusion category data")
    s.add_argument("--data", required=True, help="category JSON file or shipped name (trivial, z2_q1, fib, ising, ...)")
    s.add_argument("--index-only", action="store_true", help="skip the morphism-level checks")
    s.set_defaults(fn=_cmd_verify_category, report=True)

    s = sub.add_parser("verify-algebra", parents=[common], help="algebra axioms (and T(A) checks in the square category)")
    s.add_argument("--algebra", required=True)
    s.set_defaults(fn=_cmd_verify_algebra, report=True)

    s = sub.add_parser("left-center", parents=[common], help="left center of an algebra")
    s.add_argument("--algebra", required=True)
    s.add_argument("--out", help="write the summands of the left center to this file")
    s.set_defaults(fn=_cmd_left_center, report=True)

    s = sub.add_parser("build-oc", parents=[common], help="open-closed algebra from the left center of A")
    s.add_argument("--algebra", required=True)
    s.add_argument("--sub", nargs="*", help="labels of the subalgebra of C_l(A) (square labels as i,j)")
    s.set_defaults(fn=_cmd_build_oc, report=True)

    s = sub.add_parser("sew", parents=[common], help="sew two moduli elements")
    s.add_argument("--kind", required=True, choices=["sphere", "boundary", "interior"])
    s.add_argument("--lhs", required=True, help="outer element P (sphere or disk JSON)")
    s.add_argument("--rhs", required=True, help="inner element Q")
    s.add_argument("--index", type=int, required=True, help="puncture of P that receives Q (1-based)")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_sew, report=False)

    s = sub.add_parser("double", parents=[common], help="doubling map δ of a disk element")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_double, report=False)

    s = sub.add_parser("gamma", parents=[common], help="sewing cocycle Γ(A, B, a0)")
    s.add_argument("--A", required=True, help="comma separated coefficients A_1, A_2, ...")
    s.add_argument("--B", required=True, help="comma separated coefficients B_1, B_2, ...")
    s.add_argument("--a0", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_gamma, report=False)

    s = sub.add_parser("props", parents=[common], help="randomized invariant suites")
    s.add_argument("--suite", required=True, choices=sorted(SUITES))
    s.set_defaults(fn=_cmd_props, report=True)
    return p


def _config(args) -> tuple[RunConfig, float | None]:
    env_tol = _default_tol()
    tol_given = args.tol if args.tol is not None else (env_tol if "OCC_TOL" in os.environ else None)
    try:
        charges = tuple(float(x) for x in args.charges.split(",") if x.strip())
    except ValueError:
        raise InputError(f"cannot parse charges {args.charges!r}") from None
    try:
        cfg = RunConfig(args.order, args.depth, tol_given or env_tol, args.seed, args.trials, charges)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return cfg, tol_given


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    try:
        cfg, tol_given = _config(args)
        results = args.fn(args, cfg, tol_given)
    except (InputError, CategoryError, KeyError, IndexError, OSError, ValueError) as exc:
        sys.stderr.write(f"occ: input error: {exc}\n")
        return EXIT_INPUT
    except (SewingError, DepthError) as exc:
        # the computation itself failed (unsewable data, depth too small)
        sys.stderr.write(f"occ: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    if not args.report:
        return EXIT_OK
    records = [r.as_dict() for r in emit(results, sys.stdout)]
    return report_summary(records, sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
