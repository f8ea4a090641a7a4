"""``qtf`` command line.

Exit codes: 0 success, 1 verification failure, 2 existence or precondition
failure, 3 parse or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from . import __version__
from .analysis import (
    cascade_phi,
    derive_functions,
    sm_estimate,
    write_function_csv,
    write_stem_csv,
)
from .factorization import ExistenceReport, GSFResult, dos_decompose, dos_feasible, gsf
from .field import DEFAULT_PREC
from .framelet import (
    ExistenceFailure,
    PreconditionError,
    bank_from_json,
    bank_to_json,
    construct,
    verify,
)
from .laurent import ANY, SymmetryType, poly_from_json, poly_to_json, sr, sym, vmo
from .lmatrix import IncompatibleSymmetry, matrix_from_json, matrix_to_json

OK, VERIFY_FAILED, NO_SOLUTION, BAD_INPUT = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable or malformed input."""


@dataclass
class RunConfig:
    tol: Fraction = Fraction(1, 10**25)
    prec_cap: int | None = None
    pl_shift: int = 0
    level: int = 12
    out: Path | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.level < 1:
            raise InputError("--level must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(BAD_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# io helpers


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON ({err.msg} at line {err.lineno})") from err


def _load(path: str, parse):
    obj = _read_json(path)
    try:
        return parse(obj)
    except (ValueError, TypeError, KeyError) as err:
        raise InputError(f"{path}: {err}") from err


def _emit(doc: dict, out: Path | None) -> None:
    text = json.dumps(doc, indent=1) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text)
    except OSError as err:
        raise InputError(f"cannot write {out}: {err.strerror or err}") from err


def _fmt_type(t) -> str:
    return "any" if t is ANY else ("none" if t is None else str(t))


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items() if k != "witness"}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (SymmetryType, type(ANY))):
        return _fmt_type(v)
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "items") and hasattr(v, "star"):
        return poly_to_json(v)
    return str(v)


def _report_failure(report: ExistenceReport) -> None:
    print(f"existence failure: {report.summary()}", file=sys.stderr)
    doc = {"condition1": _jsonable(report.condition1), "condition2": _jsonable(report.condition2)}
    print(json.dumps(doc, indent=1), file=sys.stderr)


def _parse_type(text: str) -> SymmetryType:
    try:
        return SymmetryType.parse(text)
    except (ValueError, TypeError) as err:
        raise InputError(f"bad symmetry type {text!r}; expected 'eps,c'") from err


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, cfg: RunConfig) -> int:
    a = _load(args.filter, poly_from_json)
    if a.is_zero():
        raise InputError("filter is zero")
    lines = [f"sym: {_fmt_type(sym(a))}", f"sr: {sr(a)}", f"vmo: {vmo(a)}"]
    try:
        lines.append(f"sm: {sm_estimate(a):.4f}")
    except (ValueError, ArithmeticError) as err:
        lines.append(f"sm: n/a ({err})")
    print("\n".join(lines))
    return OK


def cmd_construct(args, cfg: RunConfig) -> int:
    a = _load(args.a, poly_from_json)
    theta = _load(args.theta, poly_from_json)
    try:
        bank = construct(a, theta, args.nb, pl_shift=cfg.pl_shift, tol=cfg.tol)
    except PreconditionError as err:
        print(f"precondition failure: {err}", file=sys.stderr)
        return NO_SOLUTION
    except ExistenceFailure as err:
        _report_failure(err.report)
        return NO_SOLUTION
    _emit(bank_to_json(bank), cfg.out)
    return OK


def cmd_verify(args, cfg: RunConfig) -> int:
    bank = _load(args.bank, bank_from_json)
    rep = verify(bank, cfg.tol)
    for line in rep.lines():
        print(line)
    info = rep.info
    print(f"sym: a={_fmt_type(info['sym_a'])} theta={_fmt_type(info['sym_theta'])} "
          f"b1={_fmt_type(info['sym_b1'])} b2={_fmt_type(info['sym_b2'])}")
    print(f"vmo: b1={info['vmo_b1']} b2={info['vmo_b2']}  sr(a)={info['sr_a']}")
    return OK if rep.ok else VERIFY_FAILED


def cmd_factor(args, cfg: RunConfig) -> int:
    m = _load(args.matrix, matrix_from_json)
    if not m.is_hermitian():
        raise InputError(f"{args.matrix}: matrix is not Hermitian")
    try:
        res = gsf(m, DEFAULT_PREC)
    except IncompatibleSymmetry as err:
        print(f"precondition failure: incompatible symmetry ({err})", file=sys.stderr)
        return NO_SOLUTION
    except ValueError as err:
        raise InputError(f"{args.matrix}: {err}") from err
    if not isinstance(res, GSFResult):
        _report_failure(res)
        return NO_SOLUTION
    res_text = "0" if res.exact else mpmath.nstr(res.residual, 8)
    doc = {
        "U": matrix_to_json(res.U),
        "signature": [1, -1],
        "residual": res_text,
        "sym_alpha": _fmt_type(res.alpha),
    }
    _emit(doc, cfg.out)
    return OK


def cmd_dos(args, cfg: RunConfig) -> int:
    u = _load(args.poly, poly_from_json)
    target = _parse_type(args.type)
    check = dos_feasible(u, target)
    if not check:
        print(f"infeasible: {check.condition}: {check.detail}", file=sys.stderr)
        if check.x_interval is not None:
            print(f"x interval: {_jsonable(check.x_interval)}", file=sys.stderr)
            print(f"z interval: {_jsonable(check.z_interval)}", file=sys.stderr)
        return NO_SOLUTION
    w = dos_decompose(u, target, DEFAULT_PREC)
    doc = {"u1": poly_to_json(w.u1), "u2": poly_to_json(w.u2), "type": str(w.target)}
    _emit(doc, cfg.out)
    return OK


def cmd_render(args, cfg: RunConfig) -> int:
    bank = _load(args.bank, bank_from_json)
    out = cfg.out or Path(".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        phi = cascade_phi(bank.a, cfg.level)
        eta, psi1, psi2 = derive_functions(bank, phi)
        for name, u in bank.filters().items():
            write_stem_csv(u, out / f"{name}.csv")
        for name, f in (("phi", phi), ("eta", eta), ("psi1", psi1), ("psi2", psi2)):
            write_function_csv(f, out / f"{name}.csv")
    except OSError as err:
        raise InputError(f"cannot write to {out}: {err.strerror or err}") from err
    except ValueError as err:
        print(f"precondition failure: {err}", file=sys.stderr)
        return NO_SOLUTION
    print(f"wrote 8 files to {out}")
    return OK


# ---------------------------------------------------------------------------
# entry point

_SIGNED_TYPE = re.compile(r"^-\d+,-?\d+$")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=Fraction, default=Fraction(1, 10**25),
                        help="residual tolerance for inexact coefficients")
    common.add_argument("--prec-cap", type=int, help="ball precision cap in bits")
    common.add_argument("--pl-shift", type=int, default=0, help="shift l in the odd-parity branch")
    common.add_argument("--level", "--levels", dest="level", type=int, default=12,
                        help="cascade level J")
    common.add_argument("--out", type=Path, help="output file (or directory for render)")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="qtf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qtf {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", parents=[common], help="symmetry, sum rules and smoothness of a filter")
    s.add_argument("filter")
    s.set_defaults(run=cmd_analyze)

    s = sub.add_parser("construct", parents=[common], help="build a quasi-tight framelet bank")
    s.add_argument("a")
    s.add_argument("theta")
    s.add_argument("nb", type=int)
    s.set_defaults(run=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check a bank file")
    s.add_argument("bank")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("factor", parents=[common], help="factor A = U diag(1,-1) U*")
    s.add_argument("matrix")
    s.set_defaults(run=cmd_factor)

    s = sub.add_parser("dos", parents=[common], help="write u as a difference of Hermitian squares")
    s.add_argument("poly")
    s.add_argument("type", help="target type 'eps,c', e.g. +1,0")
    s.set_defaults(run=cmd_dos)

    s = sub.add_parser("render", parents=[common], help="write plot data as CSV")
    s.add_argument("bank")
    s.set_defaults(run=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # "-1,0" would otherwise be taken for an option
    argv = ["−" + t[1:] if _SIGNED_TYPE.match(t) else t for t in argv]
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.tol, args.prec_cap, args.pl_shift, args.level, args.out, args.seed)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return BAD_INPUT
    if cfg.prec_cap is not None and "QTF_PRECISION_CAP" not in os.environ:
        os.environ["QTF_PRECISION_CAP"] = str(cfg.prec_cap)
    random.seed(cfg.seed)
    np.random.seed(cfg.seed)
    try:
        return args.run(args, cfg)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
