"""Symmetric quasi-tight framelet filter banks with two generators.

A bank ``{a; b1, b2}`` with moment filter ``Theta`` and signature ``(1, -1)``
satisfies

    Theta(z^2) a*(z) a(z)  + b1*(z) b1(z)  - b2*(z) b2(z)  = Theta(z)
    Theta(z^2) a*(z) a(-z) + b1*(z) b1(-z) - b2*(z) b2(-z) = 0

Construction divides out ``n_b`` vanishing moments, passes to the coset
(polyphase) matrix ``N`` and hands it to :func:`qtf.factorization.gsf`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import mpmath

from .factorization import (
    DOSCheck,
    ExistenceReport,
    GSFResult,
    dos_decompose,
    dos_feasible,
    gsf,
)
from .field import DEFAULT_PREC, Ball, to_mp
from .laurent import (
    ANY,
    LaurentPoly,
    SquareRootError,
    SymmetryType,
    coset_merge,
    coset_split,
    divides,
    exact_div,
    hermitian_square_root,
    mz,
    odd,
    poly_from_json,
    poly_to_json,
    sr,
    sym,
    sym_gcd,
    vmo,
)
from .lmatrix import LMatrix2

__all__ = [
    "DELTA",
    "FilterBank",
    "MomentMatrices",
    "PreconditionError",
    "ExistenceFailure",
    "VerifyReport",
    "nb_range",
    "build_moment_matrices",
    "existence_test",
    "construct",
    "verify",
    "p0",
    "p0_stability",
    "associated",
    "bank_to_json",
    "bank_from_json",
    "load_fixture",
    "fixture_names",
]

DELTA = LaurentPoly({0: 1})
_ONE_MINUS_Z = LaurentPoly({0: 1, 1: -1})
_ONE_MINUS_ZINV = LaurentPoly({0: 1, -1: -1})
_ONE_PLUS_Z = LaurentPoly({0: 1, 1: 1})


class PreconditionError(ValueError):
    """Inputs violate the symmetry or range assumptions."""


class ExistenceFailure(ValueError):
    """No bank exists for the requested ``(a, Theta, n_b)``."""

    def __init__(self, report: ExistenceReport):
        self.report = report
        super().__init__(report.summary())


@dataclass
class FilterBank:
    a: LaurentPoly
    theta: LaurentPoly
    b1: LaurentPoly
    b2: LaurentPoly
    nb: int
    signature: tuple[int, int] = (1, -1)

    def filters(self) -> dict[str, LaurentPoly]:
        return {"a": self.a, "theta": self.theta, "b1": self.b1, "b2": self.b2}

    def is_exact(self) -> bool:
        return all(f.is_exact() for f in self.filters().values())


@dataclass
class MomentMatrices:
    M: LMatrix2
    M_nb: LMatrix2
    N: LMatrix2
    A: LaurentPoly
    B: LaurentPoly
    nb: int

    @property
    def cosets(self) -> dict[str, LaurentPoly]:
        a0, a1 = coset_split(self.A)
        b0, b1 = coset_split(self.B)
        return {"A0": a0, "A1": a1, "B0": b0, "B1": b1}

    def conjugation_identity(self) -> bool:
        """``4 N(z^2) = P* M_nb P`` with ``P = [[1, 1/z], [1, -1/z]]``."""
        zi = LaurentPoly({-1: 1})
        p = LMatrix2(1, zi, 1, -zi)
        lhs = self.N.map(lambda e: e.upsample(2) * 4)
        return lhs == p.star() * self.M_nb * p


# ---------------------------------------------------------------------------
# preconditions and ranges


def _neg(u: LaurentPoly) -> LaurentPoly:
    return u.negate_var()


def _sq(u: LaurentPoly) -> LaurentPoly:
    return u.upsample(2)


def _check_inputs(a: LaurentPoly, theta: LaurentPoly) -> int:
    """Validate ``Sym Theta = 1``, ``Theta* = Theta``, ``Sym a = z^c``; return ``c``."""
    st = sym(theta)
    if theta.is_zero() or st != SymmetryType(1, 0):
        raise PreconditionError(f"Theta must have symmetry type 1 (got {st})")
    if theta.star() != theta:
        raise PreconditionError("Theta must satisfy Theta* = Theta")
    sa = sym(a)
    if a.is_zero() or sa is None or sa is ANY or sa.eps != 1:
        raise PreconditionError(f"a must have symmetry type z^c (got {sa})")
    return sa.c


def _moment_defect(a: LaurentPoly, theta: LaurentPoly) -> LaurentPoly:
    return theta - _sq(theta) * a.star() * a


def nb_range(a: LaurentPoly, theta: LaurentPoly) -> range:
    """Admissible ``n_b``: ``1 .. min(sr(a), vmo(Theta - Theta(z^2) a* a) / 2)``."""
    _check_inputs(a, theta)
    defect = _moment_defect(a, theta)
    half = sr(a) if defect.is_zero() else min(sr(a), vmo(defect) // 2)
    return range(1, half + 1)


def build_moment_matrices(a: LaurentPoly, theta: LaurentPoly, nb: int) -> MomentMatrices:
    _check_inputs(a, theta)
    th2 = _sq(theta)
    a_s, a_m = a.star(), _neg(a)
    m = LMatrix2(
        theta - th2 * a_s * a,
        -(th2 * a_s * a_m),
        -(th2 * _neg(a_s) * a),
        _neg(theta) - th2 * _neg(a_s) * a_m,
    )
    try:
        big_a = exact_div(m[0, 0], _ONE_MINUS_Z**nb * _ONE_MINUS_ZINV**nb)
        big_b = exact_div(m[0, 1], _ONE_MINUS_ZINV**nb * _ONE_PLUS_Z**nb)
    except ArithmeticError as err:
        raise PreconditionError(f"n_b = {nb} is outside the admissible range: {err}") from None
    m_nb = LMatrix2(big_a, big_b, _neg(big_b), _neg(big_a))
    a0, a1 = coset_split(big_a)
    b0, b1 = coset_split(big_b)
    half = Fraction(1, 2)
    n = LMatrix2(
        (a0 + b0) * half,
        (a1 - b1) * half,
        ((a1 + b1) * half).shift(1),
        (a0 - b0) * half,
    )
    return MomentMatrices(m, m_nb, n, big_a, big_b, nb)


# ---------------------------------------------------------------------------
# existence


def _strip_pm1(p0: LaurentPoly) -> LaurentPoly:
    p = p0
    m1, m2 = mz(p, 1), mz(p, -1)
    if m1:
        p = exact_div(p, LaurentPoly({0: -1, 1: 1}) ** m1)
    if m2:
        p = exact_div(p, _ONE_PLUS_Z**m2)
    s = p.ldeg + p.deg
    return p.shift(-(s // 2)) if s % 2 == 0 else p


def p0(a: LaurentPoly, theta: LaurentPoly, nb: int) -> LaurentPoly:
    """gcd of the entries of ``N`` for the given ``n_b``."""
    return sym_gcd(*build_moment_matrices(a, theta, nb).N.entries)


def existence_test(
    a: LaurentPoly, theta: LaurentPoly, nb: int, prec: int = DEFAULT_PREC
) -> ExistenceReport:
    """Evaluate both existence conditions for ``(a, Theta, n_b)``."""
    c = _check_inputs(a, theta)
    if nb not in nb_range(a, theta):
        raise PreconditionError(f"n_b = {nb} outside {_fmt_range(nb_range(a, theta))}")
    mm = build_moment_matrices(a, theta, nb)
    det = mm.N.det()
    if det.is_zero():
        d = LaurentPoly()
        c1 = {"holds": True, "d": d, "reason": "det N vanishes identically"}
    else:
        try:
            d = hermitian_square_root(-det, prec)
        except SquareRootError as err:
            return ExistenceReport(
                {"holds": False, "reason": str(err), "condition": err.condition, "where": err.where},
                {"holds": None, "reason": "not evaluated"},
            )
        c1 = {"holds": True, "d": d}
    if theta == DELTA:
        return ExistenceReport(
            c1, {"holds": True, "p0": DELTA, "p": DELTA, "reason": "Theta = delta: p0 = p = 1"}
        )
    k = c + nb
    sd = sym(d)
    base = SymmetryType((-1) ** k, odd(k) - 1)
    target = base * sd if sd is not ANY else base
    g = sym_gcd(*mm.N.entries)
    p = _strip_pm1(g)
    check: DOSCheck = dos_feasible(p, target)
    c2 = {"holds": bool(check), "p0": g, "p": p, "type": target}
    if check:
        c2["witness"] = dos_decompose(p, target, prec)
    else:
        c2.update(
            reason=f"{check.condition}: {check.detail}",
            x_interval=check.x_interval,
            z_interval=check.z_interval,
        )
    return ExistenceReport(c1, c2)


def _fmt_range(r: range) -> str:
    return "an empty range" if not r else f"[{r.start}, {r.stop - 1}]"


# ---------------------------------------------------------------------------
# construction


def construct(
    a: LaurentPoly,
    theta: LaurentPoly,
    nb: int,
    pl_shift: int = 0,
    prec: int = DEFAULT_PREC,
    tol=Fraction(1, 10**25),
) -> FilterBank:
    """Build ``b1, b2`` with ``n_b`` vanishing moments from a factorization of ``N``."""
    c = _check_inputs(a, theta)
    rng = nb_range(a, theta)
    if nb not in rng:
        raise PreconditionError(f"n_b = {nb} outside {_fmt_range(rng)}")
    report = existence_test(a, theta, nb, prec)
    if not report.ok:
        raise ExistenceFailure(report)
    n = build_moment_matrices(a, theta, nb).N
    if (c + nb) % 2 == 0:
        res = gsf(n, prec)
        if not isinstance(res, GSFResult):
            raise ExistenceFailure(res)
        u = res.U
    else:
        zl = LaurentPoly({pl_shift: 1})
        q = LMatrix2(1, zl, 1, -zl)
        res = gsf(q * n * q.star(), prec)
        if not isinstance(res, GSFResult):
            raise ExistenceFailure(res)
        zl_inv = LaurentPoly({-pl_shift: Fraction(1, 2)})
        q_inv = LMatrix2(Fraction(1, 2), Fraction(1, 2), zl_inv, -zl_inv)
        u = q_inv * res.U
    v = u.star()
    vm = _ONE_MINUS_Z**nb
    b1 = vm * coset_merge(v[0, 0], v[0, 1])
    b2 = vm * coset_merge(v[1, 0], v[1, 1])
    bank = FilterBank(a, theta, b1, b2, nb)
    rep = verify(bank, tol)
    if not rep.ok:
        raise ArithmeticError(f"constructed bank failed verification: {rep.failures()}")
    return bank


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    checks: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def lines(self) -> list[str]:
        out = []
        for name, passed in self.checks.items():
            extra = ""
            if name in self.residuals:
                extra = f" residual={mpmath.nstr(self.residuals[name], 5)}"
            out.append(f"{'PASS' if passed else 'FAIL'} {name}{extra}")
        return out


def _max_coeff(u: LaurentPoly):
    worst = mpmath.mpf(0)
    for _, v in u.items():
        m = abs(v.center) + v.radius if isinstance(v, Ball) else abs(to_mp(v))
        worst = max(worst, m)
    return worst


def verify(bank: FilterBank, tol=Fraction(1, 10**25)) -> VerifyReport:
    """Check the two bank identities, symmetry, vanishing moments and parity."""
    rep = VerifyReport()
    a, th, b1, b2 = bank.a, bank.theta, bank.b1, bank.b2
    e1, e2 = bank.signature
    th2 = _sq(th)
    r1 = th2 * a.star() * a + b1.star() * b1 * e1 + b2.star() * b2 * e2 - th
    r0 = th2 * a.star() * _neg(a) + b1.star() * _neg(b1) * e1 + b2.star() * _neg(b2) * e2
    exact = bank.is_exact()
    tol_mp = mpmath.mpf(0) if exact else to_mp(tol)
    for name, r in (("identity_1", r1), ("identity_0", r0)):
        res = _max_coeff(r)
        rep.residuals[name] = res
        rep.checks[name] = r.is_zero() if exact else res <= tol_mp
    sa, st = sym(a), sym(th)
    rep.checks["symmetry_a"] = isinstance(sa, SymmetryType) and sa.eps == 1
    rep.checks["symmetry_theta"] = st == SymmetryType(1, 0) and th.star() == th
    s1, s2 = sym(b1), sym(b2)
    rep.checks["symmetry_b1"] = s1 is not None
    rep.checks["symmetry_b2"] = s2 is not None
    rep.info.update(sym_a=sa, sym_theta=st, sym_b1=s1, sym_b2=s2)
    v1 = None if b1.is_zero() else vmo(b1)
    v2 = None if b2.is_zero() else vmo(b2)
    rep.info.update(vmo_b1=v1, vmo_b2=v2, sr_a=sr(a))
    rep.checks["vanishing_moments"] = all(v is None or v >= bank.nb for v in (v1, v2))
    parity = True
    if isinstance(sa, SymmetryType):
        for s in (s1, s2):
            if isinstance(s, SymmetryType) and (s.c + sa.c) % 2:
                parity = False
    rep.checks["parity"] = parity
    return rep


# ---------------------------------------------------------------------------
# stability of p0 across n_b


def associated(u: LaurentPoly, v: LaurentPoly) -> bool:
    """``u = (c z^k) v`` for a nonzero constant ``c``."""
    if u.is_zero() or v.is_zero():
        return u.is_zero() and v.is_zero()
    if not divides(v, u):
        return False
    return exact_div(u, v).is_monomial()


def p0_stability(a: LaurentPoly, theta: LaurentPoly) -> bool:
    """True when the gcd ``p0`` agrees (up to monomials) for every valid ``n_b``."""
    gs = [p0(a, theta, nb) for nb in nb_range(a, theta)]
    return all(associated(g, gs[0]) for g in gs[1:])


# ---------------------------------------------------------------------------
# JSON and fixtures


def bank_to_json(bank: FilterBank) -> dict:
    out = {k: poly_to_json(v) for k, v in bank.filters().items()}
    out["nb"] = bank.nb
    out["signature"] = list(bank.signature)
    return out


def bank_from_json(obj) -> FilterBank:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise ValueError("bank document must be a JSON object")
    missing = [k for k in ("a", "theta", "b1", "b2", "nb") if k not in obj]
    if missing:
        raise ValueError(f"bank document is missing {', '.join(missing)}")
    nb = obj["nb"]
    if not isinstance(nb, int) or isinstance(nb, bool) or nb < 0:
        raise ValueError("nb must be a nonnegative integer")
    sig = tuple(obj.get("signature", (1, -1)))
    if sig != (1, -1):
        raise ValueError("only the signature [1, -1] is supported")
    return FilterBank(
        poly_from_json(obj["a"]),
        poly_from_json(obj["theta"]),
        poly_from_json(obj["b1"]),
        poly_from_json(obj["b2"]),
        nb,
        sig,
    )


def fixture_names() -> list[str]:
    root = resources.files("qtf") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> FilterBank:
    root = resources.files("qtf") / "fixtures"
    return bank_from_json((root / f"{name}.json").read_text())
