"""Generalized spectral factorization ``A = U diag(1,-1) U*``.

Pipeline for a 2x2 Hermitian matrix ``A`` of Laurent polynomials with
compatible symmetry:

1. ``-det A = d d*`` (Hermitian square root, else condition (1) fails);
2. pull out the common ``(z-1)``/``(z+1)`` content of the first row and the
   gcd ``p`` of all entries; ``p`` must be a difference of Hermitian squares
   of type ``alpha * Sym d`` (condition (2));
3. shrink the spectrum of the coprime part until the determinant is a
   negative constant;
4. factor the constant-determinant matrix (off-diagonal shrinking with a
   terminal form, or the nullspace construction when ``alpha = -z^(2k)``);
5. reassemble with the DOS witness of ``p``.

Roots are handled in the palindromic variable ``x = z + 1/z``: a real
symmetric ``u`` with ``u(k) = u(-k)`` equals ``U(x)``; roots on the unit
circle map to ``x`` in ``(-2, 2)``, real roots off the circle to
``|x| > 2`` and ``z = +-1`` to ``x = +-2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .field import DEFAULT_PREC, Ball, as_number, conj, is_real, is_zero, sign, sqrt, to_mp
from .laurent import (
    ANY,
    LaurentPoly,
    SquareRootError,
    SymmetryType,
    _count_sqfree,
    _pmonic,
    _pmul,
    _sympy_factor,
    _trim,
    count_real_roots,
    exact_div,
    from_x_form,
    hermitian_square_root,
    isolate_real_root,
    isolate_roots,
    mz,
    split_conjugate,
    squarefree_decomposition,
    sym,
    sym_gcd,
    sym_long_div,
    to_x_form,
)
from .lmatrix import (
    IncompatibleSymmetry,
    LMatrix2,
    infer_certificate,
    invert_strongly_invertible,
    normal_form,
)

__all__ = [
    "DOSWitness",
    "DOSCheck",
    "DOSInfeasible",
    "GSFResult",
    "ExistenceReport",
    "FactorizationError",
    "dos_feasible",
    "dos_atom",
    "dos_combine",
    "dos_decompose",
    "shrink_offdiag",
    "const_det_factor_cases123",
    "const_det_factor_case4",
    "spectrum_shrink",
    "coprime_factor",
    "existence_report",
    "gsf",
    "alpha_case",
    "signature_product",
]

J = LMatrix2.diag(1, -1)
Z = LaurentPoly({1: 1})


class FactorizationError(ArithmeticError):
    """Internal-consistency failure or violated precondition."""


def signature_product(u: LMatrix2) -> LMatrix2:
    """``U diag(1,-1) U*``."""
    return u * J * u.star()


def _const(c) -> LaurentPoly:
    return LaurentPoly({0: c})


def _is_const(u: LaurentPoly) -> bool:
    return u.is_zero() or u.is_constant()


# ---------------------------------------------------------------------------
# DOS


@dataclass(frozen=True)
class DOSWitness:
    """``u1 u1* - u2 u2* = u`` with ``Sym u1 / Sym u2 = eps z^c``."""

    u1: LaurentPoly
    u2: LaurentPoly
    eps: int
    c: int

    @property
    def target(self) -> SymmetryType:
        return SymmetryType(self.eps, self.c)

    def value(self) -> LaurentPoly:
        return self.u1 * self.u1.star() - self.u2 * self.u2.star()

    def types(self) -> tuple[SymmetryType, SymmetryType]:
        """Symmetry types of ``(u1, u2)`` with zeros assigned consistently."""
        t = self.target
        s1, s2 = sym(self.u1), sym(self.u2)
        if s1 is None or s2 is None:
            raise FactorizationError("witness entry without symmetry")
        if s1 is ANY and s2 is ANY:
            return t, SymmetryType(1, 0)
        if s1 is ANY:
            return s2 * t, s2
        if s2 is ANY:
            return s1, s1 / t
        return s1, s2

    def is_valid(self, u: LaurentPoly | None = None) -> bool:
        s1, s2 = self.types()
        if s1 / s2 != self.target:
            return False
        return u is None or self.value() == u

    def shift_type(self, k: int) -> "DOSWitness":
        """Witness for type ``eps z^(c+2k)``."""
        return DOSWitness(self.u1.shift(k), self.u2, self.eps, self.c + 2 * k)

    def retarget(self, target: SymmetryType) -> "DOSWitness":
        if target.eps != self.eps or (target.c - self.c) % 2:
            raise ValueError("target type is not in the same class")
        return self.shift_type((target.c - self.c) // 2)


@dataclass(frozen=True)
class DOSCheck:
    """Outcome of :func:`dos_feasible`; falsy when infeasible."""

    ok: bool
    condition: str = ""
    x_interval: tuple | None = None
    z_interval: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


class DOSInfeasible(ValueError):
    def __init__(self, check: DOSCheck):
        self.check = check
        super().__init__(f"{check.condition}: {check.detail}")


def _z_from_x(x: Fraction) -> float:
    """The root ``z`` in ``(-1, 1)`` of ``z + 1/z = x`` for ``|x| > 2``."""
    xf = float(x)
    return (xf - (1 if xf > 0 else -1) * (xf * xf - 4) ** 0.5) / 2


def _parity_ranges(t: SymmetryType):
    eps, odd = t.eps, t.c % 2
    if eps == 1 and not odd:
        return []
    if eps == 1 and odd:
        return [("-inf", Fraction(-2))]
    if eps == -1 and not odd:
        return [("-inf", Fraction(-2)), (Fraction(2), "inf")]
    return [(Fraction(2), "inf")]


def dos_feasible(u: LaurentPoly, target) -> DOSCheck:
    """Decide the DOS property of ``u`` for type ``target = (eps, c)``."""
    t = _as_type(target)
    u = LaurentPoly(u) if not isinstance(u, LaurentPoly) else u
    if u.is_zero():
        return DOSCheck(True)
    if not u.is_real():
        return DOSCheck(False, "real coefficients", detail="u has non-real coefficients")
    if u.star() != u:
        return DOSCheck(False, "hermitian", detail="u* != u")
    G = to_x_form(u)
    _, parts = squarefree_decomposition(G)
    for s, i in parts:
        if i % 2 == 0:
            continue
        for lo, hi in _parity_ranges(t):
            if _count_sqfree(s, lo, hi):
                a, b = isolate_real_root(s, lo, hi)
                za, zb = sorted((_z_from_x(a), _z_from_x(b)))
                where = "(-1,0)" if hi != "inf" else "(0,1)"
                return DOSCheck(
                    False,
                    "interval parity",
                    (a, b),
                    (za, zb),
                    f"odd-multiplicity zero in {where} for type {t}",
                )
    return DOSCheck(True)


def _as_type(t) -> SymmetryType:
    if isinstance(t, SymmetryType):
        return t
    if isinstance(t, str):
        return SymmetryType.parse(t)
    eps, c = t
    return SymmetryType(int(eps), int(c))


_XPOLY = LaurentPoly({1: 1, -1: 1})


def dos_atom(kind: str, target, z0=None, *, x0=None, prec: int = DEFAULT_PREC) -> DOSWitness:
    """Witness for one root atom (type ``c`` reduced to ``{0, 1}``).

    ``kind``: ``"a"`` (``z0 = +-1``), ``"b"`` (non-real ``x0``), ``"c"``
    (unit-circle pair, real ``x0`` in ``(-2, 2)``), ``"d"`` (real pair,
    ``|x0| > 2``, odd multiplicity).  Either ``z0`` or ``x0 = z0 + 1/z0``
    (``2 Re z0`` on the circle) locates the atom.
    """
    t = _as_type(target)
    eps, odd = t.eps, t.c % 2
    if x0 is None:
        if z0 is None:
            raise ValueError("atom needs z0 or x0")
        z0 = as_number(z0)
        x0 = z0 + conj(z0) if kind == "c" else z0 + 1 / z0
    x0 = as_number(x0)
    one_plus_z = LaurentPoly({0: 1, 1: 1})
    if kind == "a":
        if x0 == 2:
            w = DOSWitness(LaurentPoly(), LaurentPoly({0: -1, 1: 1}), eps, odd)
        elif x0 == -2:
            w = DOSWitness(one_plus_z, LaurentPoly(), eps, odd)
        else:
            raise ValueError("atom (a) needs z0 = +-1")
        return w.retarget(t) if t.c != odd else w
    if kind == "b":
        h = _XPOLY - x0
        w = DOSWitness(h, LaurentPoly(), eps, odd)
        return w.retarget(t) if t.c != odd else w
    v = _XPOLY - x0
    if kind == "c":
        if eps == 1 and not odd:
            s = 2 * sqrt(2 - x0, prec)
            w = DOSWitness((_XPOLY + 2 - 2 * x0) / s, (_XPOLY - 2) / s, eps, odd)
        elif eps == 1:
            w = DOSWitness(one_plus_z, _const(sqrt(2 + x0, prec)), eps, odd)
        elif not odd:
            w = DOSWitness(
                one_plus_z * sqrt((2 - x0) / 4, prec),
                LaurentPoly({0: 1, 1: -1}) * sqrt((2 + x0) / 4, prec),
                eps,
                odd,
            )
        else:
            w = DOSWitness(_const(sqrt(2 - x0, prec)), LaurentPoly({0: 1, -1: -1}), eps, odd)
    elif kind == "d":
        if eps == 1 and not odd:
            w = DOSWitness(v + Fraction(1, 4), v - Fraction(1, 4), eps, odd)
        elif eps == 1:
            if sign(x0) < 0:
                raise ValueError("odd real zero in (-1,0) is infeasible for this type")
            w = DOSWitness(one_plus_z, _const(sqrt(2 + x0, prec)), eps, odd)
        elif not odd:
            raise ValueError("odd real zero off the circle is infeasible for this type")
        else:
            if sign(x0) > 0:
                raise ValueError("odd real zero in (0,1) is infeasible for this type")
            w = DOSWitness(_const(sqrt(2 - x0, prec)), LaurentPoly({0: 1, -1: -1}), eps, odd)
    else:
        raise ValueError(f"unknown atom kind {kind!r}")
    return w.retarget(t) if t.c != odd else w


def dos_combine(w1: DOSWitness, w2: DOSWitness) -> DOSWitness:
    """Witness for the product of the two represented polynomials."""
    if w1.target != w2.target:
        raise ValueError("witnesses have different ratio types")
    s1, _ = w1.types()
    u1, u2, u3, u4 = w1.u1, w1.u2, w2.u1, w2.u2
    zc = LaurentPoly({s1.c: 1})
    u5 = u1 * u3 + zc * u2.star() * u4
    u6 = u2 * u3 + zc * u1.star() * u4
    return DOSWitness(u5, u6, w1.eps, w1.c)


def _real_roots_numeric(f: list, prec: int):
    """Split roots of an irreducible real ``f``: ``(reals, upper)`` as Balls,
    certified against the Sturm count."""
    n_real = count_real_roots(f, "-inf", "inf")
    discs = isolate_roots(f, prec)
    cand = [(c, r) for c, r in discs if abs(c.imag) <= r]
    if len(cand) != n_real:
        raise FactorizationError("could not certify the real roots")
    reals = [Ball(c.real, r, prec) for c, r in cand]
    upper = [Ball(c, r, prec) for c, r in discs if c.imag > r]
    return reals, upper


def _atom_for_real(x0, t: SymmetryType, prec: int) -> DOSWitness:
    if sign(x0 - 2) == 0 or sign(x0 + 2) == 0:
        return dos_atom("a", t, x0=x0, prec=prec)
    inside = sign(x0 - 2) < 0 and sign(x0 + 2) > 0
    return dos_atom("c" if inside else "d", t, x0=x0, prec=prec)


def _irreducible_atoms(f: list, t: SymmetryType, prec: int) -> list[DOSWitness]:
    """Atoms for a monic irreducible x-factor with odd multiplicity."""
    if len(f) == 2:
        return [_atom_for_real(-f[0], t, prec)]
    if len(f) == 3:
        gamma, beta = f[0], f[1]
        disc = beta * beta - 4 * gamma
        if sign(disc) < 0:
            root = (-beta + sqrt(disc, prec, allow_negative=True)) / 2
            return [dos_atom("b", t, x0=root, prec=prec)]
        r = sqrt(disc, prec)
        return [_atom_for_real((-beta + r) / 2, t, prec), _atom_for_real((-beta - r) / 2, t, prec)]
    reals, upper = _real_roots_numeric(f, prec)
    out = [_atom_for_real(x, t, prec) for x in reals]
    out += [dos_atom("b", t, x0=x, prec=prec) for x in upper]
    return out


def _factor_x(s: list) -> list[tuple[list, int]]:
    facs = _sympy_factor(s)
    return facs if facs is not None else [(s, 1)]


def dos_decompose(u: LaurentPoly, target, prec: int = DEFAULT_PREC) -> DOSWitness:
    """Full DOS witness for ``u`` and type ``target``."""
    t = _as_type(target)
    u = LaurentPoly(u) if not isinstance(u, LaurentPoly) else u
    check = dos_feasible(u, t)
    if not check:
        raise DOSInfeasible(check)
    base = SymmetryType(t.eps, t.c % 2)
    if u.is_zero():
        return DOSWitness(LaurentPoly(), LaurentPoly(), t.eps, t.c)
    G = to_x_form(u)
    lc, parts = squarefree_decomposition(G)
    if sign(lc) > 0:
        acc = DOSWitness(_const(sqrt(lc, prec)), LaurentPoly(), base.eps, base.c)
    else:
        acc = DOSWitness(LaurentPoly(), _const(sqrt(-lc, prec)), base.eps, base.c)
    for s, i in parts:
        half = i // 2
        if half:
            q = from_x_form(s) ** half
            acc = dos_combine(acc, DOSWitness(q, LaurentPoly(), base.eps, base.c))
        if i % 2:
            for f, m in _factor_x(s):
                for _ in range(m):
                    for atom in _irreducible_atoms(f, base, prec):
                        acc = dos_combine(acc, atom)
    return acc.retarget(t) if t.c != base.c else acc


# ---------------------------------------------------------------------------
# results


@dataclass
class GSFResult:
    """Successful factorization ``A = U diag(1,-1) U*``."""

    U: LMatrix2
    alpha: SymmetryType
    exact: bool
    residual: object
    trace: dict = field(default_factory=dict)

    ok = True

    def signature(self) -> tuple[int, int]:
        return (1, -1)

    def ratio_check(self) -> bool:
        """``Sym U11/Sym U21 == Sym U12/Sym U22 == alpha`` (zeros match anything)."""
        return _ratio_ok(self.U, self.alpha)


@dataclass
class ExistenceReport:
    """Outcome of the two existence conditions for a given ``A``."""

    condition1: dict
    condition2: dict

    @property
    def ok(self) -> bool:
        return bool(self.condition1.get("holds")) and bool(self.condition2.get("holds"))

    def failed(self) -> str | None:
        if not self.condition1.get("holds"):
            return "condition1"
        if not self.condition2.get("holds"):
            return "condition2"
        return None

    def summary(self) -> str:
        if self.ok:
            return "both conditions hold"
        which = self.failed()
        cond = self.condition1 if which == "condition1" else self.condition2
        return f"{which} fails: {cond.get('reason', '')}"


def _ratio_ok(u: LMatrix2, alpha) -> bool:
    for top, bottom in ((u[0, 0], u[1, 0]), (u[0, 1], u[1, 1])):
        s_top, s_bot = sym(top), sym(bottom)
        if s_top is None or s_bot is None:
            return False
        if s_top is ANY or s_bot is ANY or alpha is ANY:
            continue
        if s_top / s_bot != alpha:
            return False
    return bool(infer_certificate(u))


def _mid(x, prec):
    if isinstance(x, Ball):
        return x.center
    return to_mp(x, prec)


def _mp_poly(u: LaurentPoly, prec) -> dict:
    return {k: _mid(v, prec) for k, v in u.items()}


def _mp_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for i, x in p.items():
        for j, y in q.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


def _mp_star(p: dict) -> dict:
    return {-k: mpmath.conj(v) for k, v in p.items()}


def _residual(a: LMatrix2, u: LMatrix2, prec: int = DEFAULT_PREC):
    """Largest coefficient of ``A - U J U*`` evaluated at ball midpoints."""
    if u.is_exact() and a.is_exact():
        diff = a - signature_product(u)
        return mpmath.mpf(0) if diff.is_zero() else mpmath.mpf(float(diff.max_abs()))
    with mpmath.workprec(prec):
        m = [[_mp_poly(u[j, k], prec) for k in range(2)] for j in range(2)]
        worst = mpmath.mpf(0)
        for j in range(2):
            for k in range(2):
                acc = _mp_poly(a[j, k], prec)
                for col, sgn in ((0, 1), (1, -1)):
                    for e, v in _mp_mul(m[j][col], _mp_star(m[k][col])).items():
                        acc[e] = acc.get(e, 0) - sgn * v
                for v in acc.values():
                    worst = max(worst, abs(v))
    return worst


# ---------------------------------------------------------------------------
# constant determinant


def alpha_case(alpha) -> int:
    """Case number (1-4) of ``alpha = eps z^c``; ``ANY`` counts as case 3."""
    if alpha is ANY:
        return 3
    if alpha.c % 2:
        return 1 if alpha.eps == 1 else 2
    return 3 if alpha.eps == 1 else 4


def _alpha_of(a: LMatrix2):
    s = sym(a[0, 1])
    if s is ANY:
        cert = infer_certificate(a)
        if not cert:
            raise IncompatibleSymmetry(cert.reason)
        return cert.entry_type(0, 1)
    if s is None:
        raise IncompatibleSymmetry("A12 has no symmetry")
    return s


def _const_det(a: LMatrix2):
    d = a.det()
    if not d.is_constant() or d.is_zero():
        raise FactorizationError("determinant is not a nonzero constant")
    c = d[0]
    if not is_real(c) or sign(c) >= 0:
        raise FactorizationError("determinant is not negative")
    return c


def shrink_offdiag(a: LMatrix2) -> tuple[list[LMatrix2], LMatrix2]:
    """Reduce ``len(A21)`` by congruences ``V A V*`` until an entry vanishes."""
    alpha = _alpha_of(a)
    if alpha_case(alpha) == 4:
        raise FactorizationError("alpha = -z^(2k) is handled by the nullspace construction")
    _const_det(a)
    vs: list[LMatrix2] = []
    while all(not e.is_zero() for e in a.entries):
        n21 = a[1, 0].length
        if a[0, 0].length <= n21:
            q, _ = sym_long_div(a[1, 0], a[0, 0])
            v = LMatrix2(1, 0, -q, 1)
        elif a[1, 1].length <= n21:
            q, _ = sym_long_div(a[0, 1], a[1, 1])
            v = LMatrix2(1, -q, 0, 1)
        else:
            raise FactorizationError("length identity violated: no diagonal entry is short enough")
        a = v * a * v.star()
        vs.append(v)
        if not a[1, 0].is_zero() and a[1, 0].length >= n21:
            raise AssertionError("off-diagonal length did not decrease")
    return vs or [LMatrix2.identity()], a


def _terminal(a: LMatrix2, prec: int) -> tuple[LMatrix2, str]:
    r2 = sqrt(Fraction(1, 2), prec)
    if a[0, 1].is_zero():
        c1, c2 = a[0, 0], a[1, 1]
        if not (_is_const(c1) and _is_const(c2)):
            raise FactorizationError("diagonal terminal form is not constant")
        c1, c2 = c1[0], c2[0]
        if sign(c1) > 0:
            return LMatrix2.diag(sqrt(c1, prec), sqrt(-c2, prec)), "diag"
        return LMatrix2(0, sqrt(-c1, prec), sqrt(c2, prec), 0), "antidiag"
    if a[0, 0].is_zero():
        h = a[1, 1] * Fraction(1, 2)
        return LMatrix2(a[0, 1], a[0, 1], h + 1, h - 1) * r2, "a11_zero"
    if a[1, 1].is_zero():
        h = a[0, 0] * Fraction(1, 2)
        return LMatrix2(h + 1, h - 1, a[1, 0], a[1, 0]) * r2, "a22_zero"
    raise FactorizationError("terminal form has no zero entry")


def const_det_factor_cases123(a: LMatrix2, prec: int = DEFAULT_PREC) -> GSFResult:
    """Factor a constant-determinant Hermitian ``A`` for ``alpha`` in cases 1-3."""
    alpha = _alpha_of(a)
    if alpha_case(alpha) == 4:
        raise FactorizationError("wrong symmetry case for the off-diagonal reduction")
    vs, ak = shrink_offdiag(a)
    ut, form = _terminal(ak, prec)
    u = ut
    for v in reversed(vs):
        u = invert_strongly_invertible(v) * u
    res = _residual(a, u)
    return GSFResult(
        u, alpha, u.is_exact(), res, {"steps": len(vs), "terminal": form, "case": alpha_case(alpha)}
    )


class _Residues:
    """Arithmetic modulo ``a11`` on the window ``z^-n .. z^(n-1)``."""

    def __init__(self, a11: LaurentPoly, n: int):
        _, self.a = a11.to_poly()  # a11 = z^-n * a, deg a = 2n
        self.n = n

    def mulz(self, r: list) -> list:
        if not r:
            return r
        top = r[-1]
        out = [Fraction(0)] + r[:-1]
        if not is_zero(top):
            f = top / self.a[-1]
            out = [x - f * y for x, y in zip(out, self.a)]
        return out

    def divz(self, r: list) -> list:
        if not r:
            return r
        low = r[0]
        if not is_zero(low):
            f = low / self.a[0]
            r = [x - f * y for x, y in zip(r, self.a)] + [-f * self.a[-1]]
        else:
            r = r + [Fraction(0)]
        return r[1:]

    def zero(self) -> list:
        return [Fraction(0)] * (2 * self.n)

    def reduce(self, u: LaurentPoly) -> list:
        r = self.zero()
        if u.is_zero():
            return r
        for e in range(u.deg, u.ldeg - 1, -1):
            r = self.mulz(r)
            if r:
                r[self.n] = r[self.n] + u[e]
        return self.power(r, u.ldeg)

    def power(self, r: list, k: int) -> list:
        step = self.mulz if k > 0 else self.divz
        for _ in range(abs(k)):
            r = step(r)
        return r


def _nullspace(rows: list[list], ncols: int) -> list[list]:
    """Reduced-echelon nullspace basis over the coefficient field."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if not is_zero(m[i][col]):
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not is_zero(m[i][col]):
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def const_det_factor_case4(a: LMatrix2, prec: int = DEFAULT_PREC) -> GSFResult:
    """Factor a constant-determinant Hermitian ``A`` with ``alpha = -z^(2k)``."""
    alpha = _alpha_of(a)
    if alpha_case(alpha) != 4:
        raise FactorizationError("nullspace construction needs alpha = -z^(2k)")
    c = _const_det(a)
    if not a.entries[0].is_real() or not a.entries[2].is_real():
        raise FactorizationError("complex entries are not supported in this case")
    k = alpha.c // 2
    a11, a21 = a[0, 0], a[1, 0]
    if a11.is_zero():
        raise FactorizationError("A11 vanishes; contradicts the determinant")
    n = a11.deg
    d = sqrt(-c, prec)
    # unknowns V(0..n), Wt(0..n) with Wt = d * W (keeps the system exact)
    res = _Residues(a11, n)
    cols = [res.reduce(a21)]
    for _ in range(n):
        cols.append(res.mulz(cols[-1]))
    mono = res.reduce(LaurentPoly({n - k: 1}))
    wcols = [mono]
    for _ in range(n):
        wcols.append(res.divz(wcols[-1]))
    cols += wcols
    rows = [[cols[j][i] for j in range(2 * n + 2)] for i in range(2 * n)]
    basis = _nullspace(rows, 2 * n + 2)
    if not basis:
        raise FactorizationError("empty solution space")
    vec = basis[0]
    ut11 = LaurentPoly.from_list(vec[: n + 1])
    ut12 = LaurentPoly.from_list(vec[n + 1 :]) / d
    zn = LaurentPoly({n: 1})
    s11, s12 = sym(ut11), sym(ut12)
    keep = s11 in (ANY, SymmetryType(1, n)) and s12 in (ANY, SymmetryType(-1, n))
    if keep and not (ut11.is_zero() and ut12.is_zero()):
        u11, u12 = ut11, ut12
    else:
        u11 = (ut11 - zn * ut11.star()) * Fraction(1, 2)
        u12 = (ut12 + zn * ut12.star()) * Fraction(1, 2)
    if u11.is_zero() and u12.is_zero():
        raise FactorizationError("symmetrized nullspace vector vanished")
    dd = u11 * u11.star() - u12 * u12.star()
    if dd.is_zero():
        raise FactorizationError("difference of squares vanished")
    lam = a11[n] / dd[n]
    if a11 != dd * lam and a.is_exact():
        raise FactorizationError("A11 is not a multiple of the difference of squares")
    if sign(lam) > 0:
        r = sqrt(lam, prec)
        U11, U12 = u11 * r, u12 * r
        branch = "lambda>0"
    else:
        r = sqrt(-lam, prec)
        U11, U12 = u12 * r, u11 * r
        branch = "lambda<0"
    dz = LaurentPoly({n - k: d})
    U21 = exact_div(a21 * U11 + dz * U12.star(), a11)
    U22 = exact_div(a21 * U12 + dz * U11.star(), a11)
    u = LMatrix2(U11, U12, U21, U22)
    det = u.det()
    if u.is_exact() and det != dz:
        raise FactorizationError("det U differs from d z^(n-k)")
    res = _residual(a, u)
    return GSFResult(
        u,
        alpha,
        u.is_exact(),
        res,
        {"case": 4, "n": n, "k": k, "lambda": lam, "branch": branch, "nullity": len(basis), "d": d},
    )


def _const_det_factor(a: LMatrix2, prec: int) -> GSFResult:
    alpha = _alpha_of(a)
    if alpha_case(alpha) == 4 and not a[0, 1].is_zero():
        return const_det_factor_case4(a, prec)
    return const_det_factor_cases123(a, prec)


# ---------------------------------------------------------------------------
# spectrum shrinking


def _half_of_symmetric(e: LaurentPoly, prec: int) -> LaurentPoly:
    """``p`` with ``p p* = e`` up to a monomial unit, for ``e`` whose zeros
    (in the sense of the normal form of a coprime Hermitian matrix) come in
    the pattern of ``d d*``."""
    m1 = mz(e, 1)
    m2 = mz(e, -1)
    if m1 % 2 or m2 % 2:
        raise FactorizationError("odd multiplicity at +-1 in a diagonal factor")
    g = e
    if m1:
        g = exact_div(g, LaurentPoly({0: -1, 1: 1}) ** m1)
    if m2:
        g = exact_div(g, LaurentPoly({0: 1, 1: 1}) ** m2)
    shift = g.ldeg + g.deg
    if shift % 2:
        raise FactorizationError("stripped factor is not centred")
    g = g.shift(-shift // 2)
    p = LaurentPoly({0: -1, 1: 1}) ** (m1 // 2) * LaurentPoly({0: 1, 1: 1}) ** (m2 // 2)
    if g.is_constant():
        return p
    G = to_x_form(g)
    _, parts = squarefree_decomposition(G)
    for s, i in parts:
        for f, m in _factor_x(s):
            mult = i * m
            if mult % 2 == 0:
                p = p * from_x_form(f) ** (mult // 2)
                continue
            if count_real_roots(f, "-inf", "inf"):
                raise FactorizationError("odd real zero in a diagonal factor")
            h = split_conjugate(f, prec)
            p = p * from_x_form(h) ** mult
    return p


def spectrum_shrink(a: LMatrix2, prec: int = DEFAULT_PREC) -> tuple[LMatrix2, LMatrix2]:
    """One step ``A = U Ã U*`` removing the zeros of one normal-form factor."""
    d = a.det()
    if d.is_zero():
        raise FactorizationError("determinant vanishes identically")
    if d.is_constant():
        raise FactorizationError("determinant is already constant")
    nf = normal_form(a)
    ah = nf.P * a * nf.P.star()
    k = 0 if not nf.e1.is_constant() else 1
    e = nf.D[k, k]
    if e.is_constant():
        raise FactorizationError("normal form has constant diagonal")
    p = _half_of_symmetric(e, prec)
    ps = p.star()
    l = 1 - k
    ent = {}
    ent[k, k] = exact_div(exact_div(ah[k, k], p), ps)
    ent[k, l] = exact_div(ah[k, l], p)
    ent[l, k] = exact_div(ah[l, k], ps)
    ent[l, l] = ah[l, l]
    at = LMatrix2(ent[0, 0], ent[0, 1], ent[1, 0], ent[1, 1])
    v = LMatrix2.diag(p, 1) if k == 0 else LMatrix2.diag(1, p)
    u = invert_strongly_invertible(nf.P) * v
    new_det = at.det()
    if not new_det.is_zero() and new_det.length >= d.length:
        raise AssertionError("determinant length did not decrease")
    return u, at


def coprime_factor(a: LMatrix2, prec: int = DEFAULT_PREC) -> GSFResult:
    """Factor ``A`` with coprime entries and ``det A = -d d*``."""
    u_acc = LMatrix2.identity()
    cur = a
    steps = 0
    while not cur.det().is_constant():
        u, cur = spectrum_shrink(cur, prec)
        u_acc = u_acc * u
        steps += 1
    inner = _const_det_factor(cur, prec)
    u = u_acc * inner.U
    res = _residual(a, u)
    trace = dict(inner.trace)
    trace["shrink_steps"] = steps
    return GSFResult(u, _alpha_of(a), u.is_exact(), res, trace)


# ---------------------------------------------------------------------------
# main pipeline


def _validate(a: LMatrix2):
    if not a.is_hermitian():
        raise ValueError("matrix is not Hermitian")
    for e in a.entries:
        if sym(e) is None:
            raise ValueError("an entry has no symmetry")
    cert = infer_certificate(a)
    if not cert:
        raise IncompatibleSymmetry(cert.reason)
    return cert


def _mz_or_inf(u: LaurentPoly, z0) -> float:
    return float("inf") if u.is_zero() else mz(u, z0)


def _strip_pm1(p0: LaurentPoly) -> LaurentPoly:
    p = p0
    m1, m2 = mz(p, 1), mz(p, -1)
    if m1:
        p = exact_div(p, LaurentPoly({0: -1, 1: 1}) ** m1)
    if m2:
        p = exact_div(p, LaurentPoly({0: 1, 1: 1}) ** m2)
    s = p.ldeg + p.deg
    return p.shift(-(s // 2)) if s % 2 == 0 else p


def _normalize_gcd(p: LaurentPoly) -> LaurentPoly:
    """Centre a symmetric gcd and make it real and self-adjoint."""
    s = sym(p)
    if isinstance(s, SymmetryType) and s.c % 2 == 0:
        p = p.shift(-s.c // 2)
    return p


def existence_report(a: LMatrix2, prec: int = DEFAULT_PREC) -> ExistenceReport:
    """Check both existence conditions without building ``U``."""
    _validate(a)
    alpha = _alpha_of(a)
    det = a.det()
    if det.is_zero():
        return ExistenceReport(
            {"holds": True, "d": LaurentPoly(), "reason": "det vanishes identically"},
            {"holds": True, "reason": "not required when det vanishes"},
        )
    try:
        d = hermitian_square_root(-det, prec)
        c1 = {"holds": True, "d": d}
    except SquareRootError as err:
        return ExistenceReport(
            {"holds": False, "reason": str(err), "condition": err.condition, "where": err.where},
            {"holds": None, "reason": "not evaluated"},
        )
    p0 = sym_gcd(*a.entries)
    p = _normalize_gcd(_strip_pm1(p0))
    target = alpha * sym(d)
    check = dos_feasible(p, target)
    c2 = {"holds": bool(check), "p0": p0, "p": p, "type": target}
    if not check:
        c2.update(
            reason=f"{check.condition}: {check.detail}",
            x_interval=check.x_interval,
            z_interval=check.z_interval,
        )
    else:
        c2["witness"] = dos_decompose(p, target, prec)
    return ExistenceReport(c1, c2)


def _gsf_singular(a: LMatrix2, alpha) -> GSFResult:
    nf = normal_form(a)
    p = nf.P
    if nf.e1.is_zero() and not nf.e2.is_zero():
        p = LMatrix2.swap() * p
    ah = p * a * p.star()
    if not (ah[0, 1].is_zero() and ah[1, 0].is_zero() and ah[1, 1].is_zero()):
        raise FactorizationError("singular Hermitian matrix did not reduce to rank one")
    a11 = ah[0, 0]
    quarter = Fraction(1, 4)
    ur = LMatrix2(a11 + quarter, a11 - quarter, 0, 0)
    u = invert_strongly_invertible(p) * ur
    return GSFResult(u, alpha, u.is_exact(), _residual(a, u), {"branch": "singular"})


def gsf(a: LMatrix2, prec: int = DEFAULT_PREC):
    """Generalized spectral factorization; returns :class:`GSFResult` or a
    failing :class:`ExistenceReport`."""
    _validate(a)
    alpha = _alpha_of(a)
    det = a.det()
    if det.is_zero():
        return _gsf_singular(a, alpha)
    try:
        d = hermitian_square_root(-det, prec)
    except SquareRootError as err:
        return ExistenceReport(
            {"holds": False, "reason": str(err), "condition": err.condition, "where": err.where},
            {"holds": None, "reason": "not evaluated"},
        )
    # step 1: common (z -+ 1) content of the first row
    a11, a12 = a[0, 0], a[0, 1]
    al1 = int(min(_mz_or_inf(a11, 1) / 2, _mz_or_inf(a12, 1)))
    al2 = int(min(_mz_or_inf(a11, -1) / 2, _mz_or_inf(a12, -1)))
    w = LaurentPoly({0: -1, 1: 1}) ** al1 * LaurentPoly({0: 1, 1: 1}) ** al2
    ws = w.star()
    at = LMatrix2(
        exact_div(exact_div(a[0, 0], w), ws), exact_div(a[0, 1], w), exact_div(a[1, 0], ws), a[1, 1]
    )
    # step 2: gcd of all entries
    pt = _normalize_gcd(sym_gcd(*at.entries))
    target = alpha * sym(d)
    check = dos_feasible(pt, target)
    if not check:
        p0 = sym_gcd(*a.entries)
        return ExistenceReport(
            {"holds": True, "d": d},
            {
                "holds": False,
                "p0": p0,
                "p": pt,
                "type": target,
                "reason": f"{check.condition}: {check.detail}",
                "x_interval": check.x_interval,
                "z_interval": check.z_interval,
            },
        )
    ar = at.map(lambda e: exact_div(e, pt))
    # step 3 and 4: coprime factorization down to a constant determinant
    inner = coprime_factor(ar, prec)
    ut = LMatrix2.diag(w, 1) * inner.U
    # step 5: DOS witness of the gcd with the type read off ut
    cert = infer_certificate(ut)
    if not cert:
        raise FactorizationError("intermediate factor lost compatibility")
    t = cert.th2[1] / cert.th2[0]
    if t.eps != target.eps or (t.c - target.c) % 2:
        raise FactorizationError("DOS type of the gcd does not match the factor")
    wit = dos_decompose(pt, t, prec)
    p1, p2 = wit.u1, wit.u2
    u = ut * LMatrix2(p1, p2.star(), p2, p1.star())
    res = _residual(a, u)
    trace = dict(inner.trace)
    trace.update(w=w, gcd=pt, d=d, dos_type=t)
    result = GSFResult(u, alpha, u.is_exact(), res, trace)
    return result
