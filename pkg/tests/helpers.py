"""Shared generators for the test suite."""

import random
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from qtf.laurent import ANY, LaurentPoly, SymmetryType, sym
from qtf.lmatrix import LMatrix2

ACCEPTANCE: dict[str, tuple[bool, str]] = {}

# printed symmetry types, vanishing moments and sum rules of the fixture banks
PRINTED = {
    "heuristic": (SymmetryType(1, 0), SymmetryType(1, 2), SymmetryType(1, 0), 2, 4, 2),
    "example_2_1": (SymmetryType(1, 0), SymmetryType(1, 2), SymmetryType(1, 2), 2, 2, 2),
    "example_2_2": (SymmetryType(1, 0), SymmetryType(1, 2), SymmetryType(1, 0), 4, 8, 4),
    "example_2_3": (SymmetryType(1, 1), SymmetryType(-1, 1), SymmetryType(-1, 3), 3, 3, 3),
    "example_2_4": (SymmetryType(1, 1), SymmetryType(-1, 1), SymmetryType(-1, 1), 1, 1, 1),
    "example_2_5": (SymmetryType(1, 0), SymmetryType(1, 0), SymmetryType(1, 0), 2, 2, 2),
}

# published smoothness exponents of the lowpass filters
SM = {
    "heuristic": 0.8853,
    "example_2_1": 1.0193,
    "example_2_2": 1.6821,
    "example_2_3": 1.1543,
    "example_2_4": 0.7184,
    "example_2_5": 1.0000,
}


def P(d: dict) -> LaurentPoly:
    """Shorthand: ``P({k: v})``."""
    return LaurentPoly({k: Fraction(v) if isinstance(v, (int, str)) else v for k, v in d.items()})


Z = LaurentPoly({1: 1})
ZI = LaurentPoly({-1: 1})
ONE = LaurentPoly({0: 1})


def rand_sym(rng: random.Random, t: SymmetryType, length: int, lo=-3, hi=3) -> LaurentPoly:
    """Random polynomial of type ``t`` with ``len <= length`` (may be zero)."""
    eps, c = t.eps, t.c
    length -= (length - c) % 2  # len and c share parity
    m = (c - length) // 2
    d = {}
    for k in range(m, c - m + 1):
        j = c - k
        if k > j:
            continue
        v = Fraction(rng.randint(lo, hi))
        if k == j:
            d[k] = 0 if eps == -1 else v
        else:
            d[k], d[j] = v, eps * v
    return LaurentPoly(d)


def rand_type(rng: random.Random, spread: int = 2) -> SymmetryType:
    return SymmetryType(rng.choice([1, -1]), rng.randint(-spread, spread))


def random_u0(rng: random.Random, alpha: SymmetryType, length: int = 3) -> LMatrix2:
    """Random U with ``Sym U11/Sym U21 = Sym U12/Sym U22 = alpha``."""
    th2 = (SymmetryType(1, 0), SymmetryType(rng.choice([1, -1]), rng.randint(-1, 1)))
    th1 = (SymmetryType(1, 0), alpha)
    return LMatrix2(
        *[rand_sym(rng, th1[j].star() * th2[k], rng.randint(0, length)) for j in range(2) for k in range(2)]
    )


@st.composite
def sym_polys(draw, max_len: int = 6, t: SymmetryType | None = None, nonzero: bool = True):
    """Hypothesis strategy for polynomials with symmetry."""
    if t is None:
        t = SymmetryType(draw(st.sampled_from([1, -1])), draw(st.integers(-3, 3)))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    u = rand_sym(rng, t, draw(st.integers(0, max_len)))
    if nonzero and u.is_zero():
        # smallest nonzero polynomial of this type
        if t.c % 2 == 0 and t.eps == 1:
            u = LaurentPoly({t.c // 2: 1})
        else:
            lo = (t.c - 1) // 2 if t.c % 2 else t.c // 2 - 1
            u = LaurentPoly({lo: 1, t.c - lo: t.eps})
    return u


@st.composite
def laurent_polys(draw, max_len: int = 6):
    """Arbitrary (not necessarily symmetric) Laurent polynomials."""
    lo = draw(st.integers(-3, 3))
    vals = draw(st.lists(st.integers(-5, 5), min_size=0, max_size=max_len))
    return LaurentPoly({lo + i: Fraction(v) for i, v in enumerate(vals)})


# ---------------------------------------------------------------------------
# sympy oracles

zs = sympy.Symbol("z")


def to_sympy(u: LaurentPoly) -> sympy.Poly:
    """``z**(-ldeg) u`` as a sympy polynomial (independent of the package's gcd)."""
    if u.is_zero():
        return sympy.Poly(0, zs)
    expr = sum(sympy.Rational(v.numerator, v.denominator) * zs ** (k - u.ldeg) for k, v in u.items())
    return sympy.Poly(expr, zs)


def unit_equivalent(u: LaurentPoly, v: LaurentPoly) -> bool:
    """Equal up to ``c z^k`` (oracle via sympy)."""
    pu, pv = to_sympy(u), to_sympy(v)
    return pu.monic() == pv.monic()


def has_type(u: LaurentPoly, t) -> bool:
    """Direct check of ``u(k) = eps u(c - k)``."""
    if t is ANY:
        return u.is_zero()
    return all(u[k] == t.eps * u[t.c - k] for k in range(u.ldeg, u.deg + 1))


def rand_compatible(rng: random.Random, length: int = 5) -> LMatrix2:
    """Random matrix with compatible symmetry and entries of ``len <= length``.

    Half of the draws carry a planted column factor so the invariant
    polynomials are not all trivial.
    """
    th1 = (rand_type(rng, 1), rand_type(rng, 1))
    th2 = (rand_type(rng, 1), rand_type(rng, 1))
    if rng.random() < 0.5:
        g = rand_sym(rng, rand_type(rng, 1), 3)
        if g.is_zero():
            g = LaurentPoly({0: 2, 1: -1, 2: 2})
        th2 = (th2[0], th2[1] * sym(g))
        inner = length - g.length + 1
        m = LMatrix2(
            *[rand_sym(rng, th1[j].star() * (th2[k] / sym(g) if k else th2[k]), max(inner, 1) if k else length)
              for j in range(2) for k in range(2)]
        )
        return LMatrix2(m[0, 0], m[0, 1] * g, m[1, 0], m[1, 1] * g)
    return LMatrix2(*[rand_sym(rng, th1[j].star() * th2[k], length) for j in range(2) for k in range(2)])


def _multiplicity(p: sympy.Poly, q: sympy.Poly) -> int:
    n = 0
    while not p.is_zero:
        quo, rem = p.div(q)
        if not rem.is_zero:
            break
        p, n = quo, n + 1
    return n


def smith_multiplicities(m: LMatrix2) -> dict:
    """``{irreducible q: sorted (mult in d1, mult in d2)}`` from the classical
    invariant polynomials ``d1 = gcd(entries)``, ``d2 = det / d1`` over Q."""
    low = min(e.ldeg for e in m.entries if not e.is_zero())
    polys = [
        sympy.Poly(to_sympy(e).as_expr() * zs ** (e.ldeg - low), zs) if not e.is_zero() else sympy.Poly(0, zs)
        for e in m.entries
    ]
    d1 = sympy.Poly(0, zs)
    for p in polys:
        d1 = d1.gcd(p)
    det = polys[0] * polys[3] - polys[1] * polys[2]
    d2, rem = det.div(d1)
    assert rem.is_zero
    return _factor_table(det, d1, d2)


def diagonal_multiplicities(det_source: LMatrix2, e1: LaurentPoly, e2: LaurentPoly) -> dict:
    det = to_sympy(det_source.det())
    return _factor_table(det, to_sympy(e1), to_sympy(e2))


def _factor_table(det: sympy.Poly, f1: sympy.Poly, f2: sympy.Poly) -> dict:
    out = {}
    for q, _ in det.factor_list()[1]:
        if q.degree() == 1 and q.eval(0) == 0:
            continue  # z itself is a unit
        out[q.monic().as_expr()] = tuple(sorted((_multiplicity(f1, q), _multiplicity(f2, q))))
    return out


# ---------------------------------------------------------------------------
# DOS inputs

XP = LaurentPoly({1: 1, -1: 1})  # x = z + 1/z


def _forbidden(t: SymmetryType) -> tuple[bool, bool]:
    """(odd roots below -2 forbidden, odd roots above 2 forbidden)."""
    odd = t.c % 2 == 1
    if t.eps == 1:
        return odd, False
    return not odd, True


def _rand_q(rng, lo, hi) -> Fraction:
    den = rng.choice([1, 2, 3, 4, 5])
    while True:
        q = Fraction(rng.randint(int(lo * den), int(hi * den)), den)
        if lo < q < hi:
            return q


def rand_dos_feasible(rng: random.Random, t: SymmetryType, atoms: int = 3) -> LaurentPoly:
    """Random ``u`` with the DOS property for type ``t``: odd real roots only
    where allowed, anything else squared."""
    below, above = _forbidden(t)
    u = LaurentPoly({0: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 4]))})
    for _ in range(rng.randint(0, atoms)):
        kind = rng.choice(["a", "b", "c", "d", "square"])
        if kind == "a":
            u = u * (XP - rng.choice([2, -2]))
        elif kind == "b":
            beta = _rand_q(rng, -3, 3)
            gamma = beta * beta / 4 + _rand_q(rng, 0, 3)
            u = u * (XP * XP + beta * XP + gamma)
        elif kind == "c":
            u = u * (XP - _rand_q(rng, -2, 2))
        elif kind == "d":
            sides = [s for s, bad in ((-1, below), (1, above)) if not bad]
            if not sides:
                continue
            side = rng.choice(sides)
            r = _rand_q(rng, 2, 6) * side
            u = u * (XP - r)
        else:
            r = _rand_q(rng, -6, 6)
            u = u * (XP - r) * (XP - r)
    return u


def rand_dos_infeasible(rng: random.Random, t: SymmetryType) -> tuple[LaurentPoly, Fraction]:
    """``(u, x0)``: a feasible base times one real zero ``x0`` planted in a
    range forbidden for ``t``.  The base has only even multiplicities there,
    so ``x0`` ends up with odd multiplicity."""
    below, above = _forbidden(t)
    sides = [s for s, bad in ((-1, below), (1, above)) if bad]
    if not sides:
        raise ValueError(f"type {t} admits every Hermitian u")
    side = rng.choice(sides)
    x0 = _rand_q(rng, 2, 6) * side
    return rand_dos_feasible(rng, t) * (XP - x0), x0


def random_strong_u0(rng: random.Random, alpha: SymmetryType, steps: int = 3) -> LMatrix2:
    """Random ``U`` with constant determinant and ``Sym U11/Sym U21 = alpha``:
    a product of elementary matrices and a constant diagonal scaling."""
    u = LMatrix2.diag(Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2])), rng.choice([1, -1, 2]))
    for _ in range(steps):
        if rng.random() < 0.5:
            q = rand_sym(rng, alpha.inverse(), 3)
            e = LMatrix2(1, 0, q, 1)
        else:
            q = rand_sym(rng, alpha, 3)
            e = LMatrix2(1, q, 0, 1)
        u = u * e
    return u


J = LMatrix2.diag(1, -1)


def hermitian_from(u: LMatrix2) -> LMatrix2:
    """``U diag(1,-1) U*``."""
    return u * J * u.star()
