"""Laurent polynomials with symmetry.

A :class:`LaurentPoly` is an immutable finitely supported map ``k -> u(k)``
whose values are field coefficients (``Fraction``, :class:`~qtf.field.Scalar`
or :class:`~qtf.field.Ball`).  Besides ring arithmetic this module provides

* the symmetry operator (:func:`sym`) and its algebra,
* symmetry-preserving division and extended Euclid,
* multiplicities of zeros and the derived ``vmo``/``sr`` counts,
* polyphase (coset) splitting,
* the palindromic ``x = z + 1/z`` form with square-free decomposition,
  Sturm counting and certified root isolation,
* the Hermitian square root ``f = d d*``.

Lengths follow the convention ``len(u) = deg(u) - ldeg(u)`` and
``len(0) = -1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath

from .field import (
    DEFAULT_PREC,
    AlgebraicPoint,
    Ball,
    NotInTower,
    PrecisionError,
    Scalar,
    as_number,
    conj,
    format_scalar,
    is_real,
    is_zero,
    parse_scalar,
    precision_cap,
    sign,
    sqrt,
    to_mp,
)

__all__ = [
    "LaurentPoly",
    "SymmetryType",
    "ANY",
    "DivisionResult",
    "SquareRootError",
    "sym",
    "star",
    "odd",
    "mz",
    "vmo",
    "sr",
    "parity_check",
    "sym_div_step",
    "sym_long_div",
    "poly_gcd",
    "sym_gcd",
    "eea",
    "sym_eea",
    "exact_div",
    "divides",
    "coset_split",
    "coset_merge",
    "to_x_form",
    "from_x_form",
    "squarefree_decomposition",
    "count_real_roots",
    "isolate_real_root",
    "isolate_roots",
    "split_conjugate",
    "hermitian_square_root",
    "hermitian_square_root_check",
    "poly_from_json",
    "poly_to_json",
]


# ---------------------------------------------------------------------------
# symmetry types


@dataclass(frozen=True)
class SymmetryType:
    """The type ``eps * z**c`` of a symmetric Laurent polynomial."""

    eps: int
    c: int

    def __mul__(self, other):
        if other is ANY:
            return ANY
        return SymmetryType(self.eps * other.eps, self.c + other.c)

    def __truediv__(self, other):
        if other is ANY:
            return ANY
        return SymmetryType(self.eps * other.eps, self.c - other.c)

    def star(self) -> "SymmetryType":
        return SymmetryType(self.eps, -self.c)

    def inverse(self) -> "SymmetryType":
        return SymmetryType(self.eps, -self.c)

    def shift(self, k: int) -> "SymmetryType":
        """Type after multiplying by ``z**k``."""
        return SymmetryType(self.eps, self.c + 2 * k)

    def same_class(self, other) -> bool:
        """Equal up to a factor ``z**(2k)``."""
        if other is ANY:
            return True
        return self.eps == other.eps and (self.c - other.c) % 2 == 0

    def monomial(self) -> "LaurentPoly":
        return LaurentPoly({self.c: self.eps})

    def __str__(self):
        return f"{self.eps:+d},{self.c}"

    @staticmethod
    def parse(text: str) -> "SymmetryType":
        eps, c = (t.strip() for t in text.replace("−", "-").split(","))
        e = int(eps)
        if e not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        return SymmetryType(e, int(c))


class _AnyType:
    """Symmetry type of the zero polynomial; absorbs every product."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __mul__(self, other):
        return self

    __rmul__ = __truediv__ = __rtruediv__ = __mul__

    def star(self):
        return self

    inverse = star

    def same_class(self, other) -> bool:
        return True

    def __repr__(self):
        return "ANY"

    __str__ = __repr__


ANY = _AnyType()
ONE = SymmetryType(1, 0)


# ---------------------------------------------------------------------------
# ordinary polynomial helpers: coefficient lists, constant term first


def _trim(a: list) -> list:
    while a and is_zero(a[-1]):
        a.pop()
    return a


def _padd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a, s):
    return _trim([x * s for x in a])


def _pdivmod(a, b):
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    _trim(r)
    lb = b[-1]
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = r[i + k] - c * y
        r.pop()
        _trim(r)
    return _trim(q), r


def _pmonic(a):
    if not a:
        return a
    lc = a[-1]
    return [x / lc for x in a]


def _pderiv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


def _pgcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pmonic(a)


def _peea(a, b):
    """``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = _trim(list(a)), _trim(list(b))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if not r0:
        return [], [], []
    lc = r0[-1]
    return _pscale(r0, 1 / lc), _pscale(s0, 1 / lc), _pscale(t0, 1 / lc)


def _peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# LaurentPoly


def _normalize(coeffs) -> dict:
    out = {}
    for k, v in coeffs:
        v = as_number(v)
        if not is_zero(v):
            out[int(k)] = v
    return out


class LaurentPoly:
    """Finitely supported sequence ``k -> u(k)``, read as ``sum u(k) z**k``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            self._c = {}
        elif isinstance(coeffs, LaurentPoly):
            self._c = dict(coeffs._c)
        elif isinstance(coeffs, dict):
            self._c = _normalize(coeffs.items())
        else:
            self._c = {0: as_number(coeffs)} if not is_zero(as_number(coeffs)) else {}
        self._hash = None

    @classmethod
    def _raw(cls, d: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._c = d
        obj._hash = None
        return obj

    @classmethod
    def from_list(cls, values: Iterable, ldeg: int = 0) -> "LaurentPoly":
        return cls({ldeg + i: v for i, v in enumerate(values)})

    @classmethod
    def monomial(cls, coeff, k: int) -> "LaurentPoly":
        return cls({k: coeff})

    @classmethod
    def z(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    # --- accessors -----------------------------------------------------------
    def __getitem__(self, k: int):
        return self._c.get(k, Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def ldeg(self) -> int:
        if not self._c:
            raise ValueError("ldeg of the zero polynomial")
        return min(self._c)

    @property
    def deg(self) -> int:
        if not self._c:
            raise ValueError("deg of the zero polynomial")
        return max(self._c)

    @property
    def length(self) -> int:
        """``deg - ldeg``; ``-1`` for zero."""
        if not self._c:
            return -1
        return max(self._c) - min(self._c)

    @property
    def fsupp(self) -> tuple[int, int]:
        return self.ldeg, self.deg

    def lead(self):
        return self._c[self.deg]

    def trail(self):
        return self._c[self.ldeg]

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_real(self) -> bool:
        return all(is_real(v) for v in self._c.values())

    def is_exact(self) -> bool:
        return not any(isinstance(v, Ball) for v in self._c.values())

    def to_list(self) -> tuple[int, list]:
        """``(ldeg, [u(ldeg), ..., u(deg)])``."""
        if not self._c:
            return 0, []
        lo, hi = self.ldeg, self.deg
        return lo, [self[k] for k in range(lo, hi + 1)]

    # --- arithmetic ----------------------------------------------------------
    @staticmethod
    def _lift(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        return LaurentPoly(x)

    def __add__(self, other):
        other = self._lift(other)
        d = dict(self._c)
        for k, v in other._c.items():
            s = d.get(k, 0) + v
            if is_zero(s):
                d.pop(k, None)
            else:
                d[k] = s
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            s = as_number(other)
            if is_zero(s):
                return LaurentPoly()
            return LaurentPoly._raw(
                {k: p for k, v in self._c.items() if not is_zero(p := v * s)}
            )
        d: dict = {}
        for i, x in self._c.items():
            for j, y in other._c.items():
                d[i + j] = d.get(i + j, 0) + x * y
        return LaurentPoly._raw({k: v for k, v in d.items() if not is_zero(v)})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return exact_div(self, other)
        s = as_number(other)
        return LaurentPoly._raw({k: v / s for k, v in self._c.items()})

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (k, v), = self._c.items()
            return LaurentPoly({-k * (-n): 1 / v ** (-n)})
        result = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``z**k``."""
        return LaurentPoly._raw({i + k: v for i, v in self._c.items()})

    def star(self) -> "LaurentPoly":
        return LaurentPoly._raw({-k: conj(v) for k, v in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """``u(1/z)`` without conjugation."""
        return LaurentPoly._raw({-k: v for k, v in self._c.items()})

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: conj(v) for k, v in self._c.items()})

    def negate_var(self) -> "LaurentPoly":
        """``u(-z)``."""
        return LaurentPoly._raw({k: (-v if k % 2 else v) for k, v in self._c.items()})

    def upsample(self, m: int = 2) -> "LaurentPoly":
        """``u(z**m)``."""
        return LaurentPoly._raw({k * m: v for k, v in self._c.items()})

    def map(self, fn) -> "LaurentPoly":
        return LaurentPoly({k: fn(v) for k, v in self._c.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k})

    # --- evaluation ------------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, (int, Fraction, Scalar)) and not (x == 0 and self._c and self.ldeg < 0):
            acc = Fraction(0)
            for k, v in self._c.items():
                acc = acc + v * (as_number(x) ** k)
            return acc
        return sum((complex(to_mp(v, 64)) * (x**k) for k, v in self._c.items()), 0j)

    def evaluate_mp(self, x, prec: int = DEFAULT_PREC):
        with mpmath.workprec(prec):
            return mpmath.fsum(to_mp(v, prec) * mpmath.power(x, k) for k, v in self._c.items())

    # --- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly(other)
            except TypeError:
                return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def max_abs(self):
        """Largest coefficient magnitude (mpmath float)."""
        if not self._c:
            return mpmath.mpf(0)
        return max(abs(to_mp(v)) for v in self._c.values())

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items(), reverse=True):
            s = format_scalar(v, 12)
            if k == 0:
                term = s
            else:
                zpart = "z" if k == 1 else f"z^{k}"
                if s == "1":
                    term = zpart
                elif s == "-1":
                    term = "-" + zpart
                elif " " in s or isinstance(v, Ball):
                    term = f"({s})*{zpart}"
                else:
                    term = f"{s}*{zpart}"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    # --- conversion to/from ordinary polynomials -----------------------------
    def to_poly(self) -> tuple[int, list]:
        """``(shift, coeffs)`` with ``u = z**shift * P(z)`` and ``P(0) != 0``."""
        return self.to_list()

    @classmethod
    def from_poly(cls, coeffs, shift: int = 0) -> "LaurentPoly":
        return cls.from_list(coeffs, shift)


def _lp(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly(x)


ZERO = LaurentPoly()
ONE_POLY = LaurentPoly({0: 1})
Z = LaurentPoly({1: 1})


# ---------------------------------------------------------------------------
# symmetry


def sym(u: LaurentPoly):
    """Symmetry type of ``u``: a :class:`SymmetryType`, ``ANY`` or ``None``."""
    u = _lp(u)
    if u.is_zero():
        return ANY
    c = u.ldeg + u.deg
    ratio = None
    for k, v in u._c.items():
        w = u._c.get(c - k)
        if w is None:
            return None
        if ratio is None:
            if v == w:
                ratio = 1
            elif v == -w:
                ratio = -1
            elif isinstance(v, Ball) or isinstance(w, Ball):
                if is_zero(v - w):
                    ratio = 1
                elif is_zero(v + w):
                    ratio = -1
                else:
                    return None
            else:
                return None
        elif isinstance(v, Ball) or isinstance(w, Ball):
            if not is_zero(v - ratio * w):
                return None
        elif v != ratio * w:
            return None
    return SymmetryType(ratio, c)


def star(u: LaurentPoly) -> LaurentPoly:
    return _lp(u).star()


def odd(k: int) -> int:
    return k % 2


def _mz_exact(u: LaurentPoly, z0) -> int:
    _, p = u.to_poly()
    z0 = as_number(z0)
    m = 0
    while len(p) > 1:
        # synthetic division by (z - z0)
        q = [Fraction(0)] * (len(p) - 1)
        acc = Fraction(0)
        for i in range(len(p) - 1, 0, -1):
            acc = acc * z0 + p[i]
            q[i - 1] = acc
        rem = acc * z0 + p[0]
        if not is_zero(rem):
            break
        p = q
        m += 1
    return m


def _point_is_root(p: list, pt: AlgebraicPoint) -> bool:
    g = _pgcd(p, list(pt.poly))
    if len(g) <= 1:
        return False
    for c, r in isolate_roots(g, pt.prec):
        if abs(c - pt.center) <= pt.radius + r:
            return True
    return False


def mz(u: LaurentPoly, z0) -> int:
    """Multiplicity of the zero ``z0`` of ``u`` (exact)."""
    u = _lp(u)
    if u.is_zero():
        raise ValueError("multiplicity in the zero polynomial")
    if isinstance(z0, AlgebraicPoint):
        if abs(z0.center) <= z0.radius:
            raise ValueError("z0 = 0 is not allowed")
        _, p = u.to_poly()
        m = 0
        while len(p) > 1 and _point_is_root(p, z0):
            m += 1
            p = _pderiv(p)
        return m
    if is_zero(as_number(z0)):
        raise ValueError("z0 = 0 is not allowed")
    return _mz_exact(u, z0)


def vmo(b: LaurentPoly) -> int:
    """Order of vanishing moments: multiplicity of the zero at 1."""
    return mz(b, 1)


def sr(a: LaurentPoly) -> int:
    """Order of sum rules: multiplicity of the zero at -1."""
    return mz(a, -1)


def parity_check(u: LaurentPoly) -> tuple[bool, bool]:
    """Check ``eps == (-1)**mz(u,1)`` and ``odd(c) == odd(mz(u,1)+mz(u,-1))``."""
    s = sym(u)
    if s is None or s is ANY:
        raise ValueError("parity check needs a nonzero symmetric polynomial")
    m1, m2 = mz(u, 1), mz(u, -1)
    return s.eps == (-1) ** m1, odd(s.c) == odd(m1 + m2)


def _require_sym(u: LaurentPoly, name: str):
    s = sym(u)
    if s is None:
        raise ValueError(f"{name} has no symmetry")
    return s


# ---------------------------------------------------------------------------
# division


@dataclass(frozen=True)
class DivisionResult:
    quotient: LaurentPoly
    remainder: LaurentPoly

    def __iter__(self):
        return iter((self.quotient, self.remainder))


def sym_div_step(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """One symmetric division step: a two-term quotient ``q1`` with
    ``len(a - b*q1) < len(a)``."""
    a, b = _lp(a), _lp(b)
    _require_sym(a, "a")
    _require_sym(b, "b")
    if b.is_zero():
        raise ValueError("division by zero polynomial")
    if not a.length > b.length:
        raise ValueError("sym_div_step needs len(a) > len(b)")
    q1 = LaurentPoly({a.deg - b.deg: a.lead() / b.lead()}) + LaurentPoly(
        {a.ldeg - b.ldeg: a.trail() / b.trail()}
    )
    return q1, a - b * q1


def sym_long_div(a: LaurentPoly, b: LaurentPoly) -> DivisionResult:
    """Division ``a = b*q + r`` keeping symmetry (four cases by type)."""
    a, b = _lp(a), _lp(b)
    sa = _require_sym(a, "a")
    sb = _require_sym(b, "b")
    if b.is_zero():
        raise ValueError("division by zero polynomial")
    if a.is_zero() or a.length < b.length:
        return DivisionResult(ZERO, a)
    q = ZERO
    r = a
    while r and r.length > b.length:
        q1, r = sym_div_step(r, b)
        q = q + q1
    if r and r.length == b.length and sa.eps * sb.eps == 1 and (sa.c - sb.c) % 2 == 0:
        qo = LaurentPoly({r.deg - b.deg: r.lead() / b.lead()})
        q = q + qo
        r = r - b * qo
    return DivisionResult(q, r)


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Quotient of an exact Laurent division; raises if ``b`` does not divide ``a``."""
    a, b = _lp(a), _lp(b)
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return ZERO
    sa, pa = a.to_poly()
    sb, pb = b.to_poly()
    q, r = _pdivmod(pa, pb)
    if r:
        raise ArithmeticError("inexact Laurent division")
    return LaurentPoly.from_list(q, sa - sb)


def divides(b: LaurentPoly, a: LaurentPoly) -> bool:
    a, b = _lp(a), _lp(b)
    if b.is_zero():
        return a.is_zero()
    if a.is_zero():
        return True
    _, pa = a.to_poly()
    _, pb = b.to_poly()
    return not _pdivmod(pa, pb)[1]


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Classical gcd: monic ordinary polynomial with nonzero constant term."""
    a, b = _lp(a), _lp(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    pa = a.to_poly()[1] if a else []
    pb = b.to_poly()[1] if b else []
    return LaurentPoly.from_list(_pgcd(pa, pb))


def sym_gcd(*polys: LaurentPoly) -> LaurentPoly:
    """gcd normalized to type ``+1*z**0`` with ``p* = p`` when possible."""
    nz = [_lp(p) for p in polys if _lp(p)]
    if not nz:
        raise ValueError("gcd of zero polynomials")
    g = nz[0].to_poly()[1]
    for p in nz[1:]:
        g = _pgcd(g, p.to_poly()[1])
        if len(g) == 1:
            break
    g = _pmonic(g)
    out = LaurentPoly.from_list(g)
    s = sym(out)
    if isinstance(s, SymmetryType) and s.eps == 1 and s.c % 2 == 0:
        out = out.shift(-s.c // 2)
    return out


def eea(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """Classical Bezout triple ``(u1, u2, r)`` with ``a*u1 + b*u2 = r`` monic."""
    a, b = _lp(a), _lp(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("eea of two zero polynomials")
    if a.is_zero():
        sb, pb = b.to_poly()
        lc = pb[-1]
        return ZERO, LaurentPoly({-sb: 1 / lc}), LaurentPoly.from_list(_pmonic(pb))
    if b.is_zero():
        sa, pa = a.to_poly()
        lc = pa[-1]
        return LaurentPoly({-sa: 1 / lc}), ZERO, LaurentPoly.from_list(_pmonic(pa))
    sa, pa = a.to_poly()
    sb, pb = b.to_poly()
    g, s, t = _peea(pa, pb)
    return (
        LaurentPoly.from_list(s, -sa),
        LaurentPoly.from_list(t, -sb),
        LaurentPoly.from_list(g),
    )


def sym_eea(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """Bezout triple ``(u, v, r)`` with ``a*u + b*v = r = gcd(a, b)`` in which
    ``u`` and ``v`` carry symmetry compatible with ``a``, ``b`` and ``r``."""
    a, b = _lp(a), _lp(b)
    sa = _require_sym(a, "a")
    sb = _require_sym(b, "b")
    if a.is_zero() and b.is_zero():
        raise ValueError("eea of two zero polynomials")
    if a.is_zero():
        return ZERO, ONE_POLY, b
    if b.is_zero():
        return ONE_POLY, ZERO, a
    u1, u2, r = eea(a, b)
    sr_ = sym(r)
    if not isinstance(sr_, SymmetryType):
        raise ArithmeticError("gcd lost symmetry")
    ma = (sr_ / sa).monomial()
    mb = (sr_ / sb).monomial()
    u = (u1 + u1.reflect() * ma) * Fraction(1, 2)
    v = (u2 + u2.reflect() * mb) * Fraction(1, 2)
    return u, v, r


# ---------------------------------------------------------------------------
# cosets


def coset_split(u: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """``(u0, u1)`` with ``u(z) = u0(z**2) + z*u1(z**2)``."""
    u = _lp(u)
    even = {k // 2: v for k, v in u._c.items() if k % 2 == 0}
    oddp = {(k - 1) // 2: v for k, v in u._c.items() if k % 2}
    return LaurentPoly._raw(even), LaurentPoly._raw(oddp)


def coset_merge(u0: LaurentPoly, u1: LaurentPoly) -> LaurentPoly:
    return _lp(u0).upsample(2) + _lp(u1).upsample(2).shift(1)


# ---------------------------------------------------------------------------
# palindromic x-form: u(z) = U(z + 1/z) for u with u(k) = u(-k)


def to_x_form(u: LaurentPoly) -> list:
    """Coefficients of ``U`` with ``u(z) = U(z + 1/z)`` (needs ``u(k) = u(-k)``)."""
    u = _lp(u)
    if u.is_zero():
        return []
    n = u.deg
    if u.ldeg != -n:
        raise ValueError("x-form needs a polynomial centred at 0")
    work = dict(u._c)
    out = [Fraction(0)] * (n + 1)
    powers = _x_powers(n)
    for j in range(n, -1, -1):
        c = work.get(j, 0)
        if is_zero(c):
            continue
        out[j] = c
        for k, v in powers[j]._c.items():
            w = work.get(k, 0) - c * v
            if is_zero(w):
                work.pop(k, None)
            else:
                work[k] = w
    for k, v in work.items():
        if not is_zero(v):
            raise ValueError("polynomial is not palindromic")
    return _trim(out)


_XPOW_CACHE: list[LaurentPoly] = [ONE_POLY]


def _x_powers(n: int) -> list[LaurentPoly]:
    x = LaurentPoly({1: 1, -1: 1})
    while len(_XPOW_CACHE) <= n:
        _XPOW_CACHE.append(_XPOW_CACHE[-1] * x)
    return _XPOW_CACHE[: n + 1]


def from_x_form(coeffs: list) -> LaurentPoly:
    powers = _x_powers(max(len(coeffs) - 1, 0))
    out = ZERO
    for j, c in enumerate(coeffs):
        if not is_zero(c):
            out = out + powers[j] * c
    return out


def squarefree_decomposition(p: list) -> tuple[object, list[tuple[list, int]]]:
    """Yun's algorithm: ``p = lc * prod(s_i**i)`` with monic square-free ``s_i``.

    Returns ``(lc, [(s_i, i), ...])`` omitting trivial factors.
    """
    p = _trim(list(p))
    if not p:
        raise ValueError("square-free decomposition of zero")
    lc = p[-1]
    p = _pmonic(p)
    if len(p) == 1:
        return lc, []
    out = []
    dp = _pderiv(p)
    a = _pgcd(p, dp)
    b, _ = _pdivmod(p, a)
    c, _ = _pdivmod(dp, a)
    d = _psub(c, _pderiv(b))
    i = 1
    while len(b) > 1:
        s = _pgcd(b, d)
        b, _ = _pdivmod(b, s)
        c, _ = _pdivmod(d, s)
        d = _psub(c, _pderiv(b))
        if len(s) > 1:
            out.append((_pmonic(s), i))
        i += 1
    return lc, out


# --- real roots (exact Sturm counting) -------------------------------------

_INF = "inf"


def _sturm_chain(p):
    chain = [p, _pderiv(p)]
    while chain[-1] and len(chain[-1]) > 1:
        _, r = _pdivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-x for x in r])
    return [c for c in chain if c]


def _sign_at(p, x):
    if x == _INF:
        return sign(p[-1])
    if x == "-" + _INF:
        return sign(p[-1]) * (-1 if (len(p) - 1) % 2 else 1)
    return sign(_peval(p, x))


def _variations(chain, x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _deflate_at(p, x):
    while x not in (_INF, "-" + _INF) and len(p) > 1 and is_zero(_peval(p, x)):
        p, _ = _pdivmod(p, [-as_number(x), Fraction(1)])
    return p


def count_real_roots(p: list, lo, hi) -> int:
    """Distinct real roots of a real polynomial in the open interval ``(lo, hi)``.

    Endpoints are rationals or the strings ``"-inf"`` / ``"inf"``.
    """
    p = _trim(list(p))
    if len(p) <= 1:
        return 0
    lc, parts = squarefree_decomposition(p)
    total = 0
    for s, _ in parts:
        total += _count_sqfree(s, lo, hi)
    return total


def _count_sqfree(s, lo, hi) -> int:
    s = _deflate_at(_deflate_at(s, lo), hi)
    if len(s) <= 1:
        return 0
    chain = _sturm_chain(s)
    return _variations(chain, lo) - _variations(chain, hi)


def _cauchy_bound(p) -> Fraction:
    lc = abs(to_mp(p[-1]))
    m = max(abs(to_mp(c)) for c in p[:-1]) if len(p) > 1 else 0
    return Fraction(int(mpmath.ceil(1 + m / lc)) + 1)


def isolate_real_root(s: list, lo, hi, width=Fraction(1, 2**20)) -> tuple[Fraction, Fraction]:
    """Rational interval inside ``(lo, hi)`` holding exactly one root of the
    square-free real polynomial ``s`` (assumes at least one root there)."""
    b = _cauchy_bound(s)
    lo_ = -b if lo == "-" + _INF else Fraction(lo)
    hi_ = b if hi == _INF else Fraction(hi)
    lo_, hi_ = max(lo_, -b), min(hi_, b)
    if _count_sqfree(s, lo_, hi_) == 0:
        # a root may sit at the clipped endpoint only if it was finite
        raise ValueError("no root in interval")
    while True:
        n = _count_sqfree(s, lo_, hi_)
        if n == 1 and hi_ - lo_ <= width:
            return lo_, hi_
        mid = (lo_ + hi_) / 2
        if is_zero(_peval(s, mid)):
            return mid - (hi_ - lo_) / 8, mid + (hi_ - lo_) / 8
        if _count_sqfree(s, lo_, mid) >= 1:
            hi_ = mid
        else:
            lo_ = mid


# --- complex root isolation --------------------------------------------------


def isolate_roots(p, prec: int = DEFAULT_PREC) -> list[tuple]:
    """Certified discs around all roots of a square-free polynomial.

    Returns ``[(center, radius), ...]`` (mpmath values).  Inclusion radii use
    the Weierstrass correction bound ``n*|p(z_i)| / |lc * prod(z_i - z_j)|``;
    discs are pairwise disjoint so each holds exactly one root.
    """
    p = _trim(list(p))
    n = len(p) - 1
    if n < 1:
        return []
    cap = precision_cap()
    work = prec
    while True:
        with mpmath.workprec(work + 30):
            coeffs = [mpmath.mpc(to_mp(c, work + 30)) for c in reversed(p)]
            if n == 1:
                roots = [-coeffs[1] / coeffs[0]]
            else:
                roots = mpmath.polyroots(
                    coeffs, maxsteps=200 + 20 * n, extraprec=work + 2 * n * 16, error=False
                )
            lc = coeffs[0]
            out = []
            ok = True
            for i, zi in enumerate(roots):
                val = mpmath.polyval(coeffs, zi)
                den = lc
                for j, zj in enumerate(roots):
                    if j != i:
                        den *= zi - zj
                if den == 0:
                    ok = False
                    break
                rad = n * abs(val / den) + abs(zi) * mpmath.ldexp(1, -work) + mpmath.ldexp(1, -work)
                out.append((mpmath.mpc(zi), rad))
            if ok:
                for i in range(len(out)):
                    for j in range(i + 1, len(out)):
                        if abs(out[i][0] - out[j][0]) <= out[i][1] + out[j][1]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                return out
        if work >= cap:
            raise PrecisionError("root isolation failed within the precision cap")
        work = min(2 * work, cap)


# --- conjugate splitting of a positive polynomial ---------------------------


def _sympy_factor(p: list) -> list[tuple[list, int]] | None:
    """Factor a real polynomial over its coefficient field with sympy.

    Returns monic factors (with multiplicity) or ``None`` when sympy cannot
    represent the coefficients exactly.
    """
    import sympy

    x = sympy.Symbol("x")
    exts = set()
    terms = []
    for c in p:
        if isinstance(c, Ball):
            return None
        if isinstance(c, Scalar):
            e = 0
            for r, q in c.terms:
                e += sympy.Rational(q.numerator, q.denominator) * sympy.sqrt(r)
                if r != 1:
                    exts.add(sympy.sqrt(r))
            terms.append(e)
        else:
            c = Fraction(c)
            terms.append(sympy.Rational(c.numerator, c.denominator))
    expr = sum(t * x**i for i, t in enumerate(terms))
    try:
        if exts:
            _, facs = sympy.factor_list(expr, x, extension=sorted(exts, key=str))
        else:
            _, facs = sympy.factor_list(expr, x)
    except Exception:
        return None
    out = []
    for f, m in facs:
        poly = sympy.Poly(f, x)
        cs = [_from_sympy(c) for c in reversed(poly.all_coeffs())]
        if any(c is None for c in cs):
            return None
        out.append((_pmonic(cs), m))
    return out


def _from_sympy(e):
    import sympy

    e = sympy.nsimplify(e) if not e.is_Rational else e
    if e.is_Rational:
        return Fraction(int(e.p), int(e.q))
    acc = Fraction(0)
    for t in sympy.Add.make_args(sympy.expand(e)):
        coeff, rest = t.as_coeff_Mul()
        if rest == 1:
            acc = acc + Fraction(int(coeff.p), int(coeff.q))
            continue
        if rest.is_Pow and rest.exp == sympy.Rational(1, 2) and rest.base.is_Integer:
            acc = acc + Scalar.from_terms({int(rest.base): Fraction(int(coeff.p), int(coeff.q))})
        elif rest == sympy.I:
            acc = acc + Scalar.from_terms({-1: Fraction(int(coeff.p), int(coeff.q))})
        else:
            return None
    return acc


def split_conjugate(s: list, prec: int = DEFAULT_PREC) -> list:
    """For a real polynomial ``s`` positive on the real line (no real roots,
    positive leading coefficient) return ``h`` with ``h * conj(h) = s``.

    Exact for quadratic factors over the field; higher-degree irreducible
    factors fall back to ball arithmetic.
    """
    s = _trim(list(s))
    lc = s[-1]
    if sign(lc) <= 0:
        raise ValueError("leading coefficient must be positive")
    h = [sqrt(lc, prec)]
    monic = _pmonic(s)
    if len(monic) == 1:
        return h
    factors = None
    if len(monic) > 3:
        factors = _sympy_factor(monic)
    if factors is None:
        factors = [(monic, 1)]
    for f, m in factors:
        for _ in range(m):
            h = _pmul(h, _half_factor(f, prec))
    return h


def _half_factor(f: list, prec: int) -> list:
    if len(f) == 3:
        gamma, beta = f[0], f[1]
        disc = 4 * gamma - beta * beta
        if sign(disc) <= 0:
            raise ValueError("quadratic factor has real roots")
        root = (-beta + sqrt(-disc, prec, allow_negative=True)) / 2
        return [-root, Fraction(1)]
    # numeric: choose roots in the upper half plane
    out: list = [Fraction(1)]
    for c, r in isolate_roots(f, prec):
        if abs(c.imag) <= r:
            raise ValueError("factor has a real root")
        if c.imag > 0:
            out = _pmul(out, [-Ball(c, r, prec), Fraction(1)])
    return out


# ---------------------------------------------------------------------------
# Hermitian square root


class SquareRootError(ValueError):
    """``f`` admits no symmetric ``d`` with ``d d* = f``.

    ``condition`` names the violated requirement, ``where`` locates it.
    """

    def __init__(self, condition: str, where=None, detail: str = ""):
        self.condition = condition
        self.where = where
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


def _split_unit_roots(f: LaurentPoly):
    """``f = (2 - x)**a * (2 + x)**b * g`` with ``g`` centred at 0."""
    m1 = mz(f, 1)
    m2 = mz(f, -1)
    return m1, m2


def _strip_pm1(f: LaurentPoly, m1: int, m2: int) -> LaurentPoly:
    g = f
    if m1:
        g = exact_div(g, LaurentPoly({0: -1, 1: 1}) ** m1)
    if m2:
        g = exact_div(g, LaurentPoly({0: 1, 1: 1}) ** m2)
    # re-centre at 0
    shift = -(g.ldeg + g.deg) // 2
    return g.shift(shift)


def hermitian_square_root_check(f: LaurentPoly):
    """Run the feasibility checks; return the intermediate data on success.

    Raises :class:`SquareRootError` with the first violated condition.
    """
    f = _lp(f)
    if f.is_zero():
        return None
    if not f.is_real():
        raise SquareRootError("real coefficients", detail="f has non-real coefficients")
    s = sym(f)
    if s != ONE:
        raise SquareRootError("symmetry", detail=f"Sym f = {s}, expected +1,0")
    m1, m2 = mz(f, 1), mz(f, -1)
    if m1 % 2:
        raise SquareRootError("nonnegative on T", where=1, detail="odd multiplicity at z=1")
    if m2 % 2:
        raise SquareRootError("nonnegative on T", where=-1, detail="odd multiplicity at z=-1")
    g = _strip_pm1(f, m1, m2)
    # (z-1)^2 = -z (2 - x): track the sign introduced by stripping
    sgn = (-1) ** (m1 // 2)
    G = [c * sgn for c in to_x_form(g)]
    lc, parts = squarefree_decomposition(G)
    for sf, i in parts:
        if i % 2 == 0:
            continue
        if _count_sqfree(sf, Fraction(-2), Fraction(2)):
            lo, hi = isolate_real_root(sf, Fraction(-2), Fraction(2))
            raise SquareRootError(
                "nonnegative on T", where=(lo, hi), detail="odd-multiplicity zero on the unit circle"
            )
        for lo, hi in (("-inf", Fraction(-2)), (Fraction(2), "inf")):
            if _count_sqfree(sf, lo, hi):
                a, b = isolate_real_root(sf, lo, hi)
                raise SquareRootError(
                    "even multiplicity on (-1,0)u(0,1)",
                    where=(a, b),
                    detail="odd-multiplicity real zero (x = z + 1/z interval shown)",
                )
    if sign(lc) < 0:
        x0 = next(t for t in (Fraction(n, 8) for n in range(-15, 16)) if not is_zero(_peval(G, t)))
        raise SquareRootError(
            "nonnegative on T", where=x0, detail=f"f < 0 where z + 1/z = {x0} on T"
        )
    return m1, m2, lc, parts


def hermitian_square_root(f: LaurentPoly, prec: int = DEFAULT_PREC) -> LaurentPoly:
    """Symmetric ``d`` with ``d * d.star() == f``.

    ``d = (1-z)**(m1/2) * (1+z)**(m2/2) * D(z + 1/z)``; the even part of the
    square-free decomposition contributes real factors, odd parts (which
    have no real zeros) are split into conjugate halves.
    """
    f = _lp(f)
    info = hermitian_square_root_check(f)
    if info is None:
        return ZERO
    m1, m2, lc, parts = info
    D: list = [sqrt(lc, prec)]
    for sf, i in parts:
        if i // 2:
            for _ in range(i // 2):
                D = _pmul(D, sf)
        if i % 2:
            D = _pmul(D, split_conjugate(sf, prec))
    d = from_x_form(D)
    if m1:
        d = d * LaurentPoly({0: 1, 1: -1}) ** (m1 // 2)
    if m2:
        d = d * LaurentPoly({0: 1, 1: 1}) ** (m2 // 2)
    return d


# ---------------------------------------------------------------------------
# JSON


def poly_to_json(u: LaurentPoly) -> dict:
    return {"coeffs": [{"k": k, "v": format_scalar(v)} for k, v in _lp(u).items()]}


def poly_from_json(obj) -> LaurentPoly:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ValueError("filter document needs a 'coeffs' list")
    seen = set()
    d = {}
    for item in obj["coeffs"]:
        if not isinstance(item, dict) or "k" not in item or "v" not in item:
            raise ValueError("each coefficient needs 'k' and 'v'")
        k = item["k"]
        if not isinstance(k, int) or isinstance(k, bool):
            raise ValueError(f"exponent must be an integer, got {k!r}")
        if k in seen:
            raise ValueError(f"duplicate exponent {k}")
        seen.add(k)
        v = item["v"]
        d[k] = parse_scalar(v) if isinstance(v, str) else as_number(v)
    return LaurentPoly(d)
