"""Exact scalars for Laurent-polynomial coefficients.

Values live in a multi-quadratic field: finite sums ``q_1*sqrt(r_1) + ... +
q_m*sqrt(r_m)`` with rational ``q_i`` and distinct square-free integer
radicands ``r_i``.  A radicand of ``1`` carries the rational part.  Negative
radicands are an optional Gaussian extension: ``sqrt(-m)`` means
``i*sqrt(m)``.

Rational values are always returned as :class:`fractions.Fraction`, so a
:class:`Scalar` instance is never rational.  That keeps the common rational
case fast and makes ``Scalar == Fraction`` comparisons trivially correct.

When a square root leaves the field, :func:`sqrt` falls back to a
:class:`Ball`, a midpoint-radius complex interval backed by mpmath.  Balls
are contagious: any arithmetic that touches a ball returns a ball.

Module-level helpers (:func:`is_zero`, :func:`conj`, :func:`sign`, ...)
accept any coefficient type (int, Fraction, Scalar, Ball), so the
polynomial layers never need to branch on type.
"""

from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

import mpmath

__all__ = [
    "Scalar",
    "Ball",
    "AlgebraicPoint",
    "PrecisionError",
    "NotInTower",
    "DEFAULT_PREC",
    "precision_cap",
    "as_number",
    "is_zero",
    "conj",
    "sign",
    "is_real",
    "real_part",
    "imag_part",
    "sqrt",
    "sqrt_exact",
    "to_mp",
    "to_ball",
    "parse_scalar",
    "format_scalar",
    "I",
]

DEFAULT_PREC = 256
_DEFAULT_CAP = 4096


class PrecisionError(ArithmeticError):
    """A ball computation could not be decided within the precision cap."""


class NotInTower(ArithmeticError):
    """An exact operation would leave the multi-quadratic field."""


def precision_cap() -> int:
    """Maximum ball precision in bits (``QTF_PRECISION_CAP`` overrides)."""
    raw = os.environ.get("QTF_PRECISION_CAP")
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return _DEFAULT_CAP


# ---------------------------------------------------------------------------
# integer helpers


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, t)`` with ``n == s*s*t`` and ``t`` square-free, ``n > 0``."""
    if n < 1:
        raise ValueError("expected a positive integer")
    s, t = 1, 1
    m = n
    p = 2
    while p * p <= m and p < 100_000:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                t *= p
        p += 1 if p == 2 else 2
    if m > 1:
        if p * p <= m:
            from sympy import factorint

            for q, e in factorint(m).items():
                s *= q ** (e // 2)
                if e % 2:
                    t *= q
        else:
            t *= m
    return s, t


def _radical_product(r: int, s: int) -> tuple[int, int]:
    """sqrt(r)*sqrt(s) == k*sqrt(t); returns ``(k, t)``."""
    g = math.gcd(abs(r), abs(s))
    t = (r // g) * (s // g)
    k = g if (r > 0 or s > 0) else -g
    return k, t


@lru_cache(maxsize=4096)
def _primes_of(r: int) -> frozenset[int]:
    out: set[int] = set()
    if r < 0:
        out.add(-1)
        r = -r
    p = 2
    while p * p <= r and p < 100_000:
        if r % p == 0:
            out.add(p)
            r //= p
        else:
            p += 1 if p == 2 else 2
    if r > 1:
        if p * p <= r:
            from sympy import primefactors

            out.update(primefactors(r))
        else:
            out.add(r)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Scalar


def _make(terms: dict[int, Fraction]):
    """Canonical constructor: drop zeros, demote rationals to Fraction."""
    items = tuple(sorted((r, q) for r, q in terms.items() if q))
    if not items:
        return Fraction(0)
    if len(items) == 1 and items[0][0] == 1:
        return items[0][1]
    obj = object.__new__(Scalar)
    obj._terms = items
    obj._hash = None
    return obj


def _terms_of(x) -> tuple[tuple[int, Fraction], ...]:
    if isinstance(x, Scalar):
        return x._terms
    x = Fraction(x)
    return ((1, x),) if x else ()


def _is_scalar_like(x) -> bool:
    return isinstance(x, (Scalar, Rational))


@total_ordering
class Scalar:
    """Irrational element of a multi-quadratic field (see module docstring).

    Construct through :meth:`from_terms`, :func:`sqrt` or :func:`parse_scalar`;
    rational results come back as ``Fraction``.
    """

    __slots__ = ("_terms", "_hash")

    def __new__(cls, *args, **kwargs):
        raise TypeError("use Scalar.from_terms, sqrt or parse_scalar")

    @staticmethod
    def from_terms(terms):
        """Build from ``{radicand: rational}`` with square-free radicands."""
        acc: dict[int, Fraction] = {}
        for r, q in dict(terms).items():
            r = int(r)
            if r == 0:
                continue
            if r not in (1, -1):
                s, t = _squarefree_split(abs(r))
                q = Fraction(q) * s
                r = t if r > 0 else -t
            acc[r] = acc.get(r, Fraction(0)) + Fraction(q)
        return _make(acc)

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    # --- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        acc = dict(self._terms)
        for r, q in _terms_of(other):
            acc[r] = acc.get(r, Fraction(0)) + q
        return _make(acc)

    __radd__ = __add__

    def __neg__(self):
        return _make({r: -q for r, q in self._terms})

    def __sub__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        acc = dict(self._terms)
        for r, q in _terms_of(other):
            acc[r] = acc.get(r, Fraction(0)) - q
        return _make(acc)

    def __rsub__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        if not isinstance(other, Scalar):
            other = Fraction(other)
            if not other:
                return Fraction(0)
            return _make({r: q * other for r, q in self._terms})
        acc: dict[int, Fraction] = {}
        for r1, q1 in self._terms:
            for r2, q2 in other._terms:
                if r1 == 1:
                    k, t = 1, r2
                elif r2 == 1:
                    k, t = 1, r1
                else:
                    k, t = _radical_product(r1, r2)
                acc[t] = acc.get(t, Fraction(0)) + k * q1 * q2
        return _make(acc)

    __rmul__ = __mul__

    def inverse(self):
        return _inverse(self)

    def __truediv__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        if not isinstance(other, Scalar):
            other = Fraction(other)
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return _make({r: q / other for r, q in self._terms})
        return self * _inverse(other)

    def __rtruediv__(self, other):
        if not _is_scalar_like(other):
            return NotImplemented
        return Fraction(other) * _inverse(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return _inverse(self) ** (-n)
        result: object = Fraction(1)
        base: object = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # --- structure ---------------------------------------------------------
    def conjugate(self):
        if self.is_real():
            return self
        return _make({r: (-q if r < 0 else q) for r, q in self._terms})

    def is_real(self) -> bool:
        return all(r > 0 for r, _ in self._terms)

    @property
    def real(self):
        return _make({r: q for r, q in self._terms if r > 0})

    @property
    def imag(self):
        # sqrt(-m) = i*sqrt(m)
        return _make({-r: q for r, q in self._terms if r < 0})

    def primes(self) -> set[int]:
        out: set[int] = set()
        for r, _ in self._terms:
            if r != 1:
                out |= _primes_of(r)
        return out

    def sign(self) -> int:
        if not self.is_real():
            raise ValueError("sign of a non-real scalar")
        return _sign(self)

    # --- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __lt__(self, other):
        if isinstance(other, Ball):
            return NotImplemented
        return sign(self - other) < 0

    def __bool__(self):
        return True

    def __float__(self):
        v = to_mp(self, 64)
        if isinstance(v, mpmath.mpc):
            raise TypeError("complex scalar")
        return float(v)

    def __complex__(self):
        return complex(to_mp(self, 64))

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


I = Scalar.from_terms({-1: 1})


def _split_on(x, p: int):
    """Write ``x = a + b*sqrt(p)`` with ``a, b`` free of the prime ``p``."""
    a: dict[int, Fraction] = {}
    b: dict[int, Fraction] = {}
    for r, q in _terms_of(x):
        if (p == -1 and r < 0) or (p > 0 and r % p == 0):
            rest = r // p
            b[rest] = b.get(rest, Fraction(0)) + q
        else:
            a[r] = a.get(r, Fraction(0)) + q
    return _make(a), _make(b)


def _pick_prime(x) -> int:
    ps = x.primes()
    return max(ps)


def _inverse(x):
    if not isinstance(x, Scalar):
        x = Fraction(x)
        if not x:
            raise ZeroDivisionError("division by zero scalar")
        return 1 / x
    p = _pick_prime(x)
    a, b = _split_on(x, p)
    root_p = _make({p: Fraction(1)}) if p != 1 else Fraction(1)
    conj_x = a - b * root_p
    norm = a * a - b * b * p
    return conj_x * _inverse(norm)


def _sign(x) -> int:
    if not isinstance(x, Scalar):
        return (x > 0) - (x < 0)
    p = _pick_prime(x)
    a, b = _split_on(x, p)
    sa, sb = _sign(a), _sign(b)
    if sa == 0:
        return sb
    if sb == 0 or sa == sb:
        return sa
    # opposite signs: compare a^2 with p*b^2
    return sa * _sign(a * a - b * b * p)


# ---------------------------------------------------------------------------
# Ball


def _mpf(x):
    return mpmath.mpf(x)


class Ball:
    """Complex midpoint-radius interval at a fixed working precision.

    ``radius`` bounds ``|true - center|``.  Every operation adds a rounding
    allowance of a few ulps of the result.
    """

    __slots__ = ("center", "radius", "prec")

    def __init__(self, center, radius=0, prec: int = DEFAULT_PREC):
        with mpmath.workprec(prec):
            self.center = mpmath.mpc(center)
            self.radius = _mpf(radius)
        self.prec = prec

    # rounding allowance for a result of magnitude m
    def _ulp(self, m, prec):
        return abs(m) * mpmath.ldexp(1, 2 - prec)

    @staticmethod
    def _coerce(x, prec):
        if isinstance(x, Ball):
            return x
        return to_ball(x, prec)

    def _binary(self, other, op):
        if isinstance(other, Ball):
            prec = min(self.prec, other.prec)
        else:
            prec = self.prec
        o = Ball._coerce(other, prec)
        with mpmath.workprec(prec + 16):
            if op == "add":
                c = self.center + o.center
                r = self.radius + o.radius
            elif op == "sub":
                c = self.center - o.center
                r = self.radius + o.radius
            elif op == "mul":
                c = self.center * o.center
                r = (
                    abs(self.center) * o.radius
                    + abs(o.center) * self.radius
                    + self.radius * o.radius
                )
            else:  # div
                den = abs(o.center) - o.radius
                if den <= 0:
                    raise PrecisionError("ball divisor contains zero")
                c = self.center / o.center
                r = (self.radius + abs(c) * o.radius) / den
            r += self._ulp(c, prec)
        return Ball(c, r, prec)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add")

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return Ball._coerce(other, self.prec)._binary(self, "sub")

    def __mul__(self, other):
        return self._binary(other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        return Ball._coerce(other, self.prec)._binary(self, "div")

    def __neg__(self):
        with mpmath.workprec(self.prec + 16):
            return Ball(-self.center, self.radius, self.prec)

    def __pow__(self, n: int):
        result = Ball(1, 0, self.prec)
        for _ in range(n):
            result = result * self
        return result

    def conjugate(self):
        with mpmath.workprec(self.prec + 16):
            return Ball(mpmath.conj(self.center), self.radius, self.prec)

    def contains_zero(self) -> bool:
        return abs(self.center) <= self.radius

    def is_real(self) -> bool:
        return abs(self.center.imag) <= self.radius

    def sign(self) -> int:
        if abs(self.center.imag) > self.radius:
            raise ValueError("sign of a non-real ball")
        re_ = self.center.real
        if abs(re_) > self.radius:
            return 1 if re_ > 0 else -1
        raise PrecisionError(
            f"sign undecided at {self.prec} bits (radius {mpmath.nstr(self.radius, 5)})"
        )

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __float__(self):
        return float(self.center.real)

    def __complex__(self):
        return complex(self.center)

    def __repr__(self):
        return f"Ball({mpmath.nstr(self.center, 20)} +/- {mpmath.nstr(self.radius, 3)})"

    def __str__(self):
        return format_scalar(self)


def to_mp(x, prec: int = DEFAULT_PREC):
    """Approximate any coefficient as an mpmath number at ``prec`` bits."""
    with mpmath.workprec(prec + 20):
        if isinstance(x, Ball):
            c = x.center
            return c.real if c.imag == 0 else c
        if isinstance(x, Scalar):
            re_, im_ = mpmath.mpf(0), mpmath.mpf(0)
            for r, q in x._terms:
                v = mpmath.mpf(q.numerator) / q.denominator * mpmath.sqrt(abs(r))
                if r < 0:
                    im_ += v
                else:
                    re_ += v
            return re_ if im_ == 0 else mpmath.mpc(re_, im_)
        if isinstance(x, complex):
            return mpmath.mpc(x)
        if isinstance(x, float):
            return mpmath.mpf(x)
        q = Fraction(x)
        return mpmath.mpf(q.numerator) / q.denominator


def to_ball(x, prec: int = DEFAULT_PREC) -> Ball:
    if isinstance(x, Ball):
        return x
    v = to_mp(x, prec)
    if isinstance(x, (int, Rational)) and Fraction(x).denominator == 1 and abs(x) < 2**prec:
        rad = 0
    else:
        rad = abs(v) * mpmath.ldexp(1, 1 - prec)
    return Ball(v, rad, prec)


# ---------------------------------------------------------------------------
# AlgebraicPoint


class AlgebraicPoint:
    """A root of an exact polynomial, isolated by a complex disc.

    ``poly`` is an ordinary coefficient list (constant term first) of a
    square-free polynomial whose roots include this point; the disc of
    ``radius`` around ``center`` contains exactly one of its roots.
    ``multiplicity`` records the multiplicity in whatever polynomial the
    point was extracted from.
    """

    __slots__ = ("poly", "center", "radius", "multiplicity", "prec")

    def __init__(self, poly, center, radius, multiplicity: int = 1, prec: int = DEFAULT_PREC):
        self.poly = tuple(poly)
        with mpmath.workprec(prec + 16):
            self.center = mpmath.mpc(center)
            self.radius = mpmath.mpf(radius)
        self.multiplicity = multiplicity
        self.prec = prec

    def refine(self, prec: int) -> "AlgebraicPoint":
        from .laurent import isolate_roots

        for c, r in isolate_roots(self.poly, prec):
            if abs(c - self.center) <= self.radius + r:
                return AlgebraicPoint(self.poly, c, r, self.multiplicity, prec)
        raise PrecisionError("lost track of root during refinement")

    def approx(self) -> complex:
        return complex(self.center)

    def on_unit_circle(self) -> bool | None:
        m = abs(self.center)
        if m - self.radius > 1 or m + self.radius < 1:
            return False
        return None

    def __repr__(self):
        return (
            f"AlgebraicPoint({mpmath.nstr(self.center, 15)}, r={mpmath.nstr(self.radius, 3)}, "
            f"mult={self.multiplicity})"
        )


# ---------------------------------------------------------------------------
# uniform helpers


def as_number(x):
    """Normalize Python numbers to the coefficient domain."""
    if isinstance(x, (Scalar, Ball, Fraction)):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, complex):
        re, im = Fraction(x.real), Fraction(x.imag)
        return re + im * I if im else re
    raise TypeError(f"unsupported coefficient {x!r}")


def is_zero(x) -> bool:
    if isinstance(x, Ball):
        return x.contains_zero()
    if isinstance(x, Scalar):
        return False
    return x == 0


def conj(x):
    if isinstance(x, (Scalar, Ball)):
        return x.conjugate()
    return x


def is_real(x) -> bool:
    if isinstance(x, (Scalar, Ball)):
        return x.is_real()
    return True


def real_part(x):
    if isinstance(x, Scalar):
        return x.real
    if isinstance(x, Ball):
        return Ball(x.center.real, x.radius, x.prec)
    return x


def imag_part(x):
    if isinstance(x, Scalar):
        return x.imag
    if isinstance(x, Ball):
        return Ball(x.center.imag, x.radius, x.prec)
    return Fraction(0)


def sign(x) -> int:
    """Exact sign of a real Scalar/rational; certified sign of a Ball."""
    if isinstance(x, (Scalar, Ball)):
        return x.sign()
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# square roots


def _sqrt_rational(q: Fraction):
    if q < 0:
        return I * _sqrt_rational(-q)
    if q == 0:
        return Fraction(0)
    n = q.numerator * q.denominator
    s, t = _squarefree_split(n)
    coeff = Fraction(s, q.denominator)
    return coeff if t == 1 else _make({t: coeff})


def _involves(x, p: int) -> bool:
    return isinstance(x, Scalar) and p in x.primes()


def _try_sqrt(x):
    """Square root of a nonnegative real field element inside the tower, or None."""
    if not isinstance(x, Scalar):
        return _sqrt_rational(Fraction(x))
    if _sign(x) < 0:
        return None
    p = _pick_prime(x)
    a, b = _split_on(x, p)
    norm = a * a - b * b * p
    if sign(norm) < 0:
        return None
    s = _try_sqrt(norm)
    if s is None or (isinstance(s, Scalar) and not s.primes() <= x.primes() - {p}):
        # a new radical in the norm would make the recursion grow the tower
        return None
    root_p = _make({p: Fraction(1)})
    for sgn in (1, -1):
        c2 = (a + sgn * s) / 2
        if sign(c2) <= 0:
            continue
        c = _try_sqrt(c2)
        if c is None or _involves(c, p):
            continue
        e = b / (2 * c)
        y = c + e * root_p
        if y * y == x:
            return -y if sign(y) < 0 else y
    return None


def sqrt_exact(x):
    """Exact square root in the tower or raise :class:`NotInTower`.

    Negative real inputs give ``i*sqrt(-x)``.
    """
    x = as_number(x)
    if isinstance(x, Ball):
        raise NotInTower("ball input")
    if not is_real(x):
        raise NotInTower("square root of a non-real scalar")
    if sign(x) < 0:
        r = _try_sqrt(-x)
        if r is None:
            raise NotInTower(f"sqrt({format_scalar(x)})")
        return I * r
    r = _try_sqrt(x)
    if r is None:
        raise NotInTower(f"sqrt({format_scalar(x)})")
    return r


def sqrt(x, prec: int = DEFAULT_PREC, allow_negative: bool = False):
    """Square root: exact when it lies in the tower, otherwise a Ball.

    Negative input raises ``ValueError`` unless ``allow_negative`` is set,
    in which case the result is ``i*sqrt(-x)``.
    """
    x = as_number(x)
    if isinstance(x, Ball):
        return _ball_sqrt(x, allow_negative)
    if not is_real(x):
        raise ValueError("square root of a non-real scalar")
    s = sign(x)
    if s < 0 and not allow_negative:
        raise ValueError("square root of a negative scalar")
    try:
        return sqrt_exact(x)
    except NotInTower:
        pass
    base = -x if s < 0 else x
    cap = precision_cap()
    p = prec
    while True:
        with mpmath.workprec(p + 20):
            v = mpmath.sqrt(to_mp(base, p + 20))
            rad = v * mpmath.ldexp(1, 2 - p)
        b = Ball(v, rad, p)
        if rad <= mpmath.ldexp(1, -prec) or p >= cap:
            break
        p = min(2 * p, cap)
    return b * I if s < 0 else b


def _ball_sqrt(x: Ball, allow_negative: bool) -> Ball:
    prec = x.prec
    with mpmath.workprec(prec + 20):
        c = x.center
        if abs(c.imag) <= x.radius and c.real < 0 and not allow_negative:
            if abs(c.real) > x.radius:
                raise ValueError("square root of a negative ball")
        v = mpmath.sqrt(c)
        m = abs(v)
        if m == 0:
            rad = mpmath.sqrt(x.radius)
        else:
            # |sqrt(c+e) - sqrt(c)| <= |e| / |sqrt(c)| for |e| << |c|
            rad = x.radius / m * 2 if x.radius < abs(c) / 4 else mpmath.sqrt(x.radius) * 2
        rad += m * mpmath.ldexp(1, 2 - prec)
    return Ball(v, rad, prec)


# ---------------------------------------------------------------------------
# literals

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?
          (?:\s*\*?\s*sqrt\(\s*(?P<rad1>-?\d+)\s*\)(?:\s*/\s*(?P<den2>\d+))?)?
        |
          sqrt\(\s*(?P<rad2>-?\d+)\s*\)(?:\s*/\s*(?P<den3>\d+))?
        |
          (?P<imag>i)
        )\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str):
    """Parse a scalar literal such as ``-1/16``, ``sqrt(2)/4`` or ``3/4*sqrt(5) - 1``."""
    if not isinstance(text, str):
        return as_number(text)
    try:
        return _parse_scalar(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def _parse_scalar(text: str):
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    pos = 0
    acc: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar literal {text!r} at {pos}")
        if not first and not m.group("sign"):
            raise ValueError(f"missing operator in {text!r} at {pos}")
        first = False
        sgn = -1 if m.group("sign") == "-" else 1
        if m.group("imag"):
            q, r = Fraction(1), -1
        elif m.group("rad2") is not None:
            q = Fraction(1, int(m.group("den3") or 1))
            r = int(m.group("rad2"))
        else:
            q = Fraction(int(m.group("num")), int(m.group("den") or 1))
            if m.group("rad1") is not None:
                q /= int(m.group("den2") or 1)
                r = int(m.group("rad1"))
            else:
                if m.group("den2"):
                    raise ValueError(f"bad scalar literal {text!r}")
                r = 1
        if r == 0:
            pos = m.end()
            continue
        if r not in (1, -1):
            k, t = _squarefree_split(abs(r))
            q *= k
            r = t if r > 0 else -t
        acc[r] = acc.get(r, Fraction(0)) + sgn * q
        pos = m.end()
    return _make(acc)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x, digits: int = 40) -> str:
    """Render in the literal grammar (Balls render as decimals)."""
    if isinstance(x, Ball):
        c = x.center
        if abs(c.imag) <= x.radius:
            return mpmath.nstr(c.real, digits)
        return mpmath.nstr(c, digits)
    if not isinstance(x, Scalar):
        return _fmt_rational(Fraction(x))
    parts = []
    for r, q in x._terms:
        body = _fmt_rational(abs(q))
        if r != 1:
            body = f"sqrt({r})" if abs(q) == 1 else f"{body}*sqrt({r})"
        parts.append(("-" if q < 0 else "+", body))
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sg, body in parts[1:]:
        out += f" {sg} {body}"
    return out
