"""2x2 matrices of Laurent polynomials with compatible symmetry.

A matrix ``P`` has compatible symmetry when ``Sym P[j][k] = th1[j]* th2[k]``
for two pairs of symmetry types; :class:`SymCertificate` stores such a
pair.  The module also provides strong inversion (monomial determinant),
the symmetric row reduction of a pair, and the diagonal normal form
``P A Q = diag(e1, e2)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .field import AlgebraicPoint, as_number, is_zero
from .laurent import (
    ANY,
    LaurentPoly,
    SymmetryType,
    divides,
    exact_div,
    isolate_roots,
    poly_from_json,
    poly_to_json,
    squarefree_decomposition,
    sym,
    sym_eea,
)

__all__ = [
    "LMatrix2",
    "SymCertificate",
    "Incompatible",
    "IncompatibleSymmetry",
    "NormalFormResult",
    "det2",
    "adj2",
    "hermitian_check",
    "star_matrix",
    "infer_certificate",
    "invert_strongly_invertible",
    "row_reduce_pair",
    "normal_form",
    "spectrum",
    "matrix_from_json",
    "matrix_to_json",
]

_KEYS = ("11", "12", "21", "22")


def _lp(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly(x)


class LMatrix2:
    """Immutable 2x2 matrix of Laurent polynomials, indexed ``m[j, k]`` (0-based)."""

    __slots__ = ("_e",)

    def __init__(self, a11, a12, a21, a22):
        self._e = (_lp(a11), _lp(a12), _lp(a21), _lp(a22))

    @classmethod
    def from_rows(cls, rows) -> "LMatrix2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "LMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def zero(cls) -> "LMatrix2":
        return cls(0, 0, 0, 0)

    @classmethod
    def diag(cls, a, b) -> "LMatrix2":
        return cls(a, 0, 0, b)

    @classmethod
    def swap(cls) -> "LMatrix2":
        return cls(0, 1, 1, 0)

    def __getitem__(self, jk) -> LaurentPoly:
        j, k = jk
        return self._e[2 * j + k]

    @property
    def entries(self) -> tuple[LaurentPoly, ...]:
        return self._e

    def rows(self):
        return ((self._e[0], self._e[1]), (self._e[2], self._e[3]))

    def __iter__(self):
        return iter(self._e)

    # --- algebra -------------------------------------------------------------
    def __add__(self, other: "LMatrix2") -> "LMatrix2":
        return LMatrix2(*(x + y for x, y in zip(self._e, other._e)))

    def __sub__(self, other: "LMatrix2") -> "LMatrix2":
        return LMatrix2(*(x - y for x, y in zip(self._e, other._e)))

    def __neg__(self):
        return LMatrix2(*(-x for x in self._e))

    def __mul__(self, other):
        if isinstance(other, LMatrix2):
            a, b, c, d = self._e
            e, f, g, h = other._e
            return LMatrix2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return LMatrix2(*(x * other for x in self._e))

    def __rmul__(self, other):
        return LMatrix2(*(other * x for x in self._e))

    def __matmul__(self, other):
        return self * other

    def apply(self, vec):
        """Matrix times a column ``(u1, u2)``."""
        a, b, c, d = self._e
        u1, u2 = _lp(vec[0]), _lp(vec[1])
        return a * u1 + b * u2, c * u1 + d * u2

    def det(self) -> LaurentPoly:
        a, b, c, d = self._e
        return a * d - b * c

    def adj(self) -> "LMatrix2":
        a, b, c, d = self._e
        return LMatrix2(d, -b, -c, a)

    def star(self) -> "LMatrix2":
        a, b, c, d = self._e
        return LMatrix2(a.star(), c.star(), b.star(), d.star())

    def transpose(self) -> "LMatrix2":
        a, b, c, d = self._e
        return LMatrix2(a, c, b, d)

    def map(self, fn) -> "LMatrix2":
        return LMatrix2(*(fn(x) for x in self._e))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self._e)

    def is_diagonal(self) -> bool:
        return self._e[1].is_zero() and self._e[2].is_zero()

    def is_hermitian(self) -> bool:
        return self == self.star()

    def is_exact(self) -> bool:
        return all(x.is_exact() for x in self._e)

    def sym(self):
        """Entrywise symmetry types (``None`` where an entry has none)."""
        return tuple(sym(x) for x in self._e)

    def __eq__(self, other):
        if not isinstance(other, LMatrix2):
            return NotImplemented
        return self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def max_abs(self):
        return max(x.max_abs() for x in self._e)

    def __repr__(self):
        a, b, c, d = self._e
        return f"LMatrix2([[{a}, {b}], [{c}, {d}]])"


# --- thin functional aliases -----------------------------------------------


def det2(m: LMatrix2) -> LaurentPoly:
    return m.det()


def adj2(m: LMatrix2) -> LMatrix2:
    return m.adj()


def star_matrix(m: LMatrix2) -> LMatrix2:
    return m.star()


def hermitian_check(m: LMatrix2) -> bool:
    return m.is_hermitian()


# ---------------------------------------------------------------------------
# certificates


class IncompatibleSymmetry(ValueError):
    pass


@dataclass(frozen=True)
class Incompatible:
    """Returned by :func:`infer_certificate` when no certificate exists."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class SymCertificate:
    """Row types ``th1`` and column types ``th2`` with
    ``Sym P[j][k] = th1[j].star() * th2[k]``."""

    th1: tuple[SymmetryType, SymmetryType]
    th2: tuple[SymmetryType, SymmetryType]

    def entry_type(self, j: int, k: int) -> SymmetryType:
        return self.th1[j].star() * self.th2[k]

    def matches(self, m: LMatrix2) -> bool:
        for j in range(2):
            for k in range(2):
                s = sym(m[j, k])
                if s is ANY:
                    continue
                if s is None or s != self.entry_type(j, k):
                    return False
        return True

    def inverse(self) -> "SymCertificate":
        """Certificate of ``P^{-1}``."""
        return SymCertificate(self.th2, self.th1)

    def star(self) -> "SymCertificate":
        """Certificate of ``P*``."""
        return SymCertificate(self.th2, self.th1)

    def transpose(self) -> "SymCertificate":
        inv = lambda t: SymmetryType(t.eps, -t.c)  # noqa: E731
        return SymCertificate(tuple(inv(t) for t in self.th2), tuple(inv(t) for t in self.th1))

    def compose(self, other: "SymCertificate") -> "SymCertificate":
        """Certificate of ``P Q`` when ``other.th1 = self.th2 * tau``."""
        tau = other.th1[0] / self.th2[0]
        if other.th1[1] / self.th2[1] != tau:
            raise IncompatibleSymmetry("multiplication is not compatible")
        return SymCertificate(tuple(t * tau for t in self.th1), other.th2)

    def __str__(self):
        return f"th1=({self.th1[0]}; {self.th1[1]}) th2=({self.th2[0]}; {self.th2[1]})"


def infer_certificate(m: LMatrix2):
    """Find ``th1``, ``th2`` consistent with the entry types of ``m``.

    Zero entries impose nothing.  Each unconstrained connected component of
    the row/column graph is anchored at ``+1*z**0``.
    """
    types = {}
    for j in range(2):
        for k in range(2):
            s = sym(m[j, k])
            if s is None:
                raise ValueError(f"entry ({j + 1},{k + 1}) has no symmetry")
            if s is not ANY:
                types[j, k] = s
    # nodes: ("r", j) with value th1[j]; ("c", k) with value th2[k]
    # relation: th2[k] = th1[j] * S[j,k]
    val: dict = {}
    order = [("r", 0), ("r", 1), ("c", 0), ("c", 1)]
    for start in order:
        if start in val:
            continue
        val[start] = SymmetryType(1, 0)
        stack = [start]
        while stack:
            node = stack.pop()
            kind, idx = node
            for (j, k), s in types.items():
                if kind == "r" and j == idx:
                    other, want = ("c", k), val[node] * s
                elif kind == "c" and k == idx:
                    other, want = ("r", j), val[node] / s
                else:
                    continue
                if other in val:
                    if val[other] != want:
                        return Incompatible(f"entry ({j + 1},{k + 1}) breaks the row/column ratio")
                else:
                    val[other] = want
                    stack.append(other)
    return SymCertificate((val["r", 0], val["r", 1]), (val["c", 0], val["c", 1]))


def _require_certificate(m: LMatrix2) -> SymCertificate:
    cert = infer_certificate(m)
    if not cert:
        raise IncompatibleSymmetry(cert.reason)
    return cert


# ---------------------------------------------------------------------------
# inversion and row reduction


def invert_strongly_invertible(p: LMatrix2) -> LMatrix2:
    d = p.det()
    if not d.is_monomial():
        raise ValueError("determinant is not a nonzero monomial")
    (k, c), = d.items()
    inv = LaurentPoly({-k: 1 / c})
    return p.adj() * inv


def row_reduce_pair(u1: LaurentPoly, u2: LaurentPoly) -> tuple[LMatrix2, LaurentPoly]:
    """Strongly invertible ``P`` with compatible symmetry and
    ``P (u1, u2)^T = (r, 0)^T``, ``r = gcd(u1, u2)``."""
    u1, u2 = _lp(u1), _lp(u2)
    if u1.is_zero() or u2.is_zero():
        raise ValueError("row_reduce_pair needs nonzero inputs")
    u, v, r = sym_eea(u1, u2)
    s, t, one = sym_eea(u, v)
    # u s + v t = one, a symmetric monomial unit
    if not one.is_monomial():
        raise ArithmeticError("Bezout coefficients are not coprime")
    s = exact_div(s, one)
    t = -exact_div(t, one)
    p1 = LMatrix2(u, v, t, s)
    p = exact_div(t * u1 + s * u2, r)
    p2 = LMatrix2(1, 0, -p, 1)
    return p2 * p1, r


# ---------------------------------------------------------------------------
# normal form


@dataclass(frozen=True)
class NormalFormResult:
    P: LMatrix2
    Q: LMatrix2
    D: LMatrix2
    steps: int = 0

    @property
    def e1(self) -> LaurentPoly:
        return self.D[0, 0]

    @property
    def e2(self) -> LaurentPoly:
        return self.D[1, 1]


def _normal_form_lower(a: LMatrix2) -> NormalFormResult:
    """Normal form assuming ``a[1,0] != 0``."""
    P = LMatrix2.identity()
    Q = LMatrix2.identity()
    steps = 0
    last_len = None
    while True:
        # row step: clear (2,1)
        if not a[1, 0].is_zero():
            a11, a21 = a[0, 0], a[1, 0]
            if a11.is_zero():
                pj = LMatrix2.swap()
            elif divides(a11, a21):
                pj = LMatrix2(1, 0, -exact_div(a21, a11), 1)
            else:
                pj, _ = row_reduce_pair(a11, a21)
            a = pj * a
            P = pj * P
            steps += 1
        if a[0, 1].is_zero():
            break
        # column step: clear (1,2)
        a11, a12 = a[0, 0], a[0, 1]
        if divides(a11, a12):
            qj = LMatrix2(1, -exact_div(a12, a11), 0, 1)
        else:
            pt, _ = row_reduce_pair(a11, a12)
            qj = pt.transpose()
        a = a * qj
        Q = Q * qj
        steps += 1
        if a[1, 0].is_zero():
            break
        n = a[0, 0].length
        if last_len is not None and n >= last_len:
            raise AssertionError("normal form: length of the (1,1) entry did not decrease")
        last_len = n
    return NormalFormResult(P, Q, a, steps)


def normal_form(a: LMatrix2) -> NormalFormResult:
    """``P A Q = diag(e1, e2)`` with strongly invertible ``P``, ``Q`` of
    compatible symmetry and symmetric ``e1``, ``e2``."""
    _require_certificate(a)
    if a.is_zero() or a.is_diagonal():
        return NormalFormResult(LMatrix2.identity(), LMatrix2.identity(), a)
    if not a[1, 0].is_zero():
        return _normal_form_lower(a)
    res = _normal_form_lower(a.transpose())
    return NormalFormResult(res.Q.transpose(), res.P.transpose(), res.D.transpose(), res.steps)


# ---------------------------------------------------------------------------
# spectrum


def spectrum(a: LMatrix2) -> list[tuple[AlgebraicPoint, int]]:
    """Certified nonzero roots of ``det(a)`` with exact multiplicities."""
    d = a.det()
    if d.is_zero():
        raise ValueError("determinant is identically zero")
    _, p = d.to_poly()
    if len(p) <= 1:
        return []
    _, parts = squarefree_decomposition(p)
    out = []
    for s, mult in parts:
        for c, r in isolate_roots(s):
            out.append((AlgebraicPoint(s, c, r, mult), mult))
    out.sort(key=lambda t: (float(abs(t[0].center)), float(t[0].center.imag), float(t[0].center.real)))
    return out


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(m: LMatrix2) -> dict:
    return {key: poly_to_json(e) for key, e in zip(_KEYS, m.entries)}


def matrix_from_json(obj) -> LMatrix2:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise ValueError("matrix document must be an object")
    missing = [k for k in _KEYS if k not in obj]
    if missing:
        raise ValueError(f"matrix document lacks entries {missing}")
    return LMatrix2(*(poly_from_json(obj[k]) for k in _KEYS))
