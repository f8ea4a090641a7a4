"""Numerical rendering of refinable functions and the smoothness estimate.

Everything here runs in double precision.  The exact algebra lives in the
other modules; this layer only samples functions on dyadic grids.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .field import format_scalar, to_mp
from .laurent import LaurentPoly, exact_div, sr

__all__ = [
    "SampledFunction",
    "GridMismatch",
    "filter_array",
    "cascade_phi",
    "derive_functions",
    "sm_estimate",
    "moment",
    "write_function_csv",
    "write_stem_csv",
]


class GridMismatch(ValueError):
    """Sampled functions live on incompatible dyadic grids."""


@dataclass
class SampledFunction:
    """Values at ``k / 2**level`` for ``lo <= k / 2**level <= hi``."""

    level: int
    values: np.ndarray
    lo: float
    hi: float

    def __post_init__(self):
        n = round((self.hi - self.lo) * 2**self.level) + 1
        if self.level < 1 or len(self.values) != n:
            raise GridMismatch(
                f"{len(self.values)} samples do not fit [{self.lo}, {self.hi}] at level {self.level}"
            )

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def step(self) -> float:
        return 2.0**-self.level

    @property
    def x(self) -> np.ndarray:
        return self.lo + self.step * np.arange(len(self.values))

    @property
    def first_index(self) -> int:
        return round(self.lo * 2**self.level)

    def at_index(self, idx: np.ndarray) -> np.ndarray:
        """Samples at grid indices ``idx`` (value ``k / 2**level``), zero off support."""
        pos = np.asarray(idx) - self.first_index
        inside = (pos >= 0) & (pos < len(self.values))
        out = np.zeros(pos.shape, dtype=self.values.dtype)
        out[inside] = self.values[pos[inside]]
        return out

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.x, self.values, left=0.0, right=0.0)


def _real(x) -> float | complex:
    v = complex(to_mp(x, 64))
    return v.real if v.imag == 0 else v


def filter_array(u: LaurentPoly) -> tuple[int, np.ndarray]:
    """``(ldeg, coefficients)`` in double precision."""
    if u.is_zero():
        return 0, np.zeros(1)
    vals = [_real(u[k]) for k in range(u.ldeg, u.deg + 1)]
    dtype = complex if any(isinstance(v, complex) for v in vals) else float
    return u.ldeg, np.array(vals, dtype=dtype)


def cascade_phi(a: LaurentPoly, J: int = 12) -> SampledFunction:
    """Cascade iterate ``phi_J`` of ``phi_{n+1} = 2 sum a(k) phi_n(2x - k)``.

    The hat seed sits on the integer ``s = floor((lo + hi) / 2)`` nearest the
    middle of the support, so the iterate of a mask symmetric about an
    integer keeps its center.  Sampled at ``k / 2**J`` the iterate equals the
    ``J``-fold subdivision of the delta sequence shifted by ``s`` samples.
    """
    if J < 1:
        raise GridMismatch("cascade level must be at least 1")
    lo, h = filter_array(a)
    if abs(h.sum() - 1) > 1e-12:
        raise ValueError("filter must satisfy a(1) = 1")
    hi = lo + len(h) - 1
    s = (lo + hi) // 2
    c = np.ones(1, dtype=h.dtype)
    for _ in range(J):
        up = np.zeros(2 * len(c) - 1, dtype=c.dtype)
        up[::2] = c
        c = 2 * np.convolve(up, h)
    # c covers grid indices lo*(2^J - 1) + s .. hi*(2^J - 1) + s
    vals = np.zeros((hi - lo) * 2**J + 1, dtype=c.dtype)
    off = lo * (2**J - 1) + s - lo * 2**J
    vals[off : off + len(c)] = c
    return SampledFunction(J, vals, float(lo), float(hi))


def _combine(phi: SampledFunction, u: LaurentPoly, dilate: bool) -> SampledFunction:
    """``sum u(k) phi(x - k)`` or ``2 sum u(k) phi(2x - k)``."""
    J = phi.level
    ulo, coef = filter_array(u)
    uhi = ulo + len(coef) - 1
    if dilate:
        if J < 1:
            raise GridMismatch("dilation needs level >= 1")
        lo, hi = (phi.lo + ulo) / 2, (phi.hi + uhi) / 2
    else:
        lo, hi = phi.lo + ulo, phi.hi + uhi
    m = round(lo * 2**J) + np.arange(round((hi - lo) * 2**J) + 1)
    dtype = np.result_type(phi.values, coef)
    vals = np.zeros(len(m), dtype=dtype)
    for i, ck in enumerate(coef):
        if ck == 0:
            continue
        k = ulo + i
        if dilate:
            vals += 2 * ck * phi.at_index(2 * m - k * 2**J)
        else:
            vals += ck * phi.at_index(m - k * 2**J)
    return SampledFunction(J, vals, lo, hi)


def derive_functions(bank, phi: SampledFunction):
    """``(eta, psi1, psi2)`` sampled on the grid of ``phi``."""
    eta = _combine(phi, bank.theta, dilate=False)
    psi1 = _combine(phi, bank.b1, dilate=True)
    psi2 = _combine(phi, bank.b2, dilate=True)
    return eta, psi1, psi2


def moment(f: SampledFunction, j: int) -> float:
    """Trapezoid approximation of the ``j``-th moment of ``f``."""
    x = f.x
    return float(np.trapezoid(f.values * x**j, x))


def sm_estimate(a: LaurentPoly) -> float:
    """L2 smoothness exponent via the transition operator of ``b b*``.

    Write ``a = ((1+z)/2)**n b`` with ``n = sr(a)``; then
    ``sm(a) = n - log2(rho(T)) / 2`` where ``T[j, k] = 2 beta(2j - k)``
    and ``beta`` are the coefficients of ``b b*``.
    """
    n = sr(a)
    if n == 0:
        raise ValueError("sm_estimate needs at least one sum rule")
    b = exact_div(a * 2**n, LaurentPoly({0: 1, 1: 1}) ** n)
    blo, bc = filter_array(b)
    beta = np.convolve(bc, np.conj(bc[::-1]))
    K = len(bc) - 1  # beta lives on [-K, K]
    idx = np.arange(-K, K + 1)
    d = 2 * idx[:, None] - idx[None, :] + K
    ok = (d >= 0) & (d <= 2 * K)
    T = np.where(ok, 2 * beta[np.clip(d, 0, 2 * K)], 0)
    rho = max(abs(np.linalg.eigvals(T)))
    return float(n - 0.5 * np.log2(rho))


def write_function_csv(f: SampledFunction, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        vals = f.values.real if np.iscomplexobj(f.values) else f.values
        for x, v in zip(f.x, vals):
            w.writerow([repr(float(x)), repr(float(v))])


def write_stem_csv(u: LaurentPoly, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "value"])
        for k, v in u.items():
            w.writerow([k, format_scalar(v)])
