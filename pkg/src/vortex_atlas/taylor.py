"""Truncated multivariate Taylor arithmetic over complex coefficients.

Series are dense: every coefficient of total degree <= ``order`` is stored,
indexed in graded-lex order (degree first, then lexicographic with the
first variable dominant). Arithmetic is exact modulo truncation, so a jet
computed by evaluating an expression over seeded series carries the exact
partial derivatives of the expression at the base point.

Coefficients are either scalars (shape ``(ncoeff,)``) or sample batches
(shape ``(ncoeff, nsamples)``); a batched series evaluates a jet at many
base points at once through the same code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backend
from .errors import DivisionNearZero, NumericError, ShapeError

DEFAULT_ORDER = 6
MAX_ORDER = 10
TAU_DIV = 1e-12

_ELEMENTARY = ("sin", "cos", "exp", "neg", "recip")


@lru_cache(maxsize=None)
def exponent_list(nvars, order):
    """All exponent tuples with total degree <= order, graded-lex sorted."""
    exps = []
    def rec(prefix, budget):
        if len(prefix) == nvars:
            exps.append(prefix)
            return
        for p in range(budget + 1):
            rec(prefix + (p,), budget - p)
    rec((), order)
    exps.sort(key=lambda e: (sum(e), tuple(-c for c in e)))
    return tuple(exps)


@dataclass(frozen=True)
class MulTable:
    """Precomputed index triples for the truncated Cauchy product."""

    nvars: int
    order: int
    size: int
    ii: np.ndarray
    jj: np.ndarray
    kk: np.ndarray
    seg_starts: np.ndarray


@lru_cache(maxsize=None)
def mul_table(nvars, order):
    exps = exponent_list(nvars, order)
    pos = {e: i for i, e in enumerate(exps)}
    degs = [sum(e) for e in exps]
    triples = []
    for i, ei in enumerate(exps):
        for j, ej in enumerate(exps):
            if degs[i] + degs[j] > order:
                continue
            k = pos[tuple(a + b for a, b in zip(ei, ej))]
            triples.append((k, i, j))
    triples.sort()
    kk = np.array([t[0] for t in triples], dtype=np.int32)
    ii = np.array([t[1] for t in triples], dtype=np.int32)
    jj = np.array([t[2] for t in triples], dtype=np.int32)
    seg_starts = np.searchsorted(kk, np.arange(len(exps)), side="left")
    return MulTable(nvars, order, len(exps), ii, jj, kk,
                    seg_starts.astype(np.int64))


@lru_cache(maxsize=None)
def _position(nvars, order):
    return {e: i for i, e in enumerate(exponent_list(nvars, order))}


@lru_cache(maxsize=None)
def _diff_map(nvars, order, axis):
    """Index pairs and factors implementing d/dx_axis on coefficient arrays."""
    exps = exponent_list(nvars, order)
    pos = _position(nvars, order)
    src, dst, fac = [], [], []
    for i, e in enumerate(exps):
        if e[axis] == 0:
            continue
        lowered = tuple(p - 1 if ax == axis else p for ax, p in enumerate(e))
        src.append(i)
        dst.append(pos[lowered])
        fac.append(e[axis])
    return (np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp),
            np.array(fac, dtype=np.float64))


def _check_shape(nvars, order):
    if nvars not in (2, 3, 4):
        raise ShapeError(f"nvars must be 2, 3 or 4, got {nvars}")
    if not 0 <= order <= MAX_ORDER:
        raise ShapeError(f"order must be in [0, {MAX_ORDER}], got {order}")


def _guard(coeffs, opname):
    if not np.isfinite(coeffs).all():
        raise NumericError(f"non-finite coefficients produced by {opname}")
    return coeffs


class TruncatedSeries:
    """Dense truncated Taylor series; immutable after construction."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars, order, coeffs):
        _check_shape(nvars, order)
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        n = len(exponent_list(nvars, order))
        if coeffs.shape[0] != n or coeffs.ndim not in (1, 2):
            raise ShapeError(
                f"coefficient array of shape {coeffs.shape} does not match "
                f"{n} slots for nvars={nvars}, order={order}")
        self.nvars = nvars
        self.order = order
        self.coeffs = np.ascontiguousarray(coeffs)

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value, nvars, order):
        value = np.asarray(value, dtype=np.complex128)
        n = len(exponent_list(nvars, order))
        shape = (n,) if value.ndim == 0 else (n,) + value.shape
        coeffs = np.zeros(shape, dtype=np.complex128)
        coeffs[0] = value
        return cls(nvars, order, coeffs)

    @classmethod
    def variable(cls, index, basepoint, nvars, order):
        """Seed series x0 + X_index."""
        if not 0 <= index < nvars:
            raise ShapeError(f"variable index {index} out of range for {nvars}")
        s = cls.constant(basepoint, nvars, order)
        if order >= 1:
            unit = tuple(1 if ax == index else 0 for ax in range(nvars))
            s.coeffs[_position(nvars, order)[unit]] = 1.0
        return s

    # -- basic queries -------------------------------------------------

    @property
    def batch_size(self):
        return None if self.coeffs.ndim == 1 else self.coeffs.shape[1]

    @property
    def constant_term(self):
        return self.coeffs[0]

    def coeff(self, exponents):
        """Taylor coefficient for a multi-index."""
        return self.coeffs[_position(self.nvars, self.order)[tuple(exponents)]]

    def deriv(self, exponents):
        """Partial-derivative value: coefficient times the factorial weight."""
        w = 1.0
        for p in exponents:
            w *= math.factorial(p)
        return self.coeff(exponents) * w

    def norm(self):
        """Largest coefficient magnitude (used for relative tolerances)."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def column(self, idx):
        """Scalar series for one sample of a batched series."""
        if self.coeffs.ndim == 1:
            raise ShapeError("series is not batched")
        return TruncatedSeries(self.nvars, self.order, self.coeffs[:, idx])

    # -- arithmetic ----------------------------------------------------

    def _compatible(self, other):
        if self.nvars != other.nvars or self.order != other.order:
            raise ShapeError(
                f"series shapes differ: ({self.nvars},{self.order}) vs "
                f"({other.nvars},{other.order})")

    def _coerce(self, value):
        if isinstance(value, TruncatedSeries):
            self._compatible(value)
            return value
        return TruncatedSeries.constant(value, self.nvars, self.order)

    @staticmethod
    def _pair(a, b):
        if a.ndim == b.ndim:
            return a, b
        return (a[:, None], b) if a.ndim == 1 else (a, b[:, None])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self._pair(self.coeffs, other.coeffs)
        return TruncatedSeries(self.nvars, self.order, _guard(a + b, "add"))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        a, b = self._pair(self.coeffs, other.coeffs)
        return TruncatedSeries(self.nvars, self.order, _guard(a - b, "sub"))

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return TruncatedSeries(self.nvars, self.order, -self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            out = self.coeffs * np.asarray(other, dtype=np.complex128)
            return TruncatedSeries(self.nvars, self.order, _guard(out, "mul"))
        self._compatible(other)
        table = mul_table(self.nvars, self.order)
        out = backend.series_product(self.coeffs, other.coeffs, table)
        return TruncatedSeries(self.nvars, self.order, _guard(out, "mul"))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.recip()
        return self * (1.0 / np.asarray(other, dtype=np.complex128))

    def pow(self, n):
        """Integer power by binary exponentiation."""
        if n != int(n) or n < 0:
            raise ShapeError(f"series exponent must be a non-negative integer, got {n}")
        n = int(n)
        result = TruncatedSeries.constant(
            np.ones(() if self.batch_size is None else (self.batch_size,)),
            self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    __pow__ = pow

    # -- calculus and structure -----------------------------------------

    def diff(self, axis):
        """Partial derivative; exact for degrees <= order-1."""
        src, dst, fac = _diff_map(self.nvars, self.order, axis)
        out = np.zeros_like(self.coeffs)
        if self.coeffs.ndim == 1:
            out[dst] = self.coeffs[src] * fac
        else:
            out[dst] = self.coeffs[src] * fac[:, None]
        return TruncatedSeries(self.nvars, self.order, out)

    def real_part(self):
        return TruncatedSeries(self.nvars, self.order,
                               self.coeffs.real.astype(np.complex128))

    def imag_part(self):
        return TruncatedSeries(self.nvars, self.order,
                               self.coeffs.imag.astype(np.complex128))

    def conj(self):
        return TruncatedSeries(self.nvars, self.order, np.conj(self.coeffs))

    def truncate(self, order):
        """Drop coefficients above a lower order."""
        if order > self.order:
            raise ShapeError("cannot raise the order of a series")
        keep = [i for i, e in enumerate(exponent_list(self.nvars, self.order))
                if sum(e) <= order]
        return TruncatedSeries(self.nvars, order, self.coeffs[keep])

    def evaluate(self, offsets):
        """Polynomial value at base point + offsets (for validation)."""
        offsets = tuple(offsets)
        if len(offsets) != self.nvars:
            raise ShapeError("offset arity does not match nvars")
        total = 0.0 + 0.0j
        for i, e in enumerate(exponent_list(self.nvars, self.order)):
            term = self.coeffs[i]
            for d, p in zip(offsets, e):
                if p:
                    term = term * d**p
            total = total + term
        return total

    # -- elementary compositions ----------------------------------------

    def _compose_maclaurin(self, derivs):
        # Horner evaluation of sum derivs[n] * p^n with p = self minus its
        # constant term; p is nilpotent under truncation so this is exact.
        p = self - TruncatedSeries.constant(self.constant_term, self.nvars,
                                            self.order)
        acc = TruncatedSeries.constant(derivs[-1], self.nvars, self.order)
        for n in range(self.order - 1, -1, -1):
            acc = acc * p + derivs[n]
        return acc

    def sin(self):
        c0 = self.constant_term
        cycle = (np.sin(c0), np.cos(c0), -np.sin(c0), -np.cos(c0))
        derivs = [cycle[n % 4] / math.factorial(n) for n in range(self.order + 1)]
        return self._compose_maclaurin(derivs)

    def cos(self):
        c0 = self.constant_term
        cycle = (np.cos(c0), -np.sin(c0), -np.cos(c0), np.sin(c0))
        derivs = [cycle[n % 4] / math.factorial(n) for n in range(self.order + 1)]
        return self._compose_maclaurin(derivs)

    def exp(self):
        base = np.exp(self.constant_term)
        derivs = [base / math.factorial(n) for n in range(self.order + 1)]
        return self._compose_maclaurin(derivs)

    def recip(self):
        c0 = self.constant_term
        if np.min(np.abs(c0)) <= TAU_DIV:
            raise DivisionNearZero(
                f"constant term magnitude {np.min(np.abs(c0)):.3g} <= {TAU_DIV}")
        inv = 1.0 / c0
        derivs = [(-1.0) ** n * inv ** (n + 1) for n in range(self.order + 1)]
        return self._compose_maclaurin(derivs)

    def __repr__(self):
        batch = "" if self.batch_size is None else f", batch={self.batch_size}"
        return (f"TruncatedSeries(nvars={self.nvars}, order={self.order}"
                f"{batch}, |c|max={self.norm():.3g})")


# -- module-level operation names ---------------------------------------

def seed_variable(index, basepoint, nvars, order):
    return TruncatedSeries.variable(index, basepoint, nvars, order)


def series_add(s1, s2):
    return s1 + s2


def series_mul(s1, s2):
    return s1 * s2


def series_elementary(fn, s):
    if fn not in _ELEMENTARY:
        raise ShapeError(f"unknown elementary function {fn!r}")
    if fn == "neg":
        return -s
    return getattr(s, fn)()
