"""Truncated Taylor series with complex coefficients.

A :class:`TaylorSeries` holds the coefficients ``c[0..order]`` of a power
series about the origin.  Binary operations truncate at the smaller of the two
orders, so every coefficient a result reports is exact (up to rounding) for the
infinite series the inputs represent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideRadius, ZeroConstantTerm

DEFAULT_ORDER = 64
DEFAULT_RADIUS = 0.95
DIV_EPS = 1e-14
# tail estimates above this mark a value as dominated by truncation
TAIL_TOL = 1e-9
# Coefficients are carried in extended precision (80-bit on x86-64; plain
# double where the platform has no wider type).  Pointwise values returned by
# eval_series are complex128.
DTYPE = np.clongdouble


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Immutable truncated power series ``sum_{n<=order} coeffs[n] z**n``.

    ``radius_hint`` is the largest ``|z|`` at which :meth:`eval` trusts the
    truncation.
    """

    coeffs: np.ndarray
    radius_hint: float = DEFAULT_RADIUS
    order: int = field(init=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=DTYPE).ravel()
        if c.size < 2:
            raise ValueError("a TaylorSeries needs order >= 1")
        if not 0.0 < self.radius_hint < 1.0:
            raise ValueError(f"radius_hint must lie in (0, 1), got {self.radius_hint}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "order", c.size - 1)

    # constructors

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER, radius_hint=DEFAULT_RADIUS):
        c = np.zeros(order + 1, dtype=DTYPE)
        c[0] = value
        return cls(c, radius_hint)

    @classmethod
    def variable(cls, order=DEFAULT_ORDER, radius_hint=DEFAULT_RADIUS):
        c = np.zeros(order + 1, dtype=DTYPE)
        c[1] = 1.0
        return cls(c, radius_hint)

    @classmethod
    def from_coeffs(cls, coeffs, order=None, radius_hint=DEFAULT_RADIUS):
        """Build from a coefficient list, zero-padding or truncating to ``order``."""
        c = np.asarray(coeffs, dtype=DTYPE).ravel()
        if order is None:
            order = max(c.size - 1, 1)
        out = np.zeros(order + 1, dtype=DTYPE)
        n = min(c.size, order + 1)
        out[:n] = c[:n]
        return cls(out, radius_hint)

    def _like(self, coeffs, radius_hint=None):
        return TaylorSeries(coeffs, self.radius_hint if radius_hint is None else radius_hint)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("truncate cannot raise the order")
        return self._like(self.coeffs[: order + 1])

    # arithmetic

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return add(_coerce(other, self), -self)

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return self._like(self.coeffs * other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if np.isscalar(other):
            return self._like(self.coeffs / other)
        return div(self, other)

    def __rtruediv__(self, other):
        return div(_coerce(other, self), self)

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = TaylorSeries.constant(1.0, self.order, self.radius_hint)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __call__(self, z, check=True):
        return eval_series(self, z, check=check)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"TaylorSeries([{head}{more}], order={self.order})"

    # structural helpers

    def shift_up(self, k=1):
        """Multiply by ``z**k``; the order grows by ``k``."""
        return self._like(np.concatenate([np.zeros(k, dtype=DTYPE), self.coeffs]))

    def shift_down(self, k=1, atol=DIV_EPS):
        """Divide by ``z**k``; the first ``k`` coefficients must vanish."""
        if np.any(np.abs(self.coeffs[:k]) > atol):
            raise ZeroConstantTerm(f"series does not vanish to order {k} at the origin")
        return self._like(self.coeffs[k:])

    def derivative(self):
        return derivative(self)

    def antiderivative(self):
        return antiderivative(self)

    def exp(self):
        return exp_series(self)

    def conj_coeffs(self):
        """Series of ``conj(s(conj(z)))``."""
        return self._like(np.conj(self.coeffs))

    def max_imag_coeff(self):
        return float(np.max(np.abs(self.coeffs.imag)))

    def is_real(self, atol=1e-10):
        return self.max_imag_coeff() <= atol


def _coerce(value, like):
    if isinstance(value, TaylorSeries):
        return value
    return TaylorSeries.constant(value, like.order, like.radius_hint)


def _common(s1, s2):
    n = min(s1.order, s2.order)
    return n, min(s1.radius_hint, s2.radius_hint)


def add(s1, s2):
    n, rad = _common(s1, s2)
    return TaylorSeries(s1.coeffs[: n + 1] + s2.coeffs[: n + 1], rad)


def mul(s1, s2):
    """Cauchy product truncated at the common order."""
    n, rad = _common(s1, s2)
    return TaylorSeries(np.convolve(s1.coeffs[: n + 1], s2.coeffs[: n + 1])[: n + 1], rad)


def div(s1, s2, eps=DIV_EPS):
    """Power-series long division ``s1 / s2``.

    Raises :class:`ZeroConstantTerm` when ``|s2[0]| <= eps``; factor out the
    power of ``z`` first in that case.
    """
    n, rad = _common(s1, s2)
    b = s2.coeffs[: n + 1]
    if abs(b[0]) <= eps:
        raise ZeroConstantTerm(f"divisor constant term {b[0]!r} is numerically zero")
    a = s1.coeffs[: n + 1]
    q = np.zeros(n + 1, dtype=DTYPE)
    inv_b0 = 1.0 / b[0]
    for k in range(n + 1):
        # q[k] = (a[k] - sum_{j=1..k} b[j] q[k-j]) / b[0]
        acc = a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k]) if k else a[0]
        q[k] = acc * inv_b0
    return TaylorSeries(q, rad)


def exp_series(s):
    """``exp(s)`` through the recurrence ``n E_n = sum_k k s_k E_{n-k}``."""
    n = s.order
    c = s.coeffs
    ks = np.arange(n + 1) * c
    e = np.zeros(n + 1, dtype=DTYPE)
    e[0] = np.exp(c[0])
    for m in range(1, n + 1):
        e[m] = np.dot(ks[1 : m + 1], e[m - 1 :: -1][:m]) / m
    return TaylorSeries(e, s.radius_hint)


def derivative(s):
    """Termwise derivative; the order drops by one."""
    if s.order < 2:
        raise ValueError("derivative of an order-1 series would have order 0")
    n = np.arange(1, s.order + 1)
    return TaylorSeries(s.coeffs[1:] * n, s.radius_hint)


def antiderivative(s):
    """Termwise antiderivative vanishing at the origin; the order grows by one."""
    n = np.arange(1, s.order + 2)
    return TaylorSeries(np.concatenate([[0.0], s.coeffs / n]), s.radius_hint)


def eval_series(s, z, check=True):
    """Horner evaluation at a scalar or an array of points."""
    z = np.asarray(z, dtype=np.complex128)
    if check and z.size and np.max(np.abs(z)) > s.radius_hint * (1 + 1e-12):
        raise OutsideRadius(
            f"|z| = {np.max(np.abs(z)):.6g} exceeds radius_hint {s.radius_hint}"
        )
    zz = z.astype(DTYPE)
    acc = np.zeros_like(zz)
    for c in s.coeffs[::-1]:
        acc = acc * zz + c
    acc = acc.astype(np.complex128)
    return acc[()] if acc.ndim == 0 else acc


def tail_estimate(s, z):
    """Rough bound on the truncation error at ``z``; ``inf`` when unreliable.

    The geometric ratio is read off the last four coefficients (taken in
    pairs, so series with alternating zero coefficients are handled).
    """
    r = np.abs(np.asarray(z, dtype=np.complex128))
    c = np.abs(s.coeffs).astype(float)
    last = max(c[-1], c[-2])
    if last == 0.0:
        return np.zeros_like(r)[()] if r.ndim == 0 else np.zeros_like(r)
    prev = max(c[-3], c[-4]) if s.order >= 3 else 0.0
    ratio = math.sqrt(last / prev) if prev > 0 else math.inf
    denom = 1.0 - r * ratio
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        est = np.where(denom > 0, last * r**s.order / np.where(denom > 0, denom, 1.0), np.inf)
    return est[()] if est.ndim == 0 else est


def eval_with_tail(s, z):
    """Unchecked evaluation together with :func:`tail_estimate`."""
    return eval_series(s, z, check=False), tail_estimate(s, z)
