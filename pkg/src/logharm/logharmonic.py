"""Logharmonic mappings ``f = z h conj(g)`` built from a rotation and a dilatation.

Given the analytic rotation ``phi = z h g`` and the second dilatation ``a``
(with ``a(0) = 0``), the factor ``g`` solves ``g'/g = a/(1+a) * phi'/phi``.
Writing ``I`` for the antiderivative of the right-hand side, ``g = exp(I)`` and
``f = phi * exp(-2i Im I)``.  Everything here is series arithmetic; pointwise
evaluation happens only at the very end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import (
    BadNormalization,
    DegenerateDenominator,
    DilatationNotVanishing,
    NotHerglotz,
    NotRealCoefficient,
    NotTypicallyReal,
    OutsideRadius,
)
from .grid import DEFAULT_ANGLES, DEFAULT_RADII, disk_grid
from .series import DIV_EPS, DTYPE, TaylorSeries, tail_estimate

NORM_TOL = 1e-12
REAL_TOL = 1e-10
POSITIVITY_TOL = -1e-9


def _unimodular(I, z, check):
    return np.exp(-2j * np.imag(I(z, check=check)))


@dataclass(frozen=True, eq=False)
class LogharmonicMap:
    """A normalized logharmonic map and the series it was built from.

    ``rotation_fn`` optionally replaces series evaluation of ``phi`` by an
    exact closed form (used for the canonical factor ``z/(1-z^2)``).
    """

    phi: TaylorSeries
    a: TaylorSeries
    g: TaylorSeries
    h: TaylorSeries
    I: TaylorSeries
    rotation_fn: Optional[Callable] = None

    @property
    def radius_hint(self):
        return min(self.phi.radius_hint, self.a.radius_hint)

    @cached_property
    def Phi(self):
        return self.phi.shift_down()

    @cached_property
    def zlogder_phi(self):
        """Series of ``z phi'/phi``."""
        return self.phi.derivative() / self.Phi

    @cached_property
    def p(self):
        """``(1 - z^2) phi / z``; decays fast for typically real rotations."""
        return rogosinski_p(self.phi)

    @cached_property
    def zlogder_p(self):
        return self.p.derivative().shift_up() / self.p

    def zlogder_rotation(self, z, check=True):
        """``z phi'/phi``, from whichever of two exact identities truncates less.

        Either the series of ``z phi'/phi`` itself, or
        ``(1+z^2)/(1-z^2) + z p'/p`` with the Moebius part in closed form; the
        choice is made per point from the two tail estimates.
        """
        z = np.asarray(z, dtype=np.complex128)
        w = z * z
        split = (1.0 + w) / (1.0 - w) + self.zlogder_p(z, check=check)
        direct = self.zlogder_phi(z, check=check)
        use_split = tail_estimate(self.zlogder_p, z) <= tail_estimate(self.zlogder_phi, z)
        out = np.where(use_split, split, direct)
        return out[()] if out.ndim == 0 else out

    @cached_property
    def logder_g(self):
        """Series of ``g'/g``, which is ``I'`` exactly."""
        return self.I.derivative()

    @cached_property
    def zlogder_g(self):
        return self.logder_g.shift_up()

    def rotation(self, z, check=True):
        if self.rotation_fn is not None:
            z = np.asarray(z, dtype=np.complex128)
            if check and np.max(np.abs(z), initial=0.0) > self.phi.radius_hint * (1 + 1e-12):
                raise OutsideRadius(f"|z| exceeds radius_hint {self.phi.radius_hint}")
            return self.rotation_fn(z)
        return self.phi(z, check=check)

    def dilatation(self, z, check=True):
        return self.a(z, check=check)

    def __call__(self, z, check=True):
        """``f(z) = phi(z) exp(-2i Im I(z))``."""
        return self.rotation(z, check) * _unimodular(self.I, z, check)

    def closed_h_g(self, z, check=True):
        """``f(z)`` evaluated as ``z h(z) conj(g(z))`` from the truncated factors."""
        z = np.asarray(z, dtype=np.complex128)
        return z * self.h(z, check=check) * np.conj(self.g(z, check=check))

    def wirtinger(self, z, check=True):
        """Return ``(f, f_z, f_zbar)`` at ``z`` (scalar or array).

        ``f_z = Phi U (z phi'/phi - z g'/g)`` and ``f_zbar = f conj(g'/g)``
        with ``U`` the unimodular factor, so the origin needs no special case:
        ``f(0) = 0``, ``f_z(0) = phi'(0)``, ``f_zbar(0) = 0``.
        """
        z = np.asarray(z, dtype=np.complex128)
        U = _unimodular(self.I, z, check)
        Phi = self.Phi(z, check=check)
        f = z * Phi * U
        fz = Phi * U * (self.zlogder_phi(z, check=check) - self.zlogder_g(z, check=check))
        fzbar = f * np.conj(self.logder_g(z, check=check))
        return f, fz, fzbar

    def pde_residual(self, z):
        """``|conj(f_zbar/f) - a f_z/f|`` at nonzero ``z``."""
        z = np.asarray(z, dtype=np.complex128)
        f, fz, fzbar = self.wirtinger(z)
        return np.abs(np.conj(fzbar / f) - self.a(z) * fz / f)

    def jacobian(self, z):
        _, fz, fzbar = self.wirtinger(z)
        return np.abs(fz) ** 2 - np.abs(fzbar) ** 2


@dataclass(frozen=True, eq=False)
class HerglotzFactor:
    """Member ``w = p exp(-2i Im J)`` of the Herglotz-type logharmonic class."""

    p: TaylorSeries
    a: TaylorSeries
    I: TaylorSeries

    def __call__(self, z, check=True):
        return self.p(z, check=check) * _unimodular(self.I, z, check)


@dataclass(frozen=True, eq=False)
class FactorPair:
    """``f = q w`` with ``q`` the canonical factor and ``w`` the Herglotz factor."""

    q: LogharmonicMap
    w: HerglotzFactor

    @property
    def p(self):
        return self.w.p

    def __call__(self, z, check=True):
        return self.q(z, check) * self.w(z, check)


def _check_rotation(phi):
    if abs(phi[0]) > DIV_EPS:
        raise BadNormalization(f"rotation must vanish at 0, got phi(0) = {phi[0]!r}")
    if abs(phi[1]) <= DIV_EPS:
        raise BadNormalization("rotation must have phi'(0) != 0")


def _check_dilatation(a):
    if abs(a[0]) > DIV_EPS:
        raise DilatationNotVanishing(
            f"dilatation must satisfy a(0) = 0, got {a[0]!r}"
        )


def _ratio(a):
    return a / (1.0 + a)


def log_integral(phi, a):
    """Antiderivative of ``a/(1+a) * phi'/phi`` vanishing at 0.

    ``a/(1+a)`` vanishes at the origin, so dividing it by ``z`` cancels the
    simple pole of ``phi'/phi``.
    """
    _check_rotation(phi)
    _check_dilatation(a)
    Phi = phi.shift_down()
    integrand = _ratio(a).shift_down(atol=np.inf) * (phi.derivative() / Phi)
    return integrand.antiderivative()


def construct_g(phi, a):
    """The factor ``g = exp(int_0^z a/(1+a) phi'/phi)``."""
    return log_integral(phi, a).exp()


def construct_map(phi, a, rotation_fn=None):
    I = log_integral(phi, a)
    g = I.exp()
    h = phi.shift_down() / g
    return LogharmonicMap(phi=phi, a=a, g=g, h=h, I=I, rotation_fn=rotation_fn)


def canonical_rotation(order, radius_hint):
    """Series of ``z/(1-z^2)``."""
    c = np.zeros(order + 1, dtype=DTYPE)
    c[1::2] = 1.0
    return TaylorSeries(c, radius_hint)


def _canonical_fn(z):
    return z / (1.0 - z * z)


def construct_q(a):
    """Member of the canonical class with rotation ``z/(1-z^2)``."""
    phi = canonical_rotation(a.order, a.radius_hint)
    return construct_map(phi, a, rotation_fn=_canonical_fn)


def rogosinski_p(phi):
    """``p = (1 - z^2) phi / z``, truncated like any other series product."""
    _check_rotation(phi)
    Phi = phi.shift_down()
    z = TaylorSeries.variable(Phi.order, Phi.radius_hint)
    return (1.0 - z * z) * Phi


def _grid_min_real(s, radii, count):
    pts = disk_grid(radii, count)
    vals = s(pts).real
    k = np.unravel_index(np.argmin(vals), vals.shape)
    return float(vals[k]), complex(pts[k])


def construct_w(p, a, radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """Herglotz factor ``w = p exp(-2i Im int_0^z a/(1+a) p'/p)``."""
    if abs(p[0] - 1.0) > NORM_TOL:
        raise BadNormalization(f"p must satisfy p(0) = 1, got {p[0]!r}")
    if not p.is_real(REAL_TOL):
        raise NotRealCoefficient(
            f"p has a coefficient with imaginary part {p.max_imag_coeff():.3g}"
        )
    low, where = _grid_min_real(p, radii, count)
    if low <= 0.0:
        raise NotHerglotz(f"Re p = {low:.6g} <= 0 at z = {where:.6g}")
    _check_dilatation(a)
    I = (_ratio(a) * (p.derivative() / p)).antiderivative()
    return HerglotzFactor(p=p, a=a, I=I)


def factorize(m, radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """Split ``f`` into the canonical factor ``q`` and the Herglotz factor ``w``."""
    p = rogosinski_p(m.phi)
    if not p.is_real(REAL_TOL):
        raise NotTypicallyReal(
            f"(1-z^2) phi/z has non-real coefficients (max |Im| = {p.max_imag_coeff():.3g})"
        )
    low, where = _grid_min_real(p, radii, count)
    if low <= POSITIVITY_TOL:
        raise NotTypicallyReal(f"Re (1-z^2) phi/z = {low:.6g} at z = {where:.6g}")
    return FactorPair(q=construct_q(m.a), w=construct_w(p, m.a, radii, count))


def corollary1_transform(m, radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """The map ``q^2/f = q/w``, as a logharmonic map with the same dilatation.

    Its rotation is ``z / ((1-z^2) p)``; ``1/p`` is again Herglotz with real
    coefficients.
    """
    pair = factorize(m, radii, count)
    p = pair.p
    phi_new = canonical_rotation(m.phi.order, m.phi.radius_hint) / p

    def rotation_fn(z):
        return _canonical_fn(z) / p(z, check=False)

    return construct_map(phi_new, m.a, rotation_fn=rotation_fn)


def recover_dilatation(h, g):
    """``a = z (g'/g) / (1 + z h'/h)``; vanishes at the origin by construction."""
    if abs(h[0] - 1.0) > NORM_TOL or abs(g[0] - 1.0) > NORM_TOL:
        raise BadNormalization("recover_dilatation needs h(0) = g(0) = 1")
    num = (g.derivative() / g).shift_up()
    den = 1.0 + (h.derivative() / h).shift_up()
    if abs(den[0]) <= DIV_EPS:
        raise DegenerateDenominator("1 + z h'/h vanishes at the origin")
    return num / den


def map_from_factors(h, g):
    """Build the map ``z h conj(g)`` from its analytic factors."""
    phi = (h * g).shift_up()
    return construct_map(phi, recover_dilatation(h, g))
