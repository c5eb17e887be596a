"""Worked examples and seeded random families of test instances.

Random rotations are built as ``phi = z p / (1 - z^2)`` with ``p`` a convex
combination of dilated Herglotz kernels ``(1 - r^2 z^2) / (1 - 2 r t z + r^2 z^2)``
(real coefficients, ``Re p > 0``).  Random dilatations are ``a = z w(z)`` with
``w(z) = c (z + b) / (1 + conj(b) z)``, a self-map of the disk for ``|c| < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import parse
from .logharmonic import canonical_rotation, construct_map
from .series import DEFAULT_ORDER, DEFAULT_RADIUS, TaylorSeries

EXAMPLE1 = {
    "phi": "z*(1+z^2/9)",
    "a": "-i*z*(3+i*z)/((3-i*z)*(3+2i*z))",
    "h": "1+i*z/3",
    "g": "1-i*z/3",
}

EXAMPLE2 = {
    "phi": "z*exp(4*z/(1-z))",
    "a": "z",
    "h": "exp(2*z/(1-z))/(1-z)",
    "g": "exp(2*z/(1-z))*(1-z)",
}

# Every closed form used by the examples, plus a few canonical shapes.
EXPRESSION_CORPUS = (
    "z",
    "1/(1-z)",
    "z/(1-z)^2",
    "z/(1-z^2)",
    "(1-z)/(1+z)",
    "1-8/9*z^2-z^4/9",
    "z*(1+ (i/3)*z)",
    EXAMPLE1["phi"],
    EXAMPLE1["a"],
    EXAMPLE1["h"],
    EXAMPLE1["g"],
    EXAMPLE2["phi"],
    "exp(4*z/(1-z))",
    EXAMPLE2["h"],
    EXAMPLE2["g"],
    "2.5i*z^3 - z^2/(2+z)",
    "exp(-z)*exp(z)",
)


def example_series(example, order=DEFAULT_ORDER):
    return {k: parse(v).series(order) for k, v in example.items()}


def example_map(example, order=DEFAULT_ORDER):
    s = example_series(example, order)
    return construct_map(s["phi"], s["a"])


@dataclass(frozen=True)
class Instance:
    phi: TaylorSeries
    a: TaylorSeries
    p: TaylorSeries
    seed: int

    def map(self):
        return construct_map(self.phi, self.a)


def herglotz_kernel(r, t, order=DEFAULT_ORDER, radius_hint=DEFAULT_RADIUS):
    z = TaylorSeries.variable(order, radius_hint)
    return (1.0 - (r * z) ** 2) / (1.0 - 2.0 * r * t * z + (r * z) ** 2)


def random_herglotz(rng, order=DEFAULT_ORDER, terms=3, rmax=0.8):
    weights = rng.dirichlet(np.ones(terms))
    p = TaylorSeries.constant(0.0, order)
    for w in weights:
        p = p + w * herglotz_kernel(rng.uniform(0.0, rmax), rng.uniform(-1.0, 1.0), order)
    return p


def random_schwarz(rng, order=DEFAULT_ORDER, real=False, cmax=0.8, bmax=0.7):
    """``z * c (z + b) / (1 + conj(b) z)``."""
    mod_c, mod_b = rng.uniform(0.0, cmax), rng.uniform(0.0, bmax)
    if real:
        c = mod_c * rng.choice([-1.0, 1.0])
        b = mod_b * rng.choice([-1.0, 1.0])
    else:
        c = mod_c * np.exp(2j * np.pi * rng.uniform())
        b = mod_b * np.exp(2j * np.pi * rng.uniform())
    z = TaylorSeries.variable(order)
    return z * (c * (z + b) / (1.0 + np.conj(b) * z))


def random_instance(seed, order=DEFAULT_ORDER, real_dilatation=False):
    rng = np.random.default_rng(seed)
    p = random_herglotz(rng, order)
    phi = canonical_rotation(order, DEFAULT_RADIUS) * p
    a = random_schwarz(rng, order, real=real_dilatation)
    return Instance(phi=phi, a=a, p=p, seed=seed)


def random_instances(count, base_seed=2024, order=DEFAULT_ORDER, real_dilatation=False):
    return [random_instance(base_seed + k, order, real_dilatation) for k in range(count)]
