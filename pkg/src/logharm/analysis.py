"""Grid predicates and metrics for logharmonic maps with typically real rotation.

All checks sample fixed polar grids and report the extremal value they saw.
Positivity uses a signed tolerance of ``-1e-9`` so that functionals touching
zero do not flip verdicts on round-off.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    BadNormalization,
    LogharmError,
    NotTypicallyReal,
    OutsideRadius,
    PreconditionFailed,
)
from .expr import FunctionSpec, pointwise_eval
from .grid import DEFAULT_ANGLES, DEFAULT_RADII, angles as grid_angles, disk_grid
from .logharmonic import (
    POSITIVITY_TOL,
    REAL_TOL,
    construct_map,
    factorize,
    rogosinski_p,
)
from .series import TAIL_TOL, tail_estimate

STARLIKE_RADIUS = 3.0 - 2.0 * math.sqrt(2.0)
KIRWAN_RADIUS = math.sqrt(2.0) - 1.0
FINE_ANGLES = 4096
CIRCLE_ANGLES = 8192
MAX_METRIC_RADIUS = 0.9


@dataclass
class CheckReport:
    passed: bool
    extremal_value: float
    extremal_point: complex
    radii: tuple
    angles: int
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["extremal_point"] = _cplx(self.extremal_point)
        d["radii"] = list(self.radii)
        d["details"] = _jsonable(self.details)
        return d


@dataclass
class RadiusResult:
    radius: float
    angles: int
    tolerance: float
    lower_bound_ref: float = STARLIKE_RADIUS
    capped: bool = False
    min_functional: float = float("nan")

    def to_dict(self):
        return asdict(self)


@dataclass
class ArclengthReport:
    r: float
    components: tuple
    component_bounds: tuple
    arclength: float
    max_modulus: float
    total_bound: float
    closed_bound: float
    checks: dict

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        d = asdict(self)
        d["components"] = list(self.components)
        d["component_bounds"] = list(self.component_bounds)
        d["passed"] = self.passed
        return d


@dataclass
class BoundaryExtrema:
    component: str
    max: float
    argmax: float
    min: float
    argmin: float

    def to_dict(self):
        return asdict(self)


def _cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return _cplx(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _argmin(vals, pts):
    k = np.unravel_index(np.argmin(vals), vals.shape)
    return float(vals[k]), complex(pts[k])


# one-dimensional extremum search on a circle

def _refine_min(fun, thetas, vals):
    """Grid minimum of a periodic function of the angle, refined by bounded Brent."""
    k = int(np.argmin(vals))
    step = thetas[1] - thetas[0]
    res = minimize_scalar(
        fun, bounds=(thetas[k] - step, thetas[k] + step), method="bounded",
        options={"xatol": 1e-12},
    )
    if res.success and res.fun < vals[k]:
        t, v = float(res.x), float(res.fun)
    else:
        t, v = float(thetas[k]), float(vals[k])
    return v, _polish_critical(fun, t, step)


def _polish_critical(fun, t, step, h=1e-5):
    """Sharpen a smooth extremum location by a root of the central difference."""
    d = lambda s: (fun(s + h) - fun(s - h)) / (2 * h)
    lo, hi = t - step / 4, t + step / 4
    try:
        if d(lo) * d(hi) < 0:
            return brentq(d, lo, hi, xtol=1e-14)
    except (ValueError, LogharmError):
        pass
    return t


def _circle_min(fun_z, r, count):
    """Minimum of a real function of z over the circle |z| = r."""
    thetas = grid_angles(count)
    vals = fun_z(r * np.exp(1j * thetas))
    scalar = lambda t: float(fun_z(r * np.exp(1j * t)))
    v, t = _refine_min(scalar, thetas, vals)
    return min(v, float(scalar(t))), t


# typical realness

def typically_real_check(phi, radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """Decide typical realness through ``p = (1-z^2) phi/z``.

    Passes iff ``p`` has real coefficients and ``Re p > -1e-9`` on the grid.
    Radii where the truncation tail of ``p`` exceeds ``TAIL_TOL`` are left out
    of the verdict (their minimum is still reported).  The direct sign
    ``Im z * Im phi(z)`` is reported as a diagnostic.
    """
    if abs(phi[0]) > 1e-14 or abs(phi[1] - 1.0) > 1e-12:
        raise BadNormalization("typical realness needs phi(0) = 0 and phi'(0) = 1")
    p = rogosinski_p(phi)
    imag = p.max_imag_coeff()
    trusted = tuple(r for r in radii if tail_estimate(p, r) <= TAIL_TOL)
    untrusted = tuple(r for r in radii if r not in trusted)
    pts = disk_grid(trusted or radii, count)
    low, where = _argmin(p(pts).real, pts)

    off_axis = np.abs(pts.imag) > 1e-12
    sign = (pts.imag * phi(pts).imag)[off_axis]
    s_low, s_where = _argmin(sign, pts[off_axis])

    details = {
        "max_imag_coeff_p": imag,
        "min_re_p": low,
        "witness": where,
        "direct_sign_min": s_low,
        "direct_sign_at": s_where,
        "untrusted_radii": list(untrusted),
    }
    if trusted and untrusted:
        far = disk_grid(untrusted, count)
        details["untrusted_min_re_p"] = float(np.min(p(far).real))

    passed = imag <= REAL_TOL and low > POSITIVITY_TOL
    return CheckReport(
        passed=bool(passed),
        extremal_value=low,
        extremal_point=where,
        radii=tuple(radii),
        angles=count,
        tolerance=POSITIVITY_TOL,
        details=details,
    )


# starlikeness

def starlike_functional(m, z):
    """``Re[(1-a)/(1+a) * z phi'/phi]``; equals 1 at the origin."""
    z = np.asarray(z, dtype=np.complex128)
    a = m.a(z)
    out = np.real((1.0 - a) / (1.0 + a) * m.zlogder_rotation(z))
    return out[()] if out.ndim == 0 else out


def starlike_functional_wirtinger(m, z):
    """The same functional as ``Re[(z f_z - conj(z) f_zbar) / f]``."""
    z = np.asarray(z, dtype=np.complex128)
    f, fz, fzbar = m.wirtinger(z)
    out = np.real((z * fz - np.conj(z) * fzbar) / f)
    return out[()] if out.ndim == 0 else out


def analytic_map(phi):
    """The map with dilatation zero, i.e. the analytic function ``phi`` itself."""
    zero = phi * 0.0
    return construct_map(phi, zero)


def radius_of_starlikeness(m, count=FINE_ANGLES, tol=1e-9, require_typically_real=True):
    """Largest r whose circle has a non-negative starlike functional (bisection).

    The functional is the real part of an analytic function, so its minimum
    over |z| <= r is attained on |z| = r and decreases with r.  The search is
    capped at the map's ``radius_hint``; ``capped`` is set when the functional
    stays non-negative all the way there.
    """
    if require_typically_real and not typically_real_check(m.phi).passed:
        raise NotTypicallyReal("rotation is not typically real")
    fun = lambda z: starlike_functional(m, z)
    rmax = m.radius_hint
    top, _ = _circle_min(fun, rmax, count)
    if top >= -tol:
        return RadiusResult(rmax, count, tol, capped=True, min_functional=top)
    lo, hi = 0.0, rmax
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if _circle_min(fun, mid, count)[0] >= -tol:
            lo = mid
        else:
            hi = mid
    return RadiusResult(lo, count, tol, min_functional=_circle_min(fun, lo, count)[0])


# arclength

def _check_metric_radius(r):
    if not 0.0 < r <= MAX_METRIC_RADIUS:
        raise OutsideRadius(f"metrics are defined for 0 < r <= {MAX_METRIC_RADIUS}, got {r}")


def arclength(m, r, count=FINE_ANGLES):
    """Length of the image of |z| = r by the trapezoidal rule."""
    _check_metric_radius(r)
    z = r * np.exp(1j * grid_angles(count))
    _, fz, fzbar = m.wirtinger(z)
    return float(2.0 * np.pi * np.mean(np.abs(z * fz - np.conj(z) * fzbar)))


def max_modulus(m, r, count=FINE_ANGLES):
    """``max |f|`` on |z| = r; ``|f| = |phi|`` so the rotation is sampled."""
    _check_metric_radius(r)
    neg = lambda z: -np.abs(m.rotation(z))
    v, _ = _circle_min(neg, r, count)
    return -v


def arclength_bound_report(m, r, count=FINE_ANGLES):
    """Component integrals of the arclength estimate and their closed-form bounds."""
    _check_metric_radius(r)
    pair = factorize(m)
    p = pair.p
    z = r * np.exp(1j * grid_angles(count))
    a = m.a(z)
    ratio = (1.0 - a) / (1.0 + a)
    zlogp = z * p.derivative()(z) / p(z)
    kernel = (1.0 + z * z) / (1.0 - z * z)
    mean = lambda v: float(2.0 * np.pi * np.mean(v))
    comps = (
        mean(np.abs(np.real(ratio * zlogp))),
        mean(np.abs(np.real(ratio * kernel))),
        mean(np.abs(np.imag(zlogp))),
        mean(np.abs(np.imag(kernel))),
    )
    bounds = (
        4 * np.pi * r / (1 - r) ** 2,
        2 * np.pi * (1 + 3 * r * r) / (1 - r * r),
        4 * np.pi * r / (1 - r * r),
        2 * np.pi * (1 + r * r) / (1 - r * r),
    )
    L = arclength(m, r, count)
    M = max_modulus(m, r, count)
    closed = 4 * np.pi * M * (1 + r + 2 * r**2 - 2 * r**3) / ((1 - r) * (1 - r * r))
    checks = {f"I{k + 1}": comps[k] <= bounds[k] for k in range(4)}
    checks["L<=M*sum(I)"] = L <= M * sum(comps) * (1 + 1e-12)
    checks["L<=closed"] = L <= closed
    return ArclengthReport(
        r=r,
        components=comps,
        component_bounds=tuple(float(b) for b in bounds),
        arclength=L,
        max_modulus=M,
        total_bound=M * sum(comps),
        closed_bound=float(closed),
        checks={k: bool(v) for k, v in checks.items()},
    )


# symmetry

def symmetry_check(m, radii=DEFAULT_RADII, count=DEFAULT_ANGLES, coeff_tol=1e-10, point_tol=1e-9):
    """Real coefficients of ``a, g, h`` and pointwise ``f(conj z) = conj f(z)``."""
    coeff = max(m.a.max_imag_coeff(), m.g.max_imag_coeff(), m.h.max_imag_coeff())
    pts = disk_grid(radii, count)
    dev = np.abs(m(np.conj(pts)) - np.conj(m(pts)))
    k = np.unravel_index(np.argmax(dev), dev.shape)
    coeff_ok = coeff <= coeff_tol
    point_ok = dev[k] <= point_tol
    return CheckReport(
        passed=bool(coeff_ok and point_ok),
        extremal_value=float(dev[k]),
        extremal_point=complex(pts[k]),
        radii=tuple(radii),
        angles=count,
        tolerance=point_tol,
        details={
            "max_imag_coeff": coeff,
            "coefficient_test": bool(coeff_ok),
            "pointwise_test": bool(point_ok),
            "tests_agree": bool(coeff_ok == point_ok),
        },
    )


def closed_form_map(h, g):
    """Pointwise ``z h(z) conj(g(z))`` from closed-form factors."""
    def F(z):
        z = np.asarray(z, dtype=np.complex128)
        return z * pointwise_eval(h, z) * np.conj(pointwise_eval(g, z))
    return F


def boundary_image_extrema(fn, component="im", count=CIRCLE_ANGLES, singularities=(), exclusion=1e-3):
    """Extrema of ``Re`` or ``Im`` of ``fn(e^{it})`` for ``t`` in ``[-pi, pi)``.

    ``fn`` is a vectorized callable or a :class:`FunctionSpec`.  Arcs of half
    width ``exclusion`` around the angles in ``singularities`` are skipped.
    """
    if isinstance(fn, FunctionSpec):
        spec = fn
        fn = lambda z: pointwise_eval(spec, z)
    part = {"re": np.real, "im": np.imag}[component.lower()]
    t = -np.pi + 2 * np.pi * np.arange(count) / count
    keep = np.ones(count, dtype=bool)
    for s in singularities:
        gap = np.angle(np.exp(1j * (t - s)))
        keep &= np.abs(gap) > exclusion
    t = t[keep]
    vals = part(fn(np.exp(1j * t)))
    scalar = lambda s: float(part(fn(np.exp(1j * s))))
    _, tlo = _refine_min(scalar, t, vals)
    _, thi = _refine_min(lambda s: -scalar(s), t, -vals)
    wrap = lambda s: float(np.angle(np.exp(1j * s)))
    return BoundaryExtrema(component, scalar(thi), wrap(thi), scalar(tlo), wrap(tlo))


# class membership

def membership_TLh(phi, a, radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """Conjunction of the conditions for the class; failures are reported, not raised."""
    details = {}
    extremal = (float("nan"), complex("nan"))
    try:
        tr = typically_real_check(phi, radii, count)
        details["typically_real"] = tr.passed
        details["min_re_p"] = tr.extremal_value
        extremal = (tr.extremal_value, tr.extremal_point)
    except LogharmError as exc:
        details["typically_real"] = False
        details["error"] = f"{type(exc).__name__}: {exc}"
    pts = disk_grid(radii, count)
    try:
        m = construct_map(phi, a)
        details["constructed"] = True
        details["min_abs_h"] = float(np.min(np.abs(m.h(pts))))
        details["min_abs_g"] = float(np.min(np.abs(m.g(pts))))
        details["nonvanishing"] = min(details["min_abs_h"], details["min_abs_g"]) > 1e-9
    except LogharmError as exc:
        details["constructed"] = False
        details["nonvanishing"] = False
        details.setdefault("error", f"{type(exc).__name__}: {exc}")
    try:
        details["max_abs_a"] = float(np.max(np.abs(a(pts))))
        details["sense_preserving"] = details["max_abs_a"] < 1.0
    except LogharmError as exc:
        details["sense_preserving"] = False
        details.setdefault("error", f"{type(exc).__name__}: {exc}")
    keys = ("typically_real", "constructed", "nonvanishing", "sense_preserving")
    return CheckReport(
        passed=all(bool(details.get(k)) for k in keys),
        extremal_value=extremal[0],
        extremal_point=extremal[1],
        radii=tuple(radii),
        angles=count,
        tolerance=POSITIVITY_TOL,
        details=details,
    )


def alternate_g(m):
    """``g`` rebuilt from ``psi = z h/g`` via ``g'/g = a/(1-a) psi'/psi``."""
    Psi = m.h / m.g
    psi = Psi.shift_up()
    ratio = (m.a / (1.0 - m.a)).shift_down(atol=np.inf)
    return (ratio * (psi.derivative() / Psi)).antiderivative().exp()


def final_theorem_check(m, count=DEFAULT_ANGLES, coeff_tol=1e-10, g_tol=1e-8):
    """Typical realness of the rotation inside |z| < sqrt(2) - 1 for real-coefficient maps."""
    coeff = max(m.a.max_imag_coeff(), m.g.max_imag_coeff(), m.h.max_imag_coeff())
    if coeff > coeff_tol:
        raise PreconditionFailed(f"coefficients are not real (max |Im| = {coeff:.3g})")
    radii = tuple(KIRWAN_RADIUS * k / 10 for k in range(1, 10)) + (KIRWAN_RADIUS * 0.999,)
    pts = disk_grid(radii, count)
    off_axis = np.abs(pts.imag) > 1e-12
    sign = (pts.imag * m.rotation(pts).imag)[off_axis]
    low, where = _argmin(sign, pts[off_axis])
    g_alt = alternate_g(m)
    n = min(g_alt.order, m.g.order)
    g_dev = float(np.max(np.abs(g_alt.coeffs[: n + 1] - m.g.coeffs[: n + 1])))
    g_scale = float(np.max(np.abs(m.g.coeffs[: n + 1])))
    sign_ok = low >= POSITIVITY_TOL
    g_ok = g_dev <= g_tol * max(1.0, g_scale)
    return CheckReport(
        passed=bool(sign_ok and g_ok),
        extremal_value=low,
        extremal_point=where,
        radii=radii,
        angles=count,
        tolerance=POSITIVITY_TOL,
        details={
            "sign_test": bool(sign_ok),
            "alternate_g_max_dev": g_dev,
            "alternate_g_scale": g_scale,
            "alternate_g_test": bool(g_ok),
        },
    )
