"""Command-line front end.

Jobs come from a plain ``key = value`` config file, command-line flags, or
both (flags win).  Exit status: 0 when every requested check passes, 1 when a
check fails (the report is still written), 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field, fields

import numpy as np

from . import analysis
from .errors import ExpressionSyntaxError, LogharmError, DivisionNearZero, SingularAtOrigin
from .expr import parse
from .grid import DEFAULT_RADII, angles as grid_angles, disk_grid
from .logharmonic import (
    construct_map,
    corollary1_transform,
    factorize,
    map_from_factors,
    recover_dilatation,
)
from .series import TAIL_TOL, eval_with_tail

COMMANDS = (
    "construct",
    "check-typreal",
    "membership",
    "factorize",
    "recover-dilatation",
    "radius-starlike",
    "arclength",
    "bound-report",
    "symmetry",
    "extrema",
    "export-boundary",
)
FORMATS = ("csv", "svg", "json-report")
EXPORT_MAX_RADIUS = 0.999

# expressions each command needs; a tuple of alternatives
_REQUIRED = {
    "construct": (("phi", "a"), ("h", "g")),
    "check-typreal": (("phi",),),
    "membership": (("phi", "a"),),
    "factorize": (("phi", "a"),),
    "recover-dilatation": (("h", "g"),),
    "radius-starlike": (("phi", "a"),),
    "arclength": (("phi", "a"),),
    "bound-report": (("phi", "a"),),
    "symmetry": (("phi", "a"), ("h", "g")),
    "extrema": (("h", "g"),),
    "export-boundary": (("phi", "a"), ("h", "g")),
}

_DEFAULT_ANGLES = {
    "radius-starlike": analysis.FINE_ANGLES,
    "arclength": analysis.FINE_ANGLES,
    "bound-report": analysis.FINE_ANGLES,
    "extrema": analysis.CIRCLE_ANGLES,
    "export-boundary": 720,
}


class ConfigError(LogharmError, ValueError):
    pass


@dataclass
class JobConfig:
    command: str = ""
    phi: str | None = None
    a: str | None = None
    p: str | None = None
    h: str | None = None
    g: str | None = None
    order: int = 64
    radii: tuple | None = None
    angles: int | None = None
    output_path: str | None = None
    format: str = "json-report"
    singularities: tuple = field(default_factory=tuple)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if not 8 <= self.order <= 512:
            raise ConfigError(f"order: must lie in [8, 512], got {self.order}")
        if self.radii is not None:
            limit = EXPORT_MAX_RADIUS if self.command == "export-boundary" else 1.0
            for r in self.radii:
                if not 0.0 < r < 1.0 or r > limit:
                    raise ConfigError(f"radii: {r} outside (0, {limit}]")
        if self.angles is not None and self.angles < 4:
            raise ConfigError("angles: need at least 4")
        if self.format not in FORMATS:
            raise ConfigError(f"format: unknown format {self.format!r}")
        options = _REQUIRED[self.command]
        if not any(all(getattr(self, k) for k in keys) for keys in options):
            want = " or ".join("+".join(keys) for keys in options)
            raise ConfigError(f"{self.command}: needs expressions {want}")
        if self.command == "export-boundary":
            if not self.radii:
                raise ConfigError("radii: export-boundary needs a radii list")
            if not self.output_path:
                raise ConfigError("out: export-boundary needs an output path")
            if self.format == "json-report":
                self.format = "csv"
        return self

    @property
    def angle_count(self):
        return self.angles or _DEFAULT_ANGLES.get(self.command, 64)


# config parsing

_KEY_ALIASES = {"out": "output_path", "output": "output_path"}


def _floats(text, key):
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"{key}: expected a list of numbers, got {text!r}") from None


def _coerce(key, value):
    if key in ("order", "angles"):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if key in ("radii", "singularities"):
        return _floats(value, key)
    return value


def _unquote(text):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def read_config(path):
    """Parse a ``key = value`` file into a dict of JobConfig fields."""
    names = {f.name for f in fields(JobConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            key = _KEY_ALIASES.get(key.strip(), key.strip())
            if key not in names:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _coerce(key, _unquote(value))
            except ConfigError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return out


def build_parser():
    ap = argparse.ArgumentParser(
        prog="logharm",
        description="Construct and check logharmonic maps with typically real rotation.",
    )
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", help="key = value job file")
    for name in ("phi", "a", "p", "h", "g"):
        ap.add_argument(f"--{name}", help=f"expression for {name}(z)")
    ap.add_argument("--order", type=int)
    ap.add_argument("--radii", help="comma separated radii")
    ap.add_argument("--angles", type=int)
    ap.add_argument("--out", dest="output_path")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--singularities", help="comma separated angles excluded from circle scans")
    return ap


_EXPR_FLAGS = ("--phi", "--a", "--p", "--h", "--g")


def _glue_expression_flags(argv):
    # expressions may start with '-', which argparse would read as a flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in _EXPR_FLAGS:
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def config_from_args(argv):
    args = build_parser().parse_args(_glue_expression_flags(list(argv)))
    values = read_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        values[key] = _coerce(key, value) if isinstance(value, str) else value
    return JobConfig(**values).validate()


# job execution

def _series(cfg, key):
    return parse(getattr(cfg, key)).series(cfg.order)


def _map(cfg):
    if cfg.phi and cfg.a:
        return construct_map(_series(cfg, "phi"), _series(cfg, "a"))
    return map_from_factors(_series(cfg, "h"), _series(cfg, "g"))


def _radii(cfg):
    return cfg.radii or DEFAULT_RADII


def _coeff_list(s, count=8):
    return [[float(c.real), float(c.imag)] for c in s.coeffs[:count]]


def _job_construct(cfg):
    m = _map(cfg)
    pts = disk_grid(_radii(cfg), cfg.angle_count)
    recon = (m.h * m.g).shift_up()
    n = min(recon.order, m.phi.order)
    resid = float(np.max(np.abs(recon.coeffs[: n + 1] - m.phi.coeffs[: n + 1])))
    return resid <= 1e-10, {
        "g": _coeff_list(m.g),
        "h": _coeff_list(m.h),
        "reconstruction_residual": resid,
        "max_abs_a": float(np.max(np.abs(m.a(pts)))),
        "max_modulus_defect": float(np.max(np.abs(np.abs(m(pts)) - np.abs(m.rotation(pts))))),
    }


def _job_typreal(cfg):
    rep = analysis.typically_real_check(_series(cfg, "phi"), _radii(cfg), cfg.angle_count)
    return rep.passed, rep.to_dict()


def _job_membership(cfg):
    rep = analysis.membership_TLh(
        _series(cfg, "phi"), _series(cfg, "a"), _radii(cfg), cfg.angle_count
    )
    return rep.passed, rep.to_dict()


def _job_factorize(cfg):
    m = _map(cfg)
    pair = factorize(m)
    pts = disk_grid(tuple(r for r in _radii(cfg) if r <= 0.7) or (0.7,), cfg.angle_count)
    dev = float(np.max(np.abs(m(pts) - pair(pts))))
    cor = corollary1_transform(m)
    cor_rep = analysis.membership_TLh(cor.phi, cor.a)
    return dev <= 1e-9 and cor_rep.passed, {
        "p": _coeff_list(pair.p),
        "max_product_defect": dev,
        "corollary_membership": cor_rep.passed,
    }


def _job_recover(cfg):
    a = recover_dilatation(_series(cfg, "h"), _series(cfg, "g"))
    result = {"a": _coeff_list(a)}
    passed = True
    if cfg.a:
        pts = disk_grid(_radii(cfg), cfg.angle_count)
        dev = float(np.max(np.abs(a(pts) - parse(cfg.a)(pts))))
        result["max_deviation_from_given_a"] = dev
        passed = dev <= 1e-9
    return passed, result


def _job_radius(cfg):
    res = analysis.radius_of_starlikeness(_map(cfg), cfg.angle_count)
    ok = res.radius >= analysis.STARLIKE_RADIUS - 1e-6
    return ok, res.to_dict()


def _job_arclength(cfg):
    m = _map(cfg)
    rows = []
    for r in _radii(cfg):
        L = analysis.arclength(m, r, cfg.angle_count)
        M = analysis.max_modulus(m, r, cfg.angle_count)
        bound = 4 * math.pi * M * (1 + r + 2 * r**2 - 2 * r**3) / ((1 - r) * (1 - r * r))
        rows.append({"r": r, "arclength": L, "max_modulus": M, "bound": bound, "passed": L <= bound})
    return all(row["passed"] for row in rows), {"circles": rows}


def _job_bound_report(cfg):
    m = _map(cfg)
    reps = [analysis.arclength_bound_report(m, r, cfg.angle_count).to_dict() for r in _radii(cfg)]
    return all(rep["passed"] for rep in reps), {"circles": reps}


def _job_symmetry(cfg):
    rep = analysis.symmetry_check(_map(cfg), _radii(cfg), cfg.angle_count)
    return rep.passed, rep.to_dict()


def _job_extrema(cfg):
    F = analysis.closed_form_map(parse(cfg.h), parse(cfg.g))
    out = {}
    for comp in ("re", "im"):
        out[comp] = analysis.boundary_image_extrema(
            F, comp, cfg.angle_count, singularities=cfg.singularities
        ).to_dict()
    return True, out


def boundary_curves(m, radii, count):
    """Image points of the circles, with a per-point untrusted-tail flag."""
    thetas = grid_angles(count)
    rows = []
    for r in radii:
        z = r * np.exp(1j * thetas)
        f = m(z, check=False)
        tail = np.zeros(count)
        for s in (m.phi, m.I):
            tail = np.maximum(tail, eval_with_tail(s, z)[1])
        untrusted = tail > TAIL_TOL
        rows.append((r, thetas, f, untrusted))
    return rows


def _fmt(x):
    return f"{x:.12g}"


def render_csv(curves):
    lines = ["r,theta,re,im"]
    for r, thetas, f, _ in curves:
        for t, v in zip(thetas, f):
            lines.append(",".join(_fmt(x) for x in (r, t, v.real, v.imag)))
    return "\n".join(lines) + "\n"


def render_svg(curves, size=1000.0, margin=0.05):
    pts = np.concatenate([f for _, _, f, _ in curves])
    xmin, xmax = float(pts.real.min()), float(pts.real.max())
    ymin, ymax = float(pts.imag.min()), float(pts.imag.max())
    span = max(xmax - xmin, ymax - ymin) or 1.0
    scale = size * (1 - 2 * margin) / span
    cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" height="{size:g}" '
        f'viewBox="0 0 {size:g} {size:g}">'
    ]
    for r, _, f, _ in curves:
        # y axis points down in SVG
        xs = size / 2 + (f.real - cx) * scale
        ys = size / 2 - (f.imag - cy) * scale
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(xs, ys))
        coords += f" {xs[0]:.3f},{ys[0]:.3f}"
        out.append(
            f'  <polyline data-r="{_fmt(r)}" fill="none" stroke="black" '
            f'stroke-width="1" points="{coords}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _job_export(cfg):
    m = _map(cfg)
    curves = boundary_curves(m, cfg.radii, cfg.angle_count)
    text = render_svg(curves) if cfg.format == "svg" else render_csv(curves)
    write_atomic(cfg.output_path, text)
    return True, {
        "path": cfg.output_path,
        "format": cfg.format,
        "rows": len(cfg.radii) * cfg.angle_count,
        "untrusted_points": {_fmt(r): int(flags.sum()) for r, _, _, flags in curves},
    }


_JOBS = {
    "construct": _job_construct,
    "check-typreal": _job_typreal,
    "membership": _job_membership,
    "factorize": _job_factorize,
    "recover-dilatation": _job_recover,
    "radius-starlike": _job_radius,
    "arclength": _job_arclength,
    "bound-report": _job_bound_report,
    "symmetry": _job_symmetry,
    "extrema": _job_extrema,
    "export-boundary": _job_export,
}


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg):
    """Execute a validated job; returns ``(exit_code, report_dict)``."""
    report = {
        "command": cfg.command,
        "order": cfg.order,
        "grid": {"radii": list(_radii(cfg)), "angles": cfg.angle_count},
        "constants": {
            "starlike_radius": analysis.STARLIKE_RADIUS,
            "kirwan_radius": analysis.KIRWAN_RADIUS,
        },
        "inputs": {k: getattr(cfg, k) for k in ("phi", "a", "p", "h", "g") if getattr(cfg, k)},
    }
    try:
        passed, result = _JOBS[cfg.command](cfg)
    except (ExpressionSyntaxError, SingularAtOrigin, DivisionNearZero):
        raise
    except LogharmError as exc:
        passed, result = False, {"error": f"{type(exc).__name__}: {exc}"}
    report["passed"] = bool(passed)
    report["verdict"] = "passed" if passed else "failed"
    report["result"] = analysis._jsonable(result)
    return (0 if passed else 1), report


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        code, report = run(cfg)
    except (ConfigError, ExpressionSyntaxError, SingularAtOrigin, DivisionNearZero, OSError) as exc:
        print(f"logharm: error: {exc}", file=sys.stderr)
        return 2
    text = dump_report(report)
    if cfg.output_path and cfg.command != "export-boundary":
        write_atomic(cfg.output_path, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
