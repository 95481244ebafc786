"""Command-line front-end: radial profiles, verification suites,
point-limit convergence tables and coupling-unit conversion.

Exit codes: 0 success, 1 usage or domain error, 2 numerical check
failure, 3 verification failure.  CSV output uses 17 significant digits
so values round-trip exactly; identical configs produce byte-identical
files within one build.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence, TextIO

import numpy as np

from .core import (
    TWO_PI_SQ,
    Coupling,
    convergence_study,
    energy_density_point_closed,
    energy_density_point_integral,
    identity_eq4_check,
    resolvent_identity_check,
    t_lambda,
    t_zero,
    to_alpha,
    to_alpha_a,
    to_gamma,
)
from .quadrature import QuadratureConfig
from .shapes import builtin_shape
from .special import script_E

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3

_DEFAULTS = {
    "abs_tol": 1e-12,
    "rel_tol": 1e-10,
    "rmin": 0.1,
    "rmax": 10.0,
    "rcount": 20,
    "rscale": "log",
    "shape": "ball",
    "shape_param": None,
    "lambdas": "0.5,0.1,0.01",
    "radius": 1.0,
    "out": "-",
    "check_tol": None,
}

_CONFIG_TYPES = {
    "abs_tol": float,
    "rel_tol": float,
    "rmin": float,
    "rmax": float,
    "rcount": int,
    "rscale": str,
    "shape": str,
    "shape_param": float,
    "lambdas": str,
    "radius": float,
    "out": str,
    "check_tol": float,
    "gamma": float,
    "alpha": float,
    "alpha_a": float,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise _UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_TYPES[key](raw.strip())
            except ValueError:
                raise _UsageError(f"{path}:{lineno}: bad value for {key}: {raw.strip()!r}")
    return values


def _resolve(args, file_cfg: dict, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in file_cfg:
        return file_cfg[key]
    return _DEFAULTS.get(key)


def _coupling(args, file_cfg: dict) -> Coupling:
    given = [
        (name, value)
        for name, value in (
            ("gamma", args.gamma),
            ("alpha", args.alpha),
            ("alpha_a", args.alpha_a),
        )
        if value is not None
    ]
    if not given:
        given = [(k, file_cfg[k]) for k in ("gamma", "alpha", "alpha_a") if k in file_cfg]
    if len(given) != 1:
        raise _UsageError("exactly one of --gamma, --alpha, --alpha-a is required")
    name, value = given[0]
    factory = {"gamma": Coupling.gamma, "alpha": Coupling.alpha, "alpha_a": Coupling.alpha_a}
    return factory[name](value)


def _quad_config(args, file_cfg: dict) -> QuadratureConfig:
    return QuadratureConfig(
        abs_tol=_resolve(args, file_cfg, "abs_tol"),
        rel_tol=_resolve(args, file_cfg, "rel_tol"),
    )


def _radius_grid(rmin: float, rmax: float, count: int, scale: str) -> np.ndarray:
    if not (math.isfinite(rmin) and rmin > 0):
        raise ValueError(f"minimum radius must be positive, got {rmin!r}")
    if not (math.isfinite(rmax) and rmax >= rmin):
        raise ValueError(f"maximum radius must be >= minimum, got {rmax!r}")
    if count < 1:
        raise ValueError(f"radius count must be at least 1, got {count!r}")
    if scale not in ("linear", "log"):
        raise ValueError(f"radius scale must be linear or log, got {scale!r}")
    if count == 1:
        return np.array([rmin])
    if scale == "linear":
        return np.linspace(rmin, rmax, count)
    return np.geomspace(rmin, rmax, count)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_profile(args, file_cfg) -> int:
    coupling = _coupling(args, file_cfg)
    cfg = _quad_config(args, file_cfg)
    radii = _radius_grid(
        _resolve(args, file_cfg, "rmin"),
        _resolve(args, file_cfg, "rmax"),
        _resolve(args, file_cfg, "rcount"),
        _resolve(args, file_cfg, "rscale"),
    )
    gamma = to_gamma(coupling)
    alpha = to_alpha(coupling)

    all_converged = True
    lines = ["radius,density_integral,density_closed,abs_diff,quad_error"]
    for r in radii:
        integral = energy_density_point_integral(float(r), alpha, cfg)
        closed = energy_density_point_closed(float(r), gamma)
        all_converged &= integral.converged
        lines.append(
            ",".join(
                _fmt(v)
                for v in (r, integral.value, closed, abs(integral.value - closed),
                          integral.error_estimate)
            )
        )

    handle, owned = _open_out(_resolve(args, file_cfg, "out"))
    try:
        handle.write("\n".join(lines) + "\n")
    finally:
        if owned:
            handle.close()
    return EXIT_OK if all_converged else EXIT_NUMERICAL


def _cmd_convergence(args, file_cfg) -> int:
    coupling = _coupling(args, file_cfg)
    cfg = _quad_config(args, file_cfg)
    radius = _resolve(args, file_cfg, "radius")
    shape_kind = _resolve(args, file_cfg, "shape")
    shape_param = _resolve(args, file_cfg, "shape_param")
    if shape_kind != "trivial" and shape_param is None:
        shape_param = 1.0
    shape = builtin_shape(shape_kind, shape_param)

    raw = _resolve(args, file_cfg, "lambdas")
    try:
        lambdas = [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError:
        raise _UsageError(f"could not parse --lambdas value {raw!r}")
    if not lambdas:
        raise _UsageError("--lambdas must list at least one value")

    rows = convergence_study(radius, to_alpha(coupling), shape, lambdas, cfg)

    lines = ["lambda,density_extended,point_limit,abs_error"]
    point = energy_density_point_closed(radius, to_gamma(coupling))
    for row in rows:
        lines.append(
            ",".join(_fmt(v) for v in (row.scaling_lambda, row.density, point, row.abs_error))
        )
    handle, owned = _open_out(_resolve(args, file_cfg, "out"))
    try:
        handle.write("\n".join(lines) + "\n")
    finally:
        if owned:
            handle.close()

    errors = [row.abs_error for row in rows]
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    return EXIT_OK if decreasing else EXIT_NUMERICAL


def _cmd_convert(args, file_cfg) -> int:
    coupling = _coupling(args, file_cfg)
    print(f"alpha   = {_fmt(to_alpha(coupling))}")
    print(f"gamma   = {_fmt(to_gamma(coupling))}")
    print(f"alpha_a = {_fmt(to_alpha_a(coupling))}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------

def _check_equivalence_grid(cfg):
    dev = 0.0
    for radius in (0.1, 0.5, 1.0, 2.0, 10.0):
        for gamma in (0.1, 1.0, 10.0):
            integral = energy_density_point_integral(radius, TWO_PI_SQ / gamma, cfg)
            closed = energy_density_point_closed(radius, gamma)
            dev = max(dev, abs(integral.value - closed) / abs(closed))
    return dev, 1e-8


def _check_identity_eq4(cfg):
    dev = 0.0
    for rho in np.geomspace(0.01, 100.0, 20):
        lhs, rhs, _ = identity_eq4_check(float(rho), cfg)
        dev = max(dev, abs(lhs - rhs))
    return dev, 1e-10


def _check_resolvent(cfg):
    dev = 0.0
    for k in (0.5, 1.0, 10.0):
        dev = max(dev, abs(resolvent_identity_check(k, cfg).value - k) / k)
    return dev, 1e-8


def _check_rho_one_closed(cfg):
    target = 1.0 / (8.0 * math.pi**2)
    return abs(energy_density_point_closed(1.0, 2.0) - target) / target, 1e-12


def _check_rho_one_integral(cfg):
    target = 1.0 / (8.0 * math.pi**2)
    value = energy_density_point_integral(1.0, math.pi**2, cfg).value
    return abs(value - target) / target, 1e-8


def _check_scaling_law(cfg):
    dev = 0.0
    for s in (0.5, 2.0, 7.0):
        for radius, gamma in ((0.3, 0.7), (1.0, 1.0), (2.5, 4.0)):
            lhs = energy_density_point_closed(s * radius, s * gamma)
            rhs = energy_density_point_closed(radius, gamma) / s**4
            dev = max(dev, abs(lhs - rhs) / abs(rhs))
    return dev, 1e-10


def _check_coupling_round_trip(cfg):
    dev = 0.0
    for value in (0.1, 1.0, 3.7, 250.0):
        alpha = to_alpha(Coupling.gamma(value))
        gamma_back = to_gamma(Coupling.alpha(alpha))
        dev = max(dev, abs(gamma_back - value) / value)
        alpha_a = to_alpha_a(Coupling.alpha(alpha))
        alpha_back = to_alpha(Coupling.alpha_a(alpha_a))
        dev = max(dev, abs(alpha_back - alpha) / alpha)
    return dev, 1e-15


def _check_conversion_routes(cfg):
    dev = 0.0
    for gamma in (0.1, 1.0, 3.7, 250.0):
        direct = to_alpha(Coupling.gamma(gamma))
        via_a = to_alpha(Coupling.alpha_a(to_alpha_a(Coupling.gamma(gamma))))
        dev = max(dev, abs(direct - via_a) / direct)
    return dev, 1e-15


def _check_script_e_bounds(cfg):
    dev = -math.inf
    for rho in np.geomspace(1e-4, 1e6, 61):
        value = script_E(float(rho))
        dev = max(dev, 1.0 / (1.0 + rho) - value, value - 1.0 / rho)
    return dev, 0.0


def _check_script_e_derivative(cfg):
    dev = 0.0
    for rho in np.geomspace(0.1, 100.0, 25):
        rho = float(rho)
        h = rho * 1e-6
        numeric = (script_E(rho + h) - script_E(rho - h)) / (2.0 * h)
        analytic = script_E(rho) - 1.0 / rho
        dev = max(dev, abs(numeric - analytic) / abs(analytic))
    return dev, 1e-6


def _check_script_e_quadrature(cfg):
    from .quadrature import integrate_semi_infinite
    from dataclasses import replace

    dev = 0.0
    for rho in np.geomspace(0.01, 100.0, 20):
        rho = float(rho)
        quad_cfg = replace(cfg, substitution_scale=1.0 / rho)
        res = integrate_semi_infinite(lambda v: np.exp(-rho * v) / (1.0 + v), quad_cfg)
        dev = max(dev, abs(res.value - script_E(rho)))
    return dev, 1e-10


def _check_t_lambda_limit(cfg):
    dev = 0.0
    for shape in (builtin_shape("trivial"), builtin_shape("ball", 1.0),
                  builtin_shape("gaussian", 1.0)):
        for r in (0.1, 1.0, 10.0):
            value = t_lambda(r, 2.0, shape, 0.0, cfg).value
            exact = t_zero(r, 2.0)
            dev = max(dev, abs(value - exact) / exact)
    return dev, 1e-9


def _check_positivity_monotonicity(cfg):
    rng = np.random.default_rng(20260810)
    samples = 10.0 ** rng.uniform(-2.0, 2.0, size=(200, 2))
    dev = -math.inf
    for radius, alpha in samples:
        gamma = TWO_PI_SQ / alpha
        density = energy_density_point_closed(radius, gamma)
        dev = max(dev, -density)
        # strictly decreasing in alpha and in |x|
        denser_alpha = energy_density_point_closed(radius, TWO_PI_SQ / (1.3 * alpha))
        dev = max(dev, denser_alpha - density)
        further = energy_density_point_closed(1.3 * radius, gamma)
        dev = max(dev, further - density)
    return dev, 0.0


_VERIFY_CHECKS = [
    ("equivalence_grid", _check_equivalence_grid),
    ("identity_eq4", _check_identity_eq4),
    ("resolvent_identity", _check_resolvent),
    ("rho_one_closed", _check_rho_one_closed),
    ("rho_one_integral", _check_rho_one_integral),
    ("scaling_law", _check_scaling_law),
    ("coupling_round_trip", _check_coupling_round_trip),
    ("conversion_routes", _check_conversion_routes),
    ("script_E_bounds", _check_script_e_bounds),
    ("script_E_derivative", _check_script_e_derivative),
    ("script_E_quadrature", _check_script_e_quadrature),
    ("t_lambda_point_limit", _check_t_lambda_limit),
    ("positivity_monotonicity", _check_positivity_monotonicity),
]


def _cmd_verify(args, file_cfg) -> int:
    cfg = _quad_config(args, file_cfg)
    check_tol = _resolve(args, file_cfg, "check_tol")
    all_pass = True
    for name, check in _VERIFY_CHECKS:
        dev, tol = check(cfg)
        if check_tol is not None:
            tol = check_tol
        ok = dev <= tol
        all_pass &= ok
        print(f"CHECK {name:<26} max_dev={dev:<13.6e} tol={tol:<13.6e} "
              f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all_pass else EXIT_VERIFY


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_coupling_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, help="coupling in the gamma convention (length)")
    group.add_argument("--alpha", type=float, help="coupling in the alpha convention (1/length)")
    group.add_argument("--alpha-a", dest="alpha_a", type=float,
                       help="coupling in the alpha_a convention (1/length)")


def _add_tol_flags(parser):
    parser.add_argument("--abs-tol", dest="abs_tol", type=float,
                        help="absolute quadrature tolerance (default 1e-12)")
    parser.add_argument("--rel-tol", dest="rel_tol", type=float,
                        help="relative quadrature tolerance (default 1e-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="deltavac",
        description="Vacuum energy density near a single delta-like impurity.",
    )
    parser.add_argument("--config", help="key=value file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="radial density profile to CSV, both routes")
    _add_coupling_flags(p)
    _add_tol_flags(p)
    p.add_argument("--rmin", type=float, help="smallest radius (> 0)")
    p.add_argument("--rmax", type=float, help="largest radius")
    p.add_argument("--rcount", type=int, help="number of radii")
    p.add_argument("--rscale", choices=("linear", "log"), help="grid spacing")
    p.add_argument("--out", help="output CSV path, '-' for stdout")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("verify", help="run the identity suites, report PASS/FAIL")
    _add_tol_flags(p)
    p.add_argument("--check-tol", dest="check_tol", type=float,
                   help="override every check threshold (for stress testing)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("convergence", help="point-like limit table to CSV")
    _add_coupling_flags(p)
    _add_tol_flags(p)
    p.add_argument("--radius", type=float, help="observation distance |x| (default 1)")
    p.add_argument("--shape", choices=("trivial", "ball", "gaussian"),
                   help="impurity profile (default ball)")
    p.add_argument("--shape-param", dest="shape_param", type=float,
                   help="ball radius or gaussian width (default 1)")
    p.add_argument("--lambdas", help="comma-separated decreasing scaling parameters")
    p.add_argument("--out", help="output CSV path, '-' for stdout")
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("convert", help="print a coupling in all three conventions")
    _add_coupling_flags(p)
    p.set_defaults(func=_cmd_convert)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        file_cfg = _load_config_file(args.config) if args.config else {}
        return args.func(args, file_cfg)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
