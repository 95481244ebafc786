"""Engine tests: worked integrals, error-estimate honesty, determinism."""

import math

import numpy as np
import pytest

from deltavac.quadrature import (
    DEFAULT_CONFIG,
    IntegrationResult,
    NonFiniteIntegrandError,
    QuadratureConfig,
    TailStrategy,
    integrate_real_line,
    integrate_semi_infinite,
)

ALGEBRAIC = QuadratureConfig(tail_cut_strategy=TailStrategy.ALGEBRAIC)

# High-precision references computed with mpmath before the build.
E_REF_4X = 0.032355470247687131     # 4 * point density at |x|=1, gamma=1
SCRIPT_E_1 = 0.59634736232319407    # int_0^inf ln(1+r) e^-r dr


def _assert_converged(res, exact, cfg=DEFAULT_CONFIG):
    assert res.converged
    assert res.error_estimate <= cfg.target(res.value)
    assert abs(res.value - exact) <= max(10 * res.error_estimate, 5e-14 * abs(exact))


class TestSemiInfinite:
    def test_exponential(self):
        res = integrate_semi_infinite(lambda r: np.exp(-r))
        _assert_converged(res, 1.0)

    def test_shifted_lorentzian(self):
        """r^2/(r^2+1) - 1 integrates to -pi/2; the bracket only decays
        like 1/r^2, which the algebraic substitution must handle."""
        res = integrate_semi_infinite(lambda r: r * r / (r * r + 1.0) - 1.0, ALGEBRAIC)
        _assert_converged(res, -math.pi / 2, ALGEBRAIC)

    def test_density_integrand(self):
        res = integrate_semi_infinite(
            lambda r: (1.0 + 2.0 * r) * np.exp(-2.0 * r)
            / (2.0 * math.pi**2 + 2.0 * math.pi**2 * r)
        )
        _assert_converged(res, E_REF_4X)

    def test_scale_invariance(self):
        for scale in (1.0, 2.5, 7.5):
            cfg = QuadratureConfig(substitution_scale=scale)
            res = integrate_semi_infinite(lambda r: r * np.exp(-r), cfg)
            _assert_converged(res, 1.0, cfg)

    def test_undermatched_scale_flags_instead_of_crashing(self):
        """A decay much slower than the substitution scale leaves an
        endpoint singularity the rule cannot resolve in double precision;
        the engine must flag it rather than raise or lie."""
        cfg = QuadratureConfig(substitution_scale=0.2)
        res = integrate_semi_infinite(lambda r: r * np.exp(-r), cfg)
        assert not res.converged
        assert abs(res.value - 1.0) <= 10.0 * res.error_estimate

    def test_analytic_tail(self):
        cfg = QuadratureConfig(tail_cut_strategy=TailStrategy.ANALYTIC_TAIL, tail_start=30.0)
        res = integrate_semi_infinite(
            lambda r: 1.0 / (1.0 + r * r),
            cfg,
            analytic_tail=lambda R: math.pi / 2 - math.atan(R),
        )
        _assert_converged(res, math.pi / 2, cfg)

    def test_analytic_tail_needs_callable(self):
        cfg = QuadratureConfig(tail_cut_strategy=TailStrategy.ANALYTIC_TAIL)
        with pytest.raises(ValueError, match="analytic_tail"):
            integrate_semi_infinite(lambda r: np.exp(-r), cfg)


class TestRealLine:
    def test_lorentzian_kernel(self):
        """The coupling-denominator kernel: int r^2/(r^2+p^2) dp = pi r."""
        res = integrate_real_line(lambda p: 1.0 / (1.0 + p * p))
        _assert_converged(res, math.pi)

    def test_gaussian(self):
        res = integrate_real_line(lambda p: np.exp(-p * p))
        _assert_converged(res, math.sqrt(math.pi))

    def test_lorentzian_squared(self):
        res = integrate_real_line(lambda p: 1.0 / (1.0 + p * p) ** 2)
        _assert_converged(res, math.pi / 2)

    def test_fold_strategy(self):
        cfg = QuadratureConfig(tail_cut_strategy=TailStrategy.EXPONENTIAL)
        res = integrate_real_line(lambda p: 1.0 / np.cosh(p), cfg)
        _assert_converged(res, math.pi, cfg)

    def test_analytic_tail(self):
        cfg = QuadratureConfig(tail_cut_strategy=TailStrategy.ANALYTIC_TAIL, tail_start=40.0)
        res = integrate_real_line(
            lambda p: 1.0 / (1.0 + p * p),
            cfg,
            analytic_tail=lambda R: 2.0 * (math.pi / 2 - math.atan(R)),
        )
        _assert_converged(res, math.pi, cfg)


# (integrand, routine, config, exact) with exact values that are either
# elementary or frozen from the high-precision pre-build run.
_HONESTY_SUITE = [
    (lambda r: np.exp(-r), integrate_semi_infinite, DEFAULT_CONFIG, 1.0),
    (lambda r: r * np.exp(-r), integrate_semi_infinite, DEFAULT_CONFIG, 1.0),
    (lambda r: np.exp(-r * r), integrate_semi_infinite, DEFAULT_CONFIG, math.sqrt(math.pi) / 2),
    (lambda r: np.log1p(r) * np.exp(-r), integrate_semi_infinite, DEFAULT_CONFIG, SCRIPT_E_1),
    (
        lambda r: (1 + 2 * r) * np.exp(-2 * r) / (2 * math.pi**2 * (1 + r)),
        integrate_semi_infinite,
        QuadratureConfig(substitution_scale=0.5),
        E_REF_4X,
    ),
    (lambda r: 1.0 / (1.0 + r * r), integrate_semi_infinite, ALGEBRAIC, math.pi / 2),
    (lambda r: r * r / (r * r + 1.0) - 1.0, integrate_semi_infinite, ALGEBRAIC, -math.pi / 2),
    (lambda p: np.exp(-p * p), integrate_real_line, DEFAULT_CONFIG, math.sqrt(math.pi)),
    (lambda p: 1.0 / (1.0 + p * p) ** 2, integrate_real_line, DEFAULT_CONFIG, math.pi / 2),
    (lambda p: 1.0 / (1.0 + p * p), integrate_real_line, DEFAULT_CONFIG, math.pi),
    (
        lambda p: 1.0 / np.cosh(p),
        integrate_real_line,
        QuadratureConfig(tail_cut_strategy=TailStrategy.EXPONENTIAL),
        math.pi,
    ),
]


def test_error_estimates_are_honest():
    """True error never exceeds 10x the reported estimate on the suite."""
    for f, routine, cfg, exact in _HONESTY_SUITE:
        res = routine(f, cfg)
        assert res.converged
        assert abs(res.value - exact) <= 10.0 * res.error_estimate, (
            f"true error {abs(res.value - exact):g} vs estimate {res.error_estimate:g}"
        )


def test_converged_flag_meets_tolerance():
    for f, routine, cfg, exact in _HONESTY_SUITE:
        res = routine(f, cfg)
        assert res.error_estimate <= cfg.target(res.value)


def test_linearity():
    a, b = 2.5, -1.25
    f = lambda r: np.exp(-r)
    g = lambda r: 1.0 / (1.0 + r * r)
    combo = lambda r: a * f(r) + b * g(r)
    rf = integrate_semi_infinite(f, ALGEBRAIC)
    rg = integrate_semi_infinite(g, ALGEBRAIC)
    rc = integrate_semi_infinite(combo, ALGEBRAIC)
    budget = rc.error_estimate + abs(a) * rf.error_estimate + abs(b) * rg.error_estimate
    assert abs(rc.value - (a * rf.value + b * rg.value)) <= budget


def test_determinism():
    def run():
        return integrate_semi_infinite(
            lambda r: np.sin(r) ** 2 * np.exp(-r), DEFAULT_CONFIG
        )

    first, second = run(), run()
    assert first == second  # bit-identical, not merely close


def test_nonfinite_sample_identifies_point():
    f = lambda r: np.where(r > 5.0, np.nan, np.exp(-r))
    with pytest.raises(NonFiniteIntegrandError) as exc:
        integrate_semi_infinite(f)
    assert exc.value.point > 5.0
    assert "non-finite" in str(exc.value)


def test_nonfinite_on_negative_axis():
    f = lambda p: np.where(p < -3.0, np.inf, np.exp(-np.abs(p)))
    cfg = QuadratureConfig(tail_cut_strategy=TailStrategy.EXPONENTIAL)
    with pytest.raises(NonFiniteIntegrandError) as exc:
        integrate_real_line(f, cfg)
    assert exc.value.point < -3.0


def test_nonconvergence_is_flagged_not_raised():
    cfg = QuadratureConfig(abs_tol=0.0, rel_tol=1e-14, max_refinement=1)
    exact = 0.5 * (1.0 - 1.0 / 6401.0)  # int sin(40r)^2 e^-r dr
    res = integrate_semi_infinite(lambda r: np.sin(40.0 * r) ** 2 * np.exp(-r), cfg)
    assert not res.converged
    assert res.error_estimate > cfg.target(res.value)
    # flagged, and the estimate still covers the true deviation
    assert abs(res.value - exact) <= 10.0 * res.error_estimate


class TestConfigValidation:
    def test_needs_one_positive_tolerance(self):
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=0.0, rel_tol=0.0)

    def test_rejects_negative_tolerance(self):
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=-1e-12)

    def test_rejects_zero_refinement(self):
        with pytest.raises(ValueError):
            QuadratureConfig(max_refinement=0)

    def test_rejects_bad_scale(self):
        with pytest.raises(ValueError):
            QuadratureConfig(substitution_scale=0.0)

    def test_result_validation(self):
        with pytest.raises(ValueError):
            IntegrationResult(1.0, -1.0, 10, True)
        with pytest.raises(ValueError):
            IntegrationResult(1.0, 0.0, -1, True)


def test_rescaled_rederives_convergence():
    res = integrate_semi_infinite(lambda r: np.exp(-r))
    scaled = res.rescaled(2.0, DEFAULT_CONFIG, offset=1.0)
    assert scaled.value == pytest.approx(2.0 * res.value + 1.0, rel=1e-15)
    assert scaled.error_estimate == 2.0 * res.error_estimate
    assert scaled.converged
