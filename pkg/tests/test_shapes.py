"""Built-in impurity profiles: values, series crossover, growth bounds."""

import math

import numpy as np
import pytest

from deltavac.shapes import ShapeFunction, ball_shape, builtin_shape, gaussian_shape, trivial_shape

# Frozen from the pre-build high-precision run.
BALL_REAL = [(0.5, 0.97522218381639941), (0.74, 0.94630015622162074),
             (0.76, 0.94341884486256703), (3.0, 0.34567749976235595)]
BALL_IMAG = [(0.5, 1.0252242506266327), (0.74, 1.0558418772261701),
             (0.76, 1.0589643350144556), (3.0, 2.2427901177692662)]


class TestBall:
    def test_normalized_at_zero(self):
        ball = ball_shape(1.0)
        assert ball.ghat_real(0.0) == 1.0
        assert ball.ghat_imag(0.0) == 1.0

    def test_value_at_pi(self):
        # sin(pi) = 0, cos(pi) = -1, so ghat(pi) = 3/pi^2 exactly
        ball = ball_shape(1.0)
        assert ball.ghat_real(math.pi) == pytest.approx(3.0 / math.pi**2, rel=1e-14)

    def test_real_axis_frozen_values(self):
        ball = ball_shape(1.0)
        for k, expected in BALL_REAL:
            assert ball.ghat_real(k) == pytest.approx(expected, rel=1e-13)
            assert ball.ghat_real(-k) == pytest.approx(expected, rel=1e-13)

    def test_imag_axis_frozen_values(self):
        ball = ball_shape(1.0)
        for s, expected in BALL_IMAG:
            assert ball.ghat_imag(s) == pytest.approx(expected, rel=1e-13)

    def test_series_crossover_continuity(self):
        # the frozen 0.74/0.76 pairs straddle the series/closed-form cut
        ball = ball_shape(1.0)
        k = np.linspace(0.7499, 0.7501, 41)
        vals = ball.ghat_real(k)
        assert np.all(np.diff(vals) < 0)  # locally decreasing, no jump

    def test_small_argument_accuracy(self):
        ball = ball_shape(1.0)
        assert ball.ghat_imag(0.1) == pytest.approx(1.0010003572090022, rel=1e-14)
        # leading curvature: ghat(i s) = 1 + s^2/10 + O(s^4)
        s = 1e-5
        assert ball.ghat_imag(s) - 1.0 == pytest.approx(s * s / 10.0, rel=1e-5)

    def test_growth_bound_ratio(self):
        """ghat(i s) ~ 3 e^s/(2 s^2) for large s, so the normalized ratio
        equals 1 - 1/s up to exponentially small terms: growth bound 1."""
        ball = ball_shape(1.0)
        for s in (20.0, 40.0, 80.0):
            ratio = ball.ghat_imag(s) * 2.0 * s * s / (3.0 * math.exp(s))
            assert ratio == pytest.approx(1.0 - 1.0 / s, rel=1e-13)
        assert ball.growth_bound_a == 1.0

    def test_scaling_in_radius(self):
        inner = ball_shape(2.5)
        reference = ball_shape(1.0)
        for k in (0.1, 0.9, 4.0):
            assert inner.ghat_real(k) == pytest.approx(reference.ghat_real(2.5 * k), rel=1e-14)
        assert inner.growth_bound_a == 2.5

    def test_damped_matches_plain_product(self):
        ball = ball_shape(1.0)
        for s in (0.3, 0.74, 0.76, 5.0, 30.0):
            for m in (0.1, 3.0, 40.0):
                expected = ball.ghat_imag(s) * math.exp(-m)
                assert ball.imag_damped(s, m) == pytest.approx(expected, rel=1e-13)

    def test_damped_survives_overflow_region(self):
        # ghat(i s) alone overflows near s ~ 710; the merged form must not
        ball = ball_shape(1.0)
        s, m = 900.0, 1000.0
        value = ball.imag_damped(s, m)
        assert math.isfinite(value) and value > 0
        expected_log = math.log(3.0 * (s - 1.0) / (2.0 * s**3)) + (s - m)
        assert math.log(value) == pytest.approx(expected_log, rel=1e-12)

    def test_damped_vectorized(self):
        ball = ball_shape(1.0)
        s = np.array([0.2, 2.0, 800.0])
        m = np.array([0.5, 0.5, 900.0])
        out = ball.imag_damped(s, m)
        assert out.shape == (3,)
        assert np.all(np.isfinite(out))
        assert out[0] == pytest.approx(ball.imag_damped(0.2, 0.5), rel=1e-15)

    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError):
            ball_shape(0.0)
        with pytest.raises(ValueError):
            ball_shape(-2.0)


class TestTrivial:
    def test_identity_profile(self):
        shape = trivial_shape()
        k = np.array([0.0, 1.0, 50.0])
        assert np.all(shape.ghat_real(k) == 1.0)
        assert np.all(shape.ghat_imag(k) == 1.0)
        assert shape.growth_bound_a == 0.0

    def test_damped(self):
        shape = trivial_shape()
        assert shape.imag_damped(5.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)


class TestGaussian:
    def test_real_axis(self):
        shape = gaussian_shape(2.0)
        assert shape.ghat_real(0.0) == 1.0
        assert shape.ghat_real(1.5) == pytest.approx(math.exp(-0.5 * (1.5 * 2.0) ** 2), rel=1e-15)

    def test_imaginary_axis_rejected(self):
        shape = gaussian_shape(1.0)
        with pytest.raises(ValueError, match="imaginary axis"):
            shape.ghat_imag(1.0)

    def test_unbounded_growth(self):
        assert math.isinf(gaussian_shape(1.0).growth_bound_a)

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            gaussian_shape(0.0)


class TestBuiltinDispatch:
    def test_kinds(self):
        assert builtin_shape("trivial").label == "trivial"
        assert builtin_shape("ball", 1.5).label == "ball(a=1.5)"
        assert builtin_shape("gaussian", 0.5).label == "gaussian(w=0.5)"

    def test_missing_parameter(self):
        with pytest.raises(ValueError):
            builtin_shape("ball")
        with pytest.raises(ValueError):
            builtin_shape("gaussian")

    def test_trivial_takes_no_parameter(self):
        with pytest.raises(ValueError):
            builtin_shape("trivial", 1.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown shape"):
            builtin_shape("cube", 1.0)


def test_normalization_is_enforced():
    with pytest.raises(ValueError, match="ghat\\(0\\) = 1"):
        ShapeFunction(
            ghat_real=lambda k: 0.5 * np.ones_like(np.asarray(k, dtype=float)),
            ghat_imag=lambda s: np.ones_like(np.asarray(s, dtype=float)),
            growth_bound_a=0.0,
            label="broken",
        )
