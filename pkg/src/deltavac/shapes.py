"""Fourier profiles of extended impurities.

A :class:`ShapeFunction` bundles the profile ``ghat`` on the real axis,
its evaluation ``ghat(i s)`` on the positive imaginary axis and the
exponential growth bound of the latter.  The imaginary-axis form is
supplied per shape as a closed form, not produced by generic analytic
continuation.  Profiles are normalized so ``ghat(0) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ShapeFunction",
    "trivial_shape",
    "ball_shape",
    "gaussian_shape",
    "builtin_shape",
]

# Taylor coefficients of 3*(sinh s - ... )/s^3 family: the ball profile is
# sum_m c_m (-k^2)^m on the real axis and sum_m c_m s^(2m) on the
# imaginary one, with c_m = 3*(2m+2)/(2m+3)!.
_BALL_COEFFS = tuple(3.0 * (2 * m + 2) / math.factorial(2 * m + 3) for m in range(11))
# Below this |k*a| the closed form loses ~6 digits to cancellation; the
# series is exact to machine precision here.
_BALL_SERIES_CUT = 0.75


def _asarray(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _maybe_scalar(out: np.ndarray, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(out)
    return out


@dataclass(frozen=True)
class ShapeFunction:
    """An impurity profile in Fourier space.

    Attributes
    ----------
    ghat_real : callable
        ``ghat(k)`` for real k, vectorized.
    ghat_imag : callable
        ``ghat(i s)`` for s >= 0, vectorized.  May raise ValueError for
        profiles whose imaginary-axis growth is super-exponential.
    growth_bound_a : float
        Smallest a with ``|ghat(i s)| <= C exp(a s)``; ``inf`` when no
        such bound exists.
    label : str
    ghat_imag_damped : callable, optional
        ``(s, m) -> ghat(i s) * exp(-m)`` with the exponents merged, so
        products that are individually out of float range stay finite.
    """

    ghat_real: Callable[[np.ndarray], np.ndarray]
    ghat_imag: Callable[[np.ndarray], np.ndarray]
    growth_bound_a: float
    label: str
    ghat_imag_damped: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if not self.growth_bound_a >= 0:
            raise ValueError("growth_bound_a must be nonnegative")
        if abs(float(self.ghat_real(0.0)) - 1.0) > 1e-12:
            raise ValueError(f"shape {self.label!r} violates ghat(0) = 1")
        try:
            g0 = float(self.ghat_imag(0.0))
        except ValueError:
            pass  # imaginary axis rejected for this profile
        else:
            if abs(g0 - 1.0) > 1e-12:
                raise ValueError(f"shape {self.label!r} violates ghat(i0) = 1")

    def imag_damped(self, s, damp):
        """``ghat(i s)*exp(-damp)``, using the merged form when available."""
        if self.ghat_imag_damped is not None:
            return self.ghat_imag_damped(s, damp)
        return self.ghat_imag(s) * np.exp(-_asarray(damp))


def trivial_shape() -> ShapeFunction:
    """The constant profile ``ghat = 1`` (already point-like)."""
    return ShapeFunction(
        ghat_real=lambda k: np.ones_like(_asarray(k)),
        ghat_imag=lambda s: np.ones_like(_asarray(s)),
        growth_bound_a=0.0,
        label="trivial",
        ghat_imag_damped=lambda s, m: np.exp(-_asarray(m)) * np.ones_like(_asarray(s)),
    )


def _ball_series(z2: np.ndarray) -> np.ndarray:
    # Horner in z2 = (k a)^2 on the real axis, -(s a)^2 on the imaginary
    # axis (the coefficients are shared).
    out = np.full_like(z2, _BALL_COEFFS[-1])
    for c in reversed(_BALL_COEFFS[:-1]):
        out = out * z2 + c
    return out


def ball_shape(a: float) -> ShapeFunction:
    """Uniform solid ball of radius ``a``.

    ``ghat(k) = 3 (sin(ka) - ka cos(ka)) / (ka)^3`` with the removable
    singularity at k = 0 handled by its Taylor series; on the imaginary
    axis ``ghat(i s) = 3 (sa cosh(sa) - sinh(sa)) / (sa)^3``, which grows
    like ``exp(sa)``, so the growth bound is exactly ``a``.
    """
    if not a > 0:
        raise ValueError(f"ball radius must be positive, got {a!r}")
    a = float(a)

    def ghat_real(k):
        z = np.abs(_asarray(k)) * a
        small = z < _BALL_SERIES_CUT
        z_safe = np.where(small, 1.0, z)
        closed = 3.0 * (np.sin(z_safe) - z_safe * np.cos(z_safe)) / z_safe**3
        out = np.where(small, _ball_series(-(z * z)), closed)
        return _maybe_scalar(out, k)

    def ghat_imag(s):
        z = _asarray(s) * a
        if np.any(z < 0):
            raise ValueError("ghat(i s) requires s >= 0")
        small = z < _BALL_SERIES_CUT
        z_safe = np.where(small, 1.0, z)
        closed = 3.0 * (z_safe * np.cosh(z_safe) - np.sinh(z_safe)) / z_safe**3
        out = np.where(small, _ball_series(z * z), closed)
        return _maybe_scalar(out, s)

    def ghat_imag_damped(s, m):
        z = _asarray(s) * a
        m = _asarray(m)
        if np.any(z < 0):
            raise ValueError("ghat(i s) requires s >= 0")
        z, m = np.broadcast_arrays(z, m)
        small = z < _BALL_SERIES_CUT
        z_safe = np.where(small, 1.0, z)
        # s cosh(s) - sinh(s) = ((s-1)e^s + (s+1)e^-s)/2, then fold
        # exp(-m) into each exponent.
        merged = (
            3.0
            * ((z_safe - 1.0) * np.exp(z_safe - m) + (z_safe + 1.0) * np.exp(-z_safe - m))
            / (2.0 * z_safe**3)
        )
        out = np.where(small, _ball_series(z * z) * np.exp(-m), merged)
        return _maybe_scalar(out, s, m)

    return ShapeFunction(
        ghat_real=ghat_real,
        ghat_imag=ghat_imag,
        growth_bound_a=a,
        label=f"ball(a={a:g})",
        ghat_imag_damped=ghat_imag_damped,
    )


def gaussian_shape(w: float) -> ShapeFunction:
    """Gaussian profile ``ghat(k) = exp(-k^2 w^2 / 2)``.

    On the imaginary axis this grows like ``exp(+s^2 w^2/2)``, faster
    than any exponential, so imaginary-axis evaluation is rejected and
    the growth bound is infinite.  The profile is fine wherever only the
    real axis is needed (the coupling denominator integral).
    """
    if not w > 0:
        raise ValueError(f"gaussian width must be positive, got {w!r}")
    w = float(w)

    def ghat_real(k):
        k = _asarray(k)
        out = np.exp(-0.5 * (k * w) ** 2)
        return _maybe_scalar(out, k)

    def ghat_imag(s):
        raise ValueError(
            "the gaussian profile grows super-exponentially on the imaginary axis; "
            "ghat(i s) is not available"
        )

    return ShapeFunction(
        ghat_real=ghat_real,
        ghat_imag=ghat_imag,
        growth_bound_a=math.inf,
        label=f"gaussian(w={w:g})",
    )


def builtin_shape(kind: str, param: float | None = None) -> ShapeFunction:
    """Construct one of the built-in profiles by name.

    ``trivial`` takes no parameter; ``ball`` takes the radius a > 0;
    ``gaussian`` takes the width w > 0.
    """
    kind = kind.lower()
    if kind == "trivial":
        if param is not None:
            raise ValueError("the trivial shape takes no parameter")
        return trivial_shape()
    if kind == "ball":
        if param is None:
            raise ValueError("the ball shape needs a radius parameter")
        return ball_shape(param)
    if kind == "gaussian":
        if param is None:
            raise ValueError("the gaussian shape needs a width parameter")
        return gaussian_shape(param)
    raise ValueError(f"unknown shape kind {kind!r} (expected trivial, ball or gaussian)")
