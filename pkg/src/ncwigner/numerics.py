"""Quadrature and Fourier machinery shared by the integral transforms.

Fourier convention: unitary, kernel (2 pi)^(-1/2) exp(-i s r) per coordinate
for the forward (sign = -1) direction.  This makes the unit Gaussian
self-dual and keeps Parseval exact on the grid.  Conjugate grids put s = 0
on a sample for the even-n symmetric grids used throughout.

All functions are pure; outputs live on grids that are deterministic
functions of the input grids.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ComplexField2D, Grid1D, Grid2D, ShiftOffGrid

__all__ = [
    "default_state_grid",
    "conjugate_grid",
    "integrate_2d",
    "cont_ft_2d",
    "cont_ft_axis",
    "fractional_shift",
    "shift_field",
    "reflect_field",
    "momentum_representation",
    "position_representation",
]

_ALIGN_TOL = 1e-9


def default_state_grid(n: int = 128, extent: float = 10.0) -> Grid2D:
    """Symmetric square grid [-extent, extent - step]^2.

    The defaults leave width-1 Gaussian tails below 1e-21 at the boundary.
    """
    return Grid2D.square(n, extent)


def conjugate_grid(g: Grid1D) -> Grid1D:
    """Frequency grid of an n-point FFT on g: step 2 pi/(n*step), zero on a
    sample (at index n//2 after fftshift)."""
    step = 2.0 * math.pi / (g.n * g.step)
    return Grid1D(n=g.n, origin=-(g.n // 2) * step, step=step)


def _require_finite(f: ComplexField2D):
    # ComplexField2D already validates on construction; guard raw arrays too.
    if not np.all(np.isfinite(f.values)):
        raise ValueError("field values must be finite")


def _axis_weights(g: Grid1D, rule: str) -> np.ndarray:
    if rule == "trapezoid":
        w = np.full(g.n, g.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w
    if rule == "simpson":
        w = np.zeros(g.n)
        m = g.n if g.n % 2 == 1 else g.n - 1
        w[0:m] = 2.0
        w[1:m:2] = 4.0
        w[0] = w[m - 1] = 1.0
        w[0:m] *= g.step / 3.0
        if m != g.n:
            # even sample count: trapezoid on the last cell
            w[-2] += 0.5 * g.step
            w[-1] += 0.5 * g.step
        return w
    raise ValueError(f"unknown quadrature rule {rule!r}")


def integrate_2d(f: ComplexField2D, rule: str = "trapezoid") -> complex:
    """Approximate int int f over the grid's bounding box."""
    w0 = _axis_weights(f.grid.axis0, rule)
    w1 = _axis_weights(f.grid.axis1, rule)
    return complex(w0 @ f.values @ w1)


def cont_ft_2d(f: ComplexField2D, sign: int = -1) -> ComplexField2D:
    """Continuous 2D Fourier transform on the conjugate grid.

    F(s) = (2 pi)^-1 int f(r) exp(sign * i s.r) d^2 r, including the
    origin-offset phase and the step^2 scaling, so the output approximates
    the continuous transform rather than the bare DFT.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    _require_finite(f)
    g0, g1 = f.grid.axis0, f.grid.axis1
    if sign == -1:
        spec = np.fft.fft2(f.values)
    else:
        spec = np.fft.ifft2(f.values) * (g0.n * g1.n)
    spec = np.fft.fftshift(spec)
    k0 = conjugate_grid(g0)
    k1 = conjugate_grid(g1)
    phase0 = np.exp(sign * 1j * k0.coords() * g0.origin)
    phase1 = np.exp(sign * 1j * k1.coords() * g1.origin)
    out = spec * phase0[:, None] * phase1[None, :]
    out *= g0.step * g1.step / (2.0 * math.pi)
    other = "momentum" if f.rep == "position" else "position"
    return ComplexField2D(Grid2D(k0, k1), out, rep=other)


def cont_ft_axis(f: ComplexField2D, axis: int, sign: int = -1) -> ComplexField2D:
    """1D analogue of :func:`cont_ft_2d` along one axis; the other passes through."""
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    _require_finite(f)
    g = f.grid.axis0 if axis == 0 else f.grid.axis1
    if sign == -1:
        spec = np.fft.fft(f.values, axis=axis)
    else:
        spec = np.fft.ifft(f.values, axis=axis) * g.n
    spec = np.fft.fftshift(spec, axes=axis)
    k = conjugate_grid(g)
    phase = np.exp(sign * 1j * k.coords() * g.origin)
    out = spec * (phase[:, None] if axis == 0 else phase[None, :])
    out *= g.step / math.sqrt(2.0 * math.pi)
    grid = Grid2D(k, f.grid.axis1) if axis == 0 else Grid2D(f.grid.axis0, k)
    return ComplexField2D(grid, out, rep=f.rep)


def _fourier_shift_values(values: np.ndarray, delta0: float, delta1: float) -> np.ndarray:
    """Circular band-limited shift by (delta0, delta1) grid steps."""
    spec = np.fft.fft2(values)
    if delta0 != 0.0:
        spec *= np.exp(2j * math.pi * np.fft.fftfreq(values.shape[0]) * delta0)[:, None]
    if delta1 != 0.0:
        spec *= np.exp(2j * math.pi * np.fft.fftfreq(values.shape[1]) * delta1)[None, :]
    return np.fft.ifft2(spec)


def _integer_shift_values(values: np.ndarray, s0: int, s1: int) -> np.ndarray:
    """Index translation with zero fill outside the domain (no wrap-around)."""
    out = np.zeros_like(values)
    n0, n1 = values.shape
    src0 = slice(max(s0, 0), min(n0 + s0, n0))
    dst0 = slice(src0.start - s0, src0.stop - s0)
    src1 = slice(max(s1, 0), min(n1 + s1, n1))
    dst1 = slice(src1.start - s1, src1.stop - s1)
    if src0.start < src0.stop and src1.start < src1.stop:
        out[dst0, dst1] = values[src0, src1]
    return out


def fractional_shift(f: ComplexField2D, d0: float, d1: float) -> ComplexField2D:
    """Samples of f(r0 + d0, r1 + d1) by Fourier-phase multiplication.

    Exact for band-limited fields; the shift is circular, so callers must
    keep the field supported well inside the grid.
    """
    out = _fourier_shift_values(f.values, d0 / f.grid.axis0.step, d1 / f.grid.axis1.step)
    return f.with_values(out)


def shift_field(f: ComplexField2D, d0: float, d1: float, mode: str = "auto") -> ComplexField2D:
    """Shifted samples f(r + d), choosing index translation or Fourier phases.

    mode "integer": require d/step to be an integer within 1e-9 (else
    ShiftOffGrid) and translate indices with zero fill.  mode "fourier":
    always use the band-limited circular shift.  mode "auto": integer when
    aligned, Fourier otherwise.
    """
    delta0 = d0 / f.grid.axis0.step
    delta1 = d1 / f.grid.axis1.step
    aligned = (abs(delta0 - round(delta0)) <= _ALIGN_TOL
               and abs(delta1 - round(delta1)) <= _ALIGN_TOL)
    if mode == "integer" and not aligned:
        raise ShiftOffGrid(
            f"shift ({d0}, {d1}) is not an integer number of grid steps "
            f"({delta0:.3g}, {delta1:.3g} steps)"
        )
    if mode not in ("integer", "fourier", "auto"):
        raise ValueError(f"unknown shift mode {mode!r}")
    if mode != "fourier" and aligned:
        # f(r + d) sits at index j + d/step
        out = _integer_shift_values(f.values, int(round(delta0)), int(round(delta1)))
        return f.with_values(out)
    return fractional_shift(f, d0, d1)


def _check_symmetric(g: Grid1D):
    if abs(g.origin + 0.5 * g.n * g.step) > _ALIGN_TOL * g.step:
        raise ValueError("reflection requires a symmetric grid [-L, L - step]")


def reflect_field(f: ComplexField2D) -> ComplexField2D:
    """Samples of f(-r0, -r1) on the same symmetric grid.

    The missing +L corner sample is taken from -L, which is harmless for
    fields vanishing at the boundary.
    """
    _check_symmetric(f.grid.axis0)
    _check_symmetric(f.grid.axis1)
    out = np.roll(np.roll(f.values[::-1, ::-1], 1, axis=0), 1, axis=1)
    return f.with_values(out)


def momentum_representation(f: ComplexField2D, scale: float) -> ComplexField2D:
    """Scaled momentum-space samples of a position-space field.

    fhat(s) = (|a| / 2 pi) int f(r) exp(-i a s.r) d^2 r with a = scale;
    the transform is unitary for any nonzero a.  With a = 1/hbar this is
    the conventional hbar-scaled momentum representation.
    """
    if scale == 0.0 or not math.isfinite(scale):
        raise ValueError("scale must be finite and nonzero")
    a = abs(scale)
    F = cont_ft_2d(f, -1 if scale > 0 else +1)
    g0, g1 = F.grid.axis0, F.grid.axis1
    s0 = Grid1D(g0.n, g0.origin / a, g0.step / a)
    s1 = Grid1D(g1.n, g1.origin / a, g1.step / a)
    return ComplexField2D(Grid2D(s0, s1), a * F.values, rep="momentum")


def position_representation(fhat: ComplexField2D, scale: float) -> ComplexField2D:
    """Inverse of :func:`momentum_representation` on the matching grid."""
    if scale == 0.0 or not math.isfinite(scale):
        raise ValueError("scale must be finite and nonzero")
    a = abs(scale)
    F = cont_ft_2d(fhat, +1 if scale > 0 else -1)
    g0, g1 = F.grid.axis0, F.grid.axis1
    r0 = Grid1D(g0.n, g0.origin / a, g0.step / a)
    r1 = Grid1D(g1.n, g1.origin / a, g1.step / a)
    return ComplexField2D(Grid2D(r0, r1), a * F.values, rep="position")
