"""Marginal distributions and the four deformed star products.

The 2D kernels multiply phase-space functions on the position plane
(k1*, k2*) or the momentum plane (k3*, k4*):

  (f *_theta g)(k1*, k2*) = sqrt|E| / (pi |hbar theta|)
      int exp(+(2i/theta)(k1* - eta1)(k2* - eta2)) f(eta1, eta2)
          g(eta1, 2 k2* - eta2) d eta

  (f *_B g)(k3*, k4*) = sqrt|E| / (pi |hbar B|)
      int exp(-(2i/B)(xi1 - k3*)(xi2 - k4*)) f(xi1, xi2)
          g(2 k3* - xi1, xi2) d xi

with E = hbar^2 - B theta.  The 4D kernels act on Wigner fields over a
common small orbit grid; their quadratic phases are recorded in
:func:`star_hbar_phase_matrix` / :func:`star_general_phase_matrix`.

The oscillatory quadratic phases are evaluated exactly per node and the
integration is plain trapezoid over the fields' support, protected by a
Nyquist guard (phase change per grid cell below pi/2, else GridTooCoarse).
The theta = 0 and B = 0 kernels are singular and raise DegenerateParams;
no limiting prescription is attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ComplexField2D,
    DegenerateParams,
    Grid1D,
    Grid2D,
    GridTooCoarse,
    GridTooLarge,
    NCParams,
    NC_COORDS,
    ORBIT_COORDS,
    OrbitLabel,
    WignerField,
)

__all__ = [
    "MarginalField",
    "marginal_momentum",
    "marginal_position",
    "star_vartheta",
    "star_B",
    "star_hbar",
    "star_general",
    "star_hbar_phase_matrix",
    "star_general_phase_matrix",
]

_SUPPORT_CUT = 1e-8
_MAX_PHASE_PER_CELL = 0.5 * math.pi
_STAR4D_AXIS_CAP = 16


# ---------------------------------------------------------------------------
# Marginals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarginalField:
    """Real marginal over the two remaining noncommutative coordinates."""

    grid: Grid2D
    values: np.ndarray
    coords: str              # "pnc" or "qnc"
    residual_imag: float     # largest imaginary part dropped by the reduction

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError("marginal values do not match the grid")
        object.__setattr__(self, "values", v)


def _trapz_axis_weights(g: Grid1D) -> np.ndarray:
    w = np.full(g.n, g.step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _integrate_axes(w: WignerField, names: tuple[str, str]) -> np.ndarray:
    if not (w.domain.names == NC_COORDS and w.domain.is_full):
        raise ValueError("marginals need a full 4D field over the nc coordinates")
    grids = w.grids_by_name()
    out = np.asarray(w.values)
    # contract the higher axis first so the lower index stays valid
    order = sorted(((w.domain.varying.index(n), n) for n in names), reverse=True)
    for axis, name in order:
        out = np.tensordot(out, _trapz_axis_weights(grids[name]), axes=([axis], [0]))
    return out


def marginal_momentum(w: WignerField, label: OrbitLabel) -> MarginalField:
    """Integrate a full (q^nc, p^nc) field over q^nc.

    For a diagonal operator built from psi-hat the result equals
    |k1 a| / sqrt|k1^2 a^2 - k2 k3 b g| * |psihat(p^nc)|^2, which the tests
    verify against an independently computed right-hand side.
    """
    grids = w.grids_by_name()
    vals = _integrate_axes(w, ("q1nc", "q2nc"))
    resid = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    return MarginalField(Grid2D(grids["p1nc"], grids["p2nc"]), vals.real,
                         coords="pnc", residual_imag=resid)


def marginal_position(w: WignerField, label: OrbitLabel) -> MarginalField:
    """Integrate a full (q^nc, p^nc) field over p^nc; mirror of
    :func:`marginal_momentum` with |psi(q^nc)|^2 and the same prefactor."""
    grids = w.grids_by_name()
    vals = _integrate_axes(w, ("p1nc", "p2nc"))
    resid = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    return MarginalField(Grid2D(grids["q1nc"], grids["q2nc"]), vals.real,
                         coords="qnc", residual_imag=resid)


# ---------------------------------------------------------------------------
# 2D star products
# ---------------------------------------------------------------------------

def _support_extent(values: np.ndarray, coords0: np.ndarray, coords1: np.ndarray):
    """Per-axis |coordinate| extent of the region above the support cut."""
    mag = np.abs(values)
    cut = _SUPPORT_CUT * float(mag.max()) if mag.size else 0.0
    rows = np.where(mag.max(axis=1) > cut)[0]
    cols = np.where(mag.max(axis=0) > cut)[0]
    s0 = float(np.max(np.abs(coords0[rows]))) if rows.size else 0.0
    s1 = float(np.max(np.abs(coords1[cols]))) if cols.size else 0.0
    return s0, s1


def _check_cell_phase(rates, what: str):
    worst = max(rates)
    if worst > _MAX_PHASE_PER_CELL:
        raise GridTooCoarse(
            f"{what}: phase advances {worst:.3g} rad per grid cell "
            f"(limit {_MAX_PHASE_PER_CELL:.3g}); refine the sampling grid "
            "or shrink the output extent"
        )


def _reflect_about(values: np.ndarray, axis: int, center: float, grid: Grid1D) -> np.ndarray:
    """Samples of f with one argument reflected to 2*center - x.

    Index arithmetic when 2*center lands on the grid lattice, Fourier
    interpolation of the index-reversed array otherwise (the grids here are
    symmetric, so plain reversal is node-exact).
    """
    if abs(grid.origin + 0.5 * grid.n * grid.step) > 1e-9 * grid.step:
        raise ValueError("reflection requires a symmetric grid [-L, L - step]")
    rev = np.roll(np.flip(values, axis=axis), 1, axis=axis)
    delta = 2.0 * center / grid.step  # reversal above is about x = 0
    r = round(delta)
    if abs(delta - r) <= 1e-9:
        out = np.zeros_like(values)
        n = grid.n
        s = -int(r)  # rev(x - 2c) = shift of rev by -2c
        src = slice(max(s, 0), min(n + s, n))
        dst = slice(src.start - s, src.stop - s)
        if src.start < src.stop:
            if axis == 0:
                out[dst, :] = rev[src, :]
            else:
                out[:, dst] = rev[:, src]
        return out
    spec = np.fft.fft(rev, axis=axis)
    ph = np.exp(-2j * math.pi * np.fft.fftfreq(grid.n) * delta)
    spec *= ph[:, None] if axis == 0 else ph[None, :]
    return np.fft.ifft(spec, axis=axis)


def _common_plane(f: ComplexField2D, g: ComplexField2D) -> Grid2D:
    if f.grid != g.grid:
        raise ValueError("star-product factors must share one grid")
    return f.grid


def star_vartheta(f: ComplexField2D, g: ComplexField2D, params: NCParams,
                  out: Grid2D | None = None) -> ComplexField2D:
    """Position-plane star product f *_theta g at fixed momenta.

    Singular at vartheta = 0 (the kernel prefactor diverges); raises
    DegenerateParams there.
    """
    if params.vartheta == 0.0:
        raise DegenerateParams("vartheta = 0 makes the *_theta kernel singular")
    grid = _common_plane(f, g)
    out = out if out is not None else grid
    th = params.vartheta
    pref = math.sqrt(abs(params.det)) / (math.pi * abs(params.hbar * th))
    e0 = grid.axis0.coords()
    e1 = grid.axis1.coords()
    o0 = out.axis0.coords()
    o1 = out.axis1.coords()
    s0, s1 = _support_extent(np.maximum(np.abs(f.values), np.abs(g.values)), e0, e1)
    _check_cell_phase(
        [(2.0 / abs(th)) * (np.max(np.abs(o1)) + s1) * grid.axis0.step,
         (2.0 / abs(th)) * (np.max(np.abs(o0)) + s0) * grid.axis1.step],
        "star_vartheta",
    )
    w2d = np.outer(_trapz_axis_weights(grid.axis0), _trapz_axis_weights(grid.axis1))
    res = np.empty((out.axis0.n, out.axis1.n), dtype=np.complex128)
    for j, k2 in enumerate(o1):
        g_ref = _reflect_about(g.values, axis=1, center=k2, grid=grid.axis1)
        prod = f.values * g_ref * w2d
        m = (2.0 / th) * (k2 - e1)                    # eta2-dependent frequency
        inner = np.einsum("ij,ij->j", prod, np.exp(-1j * np.outer(e0, m)))
        res[:, j] = np.exp(1j * np.outer(o0, m)) @ inner
    return ComplexField2D(out, pref * res, rep="position")


def star_B(f: ComplexField2D, g: ComplexField2D, params: NCParams,
           out: Grid2D | None = None) -> ComplexField2D:
    """Momentum-plane star product f *_B g at fixed positions.

    Singular at bfield = 0; raises DegenerateParams there.
    """
    if params.bfield == 0.0:
        raise DegenerateParams("bfield = 0 makes the *_B kernel singular")
    grid = _common_plane(f, g)
    out = out if out is not None else grid
    bf = params.bfield
    pref = math.sqrt(abs(params.det)) / (math.pi * abs(params.hbar * bf))
    e0 = grid.axis0.coords()
    e1 = grid.axis1.coords()
    o0 = out.axis0.coords()
    o1 = out.axis1.coords()
    s0, s1 = _support_extent(np.maximum(np.abs(f.values), np.abs(g.values)), e0, e1)
    _check_cell_phase(
        [(2.0 / abs(bf)) * (np.max(np.abs(o1)) + s1) * grid.axis0.step,
         (2.0 / abs(bf)) * (np.max(np.abs(o0)) + s0) * grid.axis1.step],
        "star_B",
    )
    w2d = np.outer(_trapz_axis_weights(grid.axis0), _trapz_axis_weights(grid.axis1))
    res = np.empty((out.axis0.n, out.axis1.n), dtype=np.complex128)
    for i, k3 in enumerate(o0):
        g_ref = _reflect_about(g.values, axis=0, center=k3, grid=grid.axis0)
        prod = f.values * g_ref * w2d
        m = -(2.0 / bf) * (e0 - k3)                   # xi1-dependent frequency
        inner = np.einsum("ij,ij->i", prod, np.exp(1j * np.outer(m, e1)))
        res[i, :] = np.exp(-1j * np.outer(m, o1)).T @ inner
    return ComplexField2D(out, pref * res, rep="momentum")


# ---------------------------------------------------------------------------
# 4D star products
# ---------------------------------------------------------------------------

def star_hbar_phase_matrix(params: NCParams) -> np.ndarray:
    """Scaled phase matrix of the hbar kernel: (1/hbar) * symplectic form."""
    m = np.array([[0.0, 0.0, 1.0, 0.0],
                  [0.0, 0.0, 0.0, 1.0],
                  [-1.0, 0.0, 0.0, 0.0],
                  [0.0, -1.0, 0.0, 0.0]])
    return m / params.hbar


def star_general_phase_matrix(params: NCParams) -> np.ndarray:
    """Scaled phase matrix of the three-parameter kernel, scale 1/(hbar^2 - B theta)."""
    hb, th, bf = params.hbar, params.vartheta, params.bfield
    e = params.det
    if e == 0.0:
        raise DegenerateParams("hbar^2 - bfield*vartheta = 0")
    m = np.array([[0.0, bf, -hb, 0.0],
                  [-bf, 0.0, 0.0, -hb],
                  [hb, 0.0, 0.0, th],
                  [0.0, hb, -th, 0.0]])
    return m / e


def _star4d_setup(w1: WignerField, w2: WignerField, max_axis_points: int):
    if w1.domain != w2.domain:
        raise ValueError("4D star-product factors must share one domain")
    if not (w1.domain.names == ORBIT_COORDS and w1.domain.is_full):
        raise ValueError("4D star products act on full orbit-coordinate fields")
    for g in w1.domain.grids:
        if g.n > max_axis_points:
            raise GridTooLarge(
                f"4D star products are capped at {max_axis_points} points per "
                f"axis (got {g.n}); pass max_axis_points to override"
            )
    grids = w1.domain.grids
    coords = [g.coords() for g in grids]
    wt4 = (_trapz_axis_weights(grids[0])[:, None, None, None]
           * _trapz_axis_weights(grids[1])[None, :, None, None]
           * _trapz_axis_weights(grids[2])[None, None, :, None]
           * _trapz_axis_weights(grids[3])[None, None, None, :])
    return grids, coords, wt4


def _support_extent_4d(values: np.ndarray, coords) -> list[float]:
    mag = np.abs(values)
    cut = _SUPPORT_CUT * float(mag.max()) if mag.size else 0.0
    ext = []
    for axis in range(4):
        other = tuple(a for a in range(4) if a != axis)
        prof = mag.max(axis=other)
        idx = np.where(prof > cut)[0]
        ext.append(float(np.max(np.abs(coords[axis][idx]))) if idx.size else 0.0)
    return ext


def _reflected_gather(values: np.ndarray, b: int, c: int) -> np.ndarray:
    """values[e, 2b - f, 2c - g, h] with zeros off the grid."""
    n0, n1, n2, n3 = values.shape
    f_idx = 2 * b - np.arange(n1)
    g_idx = 2 * c - np.arange(n2)
    ok_f = (f_idx >= 0) & (f_idx < n1)
    ok_g = (g_idx >= 0) & (g_idx < n2)
    out = np.zeros_like(values)
    sel_dst = np.ix_(np.arange(n0), np.where(ok_f)[0], np.where(ok_g)[0], np.arange(n3))
    sel_src = np.ix_(np.arange(n0), f_idx[ok_f], g_idx[ok_g], np.arange(n3))
    out[sel_dst] = values[sel_src]
    return out


def _star_4d(w1: WignerField, w2: WignerField, params: NCParams, kind: str,
             max_axis_points: int) -> WignerField:
    grids, coords, wt4 = _star4d_setup(w1, w2, max_axis_points)
    x, y, z, w = coords
    hb, th, bf = params.hbar, params.vartheta, params.bfield
    e = params.det
    if kind == "general" and e == 0.0:
        raise DegenerateParams("hbar^2 - bfield*vartheta = 0")
    pref = math.sqrt(abs(e)) / (math.pi * abs(hb))
    supp = _support_extent_4d(np.maximum(np.abs(w1.values), np.abs(w2.values)), coords)
    ext = [float(np.max(np.abs(c))) for c in coords]
    steps = [g.step for g in grids]
    if kind == "hbar":
        coef = np.abs(star_hbar_phase_matrix(params))
    else:
        coef = np.abs(star_general_phase_matrix(params))
    rates = []
    for axis in range(4):
        freq = 2.0 * sum(coef[axis, j] * (ext[j] + supp[j]) for j in range(4))
        rates.append(freq * steps[axis])
    _check_cell_phase(rates, f"star_{kind}")

    v1w = w1.values * wt4
    dx = x[:, None] - x[None, :]       # [a, e]
    dy = y[:, None] - y[None, :]       # [b, f]
    dz = z[:, None] - z[None, :]       # [c, g]
    dw = w[:, None] - w[None, :]       # [d, h]
    n = tuple(g.n for g in grids)
    out = np.empty(n, dtype=np.complex128)
    if kind == "hbar":
        pa = np.exp((2j / hb) * dx[:, None, :, None] * dz[None, :, None, :])   # [a,c,e,g]
        pb = np.exp(-(2j / hb) * dy[:, None, :, None] * dw[None, :, None, :])  # [b,d,f,h]
        for b in range(n[1]):
            for c in range(n[2]):
                m = v1w * _reflected_gather(w2.values, b, c)
                out[:, b, c, :] = np.einsum(
                    "aeg,efgh,dfh->ad", pa[:, c], m, pb[b], optimize=True
                )
    else:
        t1 = np.exp((2j / e) * bf * dx[:, None, :, None] * dy[None, :, None, :])   # [a,b,e,f]
        t2 = np.exp(-(2j / e) * hb * dx[:, None, :, None] * dz[None, :, None, :])  # [a,c,e,g]
        t3 = np.exp((2j / e) * hb * dy[:, None, :, None] * dw[None, :, None, :])   # [b,d,f,h]
        t4 = np.exp(-(2j / e) * th * dz[:, None, :, None] * dw[None, :, None, :])  # [c,d,g,h]
        for b in range(n[1]):
            for c in range(n[2]):
                m = v1w * _reflected_gather(w2.values, b, c)
                out[:, b, c, :] = np.einsum(
                    "aef,aeg,efgh,dfh,dgh->ad",
                    t1[:, b], t2[:, c], m, t3[b], t4[c], optimize=True,
                )
    return WignerField(w1.domain, pref * out, label=w1.label)


def star_hbar(w1: WignerField, w2: WignerField, params: NCParams,
              max_axis_points: int = _STAR4D_AXIS_CAP) -> WignerField:
    """Symplectic-phase star product of two orbit-coordinate Wigner fields.

    Kernel phase (2/hbar) [(k1*-eta1)(k3*-xi1) - (k2*-eta2)(k4*-xi2)],
    prefactor sqrt|hbar^2 - B theta| / (pi |hbar|), second factor sampled at
    (eta1, 2 k2* - eta2, 2 k3* - xi1, xi2).
    """
    return _star_4d(w1, w2, params, "hbar", max_axis_points)


def star_general(w1: WignerField, w2: WignerField, params: NCParams,
                 max_axis_points: int = _STAR4D_AXIS_CAP) -> WignerField:
    """Three-parameter star product combining the hbar, theta and B phases.

    Kernel phase (2/E) [B (k1*-eta1)(k2*-eta2) - hbar (k1*-eta1)(k3*-xi1)
    + hbar (k2*-eta2)(k4*-xi2) - theta (k3*-xi1)(k4*-xi2)] with
    E = hbar^2 - B theta; at theta = B = 0 the phase matrix reduces to
    minus the hbar kernel's (the two quadratic forms are conjugate there).
    """
    return _star_4d(w1, w2, params, "general", max_axis_points)
