"""Wigner-type transforms on four-dimensional coadjoint orbits.

Every transform in this module evaluates one family of integrals,

    I(w; c) = int exp(i (w0 om0 s0 + w1 om1 s1)) conj(B)(s/2 + c) A(-s/2 + c) d^2 s,

for a bra field B and a ket field A, differing only in how the output
coordinates map to frequencies w, centres c and scales (om0, om1), and in
the prefactor.  The substitution s = 2t turns the integrand into a product
of the plainly shifted fields conj(B)(t + c) A(-t + c) on the state grid,
so for each centre the whole frequency batch is one FFT (when the requested
frequencies land on the conjugate lattice) or one separable phase
contraction (for arbitrary points).  A slower, structurally independent
quadrature lives in :mod:`ncwigner.oracles`.

Coordinate dictionary (k1, k2, k3 label the sector; a, b, g are the
dimensional constants; D = k1^2 a^2 - k2 k3 b g):

  generic orbit transform      w0 = (k1* k1^2 a^2 - k4* k1 k2 a b)/D
  (momentum-space fields)      w1 = k2*,  om = a
                               c  = (k3*/k1, (k1 k4* a^2 - k1* k3 a g)/D)
                               pref = |a| / (2 pi sqrt|D|)

  k3 = 0 sector                same maps with k3 = 0; pref = (2 pi)^(-3/2)/|k1|
  k2 = k3 = 0 sector           same maps; pref = (2 pi)^(-2)/|k1|

  nc-coordinate form           w = q^nc, om = -k1 a, c = p^nc,
  (momentum-space fields)      pref = |k1 a|^3 / ((2 pi)^2 sqrt|D|)

  nc position form             w = p^nc, om = +k1 a, c = q^nc, same pref
  (position-space fields)

  parameter form               w0 = k3*, om0 = 1/hbar; E = hbar^2 - B theta
  (position-space fields)      w1 = (hbar k4* + B k1*)/E, om1 = 1
                               c = ((hbar^2 k1* + hbar theta k4*)/E, k2*)
                               pref = 1/(4 pi^2 |hbar| sqrt|E|)

  textbook cross transform     w = p, om = 2 pi/h, c = q, pref = 1/h^2
  (position-space fields)

The k2 = k3 = 0 orbit transform equals the textbook transform after an
explicit convention map (hbar = 1/(k1 a)), verified numerically in the
tests:

  W_orbit(k*) = (hbar^2 / |k1|)
                * W_std(q = -(k1*, k2*)/k1, p = (k3*, k4*)/k1; h = 2 pi hbar),

provided the momentum-space fields are the (k1 a)-scaled transforms of the
position-space ones; for k1 = a = 1 the two transforms coincide point for
point.  Documented isometry constants (squared-norm ratio of the output
over the orbit to ||ket||^2 ||bra||^2): 1/a^2 on the generic sector,
1/(2 pi a^2) for k3 = 0 and 1/(4 pi^2 a^2) for k2 = k3 = 0.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import (
    ComplexField2D,
    CoadjointPoint,
    Domain4D,
    GridTooCoarse,
    GridTooLarge,
    NCCoords,
    NCParams,
    NC_COORDS,
    ORBIT_COORDS,
    OrbitLabel,
    PHASE_COORDS,
    RankOneOperator,
    Sector,
    SectorMismatch,
    ShiftOffGrid,
    WignerField,
    DegenerateParams,
    Grid1D,
    nc_to_orbit,
)
from .numerics import reflect_field

__all__ = [
    "wigner_generic",
    "wigner_nc",
    "wigner_nc_position",
    "wigner_nc_params",
    "wigner_tau0",
    "wigner_qm_orbit",
    "cross_wigner_standard",
    "qm_limit_check",
    "aligned_frequency_grid",
    "aligned_center_grid",
    "orbit_from_wave_coords",
    "TAU0_TO_QM_PREFACTOR_RATIO",
]

# Ratio of the k3 = 0 sector transform to the k2 = k3 = 0 one in the common
# k2 -> 0 limit; the two sectors carry different normalisation constants.
TAU0_TO_QM_PREFACTOR_RATIO = math.sqrt(2.0 * math.pi)

_ALIGN_TOL = 1e-9
_DEFAULT_AXIS_CAP = 32


def _worker_count() -> int:
    raw = os.environ.get("NCWIG_THREADS", "0")
    try:
        v = int(raw)
    except ValueError:
        v = 0
    if v <= 0:
        return min(4, os.cpu_count() or 1)
    return v


# ---------------------------------------------------------------------------
# Point handling
# ---------------------------------------------------------------------------

def _as_points(pts, names, max_axis_points):
    """Normalise pts to an (M, 4) array; keep the domain when one is given."""
    if isinstance(pts, Domain4D):
        if pts.names != names:
            raise ValueError(f"domain over {pts.names} passed where {names} expected")
        if pts.is_full:
            for g in pts.grids:
                if g.n > max_axis_points:
                    raise GridTooLarge(
                        f"full 4D grids are capped at {max_axis_points} points "
                        f"per axis (got {g.n}); pass max_axis_points to override"
                    )
        return pts.points(), pts
    if isinstance(pts, np.ndarray):
        arr = np.atleast_2d(np.asarray(pts, dtype=float))
        if arr.shape[1] != 4:
            raise ValueError("point arrays must have shape (M, 4)")
        return arr, None
    rows = []
    for p in pts:
        if isinstance(p, (CoadjointPoint, NCCoords)):
            rows.append(p.as_array())
        else:
            rows.append(np.asarray(p, dtype=float))
    arr = np.asarray(rows, dtype=float).reshape(-1, 4)
    return arr, None


def _package(values, domain, label):
    if domain is None:
        return values
    return WignerField(domain, values.reshape(domain.shape), label=label)


# ---------------------------------------------------------------------------
# The phase-integral engine
# ---------------------------------------------------------------------------

def _axis_fourier_shift(values, delta, axis):
    spec = np.fft.fft(values, axis=axis)
    ph = np.exp(2j * math.pi * np.fft.fftfreq(values.shape[axis]) * delta)
    spec *= ph[:, None] if axis == 0 else ph[None, :]
    return np.fft.ifft(spec, axis=axis)


def _axis_integer_shift(values, s, axis):
    n = values.shape[axis]
    out = np.zeros_like(values)
    src = slice(max(s, 0), min(n + s, n))
    dst = slice(src.start - s, src.stop - s)
    if src.start < src.stop:
        if axis == 0:
            out[dst, :] = values[src, :]
        else:
            out[:, dst] = values[:, src]
    return out


def _axis_shift(values, d, step, axis):
    delta = d / step
    r = round(delta)
    if abs(delta - r) <= _ALIGN_TOL:
        return values if r == 0 else _axis_integer_shift(values, int(r), axis)
    return _axis_fourier_shift(values, delta, axis)


class _GroupEvaluator:
    """Evaluates the phase integral for batches of points sharing a centre."""

    def __init__(self, ket: ComplexField2D, bra: ComplexField2D,
                 omega0: float, omega1: float, method: str):
        if ket.grid != bra.grid:
            raise ValueError("ket and bra must share one grid")
        if method not in ("auto", "fft", "direct"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self.g0 = ket.grid.axis0
        self.g1 = ket.grid.axis1
        self.t0 = self.g0.coords()
        self.t1 = self.g1.coords()
        self.omega0 = omega0
        self.omega1 = omega1
        self.bra = bra.values
        self.ket_refl = reflect_field(ket).values
        self.cell = self.g0.step * self.g1.step
        self.dk0 = 2.0 * math.pi / (self.g0.n * self.g0.step)
        self.dk1 = 2.0 * math.pi / (self.g1.n * self.g1.step)
        # integrand magnitudes below this carry no quadrature information;
        # such centre groups integrate to (numerical) zero and are exempt
        # from the resolution guard
        self.tail_cut = 1e-13 * float(
            np.max(np.abs(self.bra)) * np.max(np.abs(self.ket_refl))
        )
        # centre groups arrive sorted with c0 slowest; cache its shifts
        self._c0_key = None
        self._bra_c0 = None
        self._ket_c0 = None

    def check_resolution(self, w0, w1):
        """Requested phase frequencies must stay inside the grid Nyquist band."""
        m0 = 2.0 * self.omega0 * np.asarray(w0) / self.dk0
        m1 = 2.0 * self.omega1 * np.asarray(w1) / self.dk1
        if np.any(np.abs(m0) > self.g0.n / 2 + _ALIGN_TOL) or \
           np.any(np.abs(m1) > self.g1.n / 2 + _ALIGN_TOL):
            raise GridTooCoarse(
                "requested output frequencies exceed the state grid's Nyquist "
                "band; refine the state grid or shrink the output extent"
            )
        return m0, m1

    def _integrand(self, c0, c1):
        if c0 != self._c0_key or self._bra_c0 is None:
            self._bra_c0 = _axis_shift(self.bra, c0, self.g0.step, axis=0)
            self._ket_c0 = _axis_shift(self.ket_refl, -c0, self.g0.step, axis=0)
            self._c0_key = c0
        b = _axis_shift(self._bra_c0, c1, self.g1.step, axis=1)
        k = _axis_shift(self._ket_c0, -c1, self.g1.step, axis=1)
        return np.conj(b) * k

    def eval_group(self, c0, c1, w0, w1):
        """I(w; c) for all (w0, w1) pairs at one centre (c0, c1)."""
        h = self._integrand(float(c0), float(c1))
        if np.max(np.abs(h)) <= self.tail_cut:
            return np.zeros(np.asarray(w0).shape, dtype=np.complex128)
        m0, m1 = self.check_resolution(w0, w1)
        r0 = np.round(m0)
        r1 = np.round(m1)
        aligned = (np.all(np.abs(m0 - r0) <= _ALIGN_TOL)
                   and np.all(np.abs(m1 - r1) <= _ALIGN_TOL))
        if self.method == "fft" and not aligned:
            raise ShiftOffGrid(
                "output frequencies are not on the FFT conjugate lattice; "
                "use method='direct' or an aligned output grid"
            )
        use_fft = self.method == "fft" or (
            self.method == "auto" and aligned and np.asarray(w0).size >= 16
        )
        if use_fft:
            spec = np.fft.ifft2(h) * (self.g0.n * self.g1.n)
            i0 = (r0.astype(int)) % self.g0.n
            i1 = (r1.astype(int)) % self.g1.n
            vals = spec[i0, i1]
            kap0 = r0 * self.dk0
            kap1 = r1 * self.dk1
        else:
            kap0 = 2.0 * self.omega0 * np.asarray(w0)
            kap1 = 2.0 * self.omega1 * np.asarray(w1)
            u0, inv0 = np.unique(kap0, return_inverse=True)
            u1, inv1 = np.unique(kap1, return_inverse=True)
            if u0.size * u1.size <= 4 * kap0.size:
                # pairs (near-)fill a product grid: separable contraction
                e0 = np.exp(1j * np.outer(u0, self.t0 - self.g0.origin))
                e1 = np.exp(1j * np.outer(u1, self.t1 - self.g1.origin))
                vals = (e0 @ h @ e1.T)[inv0, inv1]
            else:
                e0 = np.exp(1j * np.outer(kap0, self.t0 - self.g0.origin))
                e1 = np.exp(1j * np.outer(kap1, self.t1 - self.g1.origin))
                vals = np.einsum("mi,ij,mj->m", e0, h, e1, optimize=True)
        # fold in the grid origin so the phases reference absolute coordinates
        vals = vals * np.exp(1j * (kap0 * self.g0.origin + kap1 * self.g1.origin))
        return 4.0 * self.cell * vals


def _phase_integral(ket, bra, w0, w1, c0, c1, omega0, omega1, method="auto"):
    """Batched I(w; c) over M points, grouped by centre."""
    w0 = np.asarray(w0, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    m = w0.size
    out = np.empty(m, dtype=np.complex128)
    centers = np.stack([c0, c1], axis=1)
    uniq, inverse = np.unique(centers, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()  # shape differs across numpy versions
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(uniq.shape[0] + 1))

    def run(lo, hi, evaluator):
        for gi in range(lo, hi):
            idx = order[bounds[gi]:bounds[gi + 1]]
            cc0, cc1 = uniq[gi]
            out[idx] = evaluator.eval_group(cc0, cc1, w0[idx], w1[idx])

    n_groups = uniq.shape[0]
    workers = _worker_count()
    if workers > 1 and n_groups >= 64:
        # groups are sorted by centre, so each chunk keeps its own shift cache warm
        chunk = -(-n_groups // workers)
        evaluators = [_GroupEvaluator(ket, bra, omega0, omega1, method)
                      for _ in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(run, lo, min(lo + chunk, n_groups), ev)
                for lo, ev in zip(range(0, n_groups, chunk), evaluators)
            ]
            for f in futures:
                f.result()
    else:
        run(0, n_groups, _GroupEvaluator(ket, bra, omega0, omega1, method))
    return out


# ---------------------------------------------------------------------------
# Coordinate maps
# ---------------------------------------------------------------------------

def _wave_coords(label: OrbitLabel, pts: np.ndarray):
    """Orbit coordinates -> (w0, w1, c0, c1).

    The generic-sector formulas specialise exactly to the k3 = 0 and
    k2 = k3 = 0 sectors because the discriminant collapses to k1^2 a^2.
    """
    c = label.consts
    k1, k2, k3 = label.k1, label.k2, label.k3
    d = label.discriminant
    k1s, k2s, k3s, k4s = pts.T
    w0 = (k1s * k1 ** 2 * c.alpha ** 2 - k4s * k1 * k2 * c.alpha * c.beta) / d
    c1 = (k1 * k4s * c.alpha ** 2 - k1s * k3 * c.alpha * c.gamma) / d
    return w0, k2s, k3s / k1, c1


def orbit_from_wave_coords(label: OrbitLabel, w0, w1, c0, c1) -> CoadjointPoint:
    """Inverse of the orbit -> (frequency, centre) map; handy for building
    FFT-aligned probe points."""
    nc = NCCoords(qnc=(float(w0), float(w1)),
                  pnc=(label.k1 * float(c0), label.k1 * float(c1)))
    return nc_to_orbit(nc, label)


def aligned_frequency_grid(state_axis: Grid1D, omega: float, n: int,
                           stride: int = 1) -> Grid1D:
    """Output grid whose phases 2*omega*w land on the conjugate lattice."""
    dk = 2.0 * math.pi / (state_axis.n * state_axis.step)
    step = stride * dk / (2.0 * abs(omega))
    return Grid1D(n=n, origin=-(n // 2) * step, step=step)


def aligned_center_grid(state_axis: Grid1D, n: int, stride: int = 1) -> Grid1D:
    """Output grid whose centre offsets are whole numbers of state steps."""
    step = stride * state_axis.step
    return Grid1D(n=n, origin=-(n // 2) * step, step=step)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def _require_rep(f: ComplexField2D, rep: str, what: str):
    if f.rep != rep:
        raise ValueError(f"{what} must be tagged rep={rep!r}, got {f.rep!r}")


def _require_sector(label: OrbitLabel, sector: Sector, op_name: str):
    if label.sector is not sector:
        raise SectorMismatch(
            f"{op_name} needs a {sector.value} label, got {label.sector.value}"
        )


def _orbit_sector_transform(op, pts, label, pref, method, max_axis_points):
    _require_rep(op.ket, "momentum", "ket")
    _require_rep(op.bra, "momentum", "bra")
    arr, domain = _as_points(pts, ORBIT_COORDS, max_axis_points)
    w0, w1, c0, c1 = _wave_coords(label, arr)
    vals = pref * _phase_integral(op.ket, op.bra, w0, w1, c0, c1,
                                  label.consts.alpha, label.consts.alpha, method)
    return _package(vals, domain, label)


def wigner_generic(op: RankOneOperator, pts, label: OrbitLabel,
                   method: str = "auto",
                   max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Wigner transform of |ket><bra| on a generic 4D orbit.

    pts may be an orbit-coordinate Domain4D (returns a WignerField) or a
    sequence of CoadjointPoint / an (M, 4) array (returns complex values).
    Both fields must be momentum-space samples.
    """
    _require_sector(label, Sector.GENERIC, "wigner_generic")
    pref = abs(label.consts.alpha) / (2.0 * math.pi * math.sqrt(label.abs_discriminant))
    return _orbit_sector_transform(op, pts, label, pref, method, max_axis_points)


def wigner_tau0(op: RankOneOperator, pts, label: OrbitLabel,
                method: str = "auto",
                max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Wigner transform on the k3 = 0 family of 4D orbits.

    Same integral as the generic transform with k3 = 0 but its own sector
    normalisation 1/((2 pi)^(3/2) |k1|); in the k2 -> 0 limit it therefore
    exceeds :func:`wigner_qm_orbit` by TAU0_TO_QM_PREFACTOR_RATIO.
    """
    _require_sector(label, Sector.TAU_ZERO, "wigner_tau0")
    pref = (2.0 * math.pi) ** -1.5 / abs(label.k1)
    return _orbit_sector_transform(op, pts, label, pref, method, max_axis_points)


def wigner_qm_orbit(op: RankOneOperator, pts, label: OrbitLabel,
                    method: str = "auto",
                    max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Wigner transform on the commutative k2 = k3 = 0 orbits.

    Coincides with the textbook cross-Wigner transform under the convention
    map documented in the module docstring.
    """
    _require_sector(label, Sector.SIGMA_TAU_ZERO, "wigner_qm_orbit")
    pref = (2.0 * math.pi) ** -2 / abs(label.k1)
    return _orbit_sector_transform(op, pts, label, pref, method, max_axis_points)


def _nc_pref(label: OrbitLabel) -> float:
    k1a = abs(label.k1 * label.consts.alpha)
    return k1a ** 3 / ((2.0 * math.pi) ** 2 * math.sqrt(label.abs_discriminant))


def wigner_nc(op: RankOneOperator, pts, label: OrbitLabel,
              method: str = "auto",
              max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Noncommutative Wigner function over (q^nc, p^nc).

    Computed natively from its defining integral (phases exp(-i k1 a q.s),
    centres p^nc), not by resampling :func:`wigner_generic`; the two routes
    agree through the coordinate maps, which the tests exercise.
    """
    _require_sector(label, Sector.GENERIC, "wigner_nc")
    _require_rep(op.ket, "momentum", "ket")
    _require_rep(op.bra, "momentum", "bra")
    arr, domain = _as_points(pts, NC_COORDS, max_axis_points)
    q1, q2, p1, p2 = arr.T
    om = -label.k1 * label.consts.alpha
    vals = _nc_pref(label) * _phase_integral(op.ket, op.bra, q1, q2, p1, p2,
                                             om, om, method)
    return _package(vals, domain, label)


def wigner_nc_position(psi: ComplexField2D, phi: ComplexField2D, pts,
                       label: OrbitLabel, method: str = "auto",
                       max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Noncommutative Wigner function from position-space fields.

    W(q, p) = pref * int exp(i k1 a p.r) conj(psi)(r/2 + q) phi(-r/2 + q) d^2 r,

    the transform of |phi><psi|.  For phi = psi it equals :func:`wigner_nc`
    applied to the (k1 a)-scaled momentum representation of psi.
    """
    _require_sector(label, Sector.GENERIC, "wigner_nc_position")
    _require_rep(psi, "position", "psi")
    _require_rep(phi, "position", "phi")
    arr, domain = _as_points(pts, NC_COORDS, max_axis_points)
    q1, q2, p1, p2 = arr.T
    om = label.k1 * label.consts.alpha
    vals = _nc_pref(label) * _phase_integral(phi, psi, p1, p2, q1, q2,
                                             om, om, method)
    return _package(vals, domain, label)


def wigner_nc_params(psi: ComplexField2D, pts, params: NCParams,
                     method: str = "auto",
                     max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Noncommutative Wigner function of |psi><psi| in (hbar, vartheta, bfield)
    form over orbit coordinates.

    W(k*) = (4 pi^2 |hbar| sqrt|E|)^(-1)
            int exp(i k3* r1/hbar + i (hbar k4* + B k1*) r2 / E)
                conj(psi)(r1/2 + u, r2/2 + k2*) psi(-r1/2 + u, -r2/2 + k2*) dr

    with E = hbar^2 - B theta and u = (hbar^2 k1* + hbar theta k4*)/E.
    At vartheta = bfield = 0 this is the standard hbar-convention Wigner
    transform over (k1*, k2*; k3*, k4*).
    """
    _require_rep(psi, "position", "psi")
    e = params.det
    if e == 0.0:
        raise DegenerateParams("hbar^2 - bfield*vartheta = 0: degenerate parameters")
    arr, domain = _as_points(pts, ORBIT_COORDS, max_axis_points)
    k1s, k2s, k3s, k4s = arr.T
    hb, th, bf = params.hbar, params.vartheta, params.bfield
    w1 = (hb * k4s + bf * k1s) / e
    c0 = (hb ** 2 * k1s + hb * th * k4s) / e
    pref = 1.0 / (4.0 * math.pi ** 2 * abs(hb) * math.sqrt(abs(e)))
    vals = pref * _phase_integral(psi, psi, k3s, w1, c0, k2s,
                                  1.0 / hb, 1.0, method)
    return _package(vals, domain, None)


def cross_wigner_standard(phi: ComplexField2D, psi: ComplexField2D, pts,
                          h: float, method: str = "auto",
                          max_axis_points: int = _DEFAULT_AXIS_CAP):
    """Textbook cross-Wigner transform of |phi><psi| in the Planck-h convention.

    W(q, p) = h^(-2) int conj(psi)(q - x/2) exp(-2 pi i x.p / h) phi(q + x/2) d^2 x

    for position-space fields on a common grid.
    """
    if h == 0.0 or not math.isfinite(h):
        raise ValueError("h must be finite and nonzero")
    _require_rep(phi, "position", "phi")
    _require_rep(psi, "position", "psi")
    arr, domain = _as_points(pts, PHASE_COORDS, max_axis_points)
    q1, q2, p1, p2 = arr.T
    om = 2.0 * math.pi / h
    vals = _phase_integral(phi, psi, p1, p2, q1, q2, om, om, method) / h ** 2
    return _package(vals, domain, None)


def qm_limit_check(psi: ComplexField2D, labels, pts,
                   method: str = "auto") -> np.ndarray:
    """Sup-norm distances of the nc Wigner function to the canonical one.

    ``labels`` is a sequence of generic labels sharing k1 and the constants,
    with k2, k3 shrinking towards zero.  The reference is the textbook
    transform at h = 2 pi/(k1 a), evaluated at the probe (q, p) points, to
    which the sequence converges.  Returns one distance per label.
    """
    labels = list(labels)
    if not labels:
        return np.zeros(0)
    k1 = labels[0].k1
    consts = labels[0].consts
    for lab in labels:
        if lab.k1 != k1 or lab.consts != consts:
            raise ValueError("all labels must share k1 and the dimensional constants")
    from .numerics import momentum_representation

    arr, _ = _as_points(pts, NC_COORDS, _DEFAULT_AXIS_CAP)
    scale = k1 * consts.alpha
    psihat = momentum_representation(psi, scale)
    op = RankOneOperator(ket=psihat, bra=psihat)
    ref = cross_wigner_standard(psi, psi, arr, h=2.0 * math.pi / scale, method=method)
    dists = np.empty(len(labels))
    for i, lab in enumerate(labels):
        w = wigner_nc(op, arr, lab, method=method)
        dists[i] = float(np.max(np.abs(w - ref)))
    return dists
