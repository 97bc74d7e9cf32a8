"""Domain types and closed-form constant tables.

The objects here describe the kinematics of a two-degree-of-freedom
noncommutative quantum system whose symmetry group is the seven-parameter
nilpotent group obtained by centrally extending the translation group of
R^4 three times.  An irreducible sector is labelled by a real triple
(k1, k2, k3) together with three nonzero dimensional constants
(alpha, beta, gamma); the corresponding four-dimensional orbit in the dual
of the Lie algebra carries coordinates (k1*, k2*, k3*, k4*).

Everything in this module is an immutable value object or a pure function;
concurrent use needs no synchronisation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NCWignerError",
    "InvalidLabel",
    "SectorMismatch",
    "DegenerateParams",
    "ShiftOffGrid",
    "GridTooCoarse",
    "GridTooLarge",
    "Sector",
    "DimensionalConstants",
    "OrbitLabel",
    "NCParams",
    "GroupElement",
    "CoadjointPoint",
    "NCCoords",
    "Grid1D",
    "Grid2D",
    "ComplexField2D",
    "RankOneOperator",
    "Domain4D",
    "WignerField",
    "ORBIT_COORDS",
    "NC_COORDS",
    "PHASE_COORDS",
    "make_orbit_label",
    "nc_params_from_label",
    "orbit_to_nc",
    "nc_to_orbit",
    "plancherel_density",
    "duflo_moore_constant",
]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class NCWignerError(Exception):
    """Base class for errors raised by this package."""


class InvalidLabel(NCWignerError, ValueError):
    """Orbit label outside the covered parameter range."""


class SectorMismatch(NCWignerError):
    """A transform was applied to a label from the wrong sector."""


class DegenerateParams(NCWignerError):
    """Noncommutativity parameters make the requested kernel singular."""


class ShiftOffGrid(NCWignerError):
    """A required translation is not an integer number of grid steps."""


class GridTooCoarse(NCWignerError):
    """The sampling grid cannot resolve the requested oscillatory phases."""


class GridTooLarge(NCWignerError):
    """A four-dimensional grid exceeds the desk-scale size cap."""


# ---------------------------------------------------------------------------
# Labels and parameters
# ---------------------------------------------------------------------------

class Sector(enum.Enum):
    """Which central parameters of the label vanish."""

    GENERIC = "generic"           # k2 != 0 and k3 != 0
    TAU_ZERO = "tau_zero"         # k2 != 0, k3 == 0
    SIGMA_TAU_ZERO = "sigma_tau_zero"  # k2 == k3 == 0


@dataclass(frozen=True)
class DimensionalConstants:
    """The three fixed constants (alpha, beta, gamma) of the group law.

    Units are bookkeeping only (alpha ~ 1/action, beta ~ 1/(momentum^2 action),
    gamma ~ 1/(length^2 action)); all arithmetic is on dimensionless floats.
    """

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v) or v == 0.0:
                raise InvalidLabel(f"{name} must be finite and nonzero, got {v!r}")


@dataclass(frozen=True)
class OrbitLabel:
    """Validated triple (k1, k2, k3) selecting an irreducible sector.

    Construct through :func:`make_orbit_label`; the constructor itself does
    not re-derive the sector.
    """

    k1: float
    k2: float
    k3: float
    consts: DimensionalConstants
    sector: Sector

    @property
    def discriminant(self) -> float:
        """Signed k1^2 alpha^2 - k2 k3 beta gamma."""
        c = self.consts
        return self.k1 ** 2 * c.alpha ** 2 - self.k2 * self.k3 * c.beta * c.gamma

    @property
    def abs_discriminant(self) -> float:
        return abs(self.discriminant)


def make_orbit_label(k1: float, k2: float, k3: float,
                     consts: DimensionalConstants | None = None) -> OrbitLabel:
    """Classify and validate an orbit label.

    Zero tests on k2 and k3 are exact comparisons with 0.0 by design: sector
    semantics must be unambiguous, and near-zero limits are expressed by
    generic labels with explicitly small parameters.

    Raises InvalidLabel for k1 = 0, for the degenerate surface
    k1^2 alpha^2 - k2 k3 beta gamma = 0, and for the uncovered pattern
    k2 = 0 with k3 != 0.
    """
    consts = consts if consts is not None else DimensionalConstants()
    for name, v in (("k1", k1), ("k2", k2), ("k3", k3)):
        if not math.isfinite(v):
            raise InvalidLabel(f"{name} must be finite, got {v!r}")
    if k1 == 0.0:
        raise InvalidLabel("k1 must be nonzero in every sector")
    if k2 == 0.0 and k3 != 0.0:
        raise InvalidLabel("labels with k2 = 0 but k3 != 0 are not covered")
    if k2 != 0.0 and k3 != 0.0:
        disc = k1 ** 2 * consts.alpha ** 2 - k2 * k3 * consts.beta * consts.gamma
        if disc == 0.0:
            raise InvalidLabel(
                "degenerate orbit: k1^2 alpha^2 - k2 k3 beta gamma = 0"
            )
        sector = Sector.GENERIC
    elif k2 != 0.0:
        sector = Sector.TAU_ZERO
    else:
        sector = Sector.SIGMA_TAU_ZERO
    return OrbitLabel(float(k1), float(k2), float(k3), consts, sector)


@dataclass(frozen=True)
class NCParams:
    """Dimensionful noncommutativity parameters.

    hbar deforms the position-momentum bracket, vartheta (units of length^2)
    the position-position bracket and bfield (units of momentum^2) the
    momentum-momentum bracket.
    """

    hbar: float
    vartheta: float = 0.0
    bfield: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.hbar) or self.hbar == 0.0:
            raise DegenerateParams(f"hbar must be finite and nonzero, got {self.hbar!r}")
        for name in ("vartheta", "bfield"):
            if not math.isfinite(getattr(self, name)):
                raise DegenerateParams(f"{name} must be finite")

    @property
    def det(self) -> float:
        """hbar^2 - bfield*vartheta, the symplectic determinant of the deformation."""
        return self.hbar ** 2 - self.bfield * self.vartheta


def nc_params_from_label(label: OrbitLabel) -> NCParams:
    """Map an orbit label to (hbar, vartheta, bfield).

    hbar = 1/(k1 alpha), vartheta = -k2 beta/(k1 alpha)^2,
    bfield = -k3 gamma/(k1 alpha)^2.
    """
    c = label.consts
    k1a2 = (label.k1 * c.alpha) ** 2
    # the + 0.0 normalises the -0.0 that appears when k2 or k3 vanish
    return NCParams(
        hbar=1.0 / (label.k1 * c.alpha),
        vartheta=-label.k2 * c.beta / k1a2 + 0.0,
        bfield=-label.k3 * c.gamma / k1a2 + 0.0,
    )


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """(theta, phi, psi, q, p) with q, p two-vectors."""

    theta: float = 0.0
    phi: float = 0.0
    psi: float = 0.0
    q: tuple[float, float] = (0.0, 0.0)
    p: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class CoadjointPoint:
    """A point (k1*, k2*, k3*, k4*) on a four-dimensional orbit."""

    k1s: float
    k2s: float
    k3s: float
    k4s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.k1s, self.k2s, self.k3s, self.k4s], dtype=float)


@dataclass(frozen=True)
class NCCoords:
    """Noncommutative positions and momenta (q^nc, p^nc)."""

    qnc: tuple[float, float]
    pnc: tuple[float, float]

    def as_array(self) -> np.ndarray:
        return np.array([*self.qnc, *self.pnc], dtype=float)


def orbit_to_nc(pt: CoadjointPoint, label: OrbitLabel) -> NCCoords:
    """Orbit coordinates -> noncommutative coordinates.

    q1nc = (k1* k1^2 a^2 - k4* k1 k2 a b) / (k1^2 a^2 - k2 k3 b g)
    q2nc = k2*
    p1nc = k3*
    p2nc = (k1^2 k4* a^2 - k1 k1* k3 a g) / (k1^2 a^2 - k2 k3 b g)

    with a, b, g the dimensional constants.  For k2 = k3 = 0 the map is the
    identity.
    """
    c = label.consts
    k1, k2, k3 = label.k1, label.k2, label.k3
    d = label.discriminant
    q1 = (pt.k1s * k1 ** 2 * c.alpha ** 2 - pt.k4s * k1 * k2 * c.alpha * c.beta) / d
    p2 = (k1 ** 2 * pt.k4s * c.alpha ** 2 - k1 * pt.k1s * k3 * c.alpha * c.gamma) / d
    return NCCoords(qnc=(q1, pt.k2s), pnc=(pt.k3s, p2))


def nc_to_orbit(nc: NCCoords, label: OrbitLabel) -> CoadjointPoint:
    """Exact inverse of :func:`orbit_to_nc`.

    k2* and k3* are read off directly; (k1*, k4*) solve the 2x2 linear
    system, which non-degeneracy keeps invertible:

    k1* = (k1 a q1nc + k2 b p2nc) / (k1 a)
    k4* = (k3 g q1nc + k1 a p2nc) / (k1 a)
    """
    c = label.consts
    k1a = label.k1 * c.alpha
    q1, q2 = nc.qnc
    p1, p2 = nc.pnc
    k1s = (k1a * q1 + label.k2 * c.beta * p2) / k1a
    k4s = (label.k3 * c.gamma * q1 + k1a * p2) / k1a
    return CoadjointPoint(k1s, q2, p1, k4s)


def plancherel_density(label: OrbitLabel) -> float:
    """Density of the Plancherel measure on the label's sector.

    Generic sector: |k1^2 a^2 - k2 k3 b g| / a^2.  On the lower-dimensional
    sectors the delta factors restricting the measure act as sector
    selectors and the density on the parameter slice is k1^2.
    """
    if label.sector is Sector.GENERIC:
        return label.abs_discriminant / label.consts.alpha ** 2
    return label.k1 ** 2


def duflo_moore_constant(label: OrbitLabel) -> float:
    """Scalar of the Duflo-Moore operator: the group is unimodular, so the
    operator is this multiple of the identity.

    (2 pi)^(5/2), (2 pi)^2 and (2 pi)^(3/2) on the generic, k3 = 0 and
    k2 = k3 = 0 sectors respectively.
    """
    if label.sector is Sector.GENERIC:
        return (2.0 * math.pi) ** 2.5
    if label.sector is Sector.TAU_ZERO:
        return (2.0 * math.pi) ** 2
    return (2.0 * math.pi) ** 1.5


# ---------------------------------------------------------------------------
# Grids and sampled fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid1D:
    """Uniform grid: n samples at origin + i*step, i = 0..n-1."""

    n: int
    origin: float
    step: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs n >= 2, got {self.n}")
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")

    @classmethod
    def symmetric(cls, n: int, extent: float) -> "Grid1D":
        """[-extent, extent - step] with step = 2*extent/n; sample n/2 sits at 0."""
        step = 2.0 * extent / n
        return cls(n=n, origin=-extent, step=step)

    def coords(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.n)

    @property
    def upper(self) -> float:
        return self.origin + self.step * (self.n - 1)


@dataclass(frozen=True)
class Grid2D:
    """Product of two 1D grids; axis0 is the first array index."""

    axis0: Grid1D
    axis1: Grid1D

    @classmethod
    def square(cls, n: int, extent: float) -> "Grid2D":
        g = Grid1D.symmetric(n, extent)
        return cls(g, g)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.axis0.n, self.axis1.n)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis0.coords(), self.axis1.coords(), indexing="ij")


_FIELD_REPS = ("position", "momentum", "landau")


@dataclass(frozen=True)
class ComplexField2D:
    """Complex samples of a function on a 2D grid.

    ``rep`` records the caller-side interpretation of the two axes:
    "position" for (r1, r2), "momentum" for (s1, s2) and "landau" for the
    mixed (r1, s2) carrier space of the group representation.  The flat file
    layout enumerates axis0 fastest; in memory values[i0, i1] indexes
    (axis0, axis1).
    """

    grid: Grid2D
    values: np.ndarray
    rep: str = "position"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        if self.rep not in _FIELD_REPS:
            raise ValueError(f"unknown representation tag {self.rep!r}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray, rep: str | None = None) -> "ComplexField2D":
        return ComplexField2D(self.grid, values, rep if rep is not None else self.rep)

    def with_rep(self, rep: str) -> "ComplexField2D":
        return ComplexField2D(self.grid, self.values, rep)

    def norm(self) -> float:
        """Discrete L2 norm sqrt(h0 h1 sum |f|^2)."""
        h = self.grid.axis0.step * self.grid.axis1.step
        return float(np.sqrt(h * np.sum(np.abs(self.values) ** 2)))

    def flat_values(self) -> np.ndarray:
        """Flat copy with axis0 index varying fastest."""
        return self.values.ravel(order="F").copy()

    @classmethod
    def from_flat(cls, grid: Grid2D, flat: np.ndarray, rep: str = "position") -> "ComplexField2D":
        v = np.asarray(flat, dtype=np.complex128).reshape(grid.shape, order="F")
        return cls(grid, v, rep)


@dataclass(frozen=True)
class RankOneOperator:
    """|ket><bra| for two fields on a common grid."""

    ket: ComplexField2D
    bra: ComplexField2D

    def __post_init__(self):
        if self.ket.grid != self.bra.grid:
            raise ValueError("ket and bra must share one grid")


# ---------------------------------------------------------------------------
# Output domains and Wigner fields
# ---------------------------------------------------------------------------

ORBIT_COORDS = ("k1s", "k2s", "k3s", "k4s")
NC_COORDS = ("q1nc", "q2nc", "p1nc", "p2nc")
PHASE_COORDS = ("q1", "q2", "p1", "p2")


@dataclass(frozen=True)
class Domain4D:
    """A 2D slice or full 4D grid over four named coordinates.

    ``varying`` lists the sampled coordinates (two for a slice, four for a
    full grid) in the canonical order of ``names``; the rest are pinned in
    ``fixed``.
    """

    names: tuple[str, str, str, str]
    varying: tuple[str, ...]
    grids: tuple[Grid1D, ...]
    fixed: tuple[tuple[str, float], ...]

    @classmethod
    def build(cls, names: tuple[str, str, str, str], **coords) -> "Domain4D":
        """Each keyword is a coordinate name mapped to a Grid1D or a number."""
        unknown = set(coords) - set(names)
        if unknown:
            raise ValueError(f"unknown coordinates {sorted(unknown)}; expected {names}")
        missing = set(names) - set(coords)
        if missing:
            raise ValueError(f"missing coordinates {sorted(missing)}")
        varying, grids, fixed = [], [], []
        for name in names:
            v = coords[name]
            if isinstance(v, Grid1D):
                varying.append(name)
                grids.append(v)
            else:
                fixed.append((name, float(v)))
        if len(varying) not in (2, 4):
            raise ValueError("a domain must vary exactly two or four coordinates")
        return cls(names, tuple(varying), tuple(grids), tuple(fixed))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(g.n for g in self.grids)

    @property
    def is_full(self) -> bool:
        return len(self.varying) == 4

    def points(self) -> np.ndarray:
        """All sampled coordinates as an (M, 4) array in ``names`` order."""
        axes = [g.coords() for g in self.grids]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = {name: m.ravel() for name, m in zip(self.varying, mesh)}
        m = mesh[0].size
        cols = []
        fixed = dict(self.fixed)
        for name in self.names:
            if name in flat:
                cols.append(flat[name])
            else:
                cols.append(np.full(m, fixed[name]))
        return np.stack(cols, axis=1)


def orbit_domain(**coords) -> Domain4D:
    """Domain over the orbit coordinates (k1s, k2s, k3s, k4s)."""
    return Domain4D.build(ORBIT_COORDS, **coords)


def nc_domain(**coords) -> Domain4D:
    """Domain over the noncommutative coordinates (q1nc, q2nc, p1nc, p2nc)."""
    return Domain4D.build(NC_COORDS, **coords)


def phase_space_domain(**coords) -> Domain4D:
    """Domain over ordinary phase-space coordinates (q1, q2, p1, p2)."""
    return Domain4D.build(PHASE_COORDS, **coords)


@dataclass(frozen=True)
class WignerField:
    """Sampled Wigner-type transform over a :class:`Domain4D`.

    For a diagonal rank-one operator the values are real up to quadrature
    noise; that is tested, not enforced here.
    """

    domain: Domain4D
    values: np.ndarray
    label: OrbitLabel | None = None
    attrs: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.domain.shape:
            raise ValueError(f"values shape {v.shape} != domain shape {self.domain.shape}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def kind(self) -> str:
        return "full4d" if self.domain.is_full else "slice2d"

    def grid_for(self, name: str) -> Grid1D:
        return self.grids_by_name()[name]

    def grids_by_name(self) -> dict[str, Grid1D]:
        return dict(zip(self.domain.varying, self.domain.grids))
