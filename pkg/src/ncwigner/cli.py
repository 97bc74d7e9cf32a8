"""Command-line front end.

Subcommands compute Wigner transforms, marginals and star products for
built-in Gaussian states or field files, run the verification suites, and
run the commutative-limit study.  Output files are plain text (csv,
gnuplot blocks or json) with 17-significant-digit floats, reproducible
byte for byte for identical flags and seed.

Exit codes: 0 success; 2 argument errors; 3 invalid labels, sector
mismatches and singular parameters; 4 grid guards (too coarse, too large,
off-grid shifts).  Every run prints the resolved label, the derived
noncommutativity parameters, grid metadata and the evaluation method to
standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .core import (
    ComplexField2D,
    DegenerateParams,
    DimensionalConstants,
    Domain4D,
    Grid1D,
    Grid2D,
    GridTooCoarse,
    GridTooLarge,
    InvalidLabel,
    NCParams,
    NC_COORDS,
    ORBIT_COORDS,
    OrbitLabel,
    PHASE_COORDS,
    RankOneOperator,
    SectorMismatch,
    ShiftOffGrid,
    WignerField,
    make_orbit_label,
    nc_params_from_label,
)
from .numerics import conjugate_grid
from .oracles import (
    VerifyConfig,
    format_report,
    gaussian_state,
    gaussian_state_momentum,
    run_verification_suite,
)
from .starprod import MarginalField, marginal_momentum, marginal_position, star_B, star_general, star_hbar, star_vartheta
from .wigner import (
    cross_wigner_standard,
    qm_limit_check,
    wigner_generic,
    wigner_nc,
    wigner_nc_params,
    wigner_qm_orbit,
    wigner_tau0,
)

_FMT = "%.17g"


def _fnum(x: float) -> str:
    return _FMT % x


# ---------------------------------------------------------------------------
# field file format
# ---------------------------------------------------------------------------

def write_field_file(path: str, grids: tuple[Grid1D, Grid1D], values: np.ndarray,
                     meta: dict[str, str], fmt: str = "csv"):
    """Write a 2D complex field: '#'-prefixed metadata, then row-major
    samples with axis0 varying fastest."""
    g0, g1 = grids
    x0 = g0.coords()
    x1 = g1.coords()
    v = np.asarray(values, dtype=np.complex128)
    lines = ["# ncwigner-field 1"]
    for key, val in meta.items():
        lines.append(f"# {key}: {val}")
    for name, g in (("axis0", g0), ("axis1", g1)):
        lines.append(f"# {name}: n={g.n} origin={_fnum(g.origin)} step={_fnum(g.step)}")
    lines.append("# layout: axis0-fastest")
    if fmt == "csv":
        lines.append("# columns: x0,x1,re,im")
        for j1 in range(g1.n):
            for j0 in range(g0.n):
                z = v[j0, j1]
                lines.append(",".join((_fnum(x0[j0]), _fnum(x1[j1]),
                                       _fnum(z.real), _fnum(z.imag))))
    elif fmt == "gnuplot":
        lines.append("# columns: x0 x1 re im (blank line between x0 blocks)")
        for j0 in range(g0.n):
            for j1 in range(g1.n):
                z = v[j0, j1]
                lines.append(" ".join((_fnum(x0[j0]), _fnum(x1[j1]),
                                       _fnum(z.real), _fnum(z.imag))))
            lines.append("")
    elif fmt == "json":
        doc = {
            "format": "ncwigner-field",
            "version": 1,
            "meta": meta,
            "axes": [
                {"n": g.n, "origin": g.origin, "step": g.step} for g in (g0, g1)
            ],
            "layout": "axis0-fastest",
            "re": [float(z.real) for z in v.ravel(order="F")],
            "im": [float(z.imag) for z in v.ravel(order="F")],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_field_file(path: str) -> ComplexField2D:
    """Read a csv field file written by :func:`write_field_file`."""
    meta: dict[str, str] = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    meta[key.strip()] = val.strip()
                continue
            rows.append([float(t) for t in line.split(",")])
    grids = []
    for name in ("axis0", "axis1"):
        if name not in meta:
            raise ValueError(f"field file {path} lacks the {name} header")
        kv = dict(tok.split("=") for tok in meta[name].split())
        grids.append(Grid1D(n=int(kv["n"]), origin=float(kv["origin"]),
                            step=float(kv["step"])))
    g0, g1 = grids
    data = np.asarray(rows, dtype=float)
    if data.shape[0] != g0.n * g1.n:
        raise ValueError(f"field file {path}: expected {g0.n * g1.n} rows, got {data.shape[0]}")
    flat = data[:, 2] + 1j * data[:, 3]
    rep = meta.get("representation", "position")
    return ComplexField2D.from_flat(Grid2D(g0, g1), flat, rep=rep)


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_state_spec(spec: str):
    """'gaussian:n0,n1[,q01,q02,p01,p02]' or 'file:<path>'."""
    kind, _, rest = spec.partition(":")
    if kind == "file":
        if not rest:
            raise _CliFailure(2, "--state file: requires a path")
        return ("file", rest)
    if kind != "gaussian":
        raise _CliFailure(2, f"--state: unknown source {kind!r} (use gaussian: or file:)")
    parts = [p for p in rest.split(",") if p != ""]
    if len(parts) not in (2, 4, 6):
        raise _CliFailure(2, "--state gaussian: needs n0,n1[,q01,p01|,q01,q02,p01,p02]")
    n0, n1 = int(parts[0]), int(parts[1])
    center = [0.0, 0.0, 0.0, 0.0]
    if len(parts) == 4:
        center = [float(parts[2]), 0.0, float(parts[3]), 0.0]
    elif len(parts) == 6:
        center = [float(p) for p in parts[2:]]
    return ("gaussian", (n0, n1), tuple(center))


def _label_from_args(args) -> OrbitLabel:
    consts = DimensionalConstants(args.alpha, args.beta, args.gamma)
    return make_orbit_label(args.k1, args.k2, args.k3, consts)


def _parse_slice(spec: str | None, names) -> dict[str, float]:
    fixed = {}
    if not spec:
        return fixed
    for item in spec.split(","):
        if not item:
            continue
        name, _, val = item.partition("=")
        name = name.strip()
        if name not in names:
            raise _CliFailure(2, f"--slice: unknown coordinate {name!r}; expected one of {names}")
        fixed[name] = float(val)
    return fixed


def _build_domain(names, fixed: dict[str, float], n: int, extent: float) -> Domain4D:
    spec = {}
    for name in names:
        if name in fixed:
            spec[name] = fixed[name]
        else:
            spec[name] = Grid1D.symmetric(n, extent)
    return Domain4D.build(names, **spec)


def _meta_lines(label: OrbitLabel | None, params: NCParams | None, extra: dict[str, str]):
    meta = {}
    if label is not None:
        c = label.consts
        meta["label"] = (f"k1={_fnum(label.k1)} k2={_fnum(label.k2)} k3={_fnum(label.k3)} "
                         f"alpha={_fnum(c.alpha)} beta={_fnum(c.beta)} gamma={_fnum(c.gamma)} "
                         f"sector={label.sector.value}")
    if params is not None:
        meta["params"] = (f"hbar={_fnum(params.hbar)} vartheta={_fnum(params.vartheta)} "
                          f"bfield={_fnum(params.bfield)}")
    meta.update(extra)
    return meta


def _log_run(meta: dict[str, str], method: str | None = None):
    for key, val in meta.items():
        print(f"[ncwig] {key}: {val}", file=sys.stderr)
    if method is not None:
        print(f"[ncwig] method: {method}", file=sys.stderr)


def _momentum_state_for_output(args, label: OrbitLabel, domain: Domain4D,
                               state, method: str = "auto") -> ComplexField2D:
    """Build the momentum-side field; gaussian sources go on a grid fine
    enough to resolve every requested output phase."""
    if state[0] == "file":
        f = read_field_file(state[1])
        if f.rep != "momentum":
            raise _CliFailure(2, "--state file must carry representation: momentum "
                                 "for this transform")
        return f
    _, hermite, center = state
    a = label.k1 * label.consts.alpha
    from .wigner import _wave_coords  # frequency bound for the requested points

    pts = domain.points()
    if domain.names == ORBIT_COORDS:
        omega = abs(label.consts.alpha)
        w0, w1, _, _ = _wave_coords(label, pts)
        kmax = 2.0 * omega * max(float(np.max(np.abs(w0))),
                                 float(np.max(np.abs(w1))), 1e-9)
    else:
        omega = abs(a)
        kmax = 2.0 * omega * max(float(np.max(np.abs(pts[:, 0]))),
                                 float(np.max(np.abs(pts[:, 1]))), 1e-9)
    # extent covers the state's momentum support; the step is refined until
    # the conjugate band covers every requested output phase
    extent = max(12.0, abs(center[2]) + 10.0, abs(center[3]) + 10.0) / abs(a)
    if method == "fft" and domain.grids:
        # snap the extent so the conjugate lattice divides the output step
        dkap = 2.0 * omega * domain.grids[0].step
        unit = math.pi / dkap
        extent = max(1, math.ceil(extent / unit)) * unit
    n = args.state_grid
    while math.pi * n / (2.0 * extent) <= 1.05 * kmax and n < 4096:
        n *= 2
    grid = Grid1D.symmetric(n, extent)
    return gaussian_state_momentum(Grid2D(grid, grid), a, center=center,
                                   hermite=hermite)


def _position_state(args, state) -> ComplexField2D:
    if state[0] == "file":
        f = read_field_file(state[1])
        if f.rep != "position":
            raise _CliFailure(2, "--state file must carry representation: position "
                                 "for this transform")
        return f
    _, hermite, center = state
    grid = Grid2D.square(args.state_grid, args.state_extent)
    return gaussian_state(grid, center=center, hermite=hermite)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_wigner(args) -> int:
    state = _parse_state_spec(args.state)
    variant = args.variant
    if variant == "standard":
        psi = _position_state(args, state)
        fixed = _parse_slice(args.slice, PHASE_COORDS)
        domain = _build_domain(PHASE_COORDS, fixed, args.grid, args.extent)
        h = args.planck_h
        meta = _meta_lines(None, None, {
            "transform": "standard", "planck_h": _fnum(h),
            "state": args.state,
            "axes": ",".join(domain.varying),
            "fixed": " ".join(f"{k}={_fnum(v)}" for k, v in domain.fixed),
        })
        _log_run(meta, args.method)
        field = cross_wigner_standard(psi, psi, domain, h, method=args.method)
        return _write_wigner(args, field, meta)

    label = _label_from_args(args)
    params = nc_params_from_label(label)
    names = NC_COORDS if variant == "nc" else ORBIT_COORDS
    fixed = _parse_slice(args.slice, names)
    domain = _build_domain(names, fixed, args.grid, args.extent)
    meta = _meta_lines(label, params, {
        "transform": variant,
        "state": args.state,
        "axes": ",".join(domain.varying),
        "fixed": " ".join(f"{k}={_fnum(v)}" for k, v in domain.fixed),
    })
    _log_run(meta, args.method)
    fhat = _momentum_state_for_output(args, label, domain, state, method=args.method)
    g0 = fhat.grid.axis0
    print(f"[ncwig] state-grid: n={g0.n} origin={_fnum(g0.origin)} "
          f"step={_fnum(g0.step)} rep={fhat.rep}", file=sys.stderr)
    for name, g in zip(domain.varying, domain.grids):
        print(f"[ncwig] output-grid {name}: n={g.n} origin={_fnum(g.origin)} "
              f"step={_fnum(g.step)}", file=sys.stderr)
    op = RankOneOperator(ket=fhat, bra=fhat)
    if variant == "generic":
        field = wigner_generic(op, domain, label, method=args.method)
    elif variant == "nc":
        field = wigner_nc(op, domain, label, method=args.method)
    elif variant == "tau0":
        field = wigner_tau0(op, domain, label, method=args.method)
    elif variant == "qm":
        field = wigner_qm_orbit(op, domain, label, method=args.method)
    else:
        raise _CliFailure(2, f"unknown wigner variant {variant!r}")
    return _write_wigner(args, field, meta)


def _write_wigner(args, field: WignerField, meta: dict[str, str]) -> int:
    if len(field.domain.varying) != 2:
        raise _CliFailure(2, "--slice must pin all but two coordinates for file output")
    grids = tuple(field.domain.grids)
    write_field_file(args.out, (grids[0], grids[1]), field.values, meta, fmt=args.format)
    print(f"[ncwig] wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_marginal(args) -> int:
    from .core import nc_domain

    label = _label_from_args(args)
    params = nc_params_from_label(label)
    state = _parse_state_spec(args.state)
    out = Grid1D.symmetric(args.grid, args.extent)
    integ = Grid1D.symmetric(args.int_grid, args.int_extent)
    if args.which == "momentum":
        dom = nc_domain(q1nc=integ, q2nc=integ, p1nc=out, p2nc=out)
    else:
        dom = nc_domain(q1nc=out, q2nc=out, p1nc=integ, p2nc=integ)
    fhat = _momentum_state_for_output(args, label, dom, state)
    op = RankOneOperator(ket=fhat, bra=fhat)
    w4 = wigner_nc(op, dom, label, method=args.method,
                   max_axis_points=max(args.int_grid, args.grid))
    if args.which == "momentum":
        marg = marginal_momentum(w4, label)
    else:
        marg = marginal_position(w4, label)
    meta = _meta_lines(label, params, {
        "transform": f"marginal-{args.which}",
        "state": args.state,
        "coords": marg.coords,
        "residual_imag": _fnum(marg.residual_imag),
    })
    _log_run(meta, args.method)
    write_field_file(args.out, (marg.grid.axis0, marg.grid.axis1),
                     marg.values.astype(np.complex128), meta, fmt=args.format)
    print(f"[ncwig] wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_star(args) -> int:
    if args.k1 is not None:
        label = _label_from_args(args)
        params = nc_params_from_label(label)
    else:
        label = None
        params = NCParams(hbar=args.hbar, vartheta=args.vartheta, bfield=args.bfield)
    state = _parse_state_spec(args.state)
    kind = args.kind
    out1d = Grid1D.symmetric(args.grid, args.extent)
    meta = _meta_lines(label, params, {"transform": f"star-{kind}", "state": args.state})
    _log_run(meta)
    if kind in ("vartheta", "b"):
        if state[0] == "file":
            f = read_field_file(state[1])
        else:
            _, hermite, center = state
            need_mom = kind == "b"
            scale = 1.0 if label is None else label.k1 * label.consts.alpha
            # sample finely enough for the chirp guard
            kernel_scale = 2.0 / abs(params.vartheta if kind == "vartheta" else params.bfield) \
                if (params.vartheta if kind == "vartheta" else params.bfield) != 0.0 else math.inf
            supp = max(abs(center[0]), abs(center[1])) + 8.0
            if math.isfinite(kernel_scale):
                h_needed = 0.45 * math.pi / (kernel_scale * (args.extent + supp))
                n = max(args.state_grid, int(math.ceil(2 * (supp + 2) / h_needed)))
                n += n % 2
            else:
                n = args.state_grid
            grid = Grid2D.square(n, supp + 2.0)
            if need_mom:
                f = gaussian_state_momentum(grid, scale, center=center, hermite=hermite)
            else:
                f = gaussian_state(grid, center=center, hermite=hermite)
        fc = f.with_values(np.conj(f.values))
        fn = star_vartheta if kind == "vartheta" else star_B
        res = fn(fc, f, params, out=Grid2D(out1d, out1d))
        write_field_file(args.out, (out1d, out1d), res.values, meta, fmt=args.format)
    else:
        from .core import orbit_domain

        n = min(args.grid, 16)
        g = Grid1D.symmetric(n, args.extent)
        dom = orbit_domain(k1s=g, k2s=g, k3s=g, k4s=g)
        psi = _position_state(args, state)
        w = wigner_nc_params(psi, dom, params)
        fn = star_hbar if kind == "hbar" else star_general
        res = fn(w, w, params)
        # write the central 2D slice of the 4D result
        mid = n // 2
        meta["slice"] = f"k3s={_fnum(g.coords()[mid])} k4s={_fnum(g.coords()[mid])}"
        write_field_file(args.out, (g, g), res.values[:, :, mid, mid], meta,
                         fmt=args.format)
    print(f"[ncwig] wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    suites = None if args.suite == "all" else tuple(s for s in args.suite.split(",") if s)
    if suites == ():
        reports = []
    else:
        reports = run_verification_suite(VerifyConfig(suites=suites, seed=args.seed))
    lines = [format_report(r) for r in reports]
    body = "\n".join(lines) + ("\n" if lines else "")
    sys.stdout.write(body)
    for r in reports:
        if r.runtime_s is not None:
            print(f"[ncwig] {r.name}: {r.runtime_s:.2f}s", file=sys.stderr)
    if args.out:
        if args.out.endswith(".json"):
            # structured variant; runtimes are volatile and stay out
            doc = [{"name": r.name, "metric": r.metric, "tolerance": r.tolerance,
                    "passed": r.passed, "details": dict(r.details)}
                   for r in reports]
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=1, sort_keys=True)
                fh.write("\n")
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_limit(args) -> int:
    consts = DimensionalConstants(args.alpha, args.beta, args.gamma)
    labels = [make_orbit_label(args.k1, args.c * 2.0 ** -m, args.c * 2.0 ** -m, consts)
              for m in range(args.halvings + 1)]
    state = _parse_state_spec(args.state)
    psi = _position_state(args, state)
    qv = np.linspace(-1.5, 1.5, 4)
    pv = np.linspace(-1.0, 1.0, 3)
    pts = np.array([[q1, q2, p1, p2] for q1 in qv for q2 in qv
                    for p1 in pv for p2 in pv])
    meta = _meta_lines(labels[0], nc_params_from_label(labels[0]), {
        "transform": "limit", "halvings": str(args.halvings), "c": _fnum(args.c),
    })
    _log_run(meta, args.method)
    dists = qm_limit_check(psi, labels, pts, method=args.method)
    for d in dists:
        print(_fnum(d))
    decreasing = bool(np.all(np.diff(dists) < 0))
    ok = decreasing and dists[-1] < args.tolerance
    if not ok:
        print(f"[ncwig] limit study failed: decreasing={decreasing} "
              f"final={dists[-1]:.3g} tolerance={args.tolerance:.3g}", file=sys.stderr)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_label_args(p, required=True):
    p.add_argument("--k1", type=float, required=required, default=None)
    p.add_argument("--k2", type=float, default=0.0)
    p.add_argument("--k3", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)


def _add_state_args(p):
    p.add_argument("--state", default="gaussian:0,0",
                   help="gaussian:n0,n1[,q01,q02,p01,p02] or file:<path>")
    p.add_argument("--state-grid", type=int, default=128)
    p.add_argument("--state-extent", type=float, default=10.0)


def _add_output_args(p):
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "gnuplot", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncwig",
                                 description="Wigner functions, marginals and star "
                                             "products on coadjoint orbits")
    sub = ap.add_subparsers(dest="command", required=True)

    pw = sub.add_parser("wigner", help="compute a Wigner transform slice")
    pw.add_argument("variant", choices=("generic", "nc", "tau0", "qm", "standard"))
    _add_label_args(pw, required=False)
    pw.add_argument("--planck-h", type=float, default=2.0 * math.pi,
                    help="Planck constant for the standard transform")
    _add_state_args(pw)
    pw.add_argument("--grid", type=int, default=128, help="output points per axis")
    pw.add_argument("--extent", type=float, default=10.0, help="output half-extent")
    pw.add_argument("--slice", default=None,
                    help="fixed coordinates, e.g. k3s=0,k4s=0")
    pw.add_argument("--method", choices=("auto", "fft", "direct"), default="auto")
    _add_output_args(pw)
    pw.set_defaults(func=_cmd_wigner)

    pm = sub.add_parser("marginal", help="marginal distribution of the nc Wigner function")
    pm.add_argument("which", choices=("momentum", "position"))
    _add_label_args(pm)
    _add_state_args(pm)
    pm.add_argument("--grid", type=int, default=32)
    pm.add_argument("--extent", type=float, default=5.0)
    pm.add_argument("--int-grid", type=int, default=64,
                    help="points per axis for the integrated pair")
    pm.add_argument("--int-extent", type=float, default=5.0)
    pm.add_argument("--method", choices=("auto", "fft", "direct"), default="auto")
    _add_output_args(pm)
    pm.set_defaults(func=_cmd_marginal)

    ps = sub.add_parser("star", help="star products")
    ps.add_argument("kind", choices=("vartheta", "b", "hbar", "general"))
    _add_label_args(ps, required=False)
    ps.add_argument("--hbar", type=float, default=1.0)
    ps.add_argument("--vartheta", type=float, default=0.0)
    ps.add_argument("--bfield", type=float, default=0.0)
    _add_state_args(ps)
    ps.add_argument("--grid", type=int, default=32)
    ps.add_argument("--extent", type=float, default=3.0)
    _add_output_args(ps)
    ps.set_defaults(func=_cmd_star)

    pv = sub.add_parser("verify", help="run the verification suites")
    pv.add_argument("--suite", default="all",
                    help="'all' or comma-separated suite names ('' for none)")
    pv.add_argument("--seed", type=int, default=7)
    pv.add_argument("--out", default=None)
    pv.set_defaults(func=_cmd_verify)

    pl = sub.add_parser("limit", help="commutative-limit study")
    _add_label_args(pl, required=True)
    pl.add_argument("--c", type=float, default=0.25, help="k2 = k3 = c * 2^-m")
    pl.add_argument("--halvings", type=int, default=4)
    pl.add_argument("--tolerance", type=float, default=1e-3)
    pl.add_argument("--method", choices=("auto", "fft", "direct"), default="auto")
    _add_state_args(pl)
    pl.set_defaults(func=_cmd_limit)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(f"ncwig: error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidLabel, SectorMismatch) as exc:
        print(f"ncwig: error: {exc}", file=sys.stderr)
        return 3
    except DegenerateParams as exc:
        print(f"ncwig: error: singular parameters: {exc}", file=sys.stderr)
        return 3
    except (GridTooCoarse, GridTooLarge, ShiftOffGrid) as exc:
        print(f"ncwig: error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
