"""Command-line front end.

Subcommands
-----------
quantize   Verblunsky coefficients <-> walk correspondence document (JSON).
spectrum   Measure samples, point masses and geometric data (CSV or JSON).
simulate   Classical n-step probabilities by two routes and quantum one-step
           distributions.
verify     Invariant checks with residuals; exit 0 iff every check passes.

Exit codes: 0 success, 1 input error, 2 not quantizable, 3 non-convergence
or failed verification.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import BACKEND, __version__
from ._numerics import fmt_float
from .cmv import build_cmv, monic_via_det
from .coeffs import VerblunskySpec, WalkSpec, spec_from_json
from .errors import ConvergenceError, NotQuantizableError, SpecError
from .geronimus import alphas_to_walk, correspondence, restriction_identity_check, walk_to_alphas
from .opuc import measure_from_caratheodory, monic_values
from .periodic import (
    constant_walk_measure,
    geometric_spectrum,
    two_periodic_band_cosines,
    two_periodic_circle_measure,
    two_periodic_weight,
)
from .szegedy import (
    cmv_basis_extraction,
    complement_basis,
    halfline_blocks,
    one_step_distribution,
    verify_lifting,
)
from .walks import measure_from_stieltjes, n_step_probability, transition_matrix

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Parsed command line; serialises to and from JSON."""

    command: str
    source: dict = field(default_factory=dict)
    n: int = 20
    grid: int = 256
    tol: float = 1e-8
    cutoff: int = 16
    states: int = 3
    out: str | None = None
    format: str | None = None

    def __post_init__(self):
        if self.format is None:
            self.format = "csv" if self.command in ("spectrum", "simulate") else "json"
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise SpecError(f"tolerance must be positive, got {self.tol!r}")
        if self.grid < 2:
            raise SpecError(f"grid size must be >= 2, got {self.grid}")
        if self.n < 0 or self.cutoff < 1 or self.states < 1:
            raise SpecError("--n must be >= 0, --cutoff and --states >= 1")
        if self.format not in ("csv", "json"):
            raise SpecError(f"unknown format {self.format!r}")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> "RunConfig":
        return cls(**doc)


def _load_json(text: str):
    """Inline JSON, or the contents of a JSON file."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if os.path.exists(text):
            with open(text) as fh:
                return json.load(fh)
        raise SpecError(f"neither valid JSON nor a readable file: {text!r}")


def _source_from_args(args) -> dict:
    given = [k for k in ("walk", "alphas", "jacobi", "two_periodic") if getattr(args, k) is not None]
    if len(given) > 1:
        raise SpecError("give at most one of --walk, --alphas, --jacobi, --two-periodic")
    if not given:
        return {}
    key = given[0]
    val = getattr(args, key)
    if key == "walk":
        return {"walk": _load_json(val)}
    if key == "alphas":
        return {"alphas": _load_json(val)}
    if key == "jacobi":
        return {"alphas": {"kind": "circular_jacobi", "alpha": val[0], "beta": val[1]}}
    return {"alphas": {"kind": "two_periodic", "a": [val[0], val[1]], "b": [val[2], val[3]]}}


def resolve_source(source: dict, default_free: bool = False):
    """VerblunskySpec or WalkSpec described by a config ``source`` entry."""
    if not source:
        if default_free:
            return VerblunskySpec.constant(0.0)
        raise SpecError("an input spec is required (--walk, --alphas, --jacobi, --two-periodic)")
    if "walk" in source:
        spec = spec_from_json(source["walk"])
        if not isinstance(spec, WalkSpec):
            raise SpecError("--walk expects a walk document")
        return spec
    doc = source["alphas"]
    if isinstance(doc, list):
        return VerblunskySpec.from_list(doc)
    spec = spec_from_json(doc)
    if not isinstance(spec, VerblunskySpec):
        raise SpecError("--alphas expects a coefficient list or spec document")
    return spec


def _n_alphas(spec: VerblunskySpec, n: int) -> int:
    return n if spec.horizon is None else min(n, spec.horizon)


def _complex_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_quantize(cfg: RunConfig) -> tuple[str, int]:
    """Correspondence record for a walk or a real coefficient list."""
    spec = resolve_source(cfg.source)
    if isinstance(spec, WalkSpec):
        n = cfg.n if spec.horizon is None else 2 * spec.horizon - 1
        alphas = walk_to_alphas(spec, n)
        provenance = "walk"
    else:
        vals = spec.values(_n_alphas(spec, cfg.n))
        if np.any(vals.imag != 0):
            raise NotQuantizableError("complex coefficients have no walk counterpart", index=int(
                np.nonzero(vals.imag != 0)[0][0]))
        alphas = vals.real
        provenance = "alphas"
    doc = correspondence(alphas).to_json()
    doc["provenance"] = provenance
    return _dump(doc), EXIT_OK


def _theta_grid(n):
    return 2.0 * np.pi * np.arange(n) / n


def _x_grid(n):
    return -1.0 + (2.0 * np.arange(n) + 1.0) / n


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    """Measure data from a closed form where known, radial limits otherwise."""
    spec = resolve_source(cfg.source)
    code = EXIT_OK
    geometry = None
    extra = {}
    if isinstance(spec, VerblunskySpec) and spec.kind in ("constant", "two_periodic"):
        a, b = spec.params[0], spec.params[-1]
        measure = two_periodic_circle_measure(a, b)
        theta = _theta_grid(cfg.grid)
        samples = (theta, measure.weight(theta))
        geometry = geometric_spectrum(a, b)
        cp, cm = two_periodic_band_cosines(a, b)
        extra = {"route": "closed_form", "cos_theta_plus": cp, "cos_theta_minus": cm}
        axis = "theta"
    elif isinstance(spec, WalkSpec) and spec.kind == "constant":
        measure = constant_walk_measure(*spec.params)
        x = _x_grid(cfg.grid)
        samples = (x, measure.weight(x))
        extra = {"route": "closed_form", "bands": [list(b) for b in measure.bands]}
        axis = "x"
    else:
        print("notice: no closed form for this family; using radial limits", file=sys.stderr)
        if isinstance(spec, WalkSpec):
            measure, report = measure_from_stieltjes(
                spec, _x_grid(cfg.grid), candidates=(1.0, -1.0), tol=cfg.tol)
            axis = "x"
        else:
            measure, report = measure_from_caratheodory(
                spec, _theta_grid(cfg.grid), candidates=(0.0, np.pi), tol=cfg.tol)
            axis = "theta"
        samples = measure.samples
        extra = {"route": "radial_limit", "unstable": report["unstable"]}
        if report["unstable"]:
            print(f"warning: {len(report['unstable'])} grid points did not settle to "
                  f"{cfg.tol!r}", file=sys.stderr)
            code = EXIT_NUMERIC
    if cfg.format == "csv":
        text = measure.to_csv(samples[0]) if extra["route"] == "closed_form" else measure.to_csv()
        if geometry is not None:
            text += "# geometry\n" + "".join("# " + line + "\n"
                                              for line in geometry.to_csv().splitlines())
        return text, code
    doc = {
        "config": cfg.to_json(),
        **extra,
        axis: samples[0].tolist(),
        "weight": samples[1].tolist(),
        "point_masses": [[float(t), float(m)] for t, m in measure.point_masses],
    }
    if geometry is not None:
        doc["geometry"] = {
            "r_plus": geometry.r_plus,
            "r_minus": geometry.r_minus,
            "line": [_complex_pair(p) for p in geometry.line],
            "band_edges": [_complex_pair(e) for e in geometry.band_edges],
            "discrete_points": [
                {"z": _complex_pair(z), "included": inc, "mass": m}
                for z, inc, m in geometry.discrete_points
            ],
            "flags": geometry.flags,
        }
    return _dump(doc), code


def _as_walk(spec) -> WalkSpec:
    if isinstance(spec, WalkSpec):
        return spec
    vals = spec.values(_n_alphas(spec, max(spec.horizon or 0, 2 * 64 + 1)))
    if np.any(vals.imag != 0):
        raise NotQuantizableError("complex coefficients have no walk counterpart", index=0)
    return alphas_to_walk(vals.real)


def cmd_simulate(cfg: RunConfig) -> tuple[str, int]:
    """Classical P_ij(n) by matrix power and spectral integral, plus quantum one-step rows."""
    walk = _as_walk(resolve_source(cfg.source))
    K = cfg.cutoff
    states = range(cfg.states)
    if cfg.states > K:
        raise SpecError(f"cutoff {K} too small for {cfg.states} states; need cutoff >= states")
    if walk.horizon is not None and walk.horizon < K + 1:
        raise SpecError(f"walk has {walk.horizon} rows; cutoff {K} needs {K + 1}")
    rows = []
    for i in states:
        for j in states:
            pm = n_step_probability(walk, i, j, cfg.n, "matrix")
            ps = n_step_probability(walk, i, j, cfg.n, "spectral")
            rows.append((i, j, cfg.n, pm, ps, abs(pm - ps)))
    op = halfline_blocks(walk, K)
    P = transition_matrix(walk, K + 1)
    quantum = []
    for j in states:
        dist = one_step_distribution(op, j)
        for k in range(max(0, j - 1), j + 2):
            quantum.append((j, k, float(dist[k]), float(P[j, k]), abs(dist[k] - P[j, k])))
    if cfg.format == "csv":
        lines = ["i,j,n,P_matrix,P_spectral,abs_diff"]
        lines += [f"{i},{j},{n},{fmt_float(a)},{fmt_float(b)},{fmt_float(c)}"
                  for i, j, n, a, b, c in rows]
        lines.append("# quantum_one_step,j,k,P_quantum,P_classical,abs_diff")
        lines += [f"# quantum_one_step,{j},{k},{fmt_float(a)},{fmt_float(b)},{fmt_float(c)}"
                  for j, k, a, b, c in quantum]
        return "\n".join(lines) + "\n", EXIT_OK
    doc = {
        "config": cfg.to_json(),
        "table": [dict(zip(("i", "j", "n", "P_matrix", "P_spectral", "abs_diff"), r))
                  for r in rows],
        "quantum_one_step": [dict(zip(("j", "k", "P_quantum", "P_classical", "abs_diff"), r))
                             for r in quantum],
    }
    return _dump(doc), EXIT_OK


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------


def _check(name, residual, tol, **info) -> dict:
    residual = float(residual)
    return {"name": name, "residual": residual, "tol": tol, "passed": bool(residual < tol), **info}


def _skip(name, reason) -> dict:
    return {"name": name, "skipped": reason, "passed": True}


def _det_check(spec: VerblunskySpec, n_alphas: int) -> dict:
    rng = np.random.default_rng(0)
    z = np.exp(2j * np.pi * rng.random(8))
    worst = 0.0
    for n in range(1, min(10, n_alphas) + 1):
        rec = monic_values(spec, n, z)
        det = np.array([monic_via_det(spec, n, zz) for zz in z])
        worst = max(worst, float(np.max(np.abs(rec - det) / np.maximum(np.abs(det), 1e-300))))
    return _check("determinant_identity", worst, 1e-10)


def _walk_checks(walk: WalkSpec, K: int) -> list[dict]:
    from .walks import jacobi_matrix

    out = []
    op = halfline_blocks(walk, K)
    out.append(_check("discriminant_is_jacobi",
                      np.max(np.abs(op.D - jacobi_matrix(walk, K + 1).dense())), 1e-14, K=K))
    lift = verify_lifting(op, tol=1e-8)
    out.append(_check("spectrum_lifting", max(lift["max_match"], lift["max_residual"],
                                              lift["phase_error"]), 1e-8, K=K))
    P = transition_matrix(walk, K + 1)
    one = max(float(np.max(np.abs(one_step_distribution(op, j)[: K + 1] - P[j])))
              for j in range(K))
    out.append(_check("one_step_correspondence", one, 1e-12, K=K))
    try:
        _, alphas = cmv_basis_extraction(walk, K)
        ref = walk_to_alphas(walk, 2 * K + 1)
        out.append(_check("cmv_basis_extraction", np.max(np.abs(alphas - ref)), 1e-10, K=K))
    except (SpecError, NotQuantizableError) as exc:
        out.append(_skip("cmv_basis_extraction", str(exc)))
    try:
        sig = complement_basis(walk, K)
    except SpecError as exc:
        out.append(_skip("complement", str(exc)))
    else:
        idx = op.index
        V = np.array([s.vector(idx) for s in sig]).T.real
        res = max(np.max(np.abs(op.T.T @ V)), np.max(np.abs((op.S @ op.T).T @ V)),
                  np.max(np.abs(op.R @ V + V)), np.max(np.abs(op.S @ V - V)))
        out.append(_check("complement", res, 1e-12, K=K))
    return out


def _two_periodic_checks(a, b, tol) -> list[dict]:
    out = []
    spec = VerblunskySpec.two_periodic(a, b)
    cp, cm = two_periodic_band_cosines(a, b)
    lo, hi = np.arccos(np.clip([cp, cm], -1, 1))
    if hi - lo > 1e-6:
        theta = lo + (hi - lo) * (np.arange(8) + 0.5) / 8
        measure, report = measure_from_caratheodory(spec, theta, tol=tol)
        out.append(_check("two_periodic_weight",
                          np.max(np.abs(measure.samples[1] - two_periodic_weight(a, b, theta))),
                          1e-6, unstable=report["unstable"]))
    geo = geometric_spectrum(a, b)
    edges = sorted(e.real for e in geo.band_edges)
    ref = sorted([cp, cp, cm, cm])
    if len(edges) == 4:
        out.append(_check("geometric_band_edges", np.max(np.abs(np.subtract(edges, ref))), 1e-10))
    else:
        out.append(_skip("geometric_band_edges", "; ".join(geo.flags) or "degenerate circles"))
    return out


def run_suite(spec, n: int = 20, tol: float = 1e-8) -> list[dict]:
    """Every applicable invariant check for a coefficient spec or walk."""
    checks = []
    if isinstance(spec, WalkSpec):
        walk = spec
        n_al = n if walk.horizon is None else min(n, 2 * walk.horizon - 1)
        try:
            alphas = walk_to_alphas(walk, n_al)
        except NotQuantizableError as exc:
            checks.append(_skip("quantizable", str(exc)))
            alphas = None
        vspec = VerblunskySpec.from_list(alphas) if alphas is not None else None
    else:
        vspec = spec
        vals = spec.values(_n_alphas(spec, max(n, 35)))
        alphas = vals.real if np.all(vals.imag == 0) else None
        walk = None
        if alphas is not None:
            try:
                walk = alphas_to_walk(alphas)
            except NotQuantizableError as exc:
                checks.append(_skip("quantizable", str(exc)))
    if vspec is not None:
        na = _n_alphas(vspec, n)
        checks.append(_det_check(vspec, na))
        cmv = build_cmv(vspec, min(na, 32))
        checks.append(_check("cmv_truncation_structure",
                             np.max(np.abs(cmv.dense - cmv.L @ cmv.M)), 1e-14))
    if alphas is not None:
        if walk is not None and isinstance(spec, VerblunskySpec):
            back = walk_to_alphas(walk, alphas.shape[0])
            checks.append(_check("geronimus_round_trip", np.max(np.abs(back - alphas)), 1e-12))
        elif walk is not None:
            p, q, r = walk.arrays((alphas.shape[0] - 1) // 2 + 1)
            p2, q2, r2 = alphas_to_walk(alphas).arrays(p.shape[0])
            res = max(np.max(np.abs(p - p2)), np.max(np.abs(q - q2)), np.max(np.abs(r - r2)))
            checks.append(_check("geronimus_round_trip", res, 1e-12))
        m = alphas.shape[0] - 2
        if m >= 6:
            rep = restriction_identity_check(alphas, m)
            checks.append(_check("restriction_identity",
                                 max(rep["max_residual"], rep["m_plus_residual"],
                                     rep["m_minus_residual"]), 1e-10))
    if walk is not None:
        K = 16 if walk.horizon is None else min(16, walk.horizon - 2)
        if K >= 1:
            checks.extend(_walk_checks(walk, K))
    if isinstance(spec, VerblunskySpec) and spec.kind in ("constant", "two_periodic"):
        checks.extend(_two_periodic_checks(spec.params[0], spec.params[-1], tol))
    return checks


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    spec = resolve_source(cfg.source, default_free=True)
    checks = run_suite(spec, cfg.n, cfg.tol)
    passed = all(c["passed"] for c in checks)
    doc = {"config": cfg.to_json(), "backend": BACKEND, "passed": passed, "checks": checks}
    if cfg.format == "csv":
        lines = ["name,passed,residual,tol"]
        for c in checks:
            lines.append(f"{c['name']},{c['passed']},{fmt_float(c.get('residual', float('nan')))},"
                         f"{fmt_float(c.get('tol', float('nan')))}")
        return "\n".join(lines) + "\n", EXIT_OK if passed else EXIT_NUMERIC
    return _dump(doc), EXIT_OK if passed else EXIT_NUMERIC


COMMANDS = {
    "quantize": cmd_quantize,
    "spectrum": cmd_spectrum,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specquant",
        description="Birth-death walks, Verblunsky coefficients, CMV matrices and Szegedy walks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "quantize": "convert between a walk and its Verblunsky coefficients",
        "spectrum": "export the spectral measure and geometric data",
        "simulate": "classical n-step probabilities and quantum one-step rows",
        "verify": "run the invariant checks",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=help_text[name])
        p.add_argument("--config", help="JSON run configuration (overrides other flags)")
        p.add_argument("--walk", help="walk document, inline JSON or file path")
        p.add_argument("--alphas", help="coefficient list or spec document, inline JSON or file")
        p.add_argument("--jacobi", nargs=2, type=float, metavar=("A", "B"),
                       help="circular Jacobi parameters")
        p.add_argument("--two-periodic", dest="two_periodic", nargs=4, type=float,
                       metavar=("A_RE", "A_IM", "B_RE", "B_IM"),
                       help="alternating coefficients a, b")
        p.add_argument("--n", type=int, default=20,
                       help="coefficient count (quantize, verify) or step count (simulate)")
        p.add_argument("--grid", type=int, default=256, help="number of sample points")
        p.add_argument("--tol", type=float, default=1e-8, help="radial-limit tolerance")
        p.add_argument("--cutoff", type=int, default=16, help="half-line truncation vertex K")
        p.add_argument("--states", type=int, default=3, help="states 0..M-1 to tabulate")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (default csv for spectrum/simulate, else json)")
    return parser


def config_from_args(args) -> RunConfig:
    if args.config:
        return RunConfig.from_json(_load_json(args.config))
    return RunConfig(
        command=args.command,
        source=_source_from_args(args),
        n=args.n,
        grid=args.grid,
        tol=args.tol,
        cutoff=args.cutoff,
        states=args.states,
        out=args.out,
        format=args.format,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        text, code = COMMANDS[cfg.command](cfg)
    except NotQuantizableError as exc:
        print(f"error: not quantizable (index {exc.index}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"error: no convergence (gap {exc.gap!r}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpecError, ValueError, IndexError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
