"""Command-line front end.

Five commands: ``table1`` (reproduce the embedded 20-step benchmark
comparison), ``race`` (run both schemes on one map and report decade
crossings), ``properties`` (classify a mapping against its declared
classes), ``space-check`` (axioms and convexity modulus of a space), and
``integral`` (solve a discretised integral equation two ways).

Outputs land in the ``--out`` directory: CSV for per-iteration data, JSON
for reports and summaries, and a PNG figure next to each CSV (disable with
``--no-plot``).  Identical configuration and seed produce byte-identical
outputs.  A flat key=value config file can predefine any option;
command-line flags win over the file.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
3 numeric failure (non-convergence, overflow, invariant violation).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import geodesic, integral, mappings, plotting, schemes
from .errors import (
    DomainError,
    FixlabError,
    IterationError,
    UnsupportedError,
    UnsupportedOrderError,
)
from .geodesic import ModulusQuery, euclidean, hilbert_modulus, poincare_disk
from .report import all_hold

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# Six-significant-digit reference values for the benchmark comparison:
# jump map, x1 = 0.9, coefficients (a, b, c) = (0.85, 0.65, 0.45).  The
# one-step averaged column follows the closed form 0.9 * 0.15**(n-1); the
# three-stage column is exactly zero from n = 2 on.
REFERENCE_MANN = (
    0.9,
    0.135,
    0.02025,
    0.0030375,
    0.000455625,
    0.0000683438,
    0.0000102516,
    1.53773e-6,
    2.3066e-7,
    3.4599e-8,
    5.18985e-9,
    7.78478e-10,
    1.16772e-10,
    1.75158e-11,
    2.62736e-12,
    3.94105e-13,
    5.91157e-14,
    8.86735e-15,
    1.3301e-15,
    1.99515e-16,
)

DECADES = tuple(10.0 ** -k for k in range(1, 13))


def fmt_float(x) -> str:
    """Shortest round-trip decimal for a double; integral values drop '.0'."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(cell if isinstance(cell, str) else fmt_float(cell) for cell in row) + "\n")


def write_json(path: Path, payload) -> None:
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def write_trace_csv(path: Path, trace, max_coords: int = 8) -> None:
    """Per-step trace export: diagnostics plus coordinates for small spaces.

    Columns: n, residual, dist_to_p, order_chain_ok, then x0..x{d-1} when
    the space dimension is at most ``max_coords``.  Missing diagnostics
    leave their cell empty.
    """
    dim = trace.space.dim if trace.space is not None else 0
    coords = dim if dim <= max_coords else 0
    header = ["n", "residual", "dist_to_p", "order_chain_ok"]
    header += [f"x{i}" for i in range(coords)]
    rows = []
    for rec in trace.records:
        row = [
            str(rec.n),
            fmt_float(rec.residual),
            "" if rec.dist_to_p is None else fmt_float(rec.dist_to_p),
            "" if rec.order_chain_ok is None else str(rec.order_chain_ok).lower(),
        ]
        if coords:
            if rec.x is None:
                row += [""] * coords
            else:
                row += [fmt_float(v) for v in rec.x]
        rows.append(row)
    write_csv(path, header, rows)


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------


@dataclass
class RunConfig:
    """Resolved options for one command invocation."""

    command: str
    mapping: str = "jump"
    space: str = "euclidean:2"
    a: float = 0.85
    b: float = 0.65
    c: float = 0.45
    x1: float = 0.9
    p: float | None = None
    alpha: float | None = None
    max_iter: int = 50
    tol: float = 1e-10
    samples: int = 10_000
    seed: int = 42
    step: float = 0.01
    out: Path = Path("out")
    yn_variant: str = "tz"
    plot: bool = True
    kernel: str = "default"
    kernel_m: float | None = None
    kernel_fscale: float = 1.0
    y0: str = "0,1"
    n: int = 64
    rule: str = "trapezoid"
    map_domain: str | None = None
    map_pieces: str | None = None
    map_fixed: str | None = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise DomainError(f"coefficient {name} = {value!r} outside (0, 1)")
        self.out = Path(self.out)


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment, blank lines ignored."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "mapping": ("map", str),
    "space": ("space", str),
    "a": ("a", float),
    "b": ("b", float),
    "c": ("c", float),
    "x1": ("x1", float),
    "p": ("p", float),
    "alpha": ("alpha", float),
    "max_iter": ("max-iter", int),
    "tol": ("tol", float),
    "samples": ("samples", int),
    "seed": ("seed", int),
    "step": ("step", float),
    "out": ("out", str),
    "yn_variant": ("yn-variant", str),
    "plot": ("plot", lambda s: s.lower() in ("1", "true", "yes", "on")),
    "kernel": ("kernel", str),
    "kernel_m": ("kernel.m", float),
    "kernel_fscale": ("kernel.fscale", float),
    "y0": ("y0", str),
    "n": ("n", int),
    "rule": ("rule", str),
    "map_domain": ("map.domain", str),
    "map_pieces": ("map.pieces", str),
    "map_fixed": ("map.fixed", str),
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by the config file, overridden by CLI flags."""
    merged: dict = {"command": args.command}
    file_values = parse_config_file(args.config) if args.config else {}
    for field_name, (file_key, conv) in _CONFIG_KEYS.items():
        if file_key in file_values:
            try:
                merged[field_name] = conv(file_values[file_key])
            except ValueError as exc:
                raise DomainError(
                    f"config key {file_key!r}: bad value {file_values[file_key]!r}"
                ) from exc
        flag = getattr(args, field_name, None)
        if flag is not None:
            merged[field_name] = flag
    return RunConfig(**merged)


def parse_space_token(token: str) -> geodesic.Space:
    if token == "poincare":
        return poincare_disk()
    if token.startswith("euclidean:"):
        return euclidean(int(token.split(":", 1)[1]))
    if token.startswith("l2grid:"):
        return integral.build_grid(int(token.split(":", 1)[1])).space()
    raise DomainError(
        f"unknown space {token!r}; expected euclidean:d, poincare or l2grid:N"
    )


def resolve_mapping(cfg: RunConfig) -> mappings.MappingSpec:
    if cfg.mapping != "custom":
        return mappings.from_catalog(cfg.mapping)
    if not cfg.map_pieces or not cfg.map_domain:
        raise DomainError("custom mapping needs map.domain and map.pieces")
    try:
        lo, hi = (float(v) for v in cfg.map_domain.split(","))
    except ValueError as exc:
        raise DomainError(f"map.domain must be 'lo,hi': {cfg.map_domain!r}") from exc
    pieces = mappings.parse_pieces(cfg.map_pieces)
    fixed = None
    if cfg.map_fixed:
        try:
            fixed = [[float(v)] for v in cfg.map_fixed.split(",")]
        except ValueError as exc:
            raise DomainError(f"map.fixed must list numbers: {cfg.map_fixed!r}") from exc
    m = mappings.piecewise_poly_map(lo, hi, pieces, fixed_points=fixed)
    mappings.validate_mapping(m)
    return m


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------


def cmd_table1(cfg: RunConfig) -> int:
    """20 steps of both schemes on the jump map; CSV plus fidelity check."""
    space = euclidean(1)
    m = mappings.jump_map()
    common = dict(x1=np.array([0.9]), a=0.85, b=0.65, c=0.45, max_iter=20, stop_tol=None)
    mann = schemes.run_scheme(space, m, schemes.SchemeParams(kind=schemes.MANN, **common))
    sahu = schemes.run_scheme(space, m, schemes.SchemeParams(kind=schemes.THAKUR, **common))
    mann_vals = [float(r.x[0]) for r in mann.records]
    sahu_vals = [float(r.x[0]) for r in sahu.records]

    cfg.out.mkdir(parents=True, exist_ok=True)
    csv_path = cfg.out / "table1.csv"
    write_csv(
        csv_path,
        ["n", "mann", "sahu"],
        [(str(n + 1), mann_vals[n], sahu_vals[n]) for n in range(20)],
    )
    if cfg.plot:
        plotting.save_iteration_figure(
            cfg.out / "table1.png",
            np.arange(1, 21),
            {"mann": mann_vals, "sahu": sahu_vals},
            ylabel="x_n",
            title="jump map, x1 = 0.9",
        )

    ok = True
    rel_ref = max(
        abs(v - ref) / abs(ref) for v, ref in zip(mann_vals, REFERENCE_MANN)
    )
    line = "PASS" if rel_ref <= 1e-4 else "FAIL"
    ok &= rel_ref <= 1e-4
    print(f"table1 mann vs reference table (rel tol 1e-4): {line} (max rel err {rel_ref:.3g})")

    closed = [0.9 * 0.15 ** k for k in range(20)]
    rel_closed = max(abs(v - c) / c for v, c in zip(mann_vals, closed))
    line = "PASS" if rel_closed <= 1e-12 else "FAIL"
    ok &= rel_closed <= 1e-12
    print(f"table1 mann vs closed form 0.9*0.15^(n-1) (rel tol 1e-12): {line} (max rel err {rel_closed:.3g})")

    zeros = all(v == 0.0 for v in sahu_vals[1:]) and sahu_vals[0] == 0.9
    line = "PASS" if zeros else "FAIL"
    ok &= zeros
    print(f"table1 sahu column exactly 0 from n=2: {line}")
    print(f"table1 wrote {csv_path}")
    return EXIT_OK if ok else EXIT_CHECK


def _decade_crossings(dists: np.ndarray) -> dict[str, int | None]:
    out: dict[str, int | None] = {}
    for th in DECADES:
        below = np.nonzero(dists < th)[0]
        out[f"{th:.0e}"] = int(below[0] + 1) if below.size else None
    return out


def cmd_race(cfg: RunConfig) -> int:
    """Both schemes from the same start; per-iteration CSV and summary."""
    m = resolve_mapping(cfg)
    space = m.space
    x1 = np.array([cfg.x1])
    if not np.all(np.asarray(m.domain.contains(x1))):
        raise DomainError(f"x1 = {cfg.x1!r} outside the domain of {m.name}")
    if cfg.p is not None:
        p = np.array([cfg.p])
    elif m.fixed_points is not None and len(m.fixed_points) > 0:
        fp = np.atleast_2d(m.fixed_points)
        p = fp[int(np.argmin(space.dist(fp, x1)))]
    else:
        raise DomainError(f"{m.name} declares no fixed points; pass --p")

    traces = {}
    for kind in (schemes.MANN, schemes.THAKUR):
        params = schemes.SchemeParams(
            kind=kind,
            x1=x1,
            a=cfg.a,
            b=cfg.b,
            c=cfg.c,
            max_iter=cfg.max_iter,
            stop_tol=None,
            p=p,
            yn_variant=cfg.yn_variant,
        )
        traces[kind] = schemes.run_scheme(space, m, params, rel=m.rel())

    res_m = traces[schemes.MANN].residuals()
    res_t = traces[schemes.THAKUR].residuals()
    d_m = traces[schemes.MANN].dists_to_p()
    d_t = traces[schemes.THAKUR].dists_to_p()

    cfg.out.mkdir(parents=True, exist_ok=True)
    csv_path = cfg.out / "race.csv"
    write_csv(
        csv_path,
        ["n", "residual_mann", "residual_thakur", "dist_to_p_mann", "dist_to_p_thakur"],
        [
            (str(i + 1), res_m[i], res_t[i], d_m[i], d_t[i])
            for i in range(cfg.max_iter)
        ],
    )
    write_trace_csv(cfg.out / "race_trace_mann.csv", traces[schemes.MANN])
    write_trace_csv(cfg.out / "race_trace_thakur.csv", traces[schemes.THAKUR])
    summary = {
        "mapping": m.name,
        "x1": cfg.x1,
        "p": float(p[0]),
        "coefficients": {"a": cfg.a, "b": cfg.b, "c": cfg.c},
        "yn_variant": cfg.yn_variant,
        "first_below": {
            "mann": _decade_crossings(d_m),
            "thakur": _decade_crossings(d_t),
        },
    }
    if d_m[0] == 0.0:
        summary["note"] = "already at tolerance"
    write_json(cfg.out / "race_summary.json", summary)
    if cfg.plot:
        plotting.save_iteration_figure(
            cfg.out / "race.png",
            np.arange(1, cfg.max_iter + 1),
            {
                "dist_to_p mann": d_m,
                "dist_to_p thakur": d_t,
            },
            ylabel="dist to p",
            title=f"{m.name}: scheme race from x1 = {cfg.x1}",
            logy=True,
        )
    print(f"race wrote {csv_path}")
    return EXIT_OK


def cmd_properties(cfg: RunConfig) -> int:
    """All applicable class checks; exit 0 iff verdicts match declarations."""
    m = resolve_mapping(cfg)
    reports = mappings.run_property_suite(
        m, step=cfg.step, rng_seed=cfg.seed, alpha=cfg.alpha
    )
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_json(cfg.out / "properties.json", [r.to_dict() for r in reports])

    by_name = {r.name: r for r in reports}
    ok = True
    for name, declared in m.declared.items():
        rep = by_name.get(name)
        if rep is None:
            continue
        expected_holds = declared is not False
        match = rep.holds() == expected_holds
        ok &= match
        status = "OK" if match else "MISMATCH"
        print(
            f"properties {m.name}: {name} declared="
            f"{'holds' if expected_holds else 'refuted'} verdict={rep.verdict} {status}"
        )
    for rep in reports:
        if rep.name not in m.declared:
            print(f"properties {m.name}: {rep.name} (unclassified) verdict={rep.verdict}")
    return EXIT_OK if ok else EXIT_CHECK


def _modulus_reports(space: geodesic.Space, samples: int, seed: int):
    """Modulus gates for one space; returns report dicts for the JSON array."""
    center = np.zeros(space.dim)
    hilbert_like = space.kind in (geodesic.EUCLIDEAN, geodesic.L2_GRID)
    reports = []

    value_eps2 = geodesic.modulus_sampled(
        space, ModulusQuery(r=1.0, epsilon=2.0, sample_count=samples, rng_seed=seed), center
    )
    reports.append(
        {
            "property": "modulus-eps2-unity",
            "verdict": "holds-on-samples" if abs(value_eps2 - 1.0) <= 1e-9 else "refuted",
            "samples": samples,
            "worst_margin": value_eps2 - 1.0,
            "witnesses": [{"inputs": {"r": 1.0, "epsilon": 2.0}, "quantities": {"sampled": value_eps2}}],
        }
    )

    closed = hilbert_modulus(1.0, 1.0)
    value = geodesic.modulus_sampled(
        space, ModulusQuery(r=1.0, epsilon=1.0, sample_count=samples, rng_seed=seed), center
    )
    if hilbert_like and space.dim >= 2:
        in_window = closed - 1e-6 <= value <= closed + 1e-2
        reports.append(
            {
                "property": "modulus-hilbert-window",
                "verdict": "holds-on-samples" if in_window else "refuted",
                "samples": samples,
                "worst_margin": value - closed,
                "witnesses": [
                    {"inputs": {"r": 1.0, "epsilon": 1.0}, "quantities": {"sampled": value, "closed_form": closed}}
                ],
            }
        )
        values_r = [
            geodesic.modulus_sampled(
                space,
                ModulusQuery(r=r, epsilon=1.0, sample_count=samples, rng_seed=seed + i),
                center,
            )
            for i, r in enumerate((0.5, 1.0, 2.0))
        ]
        spread = max(values_r) - min(values_r)
        reports.append(
            {
                "property": "modulus-r-independent",
                "verdict": "holds-on-samples" if spread <= 2e-2 else "refuted",
                "samples": samples,
                "worst_margin": 2e-2 - spread,
                "witnesses": [
                    {"inputs": {"r_values": [0.5, 1.0, 2.0]}, "quantities": {"estimates": values_r, "spread": spread}}
                ],
            }
        )
    else:
        # sampled minimum still upper-bounds the Hilbert infimum
        reports.append(
            {
                "property": "modulus-lower-bound",
                "verdict": "holds-on-samples" if value >= closed - 1e-6 else "refuted",
                "samples": samples,
                "worst_margin": value - closed,
                "witnesses": [
                    {"inputs": {"r": 1.0, "epsilon": 1.0}, "quantities": {"sampled": value, "closed_form": closed}}
                ],
            }
        )
    return reports


def cmd_space_check(cfg: RunConfig) -> int:
    """Axioms plus modulus gates for one space token; JSON report array."""
    space = parse_space_token(cfg.space)
    axiom_reports = geodesic.check_axioms(space, cfg.samples, cfg.seed, tol=1e-9)
    payload = [r.to_dict() for r in axiom_reports]
    payload.extend(_modulus_reports(space, cfg.samples, cfg.seed))
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_json(cfg.out / "space_check.json", payload)
    ok = all(entry["verdict"] == "holds-on-samples" for entry in payload)
    for entry in payload:
        print(f"space-check {cfg.space}: {entry['property']} {entry['verdict']}")
    return EXIT_OK if ok else EXIT_CHECK


def _build_problem(cfg: RunConfig, n: int | None = None) -> integral.IntegralProblem:
    grid = integral.build_grid(n or cfg.n, cfg.rule)
    factory = integral.KERNELS.get(cfg.kernel)
    if factory is None:
        raise DomainError(f"unknown kernel {cfg.kernel!r}; known: {sorted(integral.KERNELS)}")
    kwargs = {}
    if cfg.kernel_m is not None:
        if cfg.kernel == "zero":
            raise DomainError("the zero kernel takes no parameters")
        kwargs["m"] = cfg.kernel_m
    if cfg.kernel == "default" and cfg.kernel_fscale != 1.0:
        kwargs["f_scale"] = cfg.kernel_fscale
    kernel = factory(**kwargs)
    try:
        coeffs = [float(v) for v in cfg.y0.split(",")]
    except ValueError as exc:
        raise DomainError(f"y0 must list polynomial coefficients: {cfg.y0!r}") from exc
    values = np.zeros_like(grid.nodes)
    for c in reversed(coeffs):
        values = values * grid.nodes + c
    y0 = integral.GridFunction(grid, values)
    return integral.make_problem(grid, kernel, y0)


def cmd_integral(cfg: RunConfig) -> int:
    """Check the kernel hypotheses, then solve by both routes."""
    problem = _build_problem(cfg)
    reports = integral.check_kernel_conditions(problem, rng_seed=cfg.seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_json(cfg.out / "integral_checks.json", [r.to_dict() for r in reports])
    for r in reports:
        print(f"integral kernel={problem.kernel.name}: {r.name} {r.verdict}")
    if not all_hold(reports):
        print("integral: kernel hypotheses refuted; not solving")
        return EXIT_CHECK

    picard_sol, picard_trace = integral.solve_picard(problem, tol=cfg.tol)
    params = schemes.SchemeParams(
        kind=schemes.THAKUR,
        x1=problem.y0.values.copy(),
        a=cfg.a,
        b=cfg.b,
        c=cfg.c,
        max_iter=max(cfg.max_iter, 200),
        stop_tol=cfg.tol,
        yn_variant=cfg.yn_variant,
    )
    thakur_sol, thakur_trace = integral.solve_thakur(problem, params, tol=cfg.tol)

    gap = integral.l2_norm(
        integral.GridFunction(problem.grid, picard_sol.values - thakur_sol.values)
    )
    refine = integral.refine_check(
        lambda nn: _build_problem(cfg, n=nn), cfg.n, solver="picard", tol=cfg.tol
    )

    write_csv(
        cfg.out / "integral_solution.csv",
        ["t", "x"],
        list(zip(problem.grid.nodes, thakur_sol.values)),
    )
    final_picard_residual = integral.l2_norm(
        integral.GridFunction(
            problem.grid,
            integral.apply_operator(problem, picard_sol).values - picard_sol.values,
        )
    )
    final_thakur_residual = float(thakur_trace.records[-1].residual)
    summary = {
        "kernel": problem.kernel.name,
        "n": problem.grid.n,
        "rule": problem.grid.rule,
        "radius": problem.radius,
        "picard": {
            "iterations": len(picard_trace.records),
            "residual": final_picard_residual,
        },
        "thakur": {
            "iterations": len(thakur_trace.records),
            "residual": final_thakur_residual,
        },
        "gap_l2": gap,
        "refine_check": {"from_n": cfg.n, "to_n": 2 * cfg.n, "value": refine},
        "norms": {
            "y0": integral.l2_norm(problem.y0),
            "solution": integral.l2_norm(thakur_sol),
        },
    }
    write_json(cfg.out / "integral_summary.json", summary)
    if cfg.plot:
        plotting.save_solution_figure(
            cfg.out / "integral_solution.png",
            problem.grid.nodes,
            {"picard": picard_sol.values, "thakur": thakur_sol.values, "y0": problem.y0.values},
            residual_series={
                "picard": picard_trace.residuals(),
                "thakur": thakur_trace.residuals(),
            },
            title=f"kernel {problem.kernel.name}, N = {problem.grid.n}",
        )
    print(
        f"integral solved: picard {len(picard_trace.records)} iters, "
        f"thakur {len(thakur_trace.records)} iters, gap {gap:.3g}"
    )
    return EXIT_OK


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixlab",
        description="fixed-point iteration laboratory over ordered metric spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="rng seed (default 42)")
        p.add_argument("--out", help="output directory (default out/)")
        p.add_argument("--samples", type=int, help="sample count for checks")
        p.add_argument("--tol", type=float, help="solver/stop tolerance")
        p.add_argument("--max-iter", dest="max_iter", type=int)
        p.add_argument("--yn-variant", dest="yn_variant", choices=("tz", "tx"))
        p.add_argument("--plot", dest="plot", action="store_true", default=None)
        p.add_argument("--no-plot", dest="plot", action="store_false", default=None)

    common(sub.add_parser("table1", help="reproduce the benchmark comparison table"))

    p = sub.add_parser("race", help="run both schemes on one mapping")
    common(p)
    p.add_argument("--map", dest="mapping", help="catalog name or 'custom'")
    p.add_argument("--x1", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--map-domain", dest="map_domain")
    p.add_argument("--map-pieces", dest="map_pieces")
    p.add_argument("--map-fixed", dest="map_fixed")

    p = sub.add_parser("properties", help="verify/refute mapping classes")
    common(p)
    p.add_argument("--map", dest="mapping")
    p.add_argument("--alpha", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--map-domain", dest="map_domain")
    p.add_argument("--map-pieces", dest="map_pieces")
    p.add_argument("--map-fixed", dest="map_fixed")

    p = sub.add_parser("space-check", help="axioms and modulus of a space")
    common(p)
    p.add_argument("--space", help="euclidean:d | poincare | l2grid:N")

    p = sub.add_parser("integral", help="solve a discretised integral equation")
    common(p)
    p.add_argument("--kernel", help="default | linear | zero")
    p.add_argument("--kernel-m", dest="kernel_m", type=float)
    p.add_argument("--kernel-fscale", dest="kernel_fscale", type=float)
    p.add_argument("--y0", help="polynomial coefficients c0,c1,...")
    p.add_argument("--n", type=int, help="grid nodes")
    p.add_argument("--rule", choices=(integral.TRAPEZOID, integral.GAUSS_LEGENDRE))
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    return parser


_COMMANDS = {
    "table1": cmd_table1,
    "race": cmd_race,
    "properties": cmd_properties,
    "space-check": cmd_space_check,
    "integral": cmd_integral,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except (DomainError, UnsupportedError, UnsupportedOrderError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IterationError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FixlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
