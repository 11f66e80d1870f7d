"""Command-line harness: config parsing, dispatch, deterministic artifacts.

Verbs are grouped as ``contract validate``, ``ergopt value|subaction|verify|
sandwich``, ``zoom times|freq|distortion``, ``shift check``, ``family
ce-check|viana-freq`` and ``core cover``.  Every run writes a ``summary.json``
and verb-specific CSV tables into the output directory; floats are printed
with 17 significant digits so reruns are byte-comparable (the wall-time field
is the one documented exception).

Exit codes: 0 success with all checked inequalities holding, 1 when the
computation ran but a verification failed, 2 for usage or config errors,
3 when a resource budget would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .contractions import ContractionSeq, tail_sum, validate_contraction
from .dynamics import AdicGrid, MapModel, covering_time
from .ergopt import (
    HolderPotential,
    estimate_ergodic_value,
    holder_seminorm_estimate,
    lax_oleinik_fixed_point,
    make_potential,
    mane_subaction,
    two_sided_sandwich,
    verify_subcohomology,
)
from .errors import (
    AmbiguityError,
    BudgetError,
    CapabilityError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    HypothesisError,
    InvalidInputError,
    PrecisionError,
    SingularityError,
    ZoomaxError,
)
from .families import (
    VianaParams,
    collet_eckmann_check,
    make_expanding_circle,
    make_quadratic,
    make_viana,
)
from .shiftspace import (
    ShiftSpace,
    SymbolicPoint,
    WeightedShiftMetric,
    cylinder_contraction_check,
    validate_weights,
)
from .zooming import (
    HyperbolicParams,
    check_bounded_distortion,
    detect_hyperbolic_times,
    hyperbolic_frequency,
    local_expansion_bounds,
)

DEFAULT_SEED = 0xC0FFEE

USAGE_ERRORS = (InvalidInputError, DomainError, CapabilityError)
FAILURE_ERRORS = (
    HypothesisError,
    ConvergenceError,
    DivergenceError,
    SingularityError,
    AmbiguityError,
    PrecisionError,
)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_kv(spec: str, caster=float) -> dict:
    out = {}
    if not spec:
        return out
    for item in spec.split(","):
        if "=" not in item:
            raise InvalidInputError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = caster(value)
    return out


def parse_map(spec: str) -> MapModel:
    head, _, rest = spec.partition(":")
    if head == "doubling":
        return make_expanding_circle(2)
    if head == "expanding":
        kv = _parse_kv(rest)
        return make_expanding_circle(int(kv.get("d", 2)))
    if head == "quadratic":
        kv = _parse_kv(rest)
        return make_quadratic(kv.get("a", 2.0)).map
    if head == "viana":
        kv = _parse_kv(rest)
        params = VianaParams(
            a0=kv.get("a0", 1.8), alpha_v=kv.get("alpha", 0.01), d=int(kv.get("d", 16))
        )
        return make_viana(params)
    raise InvalidInputError(f"unknown map {spec!r}")


def parse_potential(spec: str, map_model: MapModel) -> HolderPotential:
    if spec.startswith("table:"):
        path = Path(spec[len("table:") :])
        data = np.loadtxt(path, delimiter=",")
        xs, ys = data[:, 0], data[:, 1]
        return HolderPotential(
            name=f"table:{path.name}",
            eval=lambda x: np.interp(x, xs, ys),
            alpha=1.0,
        )
    return make_potential(spec, map_model)


def parse_contraction(spec: str) -> ContractionSeq:
    head, _, rest = spec.partition(":")
    if head == "exp":
        kv = _parse_kv(rest)
        return ContractionSeq.exponential(kv["lambda"])
    if head == "power":
        kv = _parse_kv(rest)
        return ContractionSeq.power(kv["a"], kv["b"])
    if head == "table":
        coeffs = np.loadtxt(Path(rest), delimiter=",").ravel()
        return ContractionSeq.from_table(coeffs)
    raise InvalidInputError(f"unknown contraction {spec!r}")


def parse_weights(spec: str) -> WeightedShiftMetric:
    head, _, rest = spec.partition(":")
    if head == "geom":
        kv = _parse_kv(rest)
        return WeightedShiftMetric.geometric(kv["q"])
    if head == "power":
        kv = _parse_kv(rest)
        return WeightedShiftMetric.power(kv["a"], kv.get("b", 1.0))
    if head == "table":
        weights = np.loadtxt(Path(rest), delimiter=",").ravel()
        return WeightedShiftMetric.from_table(weights)
    raise InvalidInputError(f"unknown weights {spec!r}")


def _grid_for(map_model: MapModel, level: int) -> AdicGrid:
    if map_model.domain.kind != "circle" or map_model.degree is None:
        raise CapabilityError("grids are generated for circle maps only")
    return AdicGrid(base=map_model.degree, level=level)


def _resolve_centering(mode: str, map_model, phi, max_period: int):
    if mode == "auto":
        est = estimate_ergodic_value(map_model, phi, max_period, "inf")
        return max(est.value, 0.0), "inf-side estimate clamped to >= 0"
    if mode == "literal":
        est = estimate_ergodic_value(map_model, phi, max_period, "sup")
        return est.value, "sup-side estimate (guarded by the divergence detector)"
    try:
        return float(mode), "explicit"
    except ValueError as exc:
        raise InvalidInputError(f"centering must be auto, literal or a number: {mode!r}") from exc


def _write_csv(outdir: Path, name: str, header: list[str], rows) -> str:
    path = outdir / name
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return name


# ---------------------------------------------------------------------------
# Verb implementations: each returns (verified, headline, artifacts)
# ---------------------------------------------------------------------------


def _run_contract_validate(args, outdir: Path):
    seq = parse_contraction(args.seq)
    report = validate_contraction(seq, n_max=args.nmax)
    rows = [
        ("contracting", int(report.contracting.passed), repr(report.contracting.counterexample)),
        ("monotone", int(report.monotone.passed), repr(report.monotone.counterexample)),
        (
            "supermultiplicative",
            int(report.supermultiplicative.passed),
            repr(report.supermultiplicative.counterexample),
        ),
        ("summable", int(report.summable.passed), repr(report.summable.counterexample)),
    ]
    artifacts = [_write_csv(outdir, "contract_axioms.csv", ["axiom", "passed", "counterexample"], rows)]
    headline = {
        "verdict": report.verdict,
        "partial_sum": report.partial_sum,
        "tail_bound": report.tail_bound,
        "sampled_only": report.sampled_only,
        "supermultiplicative_detail": report.supermultiplicative.detail,
    }
    if args.alpha is not None and seq.is_lipschitz and seq.table is None:
        ts = tail_sum(seq, args.alpha)
        headline["tail_sum"] = None if ts.diverges else ts.value
        headline["tail_sum_diverges"] = ts.diverges
    return report.is_valid, headline, artifacts


def _run_ergopt_value(args, outdir: Path):
    map_model = parse_map(args.map)
    phi = parse_potential(args.potential, map_model)
    est = estimate_ergodic_value(map_model, phi, args.max_period, args.direction)
    rows = [(i, float(x)) for i, x in enumerate(est.witness.points)]
    artifacts = [_write_csv(outdir, "witness.csv", ["i", "x"], rows)]
    headline = {
        "value": est.value,
        "witness_period": est.witness.period,
        "direction": est.direction,
        "max_period": est.max_period,
    }
    return True, headline, artifacts


def _build_subaction(args, map_model, phi):
    grid = _grid_for(map_model, args.grid)
    c, c_note = _resolve_centering(args.centering, map_model, phi, args.max_period)
    if args.method == "lax":
        sub = lax_oleinik_fixed_point(map_model, phi, c, grid, tol=args.lax_tol, max_iter=args.max_iter)
    else:
        sub = mane_subaction(map_model, phi, c, grid, args.depth)
    return grid, sub, c, c_note


def _subaction_summary(map_model, phi, sub, report):
    d = map_model.degree or 2
    seminorm = holder_seminorm_estimate(sub.values, phi.alpha)
    phi_norm = holder_seminorm_estimate(np.asarray(phi.eval(sub.grid), dtype=float), phi.alpha)
    bound = phi_norm / (1.0 - d ** (-phi.alpha))
    return {
        "min_defect": report.min_defect,
        "argmin": report.argmin,
        "mean_defect": report.mean_defect,
        "exact_invariant_ok": report.exact_invariant_ok,
        "exact_slack_max": report.exact_slack_max,
        "centering": sub.centering,
        "seminorm_estimate": seminorm,
        "seminorm_chain_bound": bound,
        "construction": sub.construction,
        "iterations": sub.meta.get("iterations"),
        "residual": sub.meta.get("residual"),
    }


def _run_ergopt_subaction(args, outdir: Path, exact_required: bool = False):
    map_model = parse_map(args.map)
    phi = parse_potential(args.potential, map_model)
    grid, sub, c, c_note = _build_subaction(args, map_model, phi)
    report = verify_subcohomology(map_model, phi, sub, tol=args.tol)
    rows = zip(
        (float(x) for x in sub.grid),
        (float(v) for v in sub.values),
        (float(dv) for dv in report.defects),
    )
    artifacts = [
        _write_csv(outdir, "subaction.csv", ["grid_x", "lambda", "defect"], rows)
    ]
    headline = _subaction_summary(map_model, phi, sub, report)
    headline["centering_note"] = c_note
    verified = report.passed and (report.exact_invariant_ok or not exact_required)
    return verified, headline, artifacts


def _run_ergopt_sandwich(args, outdir: Path):
    map_model = parse_map(args.map)
    phi = parse_potential(args.potential, map_model)
    grid = _grid_for(map_model, args.grid)
    result = two_sided_sandwich(map_model, phi, grid, args.depth, args.tol)
    rows = zip(
        (float(x) for x in result.lambda1.grid),
        (float(v) for v in result.lambda1.values),
        (float(dv) for dv in result.report1.defects),
        (float(v) for v in result.lambda2.values),
        (float(dv) for dv in result.report2.defects),
    )
    artifacts = [
        _write_csv(
            outdir,
            "sandwich.csv",
            ["grid_x", "lambda1", "defect1", "lambda2", "defect2"],
            rows,
        )
    ]
    headline = {
        "min_defect_lower": result.report1.min_defect,
        "min_defect_upper": result.report2.min_defect,
        "tolerance": args.tol,
    }
    return result.report1.passed and result.report2.passed, headline, artifacts


def _sample_points(map_model: MapModel, count: int, seed: int):
    rng = np.random.default_rng(seed)
    if map_model.domain.kind == "circle":
        return [float(u) for u in rng.uniform(0.0, 1.0, count)]
    if map_model.domain.kind == "interval":
        return [
            float(u)
            for u in rng.uniform(map_model.domain.lo, map_model.domain.hi, count)
        ]
    lo, hi = map_model.domain.strip
    return [
        (float(t), float(x))
        for t, x in zip(rng.uniform(0.0, 1.0, count), rng.uniform(lo, hi, count))
    ]


def _hyp_params(args) -> HyperbolicParams:
    return HyperbolicParams(sigma=args.sigma, epsilon=args.eps, beta=args.beta)


def _point_arg(map_model: MapModel, raw: str):
    if map_model.domain.kind == "product":
        theta, _, x = raw.partition(",")
        return (float(theta), float(x))
    return float(raw)


def _run_zoom_times(args, outdir: Path):
    map_model = parse_map(args.map)
    x0 = _point_arg(map_model, args.x0)
    record = detect_hyperbolic_times(map_model, x0, _hyp_params(args), args.horizon)
    flags = set(record.indices)
    rows = ((n, int(n in flags)) for n in range(1, args.horizon + 1))
    artifacts = [_write_csv(outdir, "times.csv", ["n", "is_time"], rows)]
    headline = {
        "count": len(record.indices),
        "frequency": record.frequency,
        "first": record.indices[0] if record.indices else None,
    }
    return True, headline, artifacts


def _run_zoom_freq(args, outdir: Path):
    map_model = parse_map(args.map)
    sample = _sample_points(map_model, args.points, args.seed)
    stats = hyperbolic_frequency(map_model, sample, _hyp_params(args), args.horizon)
    rows = [(repr(p), f) for p, f in zip(sample, stats.per_point)]
    artifacts = [_write_csv(outdir, "freq.csv", ["point", "theta_hat"], rows)]
    headline = {
        "theta_min": stats.minimum,
        "theta_mean": stats.mean,
        "theta_max": stats.maximum,
        "points": args.points,
        "horizon": args.horizon,
    }
    return True, headline, artifacts


def _run_zoom_distortion(args, outdir: Path):
    map_model = parse_map(args.map)
    x0 = _point_arg(map_model, args.x0)
    record = detect_hyperbolic_times(map_model, x0, _hyp_params(args), args.horizon)
    usable = [n for n in record.indices if n <= args.max_time]
    if not usable:
        raise HypothesisError(
            f"no qualifying time <= {args.max_time} detected for {args.x0}"
        )
    n = usable[-1]
    report = check_bounded_distortion(
        map_model, x0, n, pair_sample=args.pairs, delta=args.delta, seed=args.seed
    )
    headline = {
        "rho_hat": report.rho_hat,
        "time": report.time,
        "samples": report.samples,
        "worst_pair": repr(report.worst_pair),
    }
    return True, headline, []


def _run_shift_check(args, outdir: Path):
    metric = parse_weights(args.weights)
    seq = parse_contraction(args.contraction)
    wreport = validate_weights(metric, n_max=args.nmax)
    rng = np.random.default_rng(args.seed)
    length = args.length
    worst_by_depth: dict[int, float] = {}
    all_pass = True
    for _ in range(args.pairs):
        k = int(rng.integers(0, args.depth + 1))
        prefix = rng.integers(0, 2, k)
        sx = np.concatenate([prefix, rng.integers(0, 2, length - k)])
        sy = np.concatenate([prefix, rng.integers(0, 2, length - k)])
        x = SymbolicPoint(word=tuple(int(s) for s in sx))
        y = SymbolicPoint(word=tuple(int(s) for s in sy))
        cert = cylinder_contraction_check(x, y, k, metric, seq)
        all_pass &= cert.passed
        if not cert.degenerate:
            worst_by_depth[k] = max(worst_by_depth.get(k, 0.0), cert.worst_normalized)
    space = ShiftSpace(metric, length=length)
    origin = SymbolicPoint(word=(0,) * length)
    radii = [2.0**-m for m in range(4, 13)]
    bounds = local_expansion_bounds(space, origin, radii, samples_per_radius=8, seed=args.seed)
    rows = [(k, worst_by_depth[k], seq.coeff(k)) for k in sorted(worst_by_depth)]
    artifacts = [
        _write_csv(outdir, "cylinder_ratios.csv", ["depth", "worst_ratio", "bound"], rows)
    ]
    headline = {
        "weights_valid": wreport.is_valid,
        "weights_counterexample": repr(wreport.counterexample),
        "certificates_pass": bool(all_pass),
        "d_minus": bounds.d_minus,
        "d_plus": bounds.d_plus,
    }
    verified = wreport.is_valid and all_pass
    return verified, headline, artifacts


def _run_family_ce(args, outdir: Path):
    fam = make_quadratic(args.a)
    report = collet_eckmann_check(fam, args.lambda_ce, args.horizon)
    model = fam.map
    p = model.step(fam.critical_point)
    rows = []
    acc = 0.0
    import math as _math

    for n in range(1, args.horizon + 1):
        acc += _math.log(abs(model.derivative(p)))
        rows.append((n, acc, args.lambda_ce * n, acc - args.lambda_ce * n))
        p = model.step(p)
    artifacts = [
        _write_csv(outdir, "ce.csv", ["n", "log_growth", "bound", "margin"], rows)
    ]
    headline = {
        "passed": report.passed,
        "first_failure": report.first_failure,
        "margin": report.margin,
    }
    return report.passed, headline, artifacts


def _run_family_viana_freq(args, outdir: Path):
    params = VianaParams(a0=args.a0, alpha_v=args.alpha, d=args.d)
    map_model = make_viana(params)
    sample = _sample_points(map_model, args.points, args.seed)
    stats = hyperbolic_frequency(
        map_model, sample, HyperbolicParams(sigma=args.sigma, epsilon=args.eps, beta=1.0), args.horizon
    )
    rows = [(p[0], p[1], f) for p, f in zip(sample, stats.per_point)]
    artifacts = [_write_csv(outdir, "viana_freq.csv", ["theta0", "x0", "theta_hat"], rows)]
    headline = {
        "theta_min": stats.minimum,
        "theta_mean": stats.mean,
        "theta_max": stats.maximum,
        "strip": list(params.strip),
    }
    return stats.minimum > 0.0, headline, artifacts


def _run_core_cover(args, outdir: Path):
    map_model = parse_map(args.map)
    k = covering_time(map_model, (args.lo, args.hi), resolution=args.resolution, k_max=args.kmax)
    headline = {"covering_time": k, "resolution": args.resolution}
    return k >= 0, headline, []


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--outdir", default=".", help="directory for summary.json and CSV tables")
    p.add_argument("--config", default=None, help="JSON file of options; flags override")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zoomax", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)

    contract = groups.add_parser("contract").add_subparsers(dest="verb", required=True)
    cv = contract.add_parser("validate")
    cv.add_argument("--seq", required=True)
    cv.add_argument("--nmax", type=int, default=64)
    cv.add_argument("--alpha", type=float, default=None)
    _add_common(cv)
    cv.set_defaults(func=_run_contract_validate)

    ergopt = groups.add_parser("ergopt").add_subparsers(dest="verb", required=True)
    ev = ergopt.add_parser("value")
    ev.add_argument("--map", required=True)
    ev.add_argument("--potential", required=True)
    ev.add_argument("--max-period", type=int, default=12, dest="max_period")
    ev.add_argument("--direction", choices=("sup", "inf"), default="sup")
    _add_common(ev)
    ev.set_defaults(func=_run_ergopt_value)

    for verb, exact in (("subaction", False), ("verify", True)):
        es = ergopt.add_parser(verb)
        es.add_argument("--map", required=True)
        es.add_argument("--potential", required=True)
        es.add_argument("--depth", type=int, default=12)
        es.add_argument("--grid", type=int, default=10, help="grid level m (d**m points)")
        es.add_argument("--tol", type=float, default=1e-2)
        es.add_argument("--centering", default="auto")
        es.add_argument("--method", choices=("mane", "lax"), default="mane")
        es.add_argument("--lax-tol", type=float, default=1e-8, dest="lax_tol")
        es.add_argument("--max-iter", type=int, default=10_000, dest="max_iter")
        es.add_argument("--max-period", type=int, default=12, dest="max_period")
        _add_common(es)
        es.set_defaults(func=lambda a, o, e=exact: _run_ergopt_subaction(a, o, exact_required=e))

    ew = ergopt.add_parser("sandwich")
    ew.add_argument("--map", required=True)
    ew.add_argument("--potential", required=True)
    ew.add_argument("--depth", type=int, default=14)
    ew.add_argument("--grid", type=int, default=10)
    ew.add_argument("--tol", type=float, default=5e-3)
    _add_common(ew)
    ew.set_defaults(func=_run_ergopt_sandwich)

    zoom = groups.add_parser("zoom").add_subparsers(dest="verb", required=True)
    zt = zoom.add_parser("times")
    zt.add_argument("--map", required=True)
    zt.add_argument("--x0", required=True)
    zt.add_argument("--sigma", type=float, required=True)
    zt.add_argument("--eps", type=float, default=0.1)
    zt.add_argument("--beta", type=float, default=0.0)
    zt.add_argument("--horizon", type=int, default=100)
    _add_common(zt)
    zt.set_defaults(func=_run_zoom_times)

    zf = zoom.add_parser("freq")
    zf.add_argument("--map", required=True)
    zf.add_argument("--points", type=int, default=100)
    zf.add_argument("--sigma", type=float, required=True)
    zf.add_argument("--eps", type=float, default=0.1)
    zf.add_argument("--beta", type=float, default=0.0)
    zf.add_argument("--horizon", type=int, default=1000)
    _add_common(zf)
    zf.set_defaults(func=_run_zoom_freq)

    zd = zoom.add_parser("distortion")
    zd.add_argument("--map", required=True)
    zd.add_argument("--x0", required=True)
    zd.add_argument("--sigma", type=float, required=True)
    zd.add_argument("--eps", type=float, default=0.1)
    zd.add_argument("--beta", type=float, default=0.0)
    zd.add_argument("--horizon", type=int, default=100)
    zd.add_argument("--max-time", type=int, default=24, dest="max_time")
    zd.add_argument("--pairs", type=int, default=256)
    zd.add_argument("--delta", type=float, default=0.05)
    _add_common(zd)
    zd.set_defaults(func=_run_zoom_distortion)

    shift = groups.add_parser("shift").add_subparsers(dest="verb", required=True)
    sc = shift.add_parser("check")
    sc.add_argument("--weights", required=True)
    sc.add_argument("--contraction", required=True)
    sc.add_argument("--pairs", type=int, default=1000)
    sc.add_argument("--depth", type=int, default=20)
    sc.add_argument("--length", type=int, default=64)
    sc.add_argument("--nmax", type=int, default=32)
    _add_common(sc)
    sc.set_defaults(func=_run_shift_check)

    family = groups.add_parser("family").add_subparsers(dest="verb", required=True)
    fc = family.add_parser("ce-check")
    fc.add_argument("--a", type=float, default=2.0)
    fc.add_argument("--lambda-ce", type=float, required=True, dest="lambda_ce")
    fc.add_argument("--horizon", type=int, default=50)
    _add_common(fc)
    fc.set_defaults(func=_run_family_ce)

    fv = family.add_parser("viana-freq")
    fv.add_argument("--a0", type=float, default=1.8)
    fv.add_argument("--alpha", type=float, default=0.01)
    fv.add_argument("--d", type=int, default=16)
    fv.add_argument("--points", type=int, default=100)
    fv.add_argument("--sigma", type=float, default=0.9)
    # The positive-frequency statement holds for small truncation radii;
    # 0.01 sits comfortably inside the working range for these parameters.
    fv.add_argument("--eps", type=float, default=0.01)
    fv.add_argument("--horizon", type=int, default=10_000)
    _add_common(fv)
    fv.set_defaults(func=_run_family_viana_freq)

    core = groups.add_parser("core").add_subparsers(dest="verb", required=True)
    cc = core.add_parser("cover")
    cc.add_argument("--map", required=True)
    cc.add_argument("--lo", type=float, required=True)
    cc.add_argument("--hi", type=float, required=True)
    cc.add_argument("--resolution", type=int, default=1024)
    cc.add_argument("--kmax", type=int, default=64)
    _add_common(cc)
    cc.set_defaults(func=_run_core_cover)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    raw = json.loads(Path(args.config).read_text())
    if not isinstance(raw, dict):
        raise InvalidInputError("config file must hold a JSON object")
    known = set(vars(args))
    unknown = set(raw) - known
    if unknown:
        raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
    # Flags given on the command line override the file; detect explicit flags
    # by reparsing with the config values as defaults.
    explicit = set()
    for token in argv:
        if token.startswith("--"):
            explicit.add(token[2:].split("=", 1)[0].replace("-", "_"))
    for key, value in raw.items():
        if key not in explicit:
            setattr(args, key, value)
    return args


def _error_json(exc: Exception) -> str:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        payload["witness"] = repr(witness)
    return json.dumps(payload, sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except USAGE_ERRORS as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        verified, headline, artifacts = args.func(args, outdir)
    except BudgetError as exc:
        print(_error_json(exc), file=sys.stderr)
        return 3
    except USAGE_ERRORS as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2
    except FAILURE_ERRORS as exc:
        print(_error_json(exc), file=sys.stderr)
        return 1
    except ZoomaxError as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2

    inputs = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")
    }
    summary = {
        "verb": f"{args.group} {args.verb}",
        "inputs": inputs,
        "headline": headline,
        "artifacts": artifacts,
        "verified": bool(verified),
        "seed": args.seed,
        "wall_time_s": round(time.perf_counter() - started, 6),
        "version": __version__,
    }
    text = json.dumps(summary, sort_keys=True, indent=2, default=repr)
    (outdir / "summary.json").write_text(text + "\n")
    print(text)
    return 0 if verified else 1


if __name__ == "__main__":
    sys.exit(main())
