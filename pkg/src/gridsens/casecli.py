"""Command-line front end.

Subcommands::

    gridsens reduce    --network NET [--k K] [--out DIR]
    gridsens sweep     --network NET --params PAR --assign gfl,gfm,... [--k K] [grid flags] [--out DIR]
    gridsens casestudy [--network NET] [--params PAR] [--k K] [grid flags] [--seed S] [--out DIR]
    gridsens sibs      [--params PAR] [--scr-min A --scr-max B --steps N] [grid flags] [--out DIR]
    gridsens lemmas    [--trials N] [--seed S] [--out DIR]

The exit status is 0 only when every hard verdict of the run holds: the
hybrid-beats-homogeneous inequality, the lemma harness and, for ``sibs``,
the monotonicity of both curves.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from importlib.resources import files
from pathlib import Path

import numpy as np

from . import _kernels
from .gridstrength import GridStrengthError, eig_sym, lemma2_check, lemma_harness
from .gridstrength import Partition, lemma1_check
from .inverters import (
    AdmittanceModel,
    InverterError,
    InverterParams,
    Kind,
    build_gfl_model,
    build_gfm_model,
    estimate_beq,
    load_params,
)
from .netgraph import GroundedLaplacian, NetworkSpec, grounded_laplacian, load_network
from .sensitivity import (
    GridSpec,
    SibsConfig,
    SweepResult,
    SystemAssignment,
    is_closed_loop_stable,
    modal_kappa,
    sibs_sweep,
    sweep,
    verify_det_factorization,
    verify_main_inequality,
    verify_remark1_equality,
)

SYSTEMS = {
    "gamma1": ("gfl", "gfl", "gfl"),
    "gamma2": ("gfm", "gfm", "gfm"),
    "gamma3": ("gfm", "gfl", "gfm"),
}
SCENARIO_KS = (1.0, 0.1)


class CliError(RuntimeError):
    pass


def fixture_path(name: str) -> Path:
    return Path(str(files("gridsens") / "fixtures" / name))


def load_acceptance(path=None) -> dict:
    return json.loads(Path(path or fixture_path("acceptance.json")).read_text())


def scenario_label(k: float) -> str:
    return f"k{k:g}"


def parse_assign(text: str, n: int) -> tuple[Kind, ...]:
    """``gfl`` / ``gfm`` (homogeneous), a system name, or a comma list of length ``n``."""
    text = text.strip().lower()
    if text in SYSTEMS and n == len(SYSTEMS[text]):
        return tuple(Kind(k) for k in SYSTEMS[text])
    if text in ("gfl", "gfm"):
        return (Kind(text),) * n
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != n:
        raise CliError(f"--assign lists {len(parts)} kinds but the network has {n} inverter nodes")
    bad = [p for p in parts if p not in ("gfl", "gfm")]
    if bad:
        raise CliError(f"unknown inverter kinds {bad}; use gfl or gfm")
    return tuple(Kind(p) for p in parts)


@dataclass(frozen=True)
class ScenarioConfig:
    network: Path
    params: Path
    assign: str = "gamma3"
    k: float | None = None
    grid: GridSpec = field(default_factory=GridSpec)
    seed: int = 7


@dataclass
class Models:
    params: InverterParams
    gfl: AdmittanceModel
    gfm: AdmittanceModel

    @classmethod
    def load(cls, path) -> "Models":
        p = load_params(path)
        return cls(p, build_gfl_model(p.filter, p.gfl), build_gfm_model(p.filter, p.gfm))


def laplacian_for(net: NetworkSpec, k: float | None) -> GroundedLaplacian:
    return grounded_laplacian(net if k is None else replace(net, k=float(k)))


# ------------------------------------------------------------ report types


@dataclass(frozen=True)
class ComparisonRow:
    scenario: str
    computed_db: float
    freq_peak_hz: float
    paper_db: float | None = None
    citation: str | None = None
    delta_db: float | None = None
    within_tol: bool | None = None
    closed_loop_stable: bool | None = None


@dataclass
class ComparisonReport:
    tolerance_db: float
    rows: list[ComparisonRow] = field(default_factory=list)
    eq21: dict[str, bool] = field(default_factory=dict)
    orderings: dict[str, bool] = field(default_factory=dict)
    remark1: dict[str, dict] = field(default_factory=dict)
    identities: dict[str, float] = field(default_factory=dict)
    lemma_counts: dict[str, dict] = field(default_factory=dict)
    sibs: dict | None = None
    beq: dict = field(default_factory=dict)
    sweeps: dict[str, dict[str, SweepResult]] = field(default_factory=dict)

    @property
    def hard_ok(self) -> bool:
        ok = all(self.eq21.values())
        for counts in self.lemma_counts.values():
            ok = ok and counts["fail"] == 0 and counts["inconclusive"] == 0
        return bool(ok)

    def summary(self) -> list[dict]:
        out = []
        for r in self.rows:
            k_label = r.scenario.split("_")[0]
            out.append({
                "scenario": r.scenario,
                "kappa_p_db": _json_float(r.computed_db),
                "freq_peak_hz": _json_float(r.freq_peak_hz),
                "holds_eq21": self.eq21.get(k_label),
            })
        return out


def _json_float(x):
    if x is None:
        return None
    x = float(x)
    return x if np.isfinite(x) else ("inf" if x > 0 else "-inf")


def _compare(rows_in, published, tol) -> list[ComparisonRow]:
    rows = []
    for name, res, stable in rows_in:
        pub = published.get(name)
        if pub is None:
            rows.append(ComparisonRow(name, res.kappa_p_db, res.freq_peak_hz, closed_loop_stable=stable))
            continue
        delta = res.kappa_p_db - pub["kappa_p_db"]
        rows.append(ComparisonRow(name, res.kappa_p_db, res.freq_peak_hz, pub["kappa_p_db"], pub["citation"],
                                  delta, bool(abs(delta) <= tol), stable))
    return rows


# ------------------------------------------------------------ operations


def run_case_study(network=None, params=None, ks=SCENARIO_KS, grid: GridSpec | None = None,
                   acceptance=None, with_checks: bool = True) -> ComparisonReport:
    """All-GFL, all-GFM and hybrid systems in every ``k`` scenario, compared to published values."""
    grid = grid or GridSpec()
    acc = load_acceptance(acceptance)
    net = load_network(network or fixture_path("three_inverter.json"))
    models = Models.load(params or fixture_path("table_a1.json"))
    published = {f"{scenario_label(e['k'])}_{e['system']}": e for e in acc["published"]["case_study"]}
    report = ComparisonReport(float(acc["tolerance_db"]))
    report.beq = _beq_block(models, net, ks)
    for k in ks:
        label = scenario_label(k)
        try:
            b = laplacian_for(net, k)
            results = {}
            rows_in = []
            for system in SYSTEMS:
                kinds = parse_assign(system, b.n)
                sys_ = SystemAssignment(b, kinds, models.gfl, models.gfm, models.params.filter.omega0)
                res = sweep(sys_, grid)
                results[f"{label}_{system}"] = res
                rows_in.append((f"{label}_{system}", res, is_closed_loop_stable(sys_)))
        except (ValueError, RuntimeError) as exc:
            raise CliError(f"scenario {label}: {exc}") from exc
        report.rows.extend(_compare(rows_in, published, report.tolerance_db))
        report.sweeps[label] = results
        g1, g2, g3 = (results[f"{label}_{s}"].kappa_p_db for s in SYSTEMS)
        report.eq21[label] = bool(g3 < max(g1, g2))
        if k >= 1.0:
            report.orderings[f"{label}: gamma3 < gamma1"] = bool(g3 < g1)
        else:
            report.orderings[f"{label}: gamma3 < gamma2"] = bool(g3 < g2)
        if with_checks:
            hybrid = SystemAssignment(b, parse_assign("gamma3", b.n), models.gfl, models.gfm, models.params.filter.omega0)
            cmp_ = verify_remark1_equality(hybrid, grid)
            report.remark1[label] = {
                "max_sigma_min_deviation": cmp_.max_deviation,
                "kappa_subsystems_db": cmp_.kappa_subsystems_db,
                "kappa_direct_db": cmp_.kappa_direct_db,
                "gap_db": cmp_.gap_db,
            }
            report.identities[f"{label}_det_factorization_max_rel_err"] = float(verify_det_factorization(hybrid, grid).max())
            for system, model in (("gamma1", models.gfl), ("gamma2", models.gfm)):
                direct = results[f"{label}_{system}"].sigma_max
                modal = modal_kappa(b, model, grid, models.params.filter.omega0)
                report.identities[f"{label}_{system}_modal_max_rel_err"] = float(np.max(np.abs(modal.combined.sigma_max / direct - 1)))
                report.identities[f"{label}_{system}_modal_argmax_mode"] = modal.argmax_mode
    return report


def _beq_block(models: Models, net: NetworkSpec, ks) -> dict:
    w_star = models.params.omega_star
    out = {"omega_star": w_star}
    try:
        b_eq, err = estimate_beq(models.gfm, w_star, models.params.filter.omega0)
    except InverterError as exc:
        out["error"] = str(exc)
        return out
    out.update(b_eq=b_eq, fit_error=err)
    for k in ks:
        b = laplacian_for(net, k)
        r = lemma1_check(b, Partition.from_kinds(SYSTEMS["gamma3"]), b_eq)
        out[f"{scenario_label(k)}_lemma1"] = {"lhs": r.lhs, "rhs": r.rhs, "status": r.status}
    return out


@dataclass(frozen=True)
class SibsFigure:
    scrs: np.ndarray
    gfl_db: np.ndarray
    gfm_db: np.ndarray
    gfl_decreasing: bool | None
    gfm_increasing: bool | None
    gfl_stable: tuple[bool, ...] = ()


def run_sibs_figure(scr_min: float = 3.0, scr_max: float = 7.0, steps: int = 9, params=None,
                    grid: GridSpec | None = None) -> SibsFigure:
    """SIBS peaks of both inverter types over an SCR range, with monotonicity verdicts."""
    if not 0 < scr_min <= scr_max:
        raise CliError(f"need 0 < scr_min <= scr_max, got {scr_min}, {scr_max}")
    models = Models.load(params or fixture_path("table_a1.json"))
    scrs = np.array([scr_min]) if scr_min == scr_max else np.linspace(scr_min, scr_max, max(int(steps), 2))
    gfl_db = np.array([sibs_sweep(SibsConfig(s, models.gfl), grid).kappa_p_db for s in scrs])
    gfm_db = np.array([sibs_sweep(SibsConfig(s, models.gfm), grid).kappa_p_db for s in scrs])
    stable = tuple(is_closed_loop_stable(SibsConfig(s, models.gfl).system()) for s in scrs)
    if scrs.size == 1:
        return SibsFigure(scrs, gfl_db, gfm_db, None, None, stable)
    return SibsFigure(scrs, gfl_db, gfm_db, bool(np.all(np.diff(gfl_db) < 0)), bool(np.all(np.diff(gfm_db) > 0)), stable)


def _count(records, lemma):
    sel = [r for r in records if r["lemma"] == lemma]
    counts = {s: sum(r["status"] == s for r in sel) for s in ("pass", "fail", "inconclusive", "degenerate", "decoupled")}
    counts["trials"] = len(sel)
    counts["min_margin"] = min((r["margin"] for r in sel), default=None)
    return counts


def run_lemma_suite(trials: int = 100, seed: int = 7, instances=None) -> dict:
    """Randomized lemma harness, or explicit ``(B, partition, b_eq)`` instances when given."""
    if instances is None:
        if trials < 1:
            raise CliError("lemma suite needs at least one trial")
        try:
            records = lemma_harness(trials, seed)
        except GridStrengthError as exc:
            raise CliError(str(exc)) from exc
    else:
        records = []
        for t, (b, p, b_eq) in enumerate(instances):
            for name, res in (("lemma1", lemma1_check(b, p, b_eq)), ("lemma2", lemma2_check(b, p))):
                records.append({"seed": None, "trial": t, "n": p.n, "b_eq": b_eq, "lemma": name,
                                "lhs": res.lhs, "rhs": res.rhs, "margin": res.margin, "holds": res.holds,
                                "status": res.status})
    return {"records": records, "lemma1": _count(records, "lemma1"), "lemma2": _count(records, "lemma2")}


def emit_sweep_csv(results: dict[str, SweepResult], path) -> Path:
    """One row per grid point: ``freq_hz`` then ``sigma_max_db_<name>`` per result, full precision."""
    if not results:
        raise CliError("no sweep results to write")
    names = list(results)
    ref = results[names[0]].omegas
    for name in names[1:]:
        if not np.array_equal(results[name].omegas, ref):
            raise CliError(f"sweep '{name}' uses a different frequency grid from '{names[0]}'")
    path = Path(path)
    cols = [results[n].sigma_max_db for n in names]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_hz"] + [f"sigma_max_db_{n}" for n in names])
        for i, f in enumerate(ref / (2 * np.pi)):
            w.writerow([_fmt(f)] + [_fmt(c[i]) for c in cols])
    return path


def _fmt(x) -> str:
    return "%.17g" % x


def _write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def _db(x) -> str:
    if x is None:
        return "-"
    return "inf" if not np.isfinite(x) else f"{x:.1f}"


def render_report(report: ComparisonReport) -> str:
    lines = ["# Sensitivity-peak comparison", "",
             f"Backend: {_kernels.backend_name()}. Published-value tolerance: +/-{report.tolerance_db:g} dB.", ""]
    if report.rows:
        lines += ["| scenario | computed (dB) | peak (Hz) | published (dB) | delta (dB) | within tol | closed loop stable | source |",
                  "|---|---|---|---|---|---|---|---|"]
        for r in report.rows:
            lines.append(f"| {r.scenario} | {_db(r.computed_db)} | {r.freq_peak_hz:.2f} | {_db(r.paper_db)} | {_db(r.delta_db)} | "
                         f"{'-' if r.within_tol is None else ('yes' if r.within_tol else 'no')} | "
                         f"{'-' if r.closed_loop_stable is None else ('yes' if r.closed_loop_stable else 'no')} | {r.citation or '-'} |")
        lines.append("")
    if report.eq21:
        lines += ["## Hybrid versus homogeneous", ""]
        lines += [f"- {k}: hybrid peak below the worse homogeneous peak: {'holds' if v else 'FAILS'}" for k, v in report.eq21.items()]
        lines += [f"- {k}: {'holds' if v else 'FAILS'}" for k, v in report.orderings.items()]
        lines.append("")
    if report.identities:
        lines += ["## Identity checks", ""]
        lines += [f"- {k}: {v:.3g}" if isinstance(v, float) else f"- {k}: {v}" for k, v in report.identities.items()]
        lines.append("")
    if report.beq:
        lines += ["## GFM equivalent susceptance", ""]
        w = report.beq["omega_star"]
        if "error" in report.beq:
            lines.append(f"- at w* = {w:.4g} rad/s: not available ({report.beq['error']})")
        else:
            lines.append(f"- at w* = {w:.4g} rad/s: b_eq = {report.beq['b_eq']:.4g} (relative fit error {report.beq['fit_error']:.3g})")
            for key, r in report.beq.items():
                if key.endswith("_lemma1"):
                    lines.append(f"- {key}: lmin(B_mod/gfm) = {r['lhs']:.4g} vs gSCR = {r['rhs']:.4g} ({r['status']})")
        lines.append("")
    if report.remark1:
        lines += ["## Subsystem decoupling (informational)", "",
                  "| scenario | max deviation of sigma_min | subsystem peak (dB) | direct peak (dB) | gap (dB) |", "|---|---|---|---|---|"]
        for k, d in report.remark1.items():
            lines.append(f"| {k} | {d['max_sigma_min_deviation']:.3g} | {_db(d['kappa_subsystems_db'])} | "
                         f"{_db(d['kappa_direct_db'])} | {d['gap_db']:+.1f} |")
        lines.append("")
    if report.sibs:
        s = report.sibs
        lines += ["## Single-inverter curves", "", "| SCR | GFL (dB) | GFM (dB) |", "|---|---|---|"]
        lines += [f"| {a:g} | {_db(b)} | {_db(c)} |" for a, b, c in zip(s["scr"], s["gfl_db"], s["gfm_db"])]
        lines += ["", f"- GFL strictly decreasing: {s['gfl_decreasing']}", f"- GFM strictly increasing: {s['gfm_increasing']}"]
        for row in s.get("published", []):
            lines.append(f"- {row['kind'].upper()} at SCR {row['scr']:g}: computed {_db(row['computed_db'])}, "
                         f"published {_db(row['kappa_p_db'])} ({row['citation']}), within tol: {row['within_tol']}")
        lines.append("")
    if report.lemma_counts:
        lines += ["## Lemma harness", ""]
        for name, c in report.lemma_counts.items():
            lines.append(f"- {name}: {c['pass']}/{c['trials']} pass, {c['fail']} fail, {c['inconclusive']} inconclusive, "
                         f"min margin {c['min_margin']:.3g}")
        lines.append("")
    lines.append(f"Hard verdicts: {'PASS' if report.hard_ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _sibs_block(fig: SibsFigure, acc: dict) -> dict:
    tol = float(acc["tolerance_db"])
    pub_rows = []
    for e in acc["published"]["sibs"]:
        hit = np.nonzero(np.isclose(fig.scrs, e["scr"]))[0]
        if hit.size:
            val = float((fig.gfl_db if e["kind"] == "gfl" else fig.gfm_db)[hit[0]])
            pub_rows.append(dict(e, computed_db=val, delta_db=val - e["kappa_p_db"], within_tol=bool(abs(val - e["kappa_p_db"]) <= tol)))
    return {"scr": fig.scrs.tolist(), "gfl_db": fig.gfl_db.tolist(), "gfm_db": fig.gfm_db.tolist(),
            "gfl_decreasing": fig.gfl_decreasing, "gfm_increasing": fig.gfm_increasing,
            "gfl_closed_loop_stable": list(fig.gfl_stable), "published": pub_rows}


# ------------------------------------------------------------ CLI plumbing


def _grid(args) -> GridSpec:
    return GridSpec(args.fmin, args.fmax, args.points)


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_reduce(args) -> int:
    net = load_network(args.network or fixture_path("three_inverter.json"))
    b = laplacian_for(net, args.k)
    ev = eig_sym(b).lambdas
    info = {"node_order": list(b.node_order), "b": b.b.tolist(), "eigenvalues": ev.tolist(), "gscr": float(ev[0])}
    print(json.dumps(info, indent=2))
    if args.out:
        _write_json(info, _out(args) / "reduce.json")
    return 0


def cmd_sweep(args) -> int:
    net = load_network(args.network or fixture_path("three_inverter.json"))
    models = Models.load(args.params or fixture_path("table_a1.json"))
    b = laplacian_for(net, args.k)
    kinds = parse_assign(args.assign, b.n)
    grid = _grid(args)
    name = args.assign.replace(",", "-")
    sys_ = SystemAssignment(b, kinds, models.gfl, models.gfm, models.params.filter.omega0)
    res = sweep(sys_, grid)
    p = sys_.partition
    holds = None
    if p.n1 and p.n2:
        holds = verify_main_inequality(b, models.gfl, models.gfm, p, grid, models.params.filter.omega0).holds
    out = _out(args)
    emit_sweep_csv({name: res}, out / f"sweep_{name}.csv")
    summary = [{"scenario": name, "kappa_p_db": _json_float(res.kappa_p_db), "freq_peak_hz": res.freq_peak_hz, "holds_eq21": holds}]
    _write_json(summary, out / "summary.json")
    print(f"{name}: kappa_p = {_db(res.kappa_p_db)} dB at {res.freq_peak_hz:.2f} Hz")
    return 0 if holds in (None, True) else 1


def cmd_casestudy(args) -> int:
    ks = (args.k,) if args.k is not None else SCENARIO_KS
    grid = _grid(args)
    acc = load_acceptance(args.acceptance)
    report = run_case_study(args.network, args.params, ks, grid, args.acceptance)
    fig = run_sibs_figure(3.0, 7.0, 9, args.params, grid)
    report.sibs = _sibs_block(fig, acc)
    suite = run_lemma_suite(args.trials, args.seed)
    report.lemma_counts = {"lemma1": suite["lemma1"], "lemma2": suite["lemma2"]}
    out = _out(args)
    for label, results in report.sweeps.items():
        emit_sweep_csv(results, out / f"sweep_{label}.csv")
    _write_json(report.summary(), out / "summary.json")
    text = render_report(report)
    (out / "report.md").write_text(text)
    print(text)
    return 0 if report.hard_ok else 1


def cmd_sibs(args) -> int:
    acc = load_acceptance(args.acceptance)
    fig = run_sibs_figure(args.scr_min, args.scr_max, args.steps, args.params, _grid(args))
    out = _out(args)
    with (out / "sibs.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scr", "kappa_p_db_gfl", "kappa_p_db_gfm"])
        for row in zip(fig.scrs, fig.gfl_db, fig.gfm_db):
            w.writerow([_fmt(v) for v in row])
    block = _sibs_block(fig, acc)
    _write_json(block, out / "sibs.json")
    print(json.dumps({k: v for k, v in block.items()}, indent=2))
    return 0 if fig.gfl_decreasing is not False and fig.gfm_increasing is not False else 1


def cmd_lemmas(args) -> int:
    suite = run_lemma_suite(args.trials, args.seed)
    out = _out(args)
    _write_json(suite, out / "lemmas.json")
    counts = {k: suite[k] for k in ("lemma1", "lemma2")}
    print(json.dumps(counts, indent=2))
    ok = all(c["fail"] == 0 and c["inconclusive"] == 0 for c in counts.values())
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gridsens", description="Sensitivity peaks of multi-inverter grids.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("--network", type=Path, default=None, help="network JSON (default: bundled three-inverter case)")
        p.add_argument("--params", type=Path, default=None, help="inverter parameter JSON (default: bundled table)")
        p.add_argument("--k", type=float, default=None, help="line-impedance scaling factor")
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--out", type=Path, default=Path("out"))
        p.add_argument("--acceptance", type=Path, default=None, help="published-value tolerance file")
        if grid:
            p.add_argument("--fmin", type=float, default=0.1, help="lowest frequency, Hz")
            p.add_argument("--fmax", type=float, default=1000.0, help="highest frequency, Hz")
            p.add_argument("--points", type=int, default=2000)

    p = sub.add_parser("reduce", help="grounded Laplacian, eigenvalues and gSCR")
    common(p, grid=False)
    p.set_defaults(func=cmd_reduce, out=None)

    p = sub.add_parser("sweep", help="sensitivity sweep for one kind assignment")
    common(p)
    p.add_argument("--assign", default="gamma3", help="gfl, gfm, gamma1..3 or a comma list per inverter node")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("casestudy", help="full comparison against published values")
    common(p)
    p.add_argument("--assign", default=None, help=argparse.SUPPRESS)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_casestudy)

    p = sub.add_parser("sibs", help="single-inverter peaks versus SCR")
    common(p)
    p.add_argument("--scr-min", type=float, default=3.0)
    p.add_argument("--scr-max", type=float, default=7.0)
    p.add_argument("--steps", type=int, default=9)
    p.set_defaults(func=cmd_sibs)

    p = sub.add_parser("lemmas", help="randomized eigenvalue-inequality harness")
    common(p, grid=False)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_lemmas)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"gridsens: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
