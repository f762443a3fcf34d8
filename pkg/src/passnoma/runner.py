"""
Sweep execution, figure presets, CSV datasets and analytic-vs-MC comparison.

A dataset is a list of :class:`Row` objects. On disk it is a CSV file with a
leading ``# key=value`` comment block (resolved config, seed, trials,
quadrature order, ...) followed by a one-line header.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field, fields, replace
import io
import logging
import math
import os

import numpy as np

from . import __version__
from . import analytic as an
from .errors import PassNomaError, UnsupportedCombinationError
from .model import ChannelCondition, NetworkConfig, SicMode, derive, dump_config
from .numerics import chebyshev_nodes
from .simulator import (DEFAULT_TRIALS, Node, OmaScheme, mc_blockage, mc_ergodic_rate,
                        mc_oma_baseline, mc_oma_system, mc_throughput)

__all__ = [
    "ENGINES",
    "FigurePreset",
    "Family",
    "METRICS",
    "MetricSpec",
    "Report",
    "Row",
    "SweepSpec",
    "compare_report",
    "figure_preset",
    "format_dataset",
    "parse_dataset",
    "parse_metric",
    "read_dataset",
    "run_preset",
    "run_sweep",
    "write_dataset",
]

logger = logging.getLogger(__name__)

ENGINES = ("analytic", "mc", "both")
AXES = ("rho", "total-snr")
PRESET_IDS = tuple("fig%d" % i for i in range(2, 10))
DEFAULT_OMEGA_I_LIST = (0.001, 0.01, 0.1)


# -- metric registry -------------------------------------------------------------

@dataclass(frozen=True)
class _MetricDef:
    kind: str              # "probability", "rate" or "throughput"
    uses_mode: bool
    uses_cond: bool
    analytic: object = None  # (p, cfg, mode, cond, rule) -> (value, clamped)
    mc: object = None        # (cfg, rho_db, mode, cond, trials, seed, scheme) -> MetricEstimate


def _blk(result):
    return result.probability, result.clamped


def _asym_blockage_n(p, cfg, mode, cond, rule):
    if mode is SicMode.ISIC:
        return 0.0, False
    return an.asym_blockage_n_nisic(p, cfg), False


def _asym_blockage_f(p, cfg, mode, cond, rule):
    if cond is ChannelCondition.LOS:
        an.blockage_f_los(p, cfg)  # feasibility check
        return 0.0, False
    return an.asym_blockage_f_nlos(p, cfg), False


def _asym_rate_n(p, cfg, mode, cond, rule):
    if mode is SicMode.NISIC:
        raise UnsupportedCombinationError("no high-SNR rate asymptote exists for node n under NISIC")
    return an.rate_upper_n_isic_asym(p, cfg), False


def _asym_rate_f(p, cfg, mode, cond, rule):
    if cond is ChannelCondition.LOS:
        return an.asym_rate_f_los(cfg), False
    return an.asym_rate_f_nlos(cfg, rule), False


def _mc_throughput_dl(cfg, rho_db, mode, cond, trials, seed, scheme):
    return mc_throughput(cfg, rho_db, mode, cond, trials, seed)[0]


def _mc_throughput_lt(cfg, rho_db, mode, cond, trials, seed, scheme):
    return mc_throughput(cfg, rho_db, mode, cond, trials, seed)[1]


def _mc_oma(node, which):
    def run(cfg, rho_db, mode, cond, trials, seed, scheme):
        c = ChannelCondition.LOS if node is Node.N else cond
        return mc_oma_baseline(cfg, rho_db, node, c, trials, seed, scheme)[which]
    return run


def _mc_oma_system(which):
    def run(cfg, rho_db, mode, cond, trials, seed, scheme):
        return mc_oma_system(cfg, rho_db, cond, trials, seed, scheme)[which]
    return run


METRICS = {
    "blockage_n": _MetricDef(
        "probability", True, False,
        lambda p, cfg, m, c, r: _blk(an.blockage_n(p, cfg, m)),
        lambda cfg, x, m, c, t, s, o: mc_blockage(cfg, x, m, Node.N, ChannelCondition.LOS, t, s)),
    "blockage_f": _MetricDef(
        "probability", False, True,
        lambda p, cfg, m, c, r: _blk(an.blockage_f(p, cfg, c)),
        lambda cfg, x, m, c, t, s, o: mc_blockage(cfg, x, SicMode.ISIC, Node.F, c, t, s)),
    "asym_blockage_n": _MetricDef("probability", True, False, _asym_blockage_n),
    "asym_blockage_f": _MetricDef("probability", False, True, _asym_blockage_f),
    "rate_n": _MetricDef(
        "rate", True, False,
        lambda p, cfg, m, c, r: (an.ergodic_rate_n(p, cfg, m, r).rate, False),
        lambda cfg, x, m, c, t, s, o: mc_ergodic_rate(cfg, x, m, Node.N, ChannelCondition.LOS, t, s)),
    "rate_f": _MetricDef(
        "rate", False, True,
        lambda p, cfg, m, c, r: (an.ergodic_rate_f(p, cfg, c, r).rate, False),
        lambda cfg, x, m, c, t, s, o: mc_ergodic_rate(cfg, x, SicMode.ISIC, Node.F, c, t, s)),
    "asym_rate_n": _MetricDef("rate", True, False, _asym_rate_n),
    "asym_rate_f": _MetricDef("rate", False, True, _asym_rate_f),
    "throughput_dl": _MetricDef(
        "throughput", True, True,
        lambda p, cfg, m, c, r: (an.throughput_delay_constrained(p, cfg, m, c), False),
        _mc_throughput_dl),
    "throughput_lt": _MetricDef(
        "rate", True, True,
        lambda p, cfg, m, c, r: (an.throughput_latency_tolerant(p, cfg, m, c, r), False),
        _mc_throughput_lt),
    "oma_blockage_n": _MetricDef("probability", False, False, mc=_mc_oma(Node.N, 0)),
    "oma_blockage_f": _MetricDef("probability", False, True, mc=_mc_oma(Node.F, 0)),
    "oma_rate_n": _MetricDef("rate", False, False, mc=_mc_oma(Node.N, 1)),
    "oma_rate_f": _MetricDef("rate", False, True, mc=_mc_oma(Node.F, 1)),
    "oma_sum_rate": _MetricDef("rate", False, True, mc=_mc_oma_system(1)),
    "oma_throughput_dl": _MetricDef("throughput", False, True, mc=_mc_oma_system(0)),
}


# -- specs -----------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSpec:
    metric_id: str
    mode: SicMode | None = None
    condition: ChannelCondition | None = None
    engine: str = "both"

    def __post_init__(self):
        if self.metric_id not in METRICS:
            raise ValueError("unknown metric %r (known: %s)" % (self.metric_id, ", ".join(METRICS)))
        if self.engine not in ENGINES:
            raise ValueError("engine must be one of %s" % (ENGINES,))
        d = METRICS[self.metric_id]
        if d.uses_mode and self.mode is None:
            object.__setattr__(self, "mode", SicMode.ISIC)
        if d.uses_cond and self.condition is None:
            object.__setattr__(self, "condition", ChannelCondition.LOS)
        if not d.uses_mode:
            object.__setattr__(self, "mode", None)
        if not d.uses_cond:
            object.__setattr__(self, "condition", None)

    def engines(self):
        d = METRICS[self.metric_id]
        wanted = ("analytic", "mc") if self.engine == "both" else (self.engine,)
        have = [e for e in wanted if (d.analytic if e == "analytic" else d.mc) is not None]
        return tuple(have)


def parse_metric(text, engine="both"):
    """Parse ``metric_id[:mode][:condition]``, e.g. ``blockage_n:nisic`` or ``throughput_dl:isic:nlos``."""
    parts = [s.strip() for s in text.split(":") if s.strip()]
    if not parts:
        raise ValueError("empty metric")
    mode = cond = None
    for token in parts[1:]:
        try:
            mode = SicMode.parse(token)
            continue
        except ValueError:
            pass
        try:
            cond = ChannelCondition.parse(token)
        except ValueError:
            raise ValueError("cannot interpret %r in metric %r" % (token, text)) from None
    return MetricSpec(parts[0], mode, cond, engine)


@dataclass(frozen=True)
class SweepSpec:
    rho_db_start: float = 0.0
    rho_db_stop: float = 60.0
    rho_db_step: float = 2.0
    metrics: tuple = ()
    mc_trials: int = DEFAULT_TRIALS
    seed: int = 0
    output_path: str | None = None
    quad_order: int = an.DEFAULT_QUAD_ORDER
    oma_scheme: OmaScheme = OmaScheme.TDMA_HALF
    axis: str = "rho"

    def __post_init__(self):
        problems = []
        if not all(math.isfinite(float(v)) for v in (self.rho_db_start, self.rho_db_stop, self.rho_db_step)):
            problems.append("grid bounds must be finite")
        elif not self.rho_db_step > 0:
            problems.append("step must be positive")
        if not self.rho_db_start <= self.rho_db_stop:
            problems.append("start must not exceed stop")
        if not self.metrics:
            problems.append("metric list is empty")
        if int(self.mc_trials) != self.mc_trials or self.mc_trials < 1:
            problems.append("mc_trials must be a positive integer")
        if self.axis not in AXES:
            problems.append("axis must be one of %s" % (AXES,))
        if int(self.quad_order) != self.quad_order or self.quad_order < 1:
            problems.append("quad_order must be a positive integer")
        if problems:
            raise ValueError("; ".join(problems))
        for name in ("rho_db_start", "rho_db_stop", "rho_db_step"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "mc_trials", int(self.mc_trials))
        object.__setattr__(self, "quad_order", int(self.quad_order))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "oma_scheme", OmaScheme.parse(self.oma_scheme))

    def grid(self):
        n = int(math.floor((self.rho_db_stop - self.rho_db_start) / self.rho_db_step + 1e-9)) + 1
        return [round(self.rho_db_start + i * self.rho_db_step, 10) for i in range(n)]


@dataclass(frozen=True)
class Family:
    """One curve family of a figure: a config override plus the metrics drawn for it."""

    name: str
    overrides: tuple = ()
    metrics: tuple = ()

    def config(self, base):
        cfg = base
        for key, value in self.overrides:
            if key == "R_D_m":
                cfg = cfg.with_cell_radius(value)
            elif key in ("K", "omega_I"):
                cfg = cfg.replace(**{key: value})
            else:
                raise ValueError("preset override %r is not supported" % key)
        return cfg


@dataclass(frozen=True)
class FigurePreset:
    preset_id: str
    title: str
    families: tuple
    axis: str = "rho"
    start: float = 0.0
    stop: float = 60.0
    step: float = 2.0


# -- rows and datasets -------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    axis_db: float
    rho_db: float
    metric_id: str
    mode: str
    condition: str
    variant: str
    engine: str
    value: float | None
    std_error: float | None
    trials: int | None
    seed: int | None
    clamped: int = 0
    error: str = ""


_COLUMNS = [f.name for f in fields(Row)]


def _task_seed(master, family_idx, rho_idx, metric_idx):
    ss = np.random.SeedSequence(int(master), spawn_key=(family_idx, rho_idx, metric_idx))
    hi, lo = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32 | int(lo)) & 0x7FFF_FFFF_FFFF_FFFF


def _evaluate(task):
    (cfg, family, axis, x, rho_db, spec, engine, spec_obj, rule, seed) = task
    d = METRICS[spec.metric_id]
    base = dict(axis_db=x, rho_db=rho_db, metric_id=spec.metric_id,
                mode=spec.mode.name if spec.mode else "",
                condition=spec.condition.value if spec.condition else "",
                variant=family, engine=engine)
    try:
        if engine == "analytic":
            value, clamped = d.analytic(derive(cfg, rho_db), cfg, spec.mode, spec.condition, rule)
            return Row(value=float(value), std_error=None, trials=None, seed=None,
                       clamped=int(clamped), **base)
        est = d.mc(cfg, rho_db, spec.mode, spec.condition, spec_obj.mc_trials, seed, spec_obj.oma_scheme)
        return Row(value=est.mean, std_error=est.std_error, trials=est.trials, seed=seed, **base)
    except PassNomaError as exc:
        return Row(value=None, std_error=None, trials=None, seed=None,
                   error="%s: %s" % (type(exc).__name__, exc), **base)


def _rho_for(axis, x, cfg):
    if axis == "rho":
        return x
    # total-snr: x is P_b / sigma^2 in dB, shared equally over K antennas
    return round(x - 10.0 * math.log10(cfg.K), 12)


def _run_families(families, spec, base_cfg, workers):
    rule = chebyshev_nodes(spec.quad_order)
    grid = spec.grid()
    tasks = []
    for fi, fam in enumerate(families):
        cfg = fam.config(base_cfg)
        for ri, x in enumerate(grid):
            rho_db = _rho_for(spec.axis, x, cfg)
            for mi, m in enumerate(fam.metrics):
                seed = _task_seed(spec.seed, fi, ri, mi)
                for engine in m.engines():
                    tasks.append((cfg, fam.name, spec.axis, x, rho_db, m, engine, spec, rule, seed))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


def _check_writable(path):
    if path is None or path == "-":
        return
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise OSError("output directory %r is not writable" % parent)
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise OSError("output file %r is not writable" % path)


def _metadata(spec, cfg, families, preset=None):
    meta = {
        "tool": "passnoma",
        "version": __version__,
        "preset": preset or "",
        "seed": str(spec.seed),
        "trials": str(spec.mc_trials),
        "quad_order": str(spec.quad_order),
        "nlos_node_mapping": an.NLOS_NODE_MAPPING,
        "oma_scheme": spec.oma_scheme.value,
        "axis": spec.axis,
        "grid": "%r:%r:%r" % (spec.rho_db_start, spec.rho_db_stop, spec.rho_db_step),
        "rng": "philox4x32-10/seedsequence",
    }
    for line in dump_config(cfg):
        key, value = line.split("=", 1)
        meta["config." + key] = value
    for fam in families:
        meta["variant." + fam.name] = ";".join("%s=%r" % kv for kv in fam.overrides)
    return meta


def run_sweep(spec, cfg, workers=1):
    """Evaluate every metric of ``spec`` on its rho grid.

    Returns ``(metadata, rows)``; rows are in grid order, then metric order,
    then engine (analytic before mc). Writes the CSV when ``spec.output_path``
    is set. Metric/config combinations that cannot be evaluated become rows
    with an ``error`` message instead of stopping the run.
    """
    _check_writable(spec.output_path)
    families = (Family("base", (), spec.metrics),)
    rows = _run_families(families, spec, cfg, workers)
    meta = _metadata(spec, cfg, families)
    if spec.output_path:
        write_dataset(spec.output_path, meta, rows)
    return meta, rows


def run_preset(preset, cfg=None, *, seed=0, trials=DEFAULT_TRIALS, engine=None,
               quad_order=an.DEFAULT_QUAD_ORDER, oma_scheme=OmaScheme.TDMA_HALF,
               output_path=None, workers=1, grid=None):
    """Run a :class:`FigurePreset` (or preset id) and optionally write its CSV."""
    if isinstance(preset, str):
        preset = figure_preset(preset)
    cfg = cfg or NetworkConfig()
    families = preset.families
    if engine is not None:
        families = tuple(replace(f, metrics=tuple(replace(m, engine=engine) for m in f.metrics))
                         for f in families)
    start, stop, step = grid or (preset.start, preset.stop, preset.step)
    spec = SweepSpec(start, stop, step, tuple(m for f in families for m in f.metrics),
                     trials, seed, output_path, quad_order, oma_scheme, preset.axis)
    _check_writable(output_path)
    rows = _run_families(families, spec, cfg, workers)
    meta = _metadata(spec, cfg, families, preset.preset_id)
    if output_path:
        write_dataset(output_path, meta, rows)
    return meta, rows


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_dataset(meta, rows):
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write("# %s=%s\n" % (key, value))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, c)) for c in _COLUMNS])
    return buf.getvalue()


def write_dataset(path, meta, rows):
    text = format_dataset(meta, rows)
    if path == "-":
        print(text, end="")
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_optional(text, kind):
    if text == "":
        return None
    return kind(text)


def parse_dataset(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line.strip():
            body.append(line)
    reader = csv.DictReader(body)
    if reader.fieldnames != _COLUMNS:
        raise ValueError("unexpected CSV columns %r" % (reader.fieldnames,))
    rows = []
    for rec in reader:
        rows.append(Row(
            axis_db=float(rec["axis_db"]),
            rho_db=float(rec["rho_db"]),
            metric_id=rec["metric_id"],
            mode=rec["mode"],
            condition=rec["condition"],
            variant=rec["variant"],
            engine=rec["engine"],
            value=_parse_optional(rec["value"], float),
            std_error=_parse_optional(rec["std_error"], float),
            trials=_parse_optional(rec["trials"], int),
            seed=_parse_optional(rec["seed"], int),
            clamped=int(rec["clamped"] or 0),
            error=rec["error"],
        ))
    return meta, rows


def read_dataset(path):
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh.read())


# -- comparison --------------------------------------------------------------------

ABS_FLOOR = 1e-4
RATE_REL_TOL = 0.02


@dataclass(frozen=True)
class Comparison:
    metric_id: str
    mode: str
    condition: str
    variant: str
    points: int
    max_abs_diff: float
    max_se_ratio: float
    worst_rho_db: float
    passed: bool
    failed_rho_db: tuple = ()


@dataclass
class Report:
    comparisons: list = field(default_factory=list)
    clamp_events: int = 0
    error_rows: int = 0
    nlos_node_mapping: str = an.NLOS_NODE_MAPPING

    @property
    def passed(self):
        return all(c.passed for c in self.comparisons)

    @property
    def empty(self):
        return not self.comparisons

    def format(self):
        lines = ["metric                      mode   cond  variant          pts  max|a-mc|   max|a-mc|/SE  worst_rho  result"]
        for c in self.comparisons:
            lines.append("%-27s %-6s %-5s %-16s %4d  %.3e   %10.2f    %7.2f   %s" % (
                c.metric_id, c.mode or "-", c.condition or "-", c.variant, c.points,
                c.max_abs_diff, c.max_se_ratio, c.worst_rho_db, "PASS" if c.passed else "FAIL"))
            if c.failed_rho_db:
                lines.append("    failed at rho_db = %s" % ", ".join("%g" % r for r in c.failed_rho_db))
        if self.empty:
            lines.append("(no analytic/mc pairs to compare)")
        lines.append("clamp events: %d" % self.clamp_events)
        lines.append("error rows: %d" % self.error_rows)
        lines.append("nlos rate node mapping: x = (a_f/a_n)(t_k+1)/2 [%s]" % self.nlos_node_mapping)
        lines.append("overall: %s" % ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def compare_report(rows, abs_floor=ABS_FLOOR, rate_rel_tol=RATE_REL_TOL):
    """Compare analytic and MC rows that share (metric, mode, condition, variant, rho).

    A point passes when |analytic - mc| <= max(3 SE, abs_floor, rel * |mc|),
    where rel is ``rate_rel_tol`` for rate-valued metrics and 0 for
    probabilities and delay-constrained throughput.
    """
    report = Report()
    analytic = {}
    mc = {}
    for row in rows:
        if row.error:
            report.error_rows += 1
            continue
        key = (row.metric_id, row.mode, row.condition, row.variant, row.rho_db)
        if row.engine == "analytic":
            analytic[key] = row
            report.clamp_events += row.clamped
        elif row.engine == "mc":
            mc[key] = row
    groups = {}
    for key in analytic:
        if key in mc:
            groups.setdefault(key[:4], []).append(key)
    for gkey in groups:
        metric_id = gkey[0]
        rel = rate_rel_tol if METRICS[metric_id].kind == "rate" else 0.0
        worst = (0.0, 0.0, float("nan"))
        failed = []
        for key in sorted(groups[gkey], key=lambda k: k[4]):
            a, m = analytic[key], mc[key]
            diff = abs(a.value - m.value)
            se = m.std_error or 0.0
            tol = max(3.0 * se, abs_floor, rel * abs(m.value))
            if diff > tol:
                failed.append(key[4])
                logger.warning("%s %s %s [%s] at rho=%g dB: analytic %.6g vs mc %.6g (tolerance %.3g)",
                               key[0], key[1] or "-", key[2] or "-", key[3], key[4], a.value, m.value, tol)
            if diff >= worst[0]:
                worst = (diff, worst[1], key[4])
            if se > 0:
                # points with zero sampling spread are judged by the absolute floor only
                worst = (worst[0], max(worst[1], diff / se), worst[2])
        report.comparisons.append(Comparison(*gkey, len(groups[gkey]), worst[0], worst[1], worst[2],
                                             not failed, tuple(failed)))
    if report.empty:
        logger.warning("no comparable analytic/mc pairs in dataset")
    return report


# -- figure presets ------------------------------------------------------------------

def _m(metric, mode=None, cond=None):
    return MetricSpec(metric, SicMode.parse(mode) if mode else None,
                      ChannelCondition.parse(cond) if cond else None)


def _radius_families(metrics):
    return tuple(Family("R_D=%g" % r, (("R_D_m", float(r)),), metrics) for r in (10, 20, 30))


def _antenna_families(metrics):
    return tuple(Family("K=%d" % k, (("K", k),), metrics) for k in (5, 10, 20))


def _omega_families(metrics, omega_i_list):
    return tuple(Family("omega_I=%g" % w, (("omega_I", float(w)),), metrics) for w in omega_i_list)


_BLOCKAGE_SET = (_m("blockage_n", "isic"), _m("blockage_n", "nisic"),
                 _m("blockage_f", cond="los"), _m("blockage_f", cond="nlos"))
_RATE_SET = (_m("rate_n", "isic"), _m("rate_n", "nisic"),
             _m("rate_f", cond="los"), _m("rate_f", cond="nlos"))
_COMBOS = (("isic", "los"), ("isic", "nlos"), ("nisic", "los"), ("nisic", "nlos"))


def figure_preset(preset_id, omega_i_list=DEFAULT_OMEGA_I_LIST):
    """Curve families for the standard plots ``fig2`` .. ``fig9``."""
    omega_i_list = tuple(omega_i_list)
    if preset_id == "fig2":
        base = Family("base", (), (
            _m("blockage_n", "isic"), _m("blockage_f", cond="los"), _m("blockage_f", cond="nlos"),
            _m("asym_blockage_n", "isic"), _m("asym_blockage_f", cond="los"),
            _m("asym_blockage_f", cond="nlos"),
            _m("oma_blockage_n"), _m("oma_blockage_f", cond="los"), _m("oma_blockage_f", cond="nlos")))
        nisic = _omega_families((_m("blockage_n", "nisic"), _m("asym_blockage_n", "nisic")), omega_i_list)
        return FigurePreset("fig2", "blockage probability versus rho", (base,) + nisic)
    if preset_id == "fig3":
        return FigurePreset("fig3", "blockage probability versus rho for R_D in {10, 20, 30} m",
                            _radius_families(_BLOCKAGE_SET))
    if preset_id == "fig4":
        return FigurePreset("fig4", "blockage probability versus P_b/sigma^2 for K in {5, 10, 20}",
                            _antenna_families(_BLOCKAGE_SET), axis="total-snr", start=10.0, stop=70.0)
    if preset_id == "fig5":
        base = Family("base", (), (
            _m("rate_n", "isic"), _m("rate_f", cond="los"), _m("rate_f", cond="nlos"),
            _m("asym_rate_n", "isic"), _m("asym_rate_f", cond="los"), _m("asym_rate_f", cond="nlos"),
            _m("oma_rate_n"), _m("oma_rate_f", cond="los"), _m("oma_rate_f", cond="nlos"),
            _m("throughput_lt", "isic", "los"), _m("oma_sum_rate", cond="los")))
        nisic = _omega_families((_m("rate_n", "nisic"),), omega_i_list)
        return FigurePreset("fig5", "ergodic rate versus rho", (base,) + nisic)
    if preset_id == "fig6":
        return FigurePreset("fig6", "ergodic rate versus rho for R_D in {10, 20, 30} m",
                            _radius_families(_RATE_SET))
    if preset_id == "fig7":
        return FigurePreset("fig7", "ergodic rate versus P_b/sigma^2 for K in {5, 10, 20}",
                            _antenna_families(_RATE_SET), axis="total-snr", start=10.0, stop=70.0)
    if preset_id == "fig8":
        metrics = tuple(_m("throughput_dl", m, c) for m, c in _COMBOS) + (
            _m("oma_throughput_dl", cond="los"), _m("oma_throughput_dl", cond="nlos"))
        return FigurePreset("fig8", "delay-constrained throughput versus rho", _radius_families(metrics))
    if preset_id == "fig9":
        metrics = tuple(_m("throughput_lt", m, c) for m, c in _COMBOS) + (
            _m("oma_sum_rate", cond="los"), _m("oma_sum_rate", cond="nlos"))
        return FigurePreset("fig9", "latency-tolerant throughput versus rho", _radius_families(metrics))
    raise ValueError("unknown preset %r (expected one of %s)" % (preset_id, ", ".join(PRESET_IDS)))
