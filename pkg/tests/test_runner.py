import dataclasses
import logging
import math

import pytest

from passnoma.analytic import NLOS_NODE_MAPPING
from passnoma.model import ChannelCondition, NetworkConfig, SicMode, parse_config
from passnoma.runner import (METRICS, PRESET_IDS, Family, MetricSpec, Row, SweepSpec,
                             compare_report, figure_preset, format_dataset, parse_dataset,
                             parse_metric, read_dataset, run_preset, run_sweep)

CFG = NetworkConfig()


def small_spec(**kw):
    base = dict(rho_db_start=50.0, rho_db_stop=56.0, rho_db_step=2.0,
                metrics=(parse_metric("blockage_n:nisic"), parse_metric("rate_f:nlos"),
                         parse_metric("throughput_dl:isic:los"), parse_metric("oma_rate_n")),
                mc_trials=20_000, seed=7)
    base.update(kw)
    return SweepSpec(**base)


# -- specs ---------------------------------------------------------------------------

@pytest.mark.parametrize("kw", [dict(metrics=()), dict(rho_db_step=0.0), dict(rho_db_start=70.0),
                                dict(mc_trials=0), dict(axis="sideways"), dict(rho_db_stop=math.nan)])
def test_sweep_spec_validation(kw):
    with pytest.raises(ValueError):
        small_spec(**kw)


def test_grid_inclusive_and_float():
    g = SweepSpec(metrics=(parse_metric("rate_n"),)).grid()
    assert g[0] == 0.0 and g[-1] == 60.0 and len(g) == 31
    assert all(isinstance(x, float) for x in g)


def test_parse_metric():
    m = parse_metric("throughput_dl:nisic:nlos", engine="mc")
    assert (m.metric_id, m.mode, m.condition, m.engine) == ("throughput_dl", SicMode.NISIC, ChannelCondition.NLOS, "mc")
    # irrelevant selectors are dropped, missing ones default
    assert parse_metric("blockage_f:isic").mode is None
    assert parse_metric("blockage_n").mode is SicMode.ISIC
    for bad in ("", "nope", "rate_n:sideways"):
        with pytest.raises(ValueError):
            parse_metric(bad)


def test_engine_availability():
    assert parse_metric("oma_rate_n").engines() == ("mc",)
    assert parse_metric("asym_rate_f:los").engines() == ("analytic",)
    assert parse_metric("rate_n", engine="analytic").engines() == ("analytic",)
    assert parse_metric("asym_rate_f", engine="mc").engines() == ()


# -- sweeps --------------------------------------------------------------------------

def test_rows_in_deterministic_order():
    _, rows = run_sweep(small_spec(), CFG)
    keys = [(r.rho_db, r.metric_id, r.engine) for r in rows]
    assert keys[:7] == [(50.0, "blockage_n", "analytic"), (50.0, "blockage_n", "mc"),
                        (50.0, "rate_f", "analytic"), (50.0, "rate_f", "mc"),
                        (50.0, "throughput_dl", "analytic"), (50.0, "throughput_dl", "mc"),
                        (50.0, "oma_rate_n", "mc")]
    assert len(rows) == 4 * 7
    analytic = [r for r in rows if r.engine == "analytic"]
    assert all(r.std_error is None and r.trials is None for r in analytic)


def test_byte_identical_across_runs_and_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(small_spec(output_path=str(a)), CFG, workers=1)
    run_sweep(small_spec(output_path=str(b)), CFG, workers=3)
    assert a.read_bytes() == b.read_bytes()


def test_seeds_are_per_point_and_metric():
    _, rows = run_sweep(small_spec(), CFG)
    seeds = [r.seed for r in rows if r.engine == "mc"]
    assert len(set(seeds)) == len(seeds)
    _, rows2 = run_sweep(small_spec(seed=8), CFG)
    assert [r.value for r in rows2 if r.engine == "mc"] != [r.value for r in rows if r.engine == "mc"]


def test_roundtrip(tmp_path):
    path = tmp_path / "d.csv"
    meta, rows = run_sweep(small_spec(output_path=str(path)), CFG)
    meta2, rows2 = read_dataset(path)
    assert rows2 == rows and meta2 == meta
    assert format_dataset(meta2, rows2) == path.read_text()


def test_header_records_provenance():
    meta, _ = run_sweep(small_spec(), CFG.replace(omega_I=0.1))
    assert meta["seed"] == "7" and meta["trials"] == "20000"
    assert meta["nlos_node_mapping"] == NLOS_NODE_MAPPING
    assert meta["oma_scheme"] == "tdma-half"
    cfg_lines = [f"{k[len('config.'):]}={v}" for k, v in meta.items() if k.startswith("config.")]
    assert parse_config("\n".join(cfg_lines)) == CFG.replace(omega_I=0.1)


def test_infeasible_combinations_become_error_rows():
    cfg = CFG.replace(rate_f_bpcu=2.0)
    spec = small_spec(metrics=(parse_metric("blockage_f:los"), parse_metric("rate_n:isic"),
                               parse_metric("asym_rate_n:nisic")))
    _, rows = run_sweep(spec, cfg)
    errs = [r for r in rows if r.error]
    assert {r.metric_id for r in errs} == {"blockage_f", "asym_rate_n"}
    assert all(r.engine == "analytic" for r in errs)
    assert any("InfeasibleError" in r.error for r in errs)
    # MC still runs for the infeasible far node: it is simply always blocked
    assert all(r.value == 1.0 for r in rows if r.metric_id == "blockage_f" and r.engine == "mc")
    assert all(r.value is not None for r in rows if r.metric_id == "rate_n")


def test_unwritable_output_is_fatal(tmp_path):
    with pytest.raises(OSError):
        run_sweep(small_spec(output_path=str(tmp_path / "missing" / "x.csv")), CFG)


def test_total_snr_axis():
    spec = small_spec(axis="total-snr", metrics=(parse_metric("rate_n", engine="analytic"),),
                      rho_db_start=40.0, rho_db_stop=40.0)
    _, rows = run_sweep(spec, CFG.replace(K=20))
    assert rows[0].axis_db == 40.0
    assert rows[0].rho_db == pytest.approx(40.0 - 10 * math.log10(20))


# -- comparison ------------------------------------------------------------------------

def test_compare_passes_on_clean_run():
    _, rows = run_sweep(small_spec(mc_trials=200_000), CFG)
    rep = compare_report(rows)
    assert rep.passed and not rep.empty
    assert {c.metric_id for c in rep.comparisons} == {"blockage_n", "rate_f", "throughput_dl"}
    assert "t_k+1" in rep.format()


def test_compare_flags_corrupted_value():
    _, rows = run_sweep(small_spec(mc_trials=200_000), CFG)
    bad = [dataclasses.replace(r, value=r.value + 0.05)
           if (r.metric_id, r.engine, r.rho_db) == ("rate_f", "analytic", 54.0) else r for r in rows]
    rep = compare_report(bad)
    assert not rep.passed
    (fail,) = [c for c in rep.comparisons if not c.passed]
    assert fail.metric_id == "rate_f" and fail.failed_rho_db == (54.0,)
    text = rep.format()
    assert "FAIL" in text and "rate_f" in text and "54" in text


def test_compare_counts_clamps_and_errors():
    rows = [Row(50.0, 50.0, "blockage_n", "NISIC", "", "base", "analytic", 1.0, None, None, None, 1, ""),
            Row(50.0, 50.0, "blockage_n", "NISIC", "", "base", "mc", 1.0, 0.0, 10, 1, 0, ""),
            Row(50.0, 50.0, "asym_rate_n", "NISIC", "", "base", "analytic", None, None, None, None, 0, "x")]
    rep = compare_report(rows)
    assert rep.clamp_events == 1 and rep.error_rows == 1
    assert "clamp events: 1" in rep.format()


def test_compare_empty_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="passnoma.runner"):
        rep = compare_report([])
    assert rep.empty and rep.passed
    assert "no comparable" in caplog.text


# -- presets ----------------------------------------------------------------------------

def test_preset_ids_and_unknown():
    assert PRESET_IDS == tuple(f"fig{i}" for i in range(2, 10))
    for pid in PRESET_IDS:
        pre = figure_preset(pid)
        assert pre.families and all(f.metrics for f in pre.families)
        for fam in pre.families:
            fam.config(CFG)  # overrides must be valid
    with pytest.raises(ValueError):
        figure_preset("fig10")


def test_fig2_curves():
    pre = figure_preset("fig2")
    base = pre.families[0]
    analytic = {(m.metric_id, m.mode, m.condition) for m in base.metrics if "analytic" in m.engines()}
    assert ("blockage_n", SicMode.ISIC, None) in analytic
    assert ("blockage_f", None, ChannelCondition.LOS) in analytic
    assert ("blockage_f", None, ChannelCondition.NLOS) in analytic
    assert sum(m.metric_id.startswith("asym_") for m in base.metrics) == 3
    assert any(m.metric_id.startswith("oma_") for m in base.metrics)
    names = [f.name for f in pre.families[1:]]
    assert names == ["omega_I=0.001", "omega_I=0.01", "omega_I=0.1"]
    assert all(f.metrics[0].mode is SicMode.NISIC for f in pre.families[1:])
    assert (pre.start, pre.stop, pre.step) == (0.0, 60.0, 2.0)


def test_omega_override():
    pre = figure_preset("fig5", omega_i_list=(0.05,))
    assert [f.name for f in pre.families] == ["base", "omega_I=0.05"]
    assert pre.families[1].config(CFG).omega_I == 0.05


def test_family_overrides():
    fam = Family("x", (("R_D_m", 20.0), ("K", 5)))
    cfg = fam.config(CFG)
    assert (cfg.R_D_m, cfg.R_n_m, cfg.R_f_m, cfg.K) == (20.0, 12.0, 20.0, 5)
    with pytest.raises(ValueError):
        Family("y", (("fc_hz", 2e9),)).config(CFG)


def test_run_preset_small(tmp_path):
    out = tmp_path / "fig3.csv"
    meta, rows = run_preset("fig3", trials=5000, grid=(54.0, 56.0, 2.0), output_path=str(out))
    assert meta["preset"] == "fig3"
    assert {r.variant for r in rows} == {"R_D=10", "R_D=20", "R_D=30"}
    assert meta["variant.R_D=20"] == "R_D_m=20.0"
    assert read_dataset(out)[1] == rows


def test_run_preset_engine_override():
    _, rows = run_preset("fig4", trials=100, grid=(60.0, 60.0, 1.0), engine="analytic")
    assert {r.engine for r in rows} == {"analytic"}
    k5 = [r for r in rows if r.variant == "K=5"][0]
    assert k5.axis_db == 60.0 and k5.rho_db == pytest.approx(60 - 10 * math.log10(5))


def test_every_metric_is_runnable():
    specs = []
    for mid, d in METRICS.items():
        specs.append(MetricSpec(mid, SicMode.NISIC if d.uses_mode else None,
                                ChannelCondition.NLOS if d.uses_cond else None))
    _, rows = run_sweep(SweepSpec(55.0, 55.0, 1.0, tuple(specs), mc_trials=2000, seed=1), CFG)
    errors = {r.metric_id for r in rows if r.error}
    assert errors == {"asym_rate_n"}


def test_parse_dataset_rejects_bad_columns():
    with pytest.raises(ValueError):
        parse_dataset("# x=1\na,b\n1,2\n")
