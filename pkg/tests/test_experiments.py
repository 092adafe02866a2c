import io
import math
import re

import numpy as np
import pytest

from gravcat.experiments import (
    F_SERIES,
    MU_SERIES,
    Axis,
    SweepSpec,
    figure_preset,
    run_figure,
    run_sweep,
    valid_figure_ids,
)
from gravcat.output import CSV_HEADER, csv_text, emit_csv, emit_svg, read_csv, svg_text
from gravcat.quantifiers import bell_max_closed
from gravcat.state import PhysicalParams, gibbs_closed_form

BASE = {"omega": 0.5, "gamma": 1.0, "temperature": 0.01, "mu": 0.8, "tau": 0.1}


def spec(quantity="coherence", x=None, y=None, **fixed):
    return SweepSpec(quantity, x, y, {**BASE, **fixed})


def local_extrema(v):
    d = np.diff(v)
    d = d[np.abs(d) > 1e-14]
    return int(np.count_nonzero(np.sign(d[1:]) != np.sign(d[:-1])))


# -- axes and specs ----------------------------------------------------------


def test_axis_parse():
    a = Axis.parse("t:0:10:11")
    assert a.name == "t" and a.values == tuple(float(k) for k in range(11))
    lg = Axis.parse("temp:0.01:1:3:log")
    assert lg.name == "temperature"
    assert lg.values == pytest.approx((0.01, 0.1, 1.0))


@pytest.mark.parametrize("text", ["t:0:10", "t:0:10:x", "t:10:0:5", "t:0:10:1", "t:0:1:3:lin", "temp:0:1:3:log"])
def test_axis_parse_rejects(text):
    with pytest.raises(ValueError):
        Axis.parse(text)


def test_unknown_axis_name():
    with pytest.raises(ValueError):
        Axis.parse("kappa:0:1:3")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(quantity="entropy"),
        dict(fixed_extra={"temperature": 0.0}),
        dict(fixed_extra={"mu": 1.5}),
        dict(fixed_extra={"f": 0.5}),  # f together with t
        dict(fixed_extra={"kappa": 1.0}),
        dict(x=Axis("t", (-1.0, 0.0))),
        dict(x=Axis.span("mu", 0, 1, 3), y=Axis.span("gamma", 0, 1, 3)),
    ],
)
def test_invalid_specs_rejected_up_front(kwargs):
    fixed = {**BASE, "t": 1.0, **kwargs.get("fixed_extra", {})}
    x = kwargs.get("x")
    y = kwargs.get("y")
    for a in (x, y):
        if a is not None:
            fixed.pop(a.name, None)
    with pytest.raises(ValueError):
        SweepSpec(kwargs.get("quantity", "coherence"), x, y, fixed)


def test_missing_parameter_rejected():
    with pytest.raises(ValueError, match="missing"):
        SweepSpec("coherence", Axis.span("t", 0, 1, 3), None, {"omega": 0.5, "gamma": 1.0, "mu": 0.5, "tau": 0.1})


# -- sweeps ------------------------------------------------------------------


def test_fully_correlated_sweep_is_constant():
    for q in ("coherence", "lqfi", "bell"):
        v = run_sweep(spec(q, Axis.span("t", 0, 10, 101), mu=1.0)).values()
        assert np.ptp(v) <= 1e-14


def test_uncoupled_sweep_is_zero():
    v = run_sweep(spec("coherence", Axis.span("t", 0, 10, 21), gamma=0.0)).values()
    assert np.all(v == 0.0)


def test_f_axis_sweep():
    fixed = {"omega": 0.5, "gamma": 1.0, "temperature": 0.01, "mu": 0.0}
    table = run_sweep(SweepSpec("coherence", Axis.span("f", 0, 1, 5), None, fixed))
    s = gibbs_closed_form(PhysicalParams(0.5, 1.0, 0.01))
    expected = 2 * (s.c + s.d) * np.linspace(0, 1, 5) ** 2
    np.testing.assert_allclose(table.values()[0], expected, atol=1e-15)
    assert all(math.isnan(t) for t in table.column("t").ravel())


def test_two_dimensional_lqfi_monotone_in_mu():
    table = run_sweep(
        SweepSpec("lqfi", Axis.span("t", 0, 5, 26), Axis.span("mu", 0, 1, 11), {k: v for k, v in BASE.items() if k != "mu"})
    )
    v = table.values()
    assert v.shape == (11, 26)
    assert np.all(np.diff(v, axis=0) >= -1e-12)


def test_rows_are_row_major_and_labelled():
    table = run_sweep(SweepSpec("bell", Axis.span("t", 0, 1, 3), Axis("mu", (0.0, 1.0)), {k: v for k, v in BASE.items() if k != "mu"}))
    assert [r.param2_value for r in table.rows] == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]
    assert [r.record.t for r in table.rows] == [0.0, 0.5, 1.0] * 2
    assert {r.param2_name for r in table.rows} == {"mu"}


def test_parallel_equals_serial():
    s = SweepSpec("lqfi", Axis.span("t", 0, 20, 41), Axis.span("mu", 0, 1, 6), {k: v for k, v in BASE.items() if k != "mu"})
    assert csv_text(run_sweep(s)) == csv_text(run_sweep(s, workers=3))


# -- presets -----------------------------------------------------------------

CAPTIONS = {
    "2a": ("coherence", 0.1, {"omega": 0.5, "gamma": 1.0, "mu": 0.8}, "temperature"),
    "3b": ("coherence", 5.0, {"omega": 0.5, "gamma": 1.0, "temperature": 0.01}, "mu"),
    "4c": ("lqfi", 0.1, {"gamma": 1.0, "temperature": 0.01, "mu": 0.8}, "omega"),
    "7d": ("bell", 5.0, {"omega": 0.5, "temperature": 0.01, "mu": 0.8}, "gamma"),
}


@pytest.mark.parametrize("pid", sorted(CAPTIONS))
def test_surface_presets_follow_captions(pid):
    quantity, tau, fixed, yname = CAPTIONS[pid]
    ((got_id, s, meta),) = figure_preset(pid, grid=5).panels
    assert got_id == pid and meta["preset"] == pid
    assert s.quantity == quantity
    assert s.fixed == {**fixed, "tau": tau}
    assert s.x_axis.name == "t" and s.x_axis.values[0] == 0.0
    assert s.y_axis.name == yname


@pytest.mark.parametrize("fig,tau,t_max", [("8", 0.1, 20.0), ("9", 5.0, 30.0)])
def test_trace_presets_follow_captions(fig, tau, t_max):
    preset = figure_preset(f"{fig}abc", grid=11)
    assert [p[0] for p in preset.panels] == [f"{fig}a", f"{fig}b", f"{fig}c"]
    assert [p[1].quantity for p in preset.panels] == ["coherence", "lqfi", "bell"]
    for _, s, _ in preset.panels:
        assert s.fixed == {"omega": 0.5, "gamma": 2.0, "temperature": 0.01, "tau": tau}
        assert s.y_axis.values == MU_SERIES == (0.0, 0.4, 0.8, 1.0)
        assert s.x_axis.values[-1] == t_max


def test_mu_presets_follow_captions():
    for _, s, meta in figure_preset("10abc", grid=11).panels:
        assert s.x_axis.name == "mu"
        assert s.y_axis.values == F_SERIES == (0.8, 0.6, 0.4, 0.2, 0.0)
        assert "omega=0.5" in meta["assumed_params"]


def test_figure_ids():
    ids = valid_figure_ids()
    for pid in ("2a", "7d", "8c", "10b", "8abc", "10abc", "3"):
        assert pid in ids
    for bad in ("1a", "8d", "11", "2e", ""):
        with pytest.raises(KeyError):
            figure_preset(bad)


def test_mu_panel_curves_meet_at_full_correlation():
    for table in run_figure("10abc", grid=11).values():
        assert np.ptp(table.values()[:, -1]) <= 1e-14


def test_bell_mu_panel_reaches_ceiling():
    v = run_figure("10c", grid=11)["10c"].values()
    ceiling = bell_max_closed(gibbs_closed_form(PhysicalParams(0.5, 2.0, 0.01)))
    assert v[-1, -1] == pytest.approx(ceiling, abs=1e-14)
    assert ceiling == pytest.approx(2.78, abs=5e-3)
    assert np.all(np.diff(v[-1]) >= -1e-12)


def test_markovian_traces_long_time_limits():
    tables = run_figure("8abc", grid=201)
    # mu = 0 row at t = 20, where f is still ~2.4e-4 and eta = f^2
    assert tables["8a"].values()[0, -1] <= 1e-6
    assert tables["8b"].values()[0, -1] <= 1e-6
    assert tables["8c"].values()[0, -1] == pytest.approx(2.0, abs=2e-2)
    # f = 0 itself
    fixed = {"omega": 0.5, "gamma": 2.0, "temperature": 0.01, "mu": 0.0}
    limits = [run_sweep(SweepSpec(q, Axis("f", (0.0,)), None, fixed)).values()[0, 0] for q in ("coherence", "lqfi", "bell")]
    assert limits[0] == 0.0
    assert limits[1] <= 1e-8
    assert limits[2] == pytest.approx(2.0, abs=2e-2)


def test_non_markovian_lqfi_oscillates_with_shrinking_amplitude():
    v = run_figure("9b", grid=301)["9b"].values()
    amps = np.ptp(v[:, 1:], axis=1)
    assert local_extrema(v[0]) >= 2
    assert np.all(np.diff(amps) <= 1e-12)
    assert amps[-1] <= 1e-14


# -- CSV ---------------------------------------------------------------------


def test_single_point_csv_has_two_lines():
    text = csv_text(run_sweep(spec(t=1.0)))
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == ",".join(CSV_HEADER)


def test_surface_csv_line_count(tmp_path):
    s = SweepSpec("coherence", Axis.span("t", 0, 10, 101), Axis.span("mu", 0, 1, 101), {k: v for k, v in BASE.items() if k != "mu"})
    path = tmp_path / "s.csv"
    emit_csv(run_sweep(s), path)
    assert len(path.read_text().splitlines()) == 10202


def test_preset_csv_carries_metadata_and_round_trips(tmp_path):
    table = run_figure("8a", grid=51)["8a"]
    path = tmp_path / "8a.csv"
    emit_csv(table, path)
    first = path.read_text().splitlines()[0]
    assert first.startswith("# preset=8a, assumed_params=")
    meta, rows = read_csv(path)
    assert meta["preset"] == "8a"
    assert len(rows) == 4 * 51
    for row, rec in zip(table.rows, rows):
        r = row.record
        assert rec["t"] == r.t and rec["f"] == r.f and rec["eta"] == r.eta
        assert rec["value"] == r.coherence
        assert rec["param2_name"] == "mu" and rec["param2_value"] == row.param2_value


def test_nan_time_round_trips():
    s = SweepSpec("lqfi", Axis("f", (0.0, 0.5)), None, {k: v for k, v in BASE.items() if k != "tau"})
    table = run_sweep(s)
    _, rows = read_csv(io.StringIO(csv_text(table)))
    assert all(math.isnan(r["t"]) for r in rows)
    assert [r["value"] for r in rows] == [row.record.lqfi for row in table.rows]


def test_csv_is_deterministic():
    a = csv_text(run_figure("9c", grid=31)["9c"])
    b = csv_text(run_figure("9c", grid=31)["9c"])
    assert a == b


def test_empty_table_rejected():
    table = run_sweep(spec(t=1.0))
    table.rows = []
    with pytest.raises(ValueError):
        csv_text(table)
    with pytest.raises(ValueError):
        svg_text(table)


# -- SVG ---------------------------------------------------------------------


def polyline_points(svg):
    out = []
    for m in re.finditer(r'<polyline [^>]*points="([^"]+)"', svg):
        pts = [tuple(map(float, p.split(","))) for p in m.group(1).split()]
        out.append(np.array(pts))
    return out


def test_constant_trace_is_horizontal():
    svg = svg_text(run_sweep(spec("coherence", Axis.span("t", 0, 10, 51), mu=1.0)))
    (line,) = polyline_points(svg)
    assert len(line) == 51
    assert np.ptp(line[:, 1]) == 0.0
    assert np.all(np.diff(line[:, 0]) > 0)


def test_non_markovian_trace_shows_oscillation():
    s = spec("coherence", Axis.span("t", 0, 30, 301), mu=0.0, tau=5.0)
    (line,) = polyline_points(svg_text(run_sweep(s)))
    assert local_extrema(line[:, 1]) >= 2


def test_series_plot_has_one_polyline_per_curve():
    svg = svg_text(run_figure("8b", grid=21)["8b"])
    lines = polyline_points(svg)
    assert len(lines) == 4
    assert len(re.findall(r'data-mu="', svg)) == 4


def test_heatmap_cell_count_and_monotone_ramp(tmp_path):
    table = run_figure("2a", grid=12)["2a"]
    path = tmp_path / "2a.svg"
    emit_svg(table, path)
    svg = path.read_text()
    cells = re.findall(r'<rect class="cell"[^>]*fill="#([0-9a-f]{6})"', svg)
    assert len(cells) == 12 * 12
    # brightness of the cell colour follows the value ordering
    v = table.values().ravel()
    lum = np.array([sum(int(c[k : k + 2], 16) for k in (0, 2, 4)) for c in cells])
    order = np.argsort(v, kind="stable")
    assert np.all(np.diff(lum[order]) >= -1)


def test_svg_style_errors():
    one_d = run_sweep(spec("coherence", Axis.span("t", 0, 1, 3)))
    with pytest.raises(ValueError):
        svg_text(one_d, "heatmap")
    with pytest.raises(ValueError):
        svg_text(one_d, "pie")


def test_svg_is_deterministic():
    t = run_figure("3a", grid=9)["3a"]
    assert svg_text(t) == svg_text(t)
    assert svg_text(t).startswith("<?xml")
