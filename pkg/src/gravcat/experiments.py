"""Parameter sweeps and the figure presets built on them.

A sweep evaluates one quantity (``coherence``, ``lqfi`` or ``bell``) on a 1-D
or 2-D grid. Each point is fully determined by
``omega, gamma, temperature, mu`` plus either ``t`` and ``tau`` (the kernel
is evaluated) or ``f`` directly (kernel bypassed). Everything goes through
the closed forms.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channel import decoherence_factor, memory_kernel
from .quantifiers import QuantifierRecord, measure
from .state import MIN_TEMPERATURE, PhysicalParams, gibbs_closed_form

QUANTITIES = ("coherence", "lqfi", "bell")
PARAMETERS = ("omega", "gamma", "temperature", "mu", "tau", "t", "f")
ALIASES = {"temp": "temperature", "T": "temperature"}
TIME_LIKE = ("t", "f")
DEFAULT_GRID = 201


def canonical_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in PARAMETERS:
        raise ValueError(f"unknown parameter {name!r}; expected one of {', '.join(PARAMETERS)}")
    return name


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "name", canonical_name(self.name))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ValueError(f"axis {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"axis {self.name!r} repeats values")

    @classmethod
    def span(cls, name: str, lo: float, hi: float, steps: int, log: bool = False) -> "Axis":
        if steps < 2:
            raise ValueError(f"axis {name!r} needs at least 2 steps, got {steps}")
        if not lo < hi:
            raise ValueError(f"axis {name!r} needs min < max, got {lo} and {hi}")
        if log:
            if lo <= 0:
                raise ValueError(f"log axis {name!r} needs min > 0")
            vals = np.geomspace(lo, hi, steps)
        else:
            vals = np.linspace(lo, hi, steps)
        return cls(name, tuple(vals))

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name:min:max:steps`` with an optional ``:log`` suffix."""
        parts = text.split(":")
        log = len(parts) == 5 and parts[4] == "log"
        if len(parts) not in (4, 5) or (len(parts) == 5 and not log):
            raise ValueError(f"malformed axis {text!r}; expected name:min:max:steps[:log]")
        try:
            lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ValueError(f"malformed axis {text!r}; expected name:min:max:steps[:log]") from exc
        return cls.span(parts[0], lo, hi, steps, log=log)

    def __len__(self) -> int:
        return len(self.values)


def _check_value(name: str, v: float) -> None:
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {v!r}")
    bad = {
        "temperature": v < MIN_TEMPERATURE,
        "omega": v < 0,
        "gamma": v < 0,
        "mu": not 0 <= v <= 1,
        "tau": v <= 0,
        "t": v < 0,
        "f": not -1 <= v <= 1,
    }[name]
    if bad:
        raise ValueError(f"invalid value {name}={v!r}")


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    x_axis: Axis | None = None
    y_axis: Axis | None = None
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if self.y_axis is not None and self.x_axis is None:
            raise ValueError("a y axis requires an x axis")
        fixed = {canonical_name(k): float(v) for k, v in self.fixed.items()}
        object.__setattr__(self, "fixed", fixed)

        axis_names = [a.name for a in self.axes]
        if len(set(axis_names)) != len(axis_names):
            raise ValueError("axes must reference distinct parameters")
        overlap = set(axis_names) & set(fixed)
        if overlap:
            raise ValueError(f"parameters given both as axis and fixed: {sorted(overlap)}")

        names = set(axis_names) | set(fixed)
        if "t" in names and "f" in names:
            raise ValueError("t and f are mutually exclusive")
        required = {"omega", "gamma", "temperature", "mu"}
        required |= {"f"} if "f" in names else {"t", "tau"}
        missing, extra = required - names, names - required
        if missing:
            raise ValueError(f"missing parameters: {', '.join(sorted(missing))}")
        if extra:
            raise ValueError(f"unused parameters: {', '.join(sorted(extra))}")

        if len(self.axes) == 2 and not set(axis_names) & set(TIME_LIKE):
            raise ValueError("a 2-D sweep needs t or f as one of its axes")

        for name, v in fixed.items():
            _check_value(name, v)
        for a in self.axes:
            for v in a.values:
                _check_value(a.name, v)

    @property
    def axes(self) -> tuple[Axis, ...]:
        return tuple(a for a in (self.x_axis, self.y_axis) if a is not None)

    @property
    def shape(self) -> tuple[int, int]:
        ny = len(self.y_axis) if self.y_axis else 1
        nx = len(self.x_axis) if self.x_axis else 1
        return ny, nx

    @property
    def param2_name(self) -> str:
        """Name reported in the ``param2`` CSV columns."""
        for a in (self.y_axis, self.x_axis):
            if a is not None and a.name not in TIME_LIKE:
                return a.name
        return "mu"

    def points(self):
        ys = self.y_axis.values if self.y_axis else (None,)
        xs = self.x_axis.values if self.x_axis else (None,)
        for y in ys:
            for x in xs:
                yield self.point(x, y)

    def point(self, x=None, y=None) -> dict:
        p = dict(self.fixed)
        if self.x_axis is not None:
            p[self.x_axis.name] = x
        if self.y_axis is not None:
            p[self.y_axis.name] = y
        return p


@dataclass(frozen=True)
class SweepRow:
    record: QuantifierRecord
    param2_name: str
    param2_value: float


@dataclass
class SweepTable:
    spec: SweepSpec
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def quantity(self) -> str:
        return self.spec.quantity

    def values(self) -> np.ndarray:
        """Values of the swept quantity, shape (ny, nx)."""
        v = [row.record.value(self.quantity) for row in self.rows]
        return np.array(v, dtype=float).reshape(self.spec.shape)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row.record, name) for row in self.rows]).reshape(self.spec.shape)


@lru_cache(maxsize=4096)
def _thermal(omega: float, gamma: float, temperature: float):
    return gibbs_closed_form(PhysicalParams(omega, gamma, temperature))


def evaluate_point(p: dict) -> QuantifierRecord:
    """Closed-form record for one fully specified parameter point."""
    state = _thermal(p["omega"], p["gamma"], p["temperature"])
    if "f" in p:
        t, f = math.nan, p["f"]
    else:
        t = p["t"]
        f = memory_kernel(t, p["tau"])
    eta = decoherence_factor(f, p["mu"])
    return measure(state.with_eta(eta), t=t, f=f)


def _evaluate_block(spec: SweepSpec, y) -> list[SweepRow]:
    xs = spec.x_axis.values if spec.x_axis else (None,)
    name = spec.param2_name
    rows = []
    for x in xs:
        p = spec.point(x, y)
        rows.append(SweepRow(evaluate_point(p), name, p[name]))
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1, metadata: dict | None = None) -> SweepTable:
    """Evaluate every grid point, row-major over (y, x).

    With ``workers > 1`` the y rows are farmed out to a process pool; results
    are gathered in grid order so the table is identical to a serial run.
    """
    ys = spec.y_axis.values if spec.y_axis else (None,)
    if workers > 1 and len(ys) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_evaluate_block, [spec] * len(ys), ys))
    else:
        blocks = [_evaluate_block(spec, y) for y in ys]
    rows = [row for block in blocks for row in block]
    return SweepTable(spec, rows, dict(metadata or {}))


# -- figure presets ----------------------------------------------------------

MARKOV_TAU, NON_MARKOV_TAU = 0.1, 5.0
T_RANGE = {MARKOV_TAU: 20.0, NON_MARKOV_TAU: 30.0}
MU_SERIES = (0.0, 0.4, 0.8, 1.0)
F_SERIES = (0.8, 0.6, 0.4, 0.2, 0.0)
# Fig. 10 does not state omega, gamma, T; borrow the neighbouring figures' values.
FIG10_ASSUMED = {"omega": 0.5, "gamma": 2.0, "temperature": 0.01}

_SURFACE_FIGS = {
    "2": ("coherence", MARKOV_TAU),
    "3": ("coherence", NON_MARKOV_TAU),
    "4": ("lqfi", MARKOV_TAU),
    "5": ("lqfi", NON_MARKOV_TAU),
    "6": ("bell", MARKOV_TAU),
    "7": ("bell", NON_MARKOV_TAU),
}
_TRACE_FIGS = {"8": MARKOV_TAU, "9": NON_MARKOV_TAU}
_PANEL_QUANTITY = {"a": "coherence", "b": "lqfi", "c": "bell"}


@dataclass(frozen=True)
class FigurePreset:
    figure_id: str
    panels: tuple  # ((panel_id, SweepSpec, metadata), ...)


def _fmt_meta(d: dict) -> str:
    return ";".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in d.items())


def _surface_panel(fig: str, panel: str, grid: int):
    quantity, tau = _SURFACE_FIGS[fig]
    t_axis = Axis.span("t", 0.0, T_RANGE[tau], grid)
    fixed = {"tau": tau}
    if panel == "a":
        fixed |= {"omega": 0.5, "gamma": 1.0, "mu": 0.8}
        y = Axis.span("temperature", 0.01, 2.0, grid, log=True)
    elif panel == "b":
        fixed |= {"omega": 0.5, "gamma": 1.0, "temperature": 0.01}
        y = Axis.span("mu", 0.0, 1.0, grid)
    elif panel == "c":
        fixed |= {"gamma": 1.0, "temperature": 0.01, "mu": 0.8}
        y = Axis.span("omega", 0.0, 2.0, grid)
    else:
        fixed |= {"omega": 0.5, "temperature": 0.01, "mu": 0.8}
        y = Axis.span("gamma", 0.0, 2.0, grid)
    spec = SweepSpec(quantity, t_axis, y, fixed)
    assumed = {"t": f"0:{T_RANGE[tau]:g}", y.name: f"{y.values[0]:g}:{y.values[-1]:g}"}
    return spec, assumed


def _trace_panel(fig: str, panel: str, grid: int):
    tau = _TRACE_FIGS[fig]
    spec = SweepSpec(
        _PANEL_QUANTITY[panel],
        Axis.span("t", 0.0, T_RANGE[tau], grid),
        Axis("mu", MU_SERIES),
        {"omega": 0.5, "gamma": 2.0, "temperature": 0.01, "tau": tau},
    )
    return spec, {"t": f"0:{T_RANGE[tau]:g}"}


def _mu_panel(panel: str, grid: int):
    spec = SweepSpec(
        _PANEL_QUANTITY[panel],
        Axis.span("mu", 0.0, 1.0, grid),
        Axis("f", F_SERIES),
        dict(FIG10_ASSUMED),
    )
    return spec, dict(FIG10_ASSUMED)


def _panel(panel_id: str, grid: int):
    fig, panel = panel_id[:-1], panel_id[-1]
    if fig in _SURFACE_FIGS and panel in "abcd":
        return _surface_panel(fig, panel, grid)
    if fig in _TRACE_FIGS and panel in "abc":
        return _trace_panel(fig, panel, grid)
    if fig == "10" and panel in "abc":
        return _mu_panel(panel, grid)
    raise KeyError(panel_id)


PANEL_IDS = tuple(
    [f"{f}{p}" for f in _SURFACE_FIGS for p in "abcd"]
    + [f"{f}{p}" for f in ("8", "9", "10") for p in "abc"]
)
GROUP_IDS = tuple(f"{f}abcd" for f in _SURFACE_FIGS) + ("8abc", "9abc", "10abc")


def valid_figure_ids() -> tuple[str, ...]:
    return PANEL_IDS + GROUP_IDS + tuple(str(n) for n in range(2, 11))


def figure_preset(figure_id: str, grid: int = DEFAULT_GRID) -> FigurePreset:
    """Resolve a panel id (``"2a"``, ``"10c"``) or a whole figure (``"8abc"``, ``"8"``)."""
    fid = figure_id.strip().lower()
    if fid in PANEL_IDS:
        ids = [fid]
    elif fid in GROUP_IDS or fid in {str(n) for n in range(2, 11)}:
        num = fid.rstrip("abcd")
        ids = [p for p in PANEL_IDS if p[:-1] == num]
    else:
        raise KeyError(f"unknown figure id {figure_id!r}; valid ids: {', '.join(valid_figure_ids())}")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    panels = []
    for pid in ids:
        spec, assumed = _panel(pid, grid)
        panels.append((pid, spec, {"preset": pid, "assumed_params": _fmt_meta(assumed)}))
    return FigurePreset(fid, tuple(panels))


def run_figure(preset, grid: int = DEFAULT_GRID, workers: int = 1) -> dict[str, SweepTable]:
    """One table per panel, keyed by panel id."""
    if isinstance(preset, str):
        preset = figure_preset(preset, grid)
    return {pid: run_sweep(spec, workers, meta) for pid, spec, meta in preset.panels}
