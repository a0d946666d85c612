"""Parameter sweeps over graphs, couplings and one of (h, T)."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal, Mapping, Sequence

import numpy as np

from . import __version__
from .deformation import (
    DEFAULT_N_LEVELS,
    perturbative_qfi_mixed,
    perturbative_qfi_pure,
    spectral_deformation,
)
from .graph import CATALOG_NAMES, Graph, catalog_graph, read_graph_file
from .hamiltonian import build_hamiltonian
from .qfi import DEFAULT_FD_DELTA, qfi_field, qfi_field_fd, qfi_temperature
from .spectral import DEFAULT_TOL_DEG, eigh
from .thermal import boltzmann_rate, gibbs_state

OBSERVABLES = ("qfi_field", "qfi_temp", "boltzmann_rate", "spectrum", "deformation", "qfi_field_fd")

COLUMNS = {
    "qfi_field": ("classical", "quantum", "total"),
    "qfi_temp": ("classical", "quantum", "total"),
    "boltzmann_rate": ("p0", "dp0_dT"),
    "spectrum": ("eigenvalue",),
    "deformation": ("n", "D_n", "g", "excited_gap_shift", "pert_pure", "pert_mixed"),
    "qfi_field_fd": ("total",),
}

PEAK_COLUMN = {
    "qfi_field": "total",
    "qfi_temp": "total",
    "boltzmann_rate": "dp0_dT",
    "spectrum": "eigenvalue",
    "deformation": "D_n",
    "qfi_field_fd": "total",
}

AxisName = Literal["field", "temperature"]

DEFAULT_FIELD_RANGE = (0.01, 1.0, 200)
DEFAULT_TEMPERATURE_RANGE = (0.01, 0.5, 200)


class SweepError(RuntimeError):
    pass


class PeakError(LookupError):
    pass


@dataclass(frozen=True)
class Axis:
    name: AxisName
    values: tuple[float, ...]
    spacing: str = "explicit"

    def __post_init__(self):
        if self.name not in ("field", "temperature"):
            raise ValueError(f"axis must be 'field' or 'temperature', got {self.name!r}")
        if not self.values:
            raise ValueError("axis needs at least one value")
        if self.name == "temperature" and min(self.values) <= 0:
            raise ValueError("temperature axis values must be positive")

    @classmethod
    def from_range(cls, name: AxisName, start: float, stop: float, steps: int, spacing: str = "linear") -> Axis:
        if not start < stop:
            raise ValueError(f"axis range needs start < stop, got {start} >= {stop}")
        if steps < 2:
            raise ValueError(f"axis range needs steps >= 2, got {steps}")
        if spacing == "linear":
            vals = np.linspace(start, stop, steps)
        elif spacing == "log":
            if start <= 0:
                raise ValueError("log spacing needs a positive start")
            vals = np.geomspace(start, stop, steps)
        else:
            raise ValueError(f"spacing must be 'linear' or 'log', got {spacing!r}")
        return cls(name, tuple(float(v) for v in vals), spacing)

    @property
    def symbol(self) -> str:
        return "h" if self.name == "field" else "T"


@dataclass(frozen=True)
class SweepConfig:
    """What to evaluate.

    ``fixed`` holds the parameter that is not swept: the temperature for a
    field axis, the field for a temperature axis.  ``graphs`` entries are
    catalog names or paths to graph files.
    """

    graphs: tuple[str, ...]
    J: tuple[float, ...]
    axis: Axis
    fixed: float
    observables: tuple[str, ...]
    tol_deg: float = DEFAULT_TOL_DEG
    fd_delta: float = DEFAULT_FD_DELTA
    n_levels: int = DEFAULT_N_LEVELS

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("no graphs selected")
        if not self.J:
            raise ValueError("no coupling values selected")
        unknown = [o for o in self.observables if o not in OBSERVABLES]
        if unknown or not self.observables:
            raise ValueError(f"unknown observables {unknown}; choose from {', '.join(OBSERVABLES)}")
        if len(set(self.observables)) != len(self.observables):
            raise ValueError("observables listed twice")
        if self.axis.name == "field" and not self.fixed > 0:
            raise ValueError(f"fixed temperature must be positive, got {self.fixed}")
        if self.tol_deg < 0 or self.fd_delta <= 0:
            raise ValueError("tol_deg must be >= 0 and fd_delta > 0")

    def point(self, axis_value: float) -> tuple[float, float]:
        """``(h, T)`` at a grid value."""
        if self.axis.name == "field":
            return axis_value, self.fixed
        return self.fixed, axis_value


@dataclass(frozen=True)
class Record:
    graph: str
    J: float
    index: int
    h: float
    T: float
    observable: str
    values: tuple[float, ...]

    def axis_value(self, axis: AxisName) -> float:
        return self.h if axis == "field" else self.T

    def column(self, name: str) -> float:
        cols = COLUMNS[self.observable]
        if self.observable == "spectrum":
            raise KeyError("spectrum records hold the full eigenvalue list; use .values")
        return self.values[cols.index(name)]


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[Record, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def axis(self) -> AxisName:
        return self.config.axis.name

    @property
    def graph_names(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.graph for r in self.records))

    @property
    def observables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.observable for r in self.records)) or self.config.observables

    @property
    def couplings(self) -> tuple[float, ...]:
        return tuple(dict.fromkeys(r.J for r in self.records)) or self.config.J

    def select(self, graph: str | None = None, J: float | None = None, observable: str | None = None) -> list[Record]:
        return [
            r
            for r in self.records
            if (graph is None or r.graph == graph)
            and (J is None or r.J == J)
            and (observable is None or r.observable == observable)
        ]

    def curve(
        self, graph: str, observable: str, J: float | None = None, column: str | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """Axis values and one column for a (graph, J, observable) curve."""
        if J is None:
            js = {r.J for r in self.select(graph=graph, observable=observable)}
            if len(js) > 1:
                raise PeakError(f"curve {graph}/{observable} is ambiguous over J = {sorted(js)}")
        rows = self.select(graph, J, observable)
        if not rows:
            raise PeakError(f"no rows for graph={graph!r}, J={J}, observable={observable!r}")
        column = column or PEAK_COLUMN[observable]
        x = np.array([r.axis_value(self.axis) for r in rows])
        if observable == "spectrum":
            level = 0 if column == "eigenvalue" else int(column)
            y = np.array([r.values[level] for r in rows])
        else:
            y = np.array([r.column(column) for r in rows])
        return x, y


def resolve_graph(spec: str) -> Graph:
    if spec.upper() in {n.upper() for n in CATALOG_NAMES}:
        return catalog_graph(spec)
    path = Path(spec)
    if path.exists():
        return read_graph_file(path)
    return catalog_graph(spec)


def evaluate_point(
    g: Graph,
    J: float,
    h: float,
    T: float,
    observables: Sequence[str],
    tol_deg: float = DEFAULT_TOL_DEG,
    fd_delta: float = DEFAULT_FD_DELTA,
    n_levels: int = DEFAULT_N_LEVELS,
) -> dict[str, tuple[float, ...]]:
    out = {}
    for obs in observables:
        if obs == "qfi_field":
            b = qfi_field(g, J, h, T, tol_deg)
            out[obs] = (b.classical, b.quantum, b.total)
        elif obs == "qfi_temp":
            b = qfi_temperature(g, J, h, T, tol_deg)
            out[obs] = (b.classical, b.quantum, b.total)
        elif obs == "boltzmann_rate":
            ts = gibbs_state(eigh(build_hamiltonian(g, J, h), tol_deg), T)
            out[obs] = (float(ts.populations[0]), boltzmann_rate(ts))
        elif obs == "spectrum":
            out[obs] = tuple(float(e) for e in eigh(build_hamiltonian(g, J, h), tol_deg).eigenvalues)
        elif obs == "deformation":
            rep = spectral_deformation(g, J, h, n_levels, tol_deg)
            out[obs] = (
                float(rep.n_levels),
                rep.D_n,
                float(rep.ground_degeneracy),
                rep.excited_gap_shift,
                perturbative_qfi_pure(g, J, h, tol_deg),
                perturbative_qfi_mixed(g, J, h, tol_deg),
            )
        elif obs == "qfi_field_fd":
            out[obs] = (qfi_field_fd(g, J, h, T, fd_delta),)
        else:
            raise ValueError(f"unknown observable {obs!r}")
    return out


def _task(args):
    g, J, index, h, T, cfg = args
    try:
        vals = evaluate_point(g, J, h, T, cfg.observables, cfg.tol_deg, cfg.fd_delta, cfg.n_levels)
    except Exception as exc:
        raise SweepError(f"graph {g.name}, J={J}, h={h}, T={T}: {exc}") from exc
    return [Record(g.name, J, index, h, T, obs, vals[obs]) for obs in cfg.observables]


def run_sweep(cfg: SweepConfig, workers: int | None = 1) -> SweepResult:
    """Evaluate every observable on every (graph, J, axis value) point.

    Records come back ordered by (graph, J, axis index, observable) as listed
    in the config, whatever the number of worker processes.  ``workers=None``
    uses one process per CPU.
    """
    graphs = [resolve_graph(spec) for spec in cfg.graphs]
    tasks = [
        (g, float(J), k, *cfg.point(x), cfg)
        for g in graphs
        for J in cfg.J
        for k, x in enumerate(cfg.axis.values)
    ]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_task, tasks, chunksize=chunk))
    else:
        chunks = [_task(t) for t in tasks]
    records = tuple(r for rows in chunks for r in rows)
    meta = {
        "config": asdict(cfg),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return SweepResult(cfg, records, meta)


@dataclass(frozen=True)
class PeakSummary:
    graph: str
    J: float | None
    observable: str
    column: str
    argmax: float
    value: float


def find_peak(
    result: SweepResult,
    graph: str,
    observable: str,
    J: float | None = None,
    column: str | None = None,
    absolute: bool = False,
) -> PeakSummary:
    """Grid maximum of one curve; ties go to the smaller axis value."""
    column = column or PEAK_COLUMN[observable]
    x, y = result.curve(graph, observable, J, column)
    if absolute:
        y = np.abs(y)
    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    k = int(np.argmax(y))
    return PeakSummary(graph, J, observable, column, float(x[k]), float(y[k]))


@dataclass(frozen=True)
class CurveRef:
    """One curve inside a named sweep result."""

    graph: str
    observable: str
    J: float | None = None
    column: str | None = None
    absolute: bool = False
    result: str | None = None


@dataclass(frozen=True)
class Relation:
    """A claimed ordering between curves.

    ``kind`` picks the compared quantity: ``"peak"`` (grid maximum),
    ``"argmax"`` (axis position of the maximum) or ``"at"`` (value at the
    grid point nearest ``at``).  ``op`` is ``">"``/``"<"`` for a strict
    chain over ``curves`` or ``"max"``/``"min"`` for "the first curve beats
    every other one".
    """

    label: str
    kind: Literal["peak", "argmax", "at"]
    curves: tuple[CurveRef, ...]
    op: Literal[">", "<", "max", "min"] = ">"
    at: float | None = None


@dataclass(frozen=True)
class RelationOutcome:
    label: str
    passed: bool
    values: tuple[float, ...]
    detail: str = ""


@dataclass(frozen=True)
class OrderingReport:
    outcomes: tuple[RelationOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def lines(self) -> list[str]:
        out = []
        for o in self.outcomes:
            vals = ", ".join(f"{v:.6g}" for v in o.values)
            tail = f" ({o.detail})" if o.detail else ""
            out.append(f"{'PASS' if o.passed else 'FAIL'}  {o.label}: [{vals}]{tail}")
        return out


def _quantity(results: Mapping[str | None, SweepResult], rel: Relation, ref: CurveRef) -> float:
    result = results[ref.result]
    if rel.kind == "peak":
        return find_peak(result, ref.graph, ref.observable, ref.J, ref.column, ref.absolute).value
    if rel.kind == "argmax":
        return find_peak(result, ref.graph, ref.observable, ref.J, ref.column, ref.absolute).argmax
    if rel.kind == "at":
        if rel.at is None:
            raise ValueError("relation of kind 'at' needs an axis value")
        x, y = result.curve(ref.graph, ref.observable, ref.J, ref.column)
        if ref.absolute:
            y = np.abs(y)
        return float(y[int(np.argmin(np.abs(x - rel.at)))])
    raise ValueError(f"unknown relation kind {rel.kind!r}")


def _holds(op: str, q: Sequence[float]) -> bool:
    if op == ">":
        return all(a > b for a, b in zip(q, q[1:]))
    if op == "<":
        return all(a < b for a, b in zip(q, q[1:]))
    if op == "max":
        return all(q[0] > b for b in q[1:])
    if op == "min":
        return all(q[0] < b for b in q[1:])
    raise ValueError(f"unknown operator {op!r}")


def ordering_check(results, relations: Sequence[Relation]) -> OrderingReport:
    """Evaluate each relation; missing curves become failing entries, not exceptions.

    ``results`` is a single :class:`SweepResult` or a mapping from names
    (used by :attr:`CurveRef.result`) to results.
    """
    if isinstance(results, SweepResult):
        results = {None: results}
    outcomes = []
    for rel in relations:
        try:
            q = tuple(_quantity(results, rel, ref) for ref in rel.curves)
        except (KeyError, LookupError, ValueError) as exc:
            outcomes.append(RelationOutcome(rel.label, False, (), f"unavailable: {exc}"))
            continue
        outcomes.append(RelationOutcome(rel.label, _holds(rel.op, q), q))
    return OrderingReport(tuple(outcomes))
