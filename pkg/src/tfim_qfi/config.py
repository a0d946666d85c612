"""Sweep configuration files (INI syntax).

Schema::

    [graphs]
    names = P4, C4, Sd4, K4, PAN, S3      ; catalog names
    files = my_graph.g                     ; optional graph files

    [parameters]
    J = 1, -1
    T = 0.04          ; fixed temperature, required for a field axis
    h = 0.45          ; fixed field, required for a temperature axis
    n_levels = 6      ; levels used by the deformation observable

    [axis]
    name = field      ; field | temperature
    start = 0.01
    stop = 1.0
    steps = 200
    spacing = linear  ; linear | log

    [observables]
    names = qfi_field, qfi_temp, boltzmann_rate, spectrum, deformation

    [tolerances]
    tol_deg = 1e-9
    fd_delta = 1e-5

    [output]
    dir = out
    svg = no
    width = 800
    height = 600
    workers = 1
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .deformation import DEFAULT_N_LEVELS
from .experiments import (
    DEFAULT_FIELD_RANGE,
    DEFAULT_TEMPERATURE_RANGE,
    Axis,
    SweepConfig,
)
from .qfi import DEFAULT_FD_DELTA
from .spectral import DEFAULT_TOL_DEG

SCHEMA = __doc__.split("Schema::", 1)[1]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class OutputOptions:
    directory: Path | None = None
    svg: bool = False
    width: int = 800
    height: int = 600
    workers: int = 1


def _list(text: str) -> list[str]:
    return [t.strip() for t in text.replace("\n", ",").split(",") if t.strip()]


def parse_config(text: str, source: str = "<config>", base_dir=None) -> tuple[SweepConfig, OutputOptions]:
    """Parse config text; relative graph-file paths resolve against ``base_dir``."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
        files = _list(cp.get("graphs", "files", fallback=""))
        if base_dir is not None:
            files = [str(Path(base_dir) / f) if not Path(f).is_absolute() else f for f in files]
        graphs = _list(cp.get("graphs", "names", fallback="")) + files
        J = tuple(float(j) for j in _list(cp.get("parameters", "J", fallback="1")))
        axis_name = cp.get("axis", "name", fallback="field").strip()
        default = DEFAULT_FIELD_RANGE if axis_name == "field" else DEFAULT_TEMPERATURE_RANGE
        axis = Axis.from_range(
            axis_name,
            cp.getfloat("axis", "start", fallback=default[0]),
            cp.getfloat("axis", "stop", fallback=default[1]),
            cp.getint("axis", "steps", fallback=default[2]),
            cp.get("axis", "spacing", fallback="linear").strip(),
        )
        fixed_key = "T" if axis_name == "field" else "h"
        if not cp.has_option("parameters", fixed_key):
            raise ConfigError(f"{source}: [parameters] {fixed_key} is required for a {axis_name} axis")
        cfg = SweepConfig(
            graphs=tuple(graphs),
            J=J,
            axis=axis,
            fixed=cp.getfloat("parameters", fixed_key),
            observables=tuple(_list(cp.get("observables", "names", fallback="qfi_field"))),
            tol_deg=cp.getfloat("tolerances", "tol_deg", fallback=DEFAULT_TOL_DEG),
            fd_delta=cp.getfloat("tolerances", "fd_delta", fallback=DEFAULT_FD_DELTA),
            n_levels=cp.getint("parameters", "n_levels", fallback=DEFAULT_N_LEVELS),
        )
        out_dir = cp.get("output", "dir", fallback=None)
        opts = OutputOptions(
            directory=Path(out_dir) if out_dir else None,
            svg=cp.getboolean("output", "svg", fallback=False),
            width=cp.getint("output", "width", fallback=800),
            height=cp.getint("output", "height", fallback=600),
            workers=cp.getint("output", "workers", fallback=1),
        )
    except ConfigError:
        raise
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return cfg, opts


def load_config(path) -> tuple[SweepConfig, OutputOptions]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, str(path), path.parent)
