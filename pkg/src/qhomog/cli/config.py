"""Run and sweep specifications, the state grammar, and config files."""

from __future__ import annotations

import configparser
import itertools
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .. import qstate
from ..engine import EngineConfig, Scheme
from ..recurrence import Interaction
from . import presets

MAX_GRID = 10**6
SWEEP_AXES = ("alpha", "delta", "theta", "phi", "scheme", "interaction")


class UsageError(ValueError):
    """Bad user input; maps to exit status 2."""


def parse_state(text: str, field_name: str = "state") -> np.ndarray:
    """Parse ``bloch:x,y,z``, ``ket:a_re,a_im,b_re,b_im`` or ``diag:p``."""
    try:
        kind, _, body = text.partition(":")
        nums = [float(t) for t in body.split(",")] if body else []
        kind = kind.strip().lower()
        if kind == "bloch" and len(nums) == 3:
            return qstate.bloch_to_density(nums)
        if kind == "ket" and len(nums) == 4:
            if not any(nums):
                raise ValueError("zero ket")
            return qstate.ket_to_density([complex(nums[0], nums[1]), complex(nums[2], nums[3])])
        if kind == "diag" and len(nums) == 1:
            p = nums[0]
            if not 0.0 <= p <= 1.0:
                raise ValueError("population outside [0, 1]")
            return np.diag([p, 1.0 - p]).astype(complex)
    except ValueError as exc:
        raise UsageError(f"invalid {field_name} {text!r}: {exc}") from None
    raise UsageError(
        f"invalid {field_name} {text!r}: expected bloch:x,y,z, ket:a_re,a_im,b_re,b_im or diag:p"
    )


@dataclass(frozen=True)
class RunSpec:
    scheme: str = "S1"
    interaction: str = "PSWAP"
    alpha: float = 0.2
    delta: float = 0.0
    theta: float = math.pi / 2
    phi: float = 0.0
    system: str = "bloch:0,0,-1"
    ancilla: str = "bloch:0,0,1"
    n: int = 1000
    every: int = 1
    epsilon: float = 1e-3
    seed: int = 0
    out: str = "trajectory.csv"
    emit_plot_script: bool = False

    def engine_config(self) -> EngineConfig:
        return EngineConfig(
            scheme=Scheme(self.scheme),
            interaction=Interaction(self.interaction),
            alpha=self.alpha,
            delta=self.delta,
            theta=self.theta,
            phi=self.phi,
            system0=parse_state(self.system, "system"),
            ancilla0=parse_state(self.ancilla, "ancilla"),
            n_collisions=self.n,
            record_every=self.every,
        )


_CASTS = {f.name: f.type for f in fields(RunSpec)}


def _cast(name: str, value):
    if name not in _CASTS:
        raise UsageError(f"unknown setting {name!r}")
    kind = _CASTS[name]
    try:
        if kind == "float":
            return float(value)
        if kind == "int":
            v = int(value)
            if name in ("n", "every") and v < 1:
                raise ValueError("must be >= 1")
            return v
        if kind == "bool":
            if isinstance(value, bool):
                return value
            return str(value).strip().lower() in ("1", "true", "yes", "on")
        if name == "scheme":
            return Scheme(str(value).upper()).value
        if name == "interaction":
            return Interaction(str(value).upper()).value
        if name in ("system", "ancilla"):
            parse_state(str(value), name)
        return str(value)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"invalid {name} {value!r}: {exc}") from None


def build_run_spec(*layers: Mapping[str, object]) -> RunSpec:
    """Merge settings left to right (later layers win) into a RunSpec.

    A ``preset`` key in any layer is expanded in place, below the other keys
    of that same layer.
    """
    merged: Dict[str, object] = {}
    for layer in layers:
        layer = {k: v for k, v in layer.items() if v is not None}
        if "preset" in layer:
            try:
                merged.update(presets.lookup_run_preset(str(layer.pop("preset"))))
            except KeyError as exc:
                raise UsageError(str(exc.args[0])) from None
        merged.update(layer)
    return RunSpec(**{k: _cast(k, v) for k, v in merged.items()})


def read_config(path: str, section: Optional[str] = None) -> Tuple[Dict[str, str], List[Tuple[str, List[str]]]]:
    """Read a flat ``key = value`` file with optional ``[section]`` headers.

    Keys named ``sweep.<param>`` declare sweep axes (comma-separated values).
    Returns (settings, axes).
    """
    text = Path(path).read_text()
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from None
    names = parser.sections()
    if section is None:
        section = names[0] if names else "run"
    if section not in parser:
        raise UsageError(f"section [{section}] not found in {path}")
    settings, axes = {}, []
    for key, value in parser[section].items():
        if key.startswith("sweep."):
            axes.append((key[len("sweep."):], split_values(value)))
        else:
            settings[key] = value
    return settings, axes


def split_values(text: str) -> List[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def parse_axis(text: str) -> Tuple[str, List[str]]:
    name, sep, values = text.partition("=")
    if not sep or not values:
        raise UsageError(f"invalid axis {text!r}: expected name=v1,v2,...")
    return name.strip(), split_values(values)


@dataclass(frozen=True)
class SweepSpec:
    base: RunSpec
    axes: Tuple[Tuple[str, Tuple[str, ...]], ...]
    workers: int = 1

    def __post_init__(self):
        seen = set()
        for name, values in self.axes:
            if name not in SWEEP_AXES:
                raise UsageError(f"cannot sweep over {name!r}; allowed: {', '.join(SWEEP_AXES)}")
            if name in seen:
                raise UsageError(f"axis {name!r} declared twice")
            if not values:
                raise UsageError(f"axis {name!r} has no values")
            seen.add(name)
            for v in values:
                _cast(name, v)
        if self.size > MAX_GRID:
            raise UsageError(f"sweep has {self.size} points, limit is {MAX_GRID}")

    @property
    def size(self) -> int:
        return math.prod(len(v) for _, v in self.axes)

    def points(self):
        """Grid points in declaration order, last axis varying fastest."""
        names = [a for a, _ in self.axes]
        for combo in itertools.product(*(v for _, v in self.axes)):
            yield dict(zip(names, combo))

    def spec_for(self, point: Mapping[str, str]) -> RunSpec:
        return replace(self.base, **{k: _cast(k, v) for k, v in point.items()})


def point_filename(point: Mapping[str, str]) -> str:
    return "_".join(f"{k}-{v}" for k, v in point.items()) + ".csv"
