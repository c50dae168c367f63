"""Run configuration: flat key-value files with dotted section prefixes.

Grammar (one assignment per line):

    # comment
    circuit.e_c = 0.12
    sweep.ratios = 1.005, 1.01, 1.05, 1.1
    numerics.two_pi = false

Unknown keys are rejected (fail-closed), values are coerced to the
declared type, and command-line flags override file values.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ParameterError


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ParameterError(f"expected a boolean, got {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ParameterError("expected a comma-separated list of numbers")
    return tuple(float(part) for part in items)


def _parse_optional_float(text: str):
    return None if text.strip().lower() in ("", "none") else float(text)


# config key -> (RunConfig attribute, parser)
KNOWN_KEYS = {
    "circuit.e_c": ("e_c", float),
    "circuit.e_j": ("e_j", float),
    "circuit.e_l": ("e_l", float),
    "circuit.f_s": ("f_s", float),
    "geometry.edge_length": ("edge_length", float),
    "geometry.z_nv": ("z_nv", float),
    "geometry.inductance": ("inductance", _parse_optional_float),
    "nv.zero_field_splitting": ("nv_splitting", float),
    "nv.zeeman": ("nv_zeeman", float),
    "sweep.fs_min": ("fs_min", float),
    "sweep.fs_max": ("fs_max", float),
    "sweep.fs_steps": ("fs_steps", int),
    "sweep.ratios": ("ratios", _parse_floats),
    "run.t": ("t", _parse_optional_float),
    "run.t_steps": ("t_steps", int),
    "run.m": ("m_steps", int),
    "run.k": ("k_branch", int),
    "numerics.dim": ("dim", int),
    "numerics.two_pi": ("two_pi", _parse_bool),
    "numerics.convention": ("convention", str),
    "numerics.convergence_tol": ("convergence_tol", float),
    "trotter.threshold": ("trotter_threshold", float),
    "output.path": ("out_path", str),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters for one CLI invocation."""

    e_c: float = 0.12
    e_j: float = 58.0
    e_l: float = 58.6
    f_s: float = 0.9
    edge_length: float = 10e-6
    z_nv: float = 0.01e-6
    inductance: float | None = None
    nv_splitting: float = 2.87
    nv_zeeman: float = 1.37
    fs_min: float = 0.5
    fs_max: float = 1.0
    fs_steps: int = 101
    ratios: tuple[float, ...] = (1.005, 1.01, 1.05, 1.1)
    t: float | None = None
    t_steps: int = 151
    m_steps: int = 100
    k_branch: int = 0
    dim: int = 60
    two_pi: bool = False
    convention: str = "matched"
    convergence_tol: float = 1e-6
    trotter_threshold: float = 0.02
    out_path: str | None = None

    def __post_init__(self):
        for key in ("e_c", "e_j", "e_l", "edge_length", "z_nv"):
            if not getattr(self, key) > 0:
                raise ParameterError(f"{key} must be positive, got {getattr(self, key)}")
        if self.fs_steps < 2:
            raise ParameterError(f"sweep.fs_steps must be >= 2, got {self.fs_steps}")
        if self.t_steps < 2:
            raise ParameterError(f"run.t_steps must be >= 2, got {self.t_steps}")
        if not self.fs_min < self.fs_max:
            raise ParameterError(
                f"sweep range is empty: fs_min={self.fs_min} >= fs_max={self.fs_max}"
            )
        if self.dim < 2:
            raise ParameterError(f"numerics.dim must be >= 2, got {self.dim}")
        if self.m_steps < 1:
            raise ParameterError(f"run.m must be >= 1, got {self.m_steps}")
        if self.k_branch < 0:
            raise ParameterError(f"run.k must be >= 0, got {self.k_branch}")
        if self.convention not in ("matched", "swapped"):
            raise ParameterError(
                f"numerics.convention must be 'matched' or 'swapped', got {self.convention!r}"
            )
        if self.t is not None and self.t < 0:
            raise ParameterError(f"run.t must be non-negative, got {self.t}")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse the flat key-value grammar into RunConfig attribute values."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ParameterError(f"{source}:{lineno}: unknown config key {key!r}")
        attr, parser = KNOWN_KEYS[key]
        try:
            values[attr] = parser(rhs.strip())
        except ParameterError:
            raise
        except ValueError as exc:
            raise ParameterError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def load_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


def build_config(file_values: dict | None = None, flag_values: dict | None = None) -> RunConfig:
    """Merge file values and flag overrides (flags win) into a RunConfig."""
    merged: dict = {}
    if file_values:
        merged.update(file_values)
    if flag_values:
        merged.update({k: v for k, v in flag_values.items() if v is not None})
    valid = {f.name for f in fields(RunConfig)}
    unknown = set(merged) - valid
    if unknown:
        raise ParameterError(f"unknown config attributes: {sorted(unknown)}")
    return RunConfig(**merged)
