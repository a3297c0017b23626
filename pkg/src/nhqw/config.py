"""Run configuration: a flat ``key = value`` text format.

Example::

    # straight-line walk
    model = uob-nhqw
    preset = fig7
    N = 13
    steps = 6
    theta0 = pi/4          # overrides the preset value

Angles accept ``pi`` expressions or plain radians.  An explicit product
initial state is given with ``initial_site``, ``initial_velocity`` (two
complex amplitudes for |+1> and |-1>, e.g. ``1, 1j``) and ``initial_memory``
(an integer, or ``0b...`` with bit k = site k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ValidationError
from .hilbert import LatticeConfig, WalkState
from .presets import get_preset, parse_angle
from .walks import (
    MR_MEMORY_MODES,
    MrNhqwParams,
    QwParams,
    ShqwParams,
    UobNhqwParams,
    initial_state,
    product_state,
    symmetric_unitary,
)

MODEL_KEYS = {
    "qw": ("coin_theta",),
    "shqw": ("theta_m", "theta_b"),
    "mr-nhqw": ("theta_v", "theta_00", "theta_01", "theta_10", "theta_11", "memory_mode"),
    "uob-nhqw": UobNhqwParams.names(),
}
DEFAULTS = {
    "qw": {"coin_theta": "pi/4"},
    "shqw": {"theta_m": "0", "theta_b": "0"},
    "mr-nhqw": {k: "0" for k in MODEL_KEYS["mr-nhqw"][:-1]} | {"memory_mode": "directed"},
    "uob-nhqw": {k: "0" for k in UobNhqwParams.names()},
}
GENERAL_KEYS = ("model", "N", "steps", "preset", "name", "out", "seed",
                "initial_site", "initial_velocity", "initial_memory")


@dataclass
class RunConfig:
    model: str = "uob-nhqw"
    n_sites: int = 13
    steps: int = 6
    preset: str | None = None
    params: dict = field(default_factory=dict)  # raw strings, model keys only
    initial_site: int | None = None
    initial_velocity: str | None = None
    initial_memory: str | None = None
    name: str | None = None
    out: str | None = None
    seed: int | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.model not in MODEL_KEYS:
            raise ValidationError(f"model: unknown model {self.model!r}; expected one of {sorted(MODEL_KEYS)}")
        try:
            LatticeConfig(self.n_sites)
        except ValidationError as exc:
            raise ValidationError(f"N: {exc}") from None
        if self.steps < 0:
            raise ValidationError(f"steps: must be >= 0, got {self.steps}")
        if self.preset is not None:
            if self.model != "uob-nhqw":
                raise ValidationError(f"preset: presets exist only for model uob-nhqw, not {self.model}")
            get_preset(self.preset)
        allowed = MODEL_KEYS[self.model]
        for key, value in self.params.items():
            if key not in allowed:
                raise ValidationError(
                    f"{key}: not a parameter of model {self.model}; expected one of {', '.join(allowed)}"
                )
            if key == "memory_mode":
                if value not in MR_MEMORY_MODES:
                    raise ValidationError(f"memory_mode: expected one of {MR_MEMORY_MODES}, got {value!r}")
            else:
                try:
                    parse_angle(value)
                except ValidationError as exc:
                    raise ValidationError(f"{key}: {exc}") from None
        if self.initial_site is not None and not 0 <= self.initial_site < self.n_sites:
            raise ValidationError(f"initial_site: {self.initial_site} outside [0, {self.n_sites})")
        if self.initial_velocity is not None:
            _parse_velocity(self.initial_velocity)
        if self.initial_memory is not None:
            m = _parse_memory(self.initial_memory)
            if not 0 <= m < (1 << self.n_sites):
                raise ValidationError(f"initial_memory: {m} outside [0, 2**{self.n_sites})")

    @property
    def run_name(self) -> str:
        return self.name or self.preset or self.model

    def resolved_params(self) -> dict:
        """Raw parameter strings after applying defaults, the preset and overrides."""
        values = dict(DEFAULTS[self.model])
        if self.preset is not None:
            p = get_preset(self.preset)
            values.update(zip(UobNhqwParams.names(), p.formatted()))
        values.update(self.params)
        return values

    def build_params(self):
        raw = self.resolved_params()
        if self.model == "qw":
            return QwParams(symmetric_unitary(parse_angle(raw["coin_theta"])))
        if self.model == "shqw":
            return ShqwParams(parse_angle(raw["theta_m"]), parse_angle(raw["theta_b"]))
        if self.model == "mr-nhqw":
            angles = [parse_angle(raw[k]) for k in MODEL_KEYS["mr-nhqw"][:-1]]
            return MrNhqwParams(*angles, memory_mode=raw["memory_mode"])
        return UobNhqwParams(*(parse_angle(raw[k]) for k in UobNhqwParams.names()))

    def build_initial_state(self) -> WalkState:
        explicit = (self.initial_site, self.initial_velocity, self.initial_memory)
        if all(v is None for v in explicit):
            return initial_state(self.n_sites)
        site = self.n_sites // 2 if self.initial_site is None else self.initial_site
        velocity = _parse_velocity(self.initial_velocity or "1, 1")
        memory = _parse_memory(self.initial_memory or "0")
        return product_state(self.n_sites, site, velocity, memory)

    def to_text(self) -> str:
        lines = [f"model = {self.model}", f"N = {self.n_sites}", f"steps = {self.steps}"]
        for key in ("preset", "name", "out", "seed", "initial_site", "initial_velocity", "initial_memory"):
            value = getattr(self, key)
            if value is not None:
                lines.append(f"{key} = {value}")
        for key in MODEL_KEYS[self.model]:
            if key in self.params:
                lines.append(f"{key} = {self.params[key]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in raw:
                raise ValidationError(f"{key}: given twice (line {lineno})")
            raw[key] = value
        return cls.from_mapping(raw)

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        raw = dict(raw)
        model = raw.pop("model", "uob-nhqw")
        if model not in MODEL_KEYS:
            raise ValidationError(f"model: unknown model {model!r}; expected one of {sorted(MODEL_KEYS)}")
        kwargs = {"model": model}
        ints = {"N": "n_sites", "steps": "steps", "seed": "seed", "initial_site": "initial_site"}
        for key, attr in ints.items():
            if key in raw:
                kwargs[attr] = _parse_int(key, raw.pop(key))
        for key in ("preset", "name", "out", "initial_velocity", "initial_memory"):
            if key in raw:
                kwargs[key] = raw.pop(key)
        params = {}
        for key in list(raw):
            if key in MODEL_KEYS[model]:
                params[key] = raw.pop(key)
        if raw:
            key = sorted(raw)[0]
            raise ValidationError(
                f"{key}: unknown key for model {model}; allowed: "
                f"{', '.join(GENERAL_KEYS + MODEL_KEYS[model])}"
            )
        return cls(params=params, **kwargs)

    def with_overrides(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def read_config(path) -> RunConfig:
    return RunConfig.from_text(Path(path).read_text(encoding="utf-8"))


def write_config(config: RunConfig, path) -> None:
    Path(path).write_text(config.to_text(), encoding="utf-8")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(str(value).strip(), 0)
    except ValueError:
        raise ValidationError(f"{key}: expected an integer, got {value!r}") from None


def _parse_velocity(text: str) -> tuple[complex, complex]:
    parts = [s.strip().replace("i", "j") for s in str(text).split(",")]
    try:
        a, b = (complex(s.replace(" ", "")) for s in parts)
    except ValueError:
        raise ValidationError(
            f"initial_velocity: expected two complex numbers 'a, b', got {text!r}"
        ) from None
    if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in (a, b)) or a == b == 0:
        raise ValidationError(f"initial_velocity: amplitudes must be finite and not both zero, got {text!r}")
    return a, b


def _parse_memory(text: str) -> int:
    return _parse_int("initial_memory", text)
