"""Noise hyper-parameter set and its flat config-file format.

The config file is a minimal TOML subset: one ``key = value`` pair per line,
``#`` comments, booleans as ``true``/``false``. A full TOML parser buys
nothing here (and the sweep grid format reuses the same line syntax for
stacked override blocks), so the reader is ~40 lines of local code.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

__all__ = ["NoiseConfig", "parse_config_text", "load_config", "dump_config", "default_config"]


@dataclass(frozen=True)
class NoiseConfig:
    """All knobs of the label-noise transform.

    Scaling and translation each have an isotropy flag: when set, a single
    draw drives both axes. ``gamma`` is the gating threshold in pixels;
    boxes whose original width or height is <= gamma pass through untouched.

    Defaults are the recommended operating point: s in [0.99, 1.01],
    r in [-0.01, 0.01] degrees, t in [-1, 1] px, both isotropic, gamma 16.
    """

    scale_enabled: bool = True
    s_min: float = 0.99
    s_max: float = 1.01
    isotropic_scale: bool = True
    rotate_enabled: bool = True
    r_min: float = -0.01
    r_max: float = 0.01
    translate_enabled: bool = True
    t_min: int = -1
    t_max: int = 1
    isotropic_translate: bool = True
    gamma: int = 16

    def __post_init__(self):
        if not isinstance(self.t_min, int) or not isinstance(self.t_max, int):
            raise ConfigError(f"t_min/t_max must be integers, got {self.t_min!r}/{self.t_max!r}")
        if not isinstance(self.gamma, int):
            raise ConfigError(f"gamma must be an integer, got {self.gamma!r}")
        if not self.s_min > 0:
            raise ConfigError(f"s_min must be positive, got {self.s_min}")
        if self.s_min > self.s_max:
            raise ConfigError(f"scale range inverted: [{self.s_min}, {self.s_max}]")
        if self.r_min > self.r_max:
            raise ConfigError(f"rotation range inverted: [{self.r_min}, {self.r_max}]")
        if self.t_min > self.t_max:
            raise ConfigError(f"translation range inverted: [{self.t_min}, {self.t_max}]")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")


_BOOL_FIELDS = {"scale_enabled", "isotropic_scale", "rotate_enabled", "translate_enabled", "isotropic_translate"}
_INT_FIELDS = {"t_min", "t_max", "gamma"}
_FLOAT_FIELDS = {"s_min", "s_max", "r_min", "r_max"}
_ALL_FIELDS = _BOOL_FIELDS | _INT_FIELDS | _FLOAT_FIELDS


def _parse_value(key: str, raw: str, source: str, line_no: int):
    if key in _BOOL_FIELDS:
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise ConfigError(f"{source}:{line_no}: {key} must be true or false, got {raw!r}")
    if key in _INT_FIELDS:
        try:
            return int(raw, 10)
        except ValueError:
            raise ConfigError(f"{source}:{line_no}: {key} must be an integer, got {raw!r}") from None
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{source}:{line_no}: {key} must be a number, got {raw!r}") from None


def parse_config_text(text: str, source: str = "<config>", base: NoiseConfig | None = None) -> NoiseConfig:
    """Parse ``key = value`` lines into a config.

    Unlisted keys keep their value from ``base`` (the defaults when base is
    None), so partial files act as overrides. Unknown or repeated keys are
    errors.
    """
    overrides: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value', got {line.strip()!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _ALL_FIELDS:
            raise ConfigError(f"{source}:{line_no}: unknown key {key!r}")
        if key in overrides:
            raise ConfigError(f"{source}:{line_no}: duplicate key {key!r}")
        overrides[key] = _parse_value(key, raw, source, line_no)
    if base is None:
        base = NoiseConfig()
    return replace(base, **overrides)


def load_config(path) -> NoiseConfig:
    """Read a config file from ``path``."""
    import os

    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=os.fspath(path))


def dump_config(cfg: NoiseConfig) -> str:
    """Render a config in the same flat format ``parse_config_text`` reads."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, bool):
            lines.append(f"{f.name} = {'true' if v else 'false'}")
        else:
            lines.append(f"{f.name} = {v!r}")
    return "\n".join(lines) + "\n"


def default_config() -> NoiseConfig:
    """The shipped default config file, parsed.

    Should always equal ``NoiseConfig()``; reading the packaged file keeps
    the file itself honest.
    """
    text = importlib.resources.files("nbbox").joinpath("configs/nbbox-default").read_text(encoding="utf-8")
    return parse_config_text(text, source="nbbox-default")
