"""Run configuration: a YAML document with a fixed schema.

Every section is optional; omitted keys take the defaults below, which
describe the 1.5 m cell with a 6 mm slab. Unknown keys are rejected.
"""

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from .assembly import Method
from .experiments import HomConfig
from .packets import Shape


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class MeshSection:
    Rx: float = 1.5
    n0: int = 2501


@dataclass(frozen=True)
class MediumSection:
    eps_s: float = 7.0
    Rs: float = 6e-3
    background: float = 1.0


@dataclass(frozen=True)
class HomSection:
    x0: float = 0.375
    dx0: float = 0.03
    kappa0: float = 526.0
    left_shape: str = "gaussian"
    right_shape: str = "gaussian"
    cases: tuple = ()
    delta_x0: Grid = Grid(-0.12, 0.12, 41)
    literal_b1: bool = False
    time_ordered_events: bool = False
    truncate_modes: bool = False


@dataclass(frozen=True)
class DispersionSection:
    theta0_count: int = 32
    theta0: tuple | None = None
    bands: int = 4

    def phases(self):
        if self.theta0 is not None:
            return np.asarray(self.theta0, dtype=float)
        k = np.arange(self.theta0_count)
        return -math.pi + 2 * math.pi * (k + 0.5) / max(self.theta0_count, 1)


@dataclass(frozen=True)
class DesignSection:
    kappa: Grid = Grid(400.0, 700.0, 301)


@dataclass(frozen=True)
class ModesSection:
    omega_floor: float | None = None


@dataclass(frozen=True)
class ValidateSection:
    seed: int = 20240601
    ladder_cases: int = 1000
    closed_form_cases: int = 100
    refinement: tuple = (101, 201, 401)
    tolerance_orthonormality: float = 1e-10
    tolerance_dispersion: float = 0.01


@dataclass(frozen=True)
class RunConfig:
    mesh: MeshSection = MeshSection()
    medium: MediumSection = MediumSection()
    theta0: float = math.pi / 2
    method: str = "fem"
    modes: ModesSection = ModesSection()
    hom: HomSection = HomSection()
    dispersion: DispersionSection = DispersionSection()
    design: DesignSection = DesignSection()
    validate: ValidateSection = ValidateSection()

    def hom_config(self, left_shape=None, right_shape=None) -> HomConfig:
        h = self.hom
        return HomConfig(
            Rx=self.mesh.Rx,
            n0=self.mesh.n0,
            eps_s=self.medium.eps_s,
            Rs=self.medium.Rs,
            theta0=self.theta0,
            x0=h.x0,
            dx0=h.dx0,
            kappa0=h.kappa0,
            left_shape=left_shape or h.left_shape,
            right_shape=right_shape or h.right_shape,
            delta_x0=tuple(h.delta_x0.values()),
            method=self.method,
            literal_b1=h.literal_b1,
            time_ordered_events=h.time_ordered_events,
            truncate_modes=h.truncate_modes,
        )


_SECTIONS = {
    "mesh": MeshSection,
    "medium": MediumSection,
    "modes": ModesSection,
    "hom": HomSection,
    "dispersion": DispersionSection,
    "design": DesignSection,
    "validate": ValidateSection,
}


def _coerce(name, value, default):
    if isinstance(default, Grid):
        if not isinstance(value, dict):
            raise ConfigError(f"{name}: expected a mapping with start/stop/count")
        return _build(Grid, value, name)
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{name}: expected true/false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float) or default is None and name.endswith("omega_floor"):
        if value is None and default is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, tuple) or default is None:
        if value is None:
            return None
        if not isinstance(value, list):
            raise ConfigError(f"{name}: expected a list, got {value!r}")
        return tuple(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{name}: expected a string, got {value!r}")
        return value
    return value


def _build(cls, data, prefix):
    if not isinstance(data, dict):
        raise ConfigError(f"{prefix}: expected a mapping")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{prefix}: unknown keys {unknown}")
    kwargs = {}
    for key, value in data.items():
        f = known[key]
        default = f.default if f.default is not f.default_factory else None
        if cls is Grid:
            kwargs[key] = _coerce(f"{prefix}.{key}", value, 0 if key == "count" else 0.0)
        else:
            kwargs[key] = _coerce(f"{prefix}.{key}", value, default)
    return cls(**kwargs)


def from_dict(data) -> RunConfig:
    data = data or {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping at top level")
    allowed = set(_SECTIONS) | {"theta0", "method"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown top-level keys {unknown}")
    kwargs = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kwargs[key] = _build(_SECTIONS[key], value or {}, key)
        elif key == "theta0":
            kwargs[key] = _coerce("theta0", value, 0.0)
        else:
            kwargs[key] = _coerce("method", value, "")
    cfg = RunConfig(**kwargs)
    check(cfg)
    return cfg


def check(cfg: RunConfig) -> None:
    """Physical validation of every field; raises :class:`ConfigError`."""
    from .mesh import MeshError, PermittivityProfile, build_mesh

    try:
        mesh = build_mesh(cfg.mesh.Rx, cfg.mesh.n0)
        profile = PermittivityProfile(cfg.medium.eps_s, cfg.medium.Rs, cfg.medium.background)
        profile.check_fits(mesh)
        method = Method(cfg.method)
        if method is Method.FEM:
            profile.check_aligned(mesh)
    except (MeshError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    h = cfg.hom
    for name in ("left_shape", "right_shape"):
        try:
            Shape(getattr(h, name))
        except ValueError as exc:
            raise ConfigError(f"hom.{name}: {exc}") from exc
    bad = sorted(set(h.cases) - {"A", "B", "C"})
    if bad:
        raise ConfigError(f"hom.cases: unknown cases {bad}")
    if h.dx0 <= 0 or h.delta_x0.count < 1:
        raise ConfigError("hom: packet width and delay count must be positive")
    if cfg.dispersion.bands < 1:
        raise ConfigError("dispersion.bands must be >= 1")
    if cfg.design.kappa.count < 1 or cfg.design.kappa.start <= 0:
        raise ConfigError("design.kappa: need at least one positive wavenumber")
    ladder = cfg.validate.refinement
    if len(ladder) < 2 or any(isinstance(n, bool) or not isinstance(n, int) or n < 3 for n in ladder):
        raise ConfigError("validate.refinement: need at least two integer grid sizes >= 3")
    try:
        cfg.hom_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return from_dict(data)


def override(cfg: RunConfig, **changes) -> RunConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(cfg, **changes) if changes else cfg
