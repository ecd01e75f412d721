"""Experiment configuration records and their YAML form.

All "[dB]" quantities are power ratios, converted with ``10**(dB/10)``.  Powers
are expressed relative to the noise power spectral density, so with the
default ``n0 = 1`` a source power of 30 dB means ``P_s / N_0 = 1000``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .geometry import LinkGeometry

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "EhConfig",
    "FadingStats",
    "ModulationParams",
    "SystemConfig",
    "db_to_linear",
    "linear_to_db",
    "load_config",
    "dump_config",
]

SCHEMA_VERSION = 1

MODES = ("PS", "DA")
MODELS = ("L", "NL")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (float(db) / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class FadingStats:
    """Average channel gains and noise level shared by all antennas."""

    omega_h: float = 1.0
    omega_g: float = 1.0
    n0: float = 1.0

    def __post_init__(self):
        for name in ("omega_h", "omega_g", "n0"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")

    @property
    def ybar(self) -> float:
        return self.omega_g / self.n0


@dataclass(frozen=True)
class ModulationParams:
    """Square M-QAM in the ``a * Q(sqrt(2 b gamma))`` SER form.

    The defaults are the nearest-neighbour union approximation
    ``SER ~ 4 (1 - 1/sqrt(M)) Q(sqrt(3 gamma / (M - 1)))``, i.e. ``a = 2`` and
    ``b = 1/2`` for 4-QAM.
    """

    m_order: int = 4
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        m = int(self.m_order)
        root = math.isqrt(m)
        if m < 4 or root * root != m or (m & (m - 1)):
            raise ConfigError(f"modulation order must be a square power of two, got {m}")
        object.__setattr__(self, "m_order", m)
        if self.a is None:
            object.__setattr__(self, "a", 4.0 * (1.0 - 1.0 / root))
        if self.b is None:
            object.__setattr__(self, "b", 1.5 / (m - 1))
        if not (self.a > 0 and self.b > 0):
            raise ConfigError("modulation parameters a and b must be positive")

    @property
    def iota(self) -> int:
        return int(round(math.log2(self.m_order)))


@dataclass(frozen=True)
class EhConfig:
    """Energy-harvesting relay: antenna split, harvesting mode and model.

    ``mode`` is ``"PS"`` (power splitting on every antenna) or ``"DA"``
    (dedicated antennas); ``model`` is ``"L"`` (linear) or ``"NL"`` (clamped
    at ``p_th``).  For DA the antenna count is ``n_r = n_eh + n_ip``.
    """

    mode: str = "PS"
    model: str = "L"
    rho: float = 0.8
    eta: float = 0.7
    p_th: float = 1e4
    n_r: int = 4
    n_eh: int = 0
    n_ip: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if not 0 <= self.eta <= 1:
            raise ConfigError(f"eta must lie in [0, 1], got {self.eta}")
        if not self.p_th > 0:
            raise ConfigError("p_th must be positive")
        if self.mode == "DA":
            if self.n_eh < 1 or self.n_ip < 1:
                raise ConfigError("DA mode needs n_eh >= 1 and n_ip >= 1")
            object.__setattr__(self, "n_r", int(self.n_eh) + int(self.n_ip))
        else:
            if not 0 < self.rho < 1:
                raise ConfigError(f"PS mode needs 0 < rho < 1, got {self.rho}")
            if self.n_r < 1:
                raise ConfigError("n_r must be at least 1")

    @classmethod
    def ps(cls, n_r: int = 4, rho: float = 0.8, **kw) -> "EhConfig":
        return cls(mode="PS", n_r=n_r, rho=rho, **kw)

    @classmethod
    def da(cls, n_eh: int, n_ip: int, **kw) -> "EhConfig":
        return cls(mode="DA", n_eh=n_eh, n_ip=n_ip, **kw)

    @property
    def p_th_db(self) -> float:
        return linear_to_db(self.p_th)

    @property
    def ip_antennas(self) -> int:
        return self.n_ip if self.mode == "DA" else self.n_r

    @property
    def eh_antennas(self) -> int:
        return self.n_eh if self.mode == "DA" else self.n_r

    @property
    def ip_fraction(self) -> float:
        """Power fraction reaching the information receiver."""
        return 1.0 - self.rho if self.mode == "PS" else 1.0

    @property
    def eh_fraction(self) -> float:
        """Power fraction reaching the harvester."""
        return self.rho if self.mode == "PS" else 1.0


@dataclass(frozen=True)
class SystemConfig:
    """Complete description of one link-level experiment point."""

    eh: EhConfig = field(default_factory=EhConfig)
    mod: ModulationParams = field(default_factory=ModulationParams)
    geom_sr: LinkGeometry = field(default_factory=LinkGeometry.uniform)
    geom_rd: LinkGeometry = field(default_factory=LinkGeometry.uniform)
    fading: FadingStats = field(default_factory=FadingStats)
    ps_db: float = 30.0
    seed: int = 2024
    chi: int = 20

    def __post_init__(self):
        if not math.isclose(self.geom_sr.v, self.geom_rd.v):
            raise ConfigError("both hops must share the path-loss exponent")
        if self.chi < 1:
            raise ConfigError("chi must be at least 1")

    @property
    def ps(self) -> float:
        return db_to_linear(self.ps_db)

    @property
    def v(self) -> float:
        return self.geom_sr.v

    def with_(self, **changes) -> "SystemConfig":
        """Copy with top-level or ``eh``-level fields replaced.

        Unknown top-level names are looked up on :class:`EhConfig`, so
        ``cfg.with_(rho=0.5, ps_db=40)`` works.
        """
        top, eh = {}, {}
        names = set(self.__dataclass_fields__)
        for key, value in changes.items():
            (top if key in names else eh)[key] = value
        if eh:
            top["eh"] = replace(top.get("eh", self.eh), **eh)
        return replace(self, **top)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "eh": asdict(self.eh),
            "mod": asdict(self.mod),
            "geom_sr": self.geom_sr.to_dict(),
            "geom_rd": self.geom_rd.to_dict(),
            "fading": asdict(self.fading),
            "ps_db": self.ps_db,
            "seed": self.seed,
            "chi": self.chi,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SystemConfig":
        data = dict(data or {})
        version = data.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version}")
        known = {"eh", "mod", "geom_sr", "geom_rd", "fading", "ps_db", "seed", "chi"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        kw: dict[str, Any] = {}
        try:
            if "eh" in data:
                eh = dict(data["eh"])
                if "p_th_db" in eh:
                    eh["p_th"] = db_to_linear(eh.pop("p_th_db"))
                kw["eh"] = EhConfig(**eh)
            if "mod" in data:
                kw["mod"] = ModulationParams(**data["mod"])
            for key in ("geom_sr", "geom_rd"):
                if key in data:
                    kw[key] = LinkGeometry.from_dict(data[key])
            if "fading" in data:
                kw["fading"] = FadingStats(**data["fading"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        for key in ("ps_db", "seed", "chi"):
            if key in data:
                kw[key] = type(getattr(cls(), key))(data[key])
        return cls(**kw)


def load_config(path) -> SystemConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return SystemConfig.from_dict(data or {})


def dump_config(config: SystemConfig, path=None) -> str:
    text = yaml.safe_dump(config.to_dict(), sort_keys=False)
    if path is not None:
        Path(path).write_text(text)
    return text
