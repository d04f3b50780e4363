"""Run configuration: validated knobs shared by the CLI and the service.

A config file is YAML mirroring RunConfig's fields; command-line flags
override file values, which override defaults. The default config path can
be set through the RETROSCOPE_CONFIG environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import yaml

from .corpus import MovementSpec, PLATFORMS
from .errors import ConfigurationError

ALLOWED_KS = (1, 3, 5, 7, 10)
PLATFORM_CHOICES = PLATFORMS + ("all",)
MODE_CHOICES = ("cumulative", "exclusive")
ANALYSES = ("h1", "h2", "h3", "h4", "h5")

# Analyses that evaluate one window size; the others take the full k list.
SINGLE_K_ANALYSES = ("h2", "h3", "h5")

ENV_CONFIG_PATH = "RETROSCOPE_CONFIG"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8100
    # Reject analysis requests projected over this many permutation draws
    # (permutations x events x window sizes).
    max_permutation_work: int = 50_000_000
    # Optional directory with the built dashboard; mounted at /app when set.
    frontend_dir: Optional[Path] = None


@dataclass(frozen=True)
class RunConfig:
    corpus: Optional[Path] = None
    events: Optional[Path] = None
    output_dir: Path = Path("out")
    movement: Optional[MovementSpec] = None
    movements: tuple[MovementSpec, ...] = ()
    platform: str = "all"
    layer: int = 5
    mode: str = "cumulative"
    ks: tuple[int, ...] = ALLOWED_KS
    alpha: float = 0.05
    permutations: Optional[int] = None
    bootstrap_iters: Optional[int] = None
    seed: int = 0
    workers: int = 1
    service: ServiceConfig = field(default_factory=ServiceConfig)

    def validate(self) -> "RunConfig":
        if self.platform not in PLATFORM_CHOICES:
            raise ConfigurationError(f"platform must be one of {PLATFORM_CHOICES}")
        if not 0 <= self.layer <= 8:
            raise ConfigurationError("layer must be in 0..8")
        if self.mode not in MODE_CHOICES:
            raise ConfigurationError(f"mode must be one of {MODE_CHOICES}")
        if not self.ks:
            raise ConfigurationError("at least one window size k is required")
        bad = [k for k in self.ks if k not in ALLOWED_KS]
        if bad:
            raise ConfigurationError(f"window sizes must be in {ALLOWED_KS}, got {bad}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError("alpha must be in (0, 1)")
        for name, value in (("permutations", self.permutations),
                            ("bootstrap_iters", self.bootstrap_iters)):
            if value is not None and value < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if not -(2**63) <= self.seed < 2**64:
            raise ConfigurationError("seed must fit in 64 bits")
        return self

    def single_k(self, analysis: str) -> int:
        """The window size for single-k analyses; requires exactly one k."""
        if len(self.ks) != 1:
            raise ConfigurationError(
                f"analysis {analysis} takes a single window size (got ks={list(self.ks)})"
            )
        return self.ks[0]

    def all_movements(self) -> tuple[MovementSpec, ...]:
        if self.movements:
            return self.movements
        if self.movement is not None:
            return (self.movement,)
        return ()

    def effective_dict(self, analysis: str | None = None) -> dict:
        """The effective configuration echoed into every result payload.

        Excludes execution-only knobs (workers, paths): results are
        byte-identical at any worker count, so the echo must be too.
        """
        out = {
            "platform": self.platform,
            "layer": self.layer,
            "mode": self.mode,
            "ks": list(self.ks),
            "alpha": self.alpha,
            "permutations": self.permutations,
            "bootstrap_iters": self.bootstrap_iters,
            "seed": self.seed,
        }
        if self.movement is not None:
            out["movement"] = self.movement.name
        if analysis is not None:
            out["analysis"] = analysis
        return out


def _movement_from_mapping(raw) -> MovementSpec:
    if not isinstance(raw, dict) or "name" not in raw or "seed_keywords" not in raw:
        raise ConfigurationError("movement needs 'name' and 'seed_keywords'")
    try:
        return MovementSpec.of(str(raw["name"]), [str(s) for s in raw["seed_keywords"]])
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc


def config_from_mapping(raw: dict, base: RunConfig | None = None) -> RunConfig:
    cfg = base or RunConfig()
    updates: dict = {}
    simple = {
        "platform": str, "mode": str, "alpha": float, "seed": int, "workers": int,
    }
    for key, cast in simple.items():
        if raw.get(key) is not None:
            updates[key] = cast(raw[key])
    for key in ("corpus", "events", "output_dir"):
        if raw.get(key) is not None:
            updates[key] = Path(raw[key])
    if raw.get("layer") is not None:
        updates["layer"] = int(raw["layer"])
    if raw.get("ks") is not None:
        ks = raw["ks"]
        if isinstance(ks, int):
            ks = [ks]
        updates["ks"] = tuple(int(k) for k in ks)
    for key in ("permutations", "bootstrap_iters"):
        if key in raw and raw[key] is not None:
            updates[key] = int(raw[key])
    if raw.get("movement") is not None:
        updates["movement"] = _movement_from_mapping(raw["movement"])
    if raw.get("movements") is not None:
        updates["movements"] = tuple(_movement_from_mapping(m) for m in raw["movements"])
    if raw.get("service") is not None:
        svc = raw["service"]
        updates["service"] = ServiceConfig(
            host=str(svc.get("host", ServiceConfig.host)),
            port=int(svc.get("port", ServiceConfig.port)),
            max_permutation_work=int(
                svc.get("max_permutation_work", ServiceConfig.max_permutation_work)
            ),
            frontend_dir=Path(svc["frontend_dir"]) if svc.get("frontend_dir") else None,
        )
    return replace(cfg, **updates)


def load_config_file(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"bad config file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config file must hold a mapping")
    return config_from_mapping(raw, base)


def default_config_path() -> Optional[Path]:
    env = os.environ.get(ENV_CONFIG_PATH)
    return Path(env) if env else None
