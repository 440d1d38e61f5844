"""Runtime configuration for the arena service and CLI."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from modelarena.elo import EloConfig
from modelarena.errors import ConfigInvalid


@dataclass
class ArenaConfig:
    data_dir: Path = Path("./arena-data")
    port: int = 8080
    host: str = "127.0.0.1"
    k_factor: float = 32.0
    initial_rating: float = 1000.0
    k_anonymity_threshold: int = 5
    allow_repeat_after_exhaustion: bool = False
    affinity_alpha: float = 1.0
    retry_budget: int = 2
    max_prompt_chars: int = 4000
    seed: Optional[int] = None  # test mode only; production uses entropy
    admin_token: str = ""
    fsync: bool = True
    providers: dict[str, dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)

    def elo(self) -> EloConfig:
        return EloConfig(k_factor=self.k_factor, initial_rating=self.initial_rating)

    @property
    def events_path(self) -> Path:
        return self.data_dir / "events.jsonl"

    @property
    def snapshot_path(self) -> Path:
        return self.data_dir / "snapshot.json"

    @classmethod
    def from_file(cls, path: str | Path) -> "ArenaConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot load config {path}: {exc}")
        return cls.from_mapping(raw)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "ArenaConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**raw)
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(str(exc))

    def apply_env(self, env: Mapping[str, str] = os.environ) -> "ArenaConfig":
        """Overlay MODELARENA_* environment variables onto this config."""
        mapping = {
            "MODELARENA_DATA_DIR": ("data_dir", Path),
            "MODELARENA_PORT": ("port", int),
            "MODELARENA_HOST": ("host", str),
            "MODELARENA_K_FACTOR": ("k_factor", float),
            "MODELARENA_INITIAL_RATING": ("initial_rating", float),
            "MODELARENA_K_ANONYMITY_THRESHOLD": ("k_anonymity_threshold", int),
            "MODELARENA_ALLOW_REPEAT_AFTER_EXHAUSTION": ("allow_repeat_after_exhaustion", lambda v: v.lower() in ("1", "true", "yes")),
            "MODELARENA_SEED": ("seed", int),
            "MODELARENA_ADMIN_TOKEN": ("admin_token", str),
        }
        for var, (attr, cast) in mapping.items():
            if var in env:
                try:
                    setattr(self, attr, cast(env[var]))
                except ValueError as exc:
                    raise ConfigInvalid(f"bad value for {var}: {exc}")
        return self
