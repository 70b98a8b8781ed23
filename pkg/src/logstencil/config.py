"""Run configuration with flags > config file > built-in defaults precedence."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class RunConfig:
    input_path: Path | None = None
    output_dir: Path = Path("logstencil-out")
    history_path: Path | None = None
    truth_path: Path | None = None
    candidates: int = 32
    demonstrations: int = 3
    sim_threshold: float = 0.8
    divergence_threshold: int = 5
    alpha: float = 0.25
    max_iterations: int = 3
    keyword_file: Path | None = None
    backend: str = "mock"
    fixture_path: Path | None = None
    script_path: Path | None = None
    base_url: str | None = None
    model: str = "gpt-3.5-turbo"
    api_key_env: str = "OPENAI_API_KEY"
    header_pattern: str | None = None
    warm_tree_path: Path | None = None
    candidate_cap: int = 256
    knn_tokens: str = "fine"
    seed: int = 0
    max_output_tokens: int = 256

    _PATH_FIELDS = {
        "input_path",
        "output_dir",
        "history_path",
        "truth_path",
        "keyword_file",
        "fixture_path",
        "script_path",
        "warm_tree_path",
    }

    def validate(self) -> None:
        if self.input_path is None:
            raise ValueError("an input path is required")
        if not 0.0 < self.sim_threshold <= 1.0:
            raise ValueError(f"sim-threshold must be in (0, 1], got {self.sim_threshold}")
        if self.candidates < 0:
            raise ValueError("candidates must be >= 0")
        if self.candidates > 0 and self.demonstrations > self.candidates:
            raise ValueError(
                f"demonstrations ({self.demonstrations}) may not exceed candidates ({self.candidates})"
            )
        if self.backend not in ("mock", "http"):
            raise ValueError(f"backend must be 'mock' or 'http', got {self.backend!r}")
        if self.backend == "mock" and self.fixture_path is None and self.script_path is None:
            raise ValueError("mock backend needs --fixture and/or --script")
        if self.backend == "http" and not self.base_url:
            raise ValueError("http backend needs --base-url")
        if self.knn_tokens not in ("fine", "coarse"):
            raise ValueError(f"knn-tokens must be 'fine' or 'coarse', got {self.knn_tokens!r}")

    @classmethod
    def resolve(cls, overrides: dict, config_file: Path | None = None) -> "RunConfig":
        """Merge explicit flag values over config-file values over defaults."""
        merged: dict = {}
        if config_file is not None:
            with open(config_file, encoding="utf-8") as handle:
                file_values = json.load(handle)
            known = {f.name for f in fields(cls)}
            unknown = set(file_values) - known
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            merged.update(file_values)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        for key in cls._PATH_FIELDS & merged.keys():
            if merged[key] is not None:
                merged[key] = Path(merged[key])
        config = cls(**merged)
        config.validate()
        return config
