"""
Solver configuration.

Settings come from, in order of precedence: command-line flags, a JSON
config file (~/.config/polyrealize/config.json or XDG_CONFIG_HOME), and the
dataclass defaults below.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

from .types import InputError

S0_ROW_CHOICES = ("all", "pivots")
OUTPUT_CHOICES = ("text", "json")


def get_config_dir() -> Path:
    """Get the configuration directory."""
    xdg_config = os.environ.get("XDG_CONFIG_HOME")
    if xdg_config:
        base = Path(xdg_config)
    else:
        base = Path.home() / ".config"
    return base / "polyrealize"


def get_config_path() -> Path:
    """Get the configuration file path."""
    return get_config_dir() / "config.json"


@dataclass(frozen=True)
class SolveConfig:
    """
    Settings for one solve/realize run.

    Attributes:
        degree: First Macaulay degree tried (None: sum(d_i) - n + 1, or max d_i
            for non-square systems)
        max_degree: Last degree tried (None: first degree + n + 2)
        tol: Rank tolerance for the Macaulay matrix, relative to its largest
            singular value (None: eps * max(rows, cols))
        basis_tol: Rank tolerance for decisions on row blocks of the null-space
            basis (gap, echelon pivots, compression, shift rank), relative to
            the largest singular value of each block
        residual_tol: Roots with a larger residual are flagged. Roots at
            infinity above it are withheld, and it bounds max|E0^m_S|
        cluster_tol: Merge radius for multiple roots (None: 1e-4 * (1 + max|coord|))
        seed: Seed of the random shift combination
        s0_rows: "all" degree <= d-1 rows, or the first m_R independent "pivots"
        output: "text" or "json"
    """

    degree: int | None = None
    max_degree: int | None = None
    tol: float | None = None
    basis_tol: float = 1e-8
    residual_tol: float = 1e-6
    cluster_tol: float | None = None
    seed: int = 42
    s0_rows: str = "all"
    output: str = "text"

    def __post_init__(self):
        for name in ("tol", "basis_tol", "residual_tol", "cluster_tol"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InputError(f"{name} must be > 0, got {value}")
        if self.degree is not None and self.degree < 0:
            raise InputError(f"degree must be >= 0, got {self.degree}")
        if (
            self.degree is not None
            and self.max_degree is not None
            and self.degree > self.max_degree
        ):
            raise InputError(
                f"degree {self.degree} exceeds max_degree {self.max_degree}"
            )
        if self.s0_rows not in S0_ROW_CHOICES:
            raise InputError(f"s0_rows must be one of {S0_ROW_CHOICES}, got '{self.s0_rows}'")
        if self.output not in OUTPUT_CHOICES:
            raise InputError(f"output must be one of {OUTPUT_CHOICES}, got '{self.output}'")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SolveConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"Unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def load(cls, path: Path | None = None) -> SolveConfig:
        """
        Load configuration from file.

        A missing default file gives the defaults; a missing explicit path is
        an error.
        """
        config_path = path or get_config_path()

        if not config_path.exists():
            if path is not None:
                raise InputError(f"Config file not found: {config_path}")
            return cls()

        try:
            with open(config_path) as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"Invalid JSON in {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise InputError(f"Config file {config_path} must hold a JSON object")
        return cls.from_dict(data)

    def save(self, path: Path | None = None) -> None:
        """Save configuration to file."""
        config_path = path or get_config_path()
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    def merged(self, **overrides: Any) -> SolveConfig:
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
