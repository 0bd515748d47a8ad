"""Run configuration stored as ``key=value`` lines."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

CONFIG_ENV = "CYCLICDESIGNS_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    variant_limit: int = 100_000
    search_nodes: int = 2_000_000
    search_seconds: float = 120.0
    bound_window: int = 5000
    output_dir: str = "corpus"
    workers: int = 1

    def __post_init__(self) -> None:
        for f in fields(self):
            val = getattr(self, f.name)
            if f.type in ("int", "float") and not val > 0:
                raise ValueError(f"{f.name} must be positive, got {val}")
        if not self.output_dir:
            raise ValueError("output_dir must not be empty")

    def dumps(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)!r}\n" if f.type == "float"
                       else f"{f.name}={getattr(self, f.name)}\n" for f in fields(self))

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or key not in types:
                raise ValueError(f"config line {no}: unknown or malformed entry {raw!r}")
            conv = {"int": int, "float": float, "str": str}[types[key]]
            values[key] = conv(val)
        return cls(**values)


def load_config(path: Optional[str | Path] = None) -> RunConfig:
    """Explicit path, else the file named by $CYCLICDESIGNS_CONFIG, else defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    return RunConfig.loads(Path(path).read_text())
