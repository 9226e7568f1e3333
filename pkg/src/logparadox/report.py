"""Serializable experiment reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from . import __version__

SCHEMA_VERSION = 1


def _canonical(obj: Any) -> Any:
    # tuples -> lists, numpy scalars -> python; what json would hand back anyway
    return json.loads(json.dumps(obj, default=_default, allow_nan=False))


def _default(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class ExperimentReport:
    command: str
    params: Dict[str, Any]
    seed: Optional[int]
    summaries: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def create(cls, command, params, seed=None, summaries=None, results=None) -> "ExperimentReport":
        """Build a report with its payload normalised to plain JSON types."""
        return cls(
            command=command,
            params=_canonical(params),
            seed=seed,
            summaries=_canonical(summaries or {}),
            results=_canonical(results or {}),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))
