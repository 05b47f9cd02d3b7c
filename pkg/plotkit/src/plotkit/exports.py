"""Load the versioned graph-export JSON files written by `cvcluster run`.

The file contract is small and stable: schema_version, n, labels 1..n,
and sparse upper-triangle (i, j, weight) triplets for the real and
imaginary parts of the graph matrix, diagonals included. This module
validates that contract without importing the producer package.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

SUPPORTED_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExportData:
    """One parsed export: edge triplets are (i, j, weight) with i <= j."""

    n: int
    labels: tuple[int, ...]
    re_edges: tuple[tuple[int, int, float], ...]
    im_edges: tuple[tuple[int, int, float], ...]
    metadata: dict


def _checked_edges(raw, n, key):
    if not isinstance(raw, list):
        raise ValueError(f"{key} must be a list of (i, j, weight) triplets")
    edges = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 3:
            raise ValueError(f"{key} must be a list of (i, j, weight) triplets")
        i, j, weight = entry
        if isinstance(i, bool) or isinstance(j, bool):
            raise ValueError(f"{key} has invalid mode indices")
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ValueError(f"{key} has invalid mode indices")
        if not (1 <= i <= j <= n):
            raise ValueError(f"{key} has invalid mode indices")
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ValueError(f"{key} has a non-numeric weight")
        if not math.isfinite(weight):
            raise ValueError(f"{key} has a non-finite weight")
        edges.append((i, j, float(weight)))
    return tuple(edges)


def load_export(path):
    """Read and validate an export file; raises ValueError on bad content."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError("export must be a JSON object")
    version = raw.get("schema_version")
    if version != SUPPORTED_SCHEMA_VERSION:
        raise ValueError(f"unsupported export schema_version: {version!r}")
    n = raw.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if raw.get("labels") != list(range(1, n + 1)):
        raise ValueError("labels must be the integers 1..n in order")
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ValueError("metadata must be an object")
    return ExportData(
        n=n,
        labels=tuple(range(1, n + 1)),
        re_edges=_checked_edges(raw.get("re_edges"), n, "re_edges"),
        im_edges=_checked_edges(raw.get("im_edges"), n, "im_edges"),
        metadata=metadata,
    )
