"""Edge-list ingestion for published graph datasets.

Files are whitespace-separated "u v" lines; '#' and '%' start comments.
Directed or reciprocal pairs merge into one undirected edge, self-loops are
dropped (before ids are assigned), and sparse ids are remapped to dense
0..n-1 by first appearance.  Ids that are already dense 0..n-1 are kept
as-is so that load -> serialize -> load is the identity.  Gzip input is
detected from the magic bytes, not the file name.
"""

from __future__ import annotations

import gzip
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import Graph, build_graph

log = logging.getLogger(__name__)


class ParseError(ValueError):
    def __init__(self, path, line_number, message):
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number


class ValidationError(ValueError):
    def __init__(self, name, field, expected, actual):
        super().__init__(f"dataset {name!r}: expected {field}={expected}, got {actual}")
        self.field = field
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True)
class DatasetManifest:
    """Expected exact node/edge counts for a dataset file; None skips a check."""

    name: str
    expected_n: Optional[int] = None
    expected_m: Optional[int] = None


def _open_text(path):
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_edge_list(path, manifest: Optional[DatasetManifest] = None,
                   idmap_path=None) -> Graph:
    """Load an edge-list file into a dense-id Graph.

    When manifest expectations are present they are validated exactly and a
    mismatch raises ValidationError.  If idmap_path is given, a sidecar
    "original_id new_id" text map is written for traceability.
    """
    raw_u = []
    raw_v = []
    loops = 0
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#") or text.startswith("%"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ParseError(path, lineno,
                                 f"expected two fields, got {len(parts)}")
            try:
                a = int(parts[0])
                b = int(parts[1])
            except ValueError:
                raise ParseError(path, lineno,
                                 f"non-integer node id in {text!r}") from None
            if a == b:
                loops += 1
                continue
            raw_u.append(a)
            raw_v.append(b)

    remap = {}
    for a, b in zip(raw_u, raw_v):
        if a not in remap:
            remap[a] = len(remap)
        if b not in remap:
            remap[b] = len(remap)
    n = len(remap)
    dense_already = n > 0 and min(remap) == 0 and max(remap) == n - 1
    if dense_already:
        remap = {k: k for k in remap}

    pairs = np.empty((len(raw_u), 2), dtype=np.int64)
    for i, (a, b) in enumerate(zip(raw_u, raw_v)):
        pairs[i, 0] = remap[a]
        pairs[i, 1] = remap[b]
    directed = len(raw_u)
    g = build_graph(n, pairs)
    log.info("loaded %s: n=%d m=%d (%d directed lines, %d loops dropped, "
             "%d duplicate/reciprocal pairs merged)",
             path, n, g.m, directed, loops, directed - g.m)

    if manifest is not None:
        if manifest.expected_n is not None and manifest.expected_n != n:
            raise ValidationError(manifest.name, "n", manifest.expected_n, n)
        if manifest.expected_m is not None and manifest.expected_m != g.m:
            raise ValidationError(manifest.name, "m", manifest.expected_m, g.m)

    if idmap_path is not None:
        items = sorted(remap.items(), key=lambda kv: kv[1])
        with open(idmap_path, "w", encoding="utf-8") as fh:
            for orig, new in items:
                fh.write(f"{orig} {new}\n")
    return g
