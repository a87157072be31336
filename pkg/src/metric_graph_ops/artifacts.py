"""Deterministic JSON and CSV artifacts with atomic file writes."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import logging
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from .edge_function import SampledEdgeFunction, check_grid_size
from .errors import GridMismatchError, SchemaError
from .network import Network

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12e"

EDGE_FUNCTION_COLUMNS = ("edge_u", "edge_v", "k", "t", "re", "im")
WAVE_TRACE_COLUMNS = ("tau", "edge_u", "edge_v", "k", "re", "im")


# --- JSON ---


def _render(value: Any, indent: int, depth: int) -> str:
    pad = " " * (indent * (depth + 1))
    close = " " * (indent * depth)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return FLOAT_FORMAT % number if math.isfinite(number) else "null"
    if isinstance(value, (complex, np.complexfloating)):
        return _render([value.real, value.imag], indent, depth)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_render(v, indent, depth + 1)}" for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        items = list(value)
        if not items:
            return "[]"
        rendered = [_render(v, indent, depth + 1) for v in items]
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in items):
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(pad + r for r in rendered) + "\n" + close + "]"
    raise TypeError(f"cannot render {type(value).__name__} as JSON")


def render_json(document: Any, indent: int = 2) -> str:
    """Render a JSON document with fixed float formatting.

    Keys keep insertion order; finite floats render as ``%.12e`` and non-finite floats as
    ``null``. The same document always renders to the same text.
    """
    return _render(document, indent, 0) + "\n"


# --- Files ---


def write_text_atomic(path: str | Path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary sibling and ``os.replace``.

    Raises:
        OSError: The file could not be written.
    """
    target = Path(path)
    tmp_path = target.with_name(target.name + ".tmp")
    try:
        with open(tmp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, target)
        logger.debug(f"Wrote {target}")
    except OSError as e:
        logger.error(f"Failed to write {target}: {e}")
        with contextlib.suppress(OSError):
            tmp_path.unlink(missing_ok=True)
        raise
    return target


def write_json(path: str | Path, document: Any) -> Path:
    return write_text_atomic(path, render_json(document))


# --- CSV ---


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _edge_rows(f: SampledEdgeFunction) -> Iterable[list[str]]:
    n = f.grid_size
    for k, edge in enumerate(f.network.edges):
        for i, value in enumerate(f.values[k].tolist()):
            yield [
                edge.u,
                edge.v,
                str(i),
                FLOAT_FORMAT % (i / n),
                FLOAT_FORMAT % value.real,
                FLOAT_FORMAT % value.imag,
            ]


def edge_function_csv(f: SampledEdgeFunction) -> str:
    """CSV with columns edge_u, edge_v, k, t, re, im (canonical orientation)."""
    return _csv_text(EDGE_FUNCTION_COLUMNS, _edge_rows(f))


def write_edge_function_csv(path: str | Path, f: SampledEdgeFunction) -> Path:
    return write_text_atomic(path, edge_function_csv(f))


def _edge_index(net: Network) -> dict[tuple[str, str], int]:
    return {(edge.u, edge.v): k for k, edge in enumerate(net.edges)}


def _assemble(net: Network, rows: Iterable[Mapping[str, str]]) -> SampledEdgeFunction:
    index = _edge_index(net)
    samples: dict[int, dict[int, complex]] = {k: {} for k in range(net.n_edges)}
    try:
        for row in rows:
            key = (row["edge_u"], row["edge_v"])
            if key not in index:
                raise SchemaError(f"unknown edge {key[0]!r}-{key[1]!r}")
            samples[index[key]][int(row["k"])] = complex(float(row["re"]), float(row["im"]))
    except ValueError as e:
        raise SchemaError(f"malformed number in CSV: {e}") from e
    sizes = {len(found) for found in samples.values()}
    if len(sizes) != 1:
        raise GridMismatchError("edges carry different numbers of samples")
    points = sizes.pop()
    check_grid_size(points - 1)
    values = np.zeros((net.n_edges, points), dtype=complex)
    for k, found in samples.items():
        if sorted(found) != list(range(points)):
            raise GridMismatchError(f"edge {net.edge_label(k)} does not cover k = 0..{points - 1}")
        values[k] = [found[i] for i in range(points)]
    return SampledEdgeFunction(net, values)


def _reader(text: str, columns: tuple[str, ...]) -> csv.DictReader[str]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != columns:
        raise SchemaError(f"expected columns {columns}, got {reader.fieldnames}")
    return reader


def parse_edge_function_csv(net: Network, text: str) -> SampledEdgeFunction:
    """Rebuild a SampledEdgeFunction from :func:`edge_function_csv` output.

    Raises:
        SchemaError: Missing columns, unknown edges or malformed numbers.
        GridMismatchError: The rows do not cover every edge on one uniform grid.
    """
    return _assemble(net, _reader(text, EDGE_FUNCTION_COLUMNS))


def read_edge_function_csv(path: str | Path, net: Network) -> SampledEdgeFunction:
    return parse_edge_function_csv(net, Path(path).read_text(encoding="utf-8"))


def wave_trace_csv(frames: Sequence[tuple[float, SampledEdgeFunction]]) -> str:
    """CSV with columns tau, edge_u, edge_v, k, re, im: one block per frame."""

    def rows() -> Iterable[list[str]]:
        for tau, f in frames:
            for row in _edge_rows(f):
                u, v, k, _, re, im = row
                yield [FLOAT_FORMAT % tau, u, v, k, re, im]

    return _csv_text(WAVE_TRACE_COLUMNS, rows())


def write_wave_trace_csv(
    path: str | Path, frames: Sequence[tuple[float, SampledEdgeFunction]]
) -> Path:
    path = write_text_atomic(path, wave_trace_csv(frames))
    logger.info(f"Wrote {len(frames)} wave frames to {path}")
    return path


def parse_wave_trace_csv(net: Network, text: str) -> list[tuple[float, SampledEdgeFunction]]:
    """Split a wave trace back into per-tau edge functions, in file order."""
    blocks: dict[str, list[dict[str, str]]] = {}
    for row in _reader(text, WAVE_TRACE_COLUMNS):
        blocks.setdefault(row["tau"], []).append(row)
    return [(float(tau), _assemble(net, rows)) for tau, rows in blocks.items()]
