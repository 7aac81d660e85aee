"""Flat-file ingestion and export.

Formats
-------
Complex: JSON ``{"num_vertices": n, "edges": [[i, j], ...],
"triangles": [[i, j, k], ...], "cells": [[v1, ..., vm], ...]}`` with
**1-based** vertex indices (the library itself is 0-based).

Signal: CSV with header ``simplex_id,value``; one row per simplex in
canonical order, ``simplex_id`` the 0-based canonical index.

Matrix: headerless CSV of floats. Time series: CSV
``t,level,simplex_id,value``. Filter spec: JSON ``{"h_down": [...],
"h_up": [...], "harmonic": {"epsilon": e, "T_h": n} | null}``. Model:
JSON ``{"order": P, "lags": [{bank: filter spec, ...}, ...]}``.

Floats are written with 17 significant digits so save/load round-trips are
value-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .complexes import (
    Cochain,
    ComplexSignal,
    SimplicialComplex,
    TopologyError,
    build_complex,
)
from .filters import HarmonicTerm, HodgeFilterSpec
from .timeseries import SCVarLag, SCVarModel

__all__ = [
    "FileFormatError",
    "load_complex",
    "save_complex",
    "load_signal",
    "save_signal",
    "load_matrix",
    "save_matrix",
    "load_filter_spec",
    "load_filter_spec_list",
    "save_filter_spec",
    "load_series",
    "save_series",
    "load_model",
    "save_model",
]

_FLOAT = "%.17g"


class FileFormatError(ValueError):
    """A file failed to parse; the message carries the location."""


def _fmt(x: float) -> str:
    return _FLOAT % float(x)


def load_complex(path) -> SimplicialComplex:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "num_vertices" not in data:
        raise FileFormatError(f"{path}: expected an object with "
                              f"'num_vertices'")

    def shift(group, name):
        out = []
        for simplex in data.get(group, []):
            try:
                out.append([int(v) - 1 for v in simplex])
            except (TypeError, ValueError) as exc:
                raise FileFormatError(
                    f"{path}: field '{group}': bad {name} {simplex!r}"
                ) from exc
        return out

    try:
        return build_complex(
            int(data["num_vertices"]),
            edges=shift("edges", "edge"),
            triangles=shift("triangles", "triangle"),
            cells=shift("cells", "cell"),
        )
    except TopologyError as exc:
        raise TopologyError(
            f"{path}: {exc} (indices reported 0-based; the file is 1-based)"
        ) from exc


def save_complex(path, c: SimplicialComplex) -> None:
    edges = json.dumps([[u + 1, v + 1] for u, v in c.edges])
    tris = json.dumps([[u + 1, v + 1, w + 1] for u, v, w in c.triangles])
    cells = json.dumps([[v + 1 for v in cyc] for cyc in c.cells])
    Path(path).write_text(
        "{\n"
        f'  "num_vertices": {c.num_vertices},\n'
        f'  "edges": {edges},\n'
        f'  "triangles": {tris},\n'
        f'  "cells": {cells}\n'
        "}\n"
    )


def load_signal(path, c: SimplicialComplex, k: int) -> Cochain:
    path = Path(path)
    expected = c.num_simplices(k)
    values = np.zeros(expected)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["simplex_id", "value"]:
            raise FileFormatError(
                f"{path}: line 1: expected header 'simplex_id,value'"
            )
        count = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise FileFormatError(
                    f"{path}: line {lineno}: expected 2 fields, got {len(row)}"
                )
            try:
                idx = int(row[0])
                val = float(row[1])
            except ValueError as exc:
                raise FileFormatError(
                    f"{path}: line {lineno}: {exc}"
                ) from exc
            if idx != count:
                raise FileFormatError(
                    f"{path}: line {lineno}: simplex_id {idx} out of order "
                    f"(expected {count}; rows follow the canonical ordering)"
                )
            if idx >= expected:
                raise FileFormatError(
                    f"{path}: line {lineno}: simplex_id {idx} but an "
                    f"order-{k} signal has only {expected} entries"
                )
            values[idx] = val
            count += 1
    if count != expected:
        raise FileFormatError(
            f"{path}: expected {expected} rows for an order-{k} signal, "
            f"got {count}"
        )
    return Cochain(c, k, values)


def save_signal(path, x: Cochain) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["simplex_id", "value"])
        for i, v in enumerate(x.values):
            writer.writerow([i, _fmt(v)])


def load_matrix(path) -> np.ndarray:
    path = Path(path)
    rows = []
    width = None
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                vals = [float(v) for v in row]
            except ValueError as exc:
                raise FileFormatError(f"{path}: line {lineno}: {exc}") from exc
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise FileFormatError(
                    f"{path}: line {lineno}: expected {width} fields, "
                    f"got {len(vals)}"
                )
            rows.append(vals)
    return np.array(rows) if rows else np.zeros((0, 0))


def save_matrix(path, mat: np.ndarray) -> None:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        for row in mat:
            writer.writerow([_fmt(v) for v in row])


def _spec_to_json(spec: HodgeFilterSpec) -> dict:
    return {
        "h_down": list(spec.h_down),
        "h_up": list(spec.h_up),
        "harmonic": None if spec.harmonic is None else
            {"epsilon": spec.harmonic.epsilon, "T_h": spec.harmonic.steps},
    }


def _spec_from_json(data: dict, where: str) -> HodgeFilterSpec:
    if not isinstance(data, dict):
        raise FileFormatError(f"{where}: expected a filter-spec object")
    try:
        harm = data.get("harmonic")
        harmonic = None if harm is None else \
            HarmonicTerm(epsilon=float(harm["epsilon"]),
                         steps=int(harm["T_h"]))
        return HodgeFilterSpec(
            h_down=tuple(float(v) for v in data.get("h_down", [])),
            h_up=tuple(float(v) for v in data.get("h_up", [])),
            harmonic=harmonic,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def load_filter_spec(path) -> HodgeFilterSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}: "
                              f"{exc.msg}") from exc
    return _spec_from_json(data, str(path))


def load_filter_spec_list(path) -> list[HodgeFilterSpec]:
    """JSON list of filter-spec objects (sub-dictionary definitions)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}: "
                              f"{exc.msg}") from exc
    if not isinstance(data, list):
        raise FileFormatError(f"{path}: expected a JSON list of filter specs")
    return [_spec_from_json(s, f"{path}[{i}]") for i, s in enumerate(data)]


def save_filter_spec(path, spec: HodgeFilterSpec) -> None:
    Path(path).write_text(json.dumps(_spec_to_json(spec), indent=1) + "\n")


def load_series(path, c: SimplicialComplex) -> list[ComplexSignal]:
    """Time-series CSV ``t,level,simplex_id,value`` into a signal list.

    Steps must be 0..T-1; every (t, level) block must cover its level
    completely, in canonical order.
    """
    path = Path(path)
    frames: dict[int, list[np.ndarray]] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != \
                ["t", "level", "simplex_id", "value"]:
            raise FileFormatError(
                f"{path}: line 1: expected header 't,level,simplex_id,value'"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise FileFormatError(
                    f"{path}: line {lineno}: expected 4 fields, got {len(row)}"
                )
            try:
                t, level, idx, val = (int(row[0]), int(row[1]), int(row[2]),
                                      float(row[3]))
            except ValueError as exc:
                raise FileFormatError(f"{path}: line {lineno}: {exc}") from exc
            if level not in (0, 1, 2):
                raise FileFormatError(
                    f"{path}: line {lineno}: level must be 0, 1 or 2"
                )
            if not 0 <= idx < c.num_simplices(level):
                raise FileFormatError(
                    f"{path}: line {lineno}: simplex_id {idx} out of range "
                    f"for level {level} (N_{level} = {c.num_simplices(level)})"
                )
            arrays = frames.setdefault(
                t, [np.zeros(c.n0), np.zeros(c.n1), np.zeros(c.n2)]
            )
            arrays[level][idx] = val
    if not frames:
        return []
    steps = sorted(frames)
    if steps != list(range(len(steps))):
        raise FileFormatError(f"{path}: time steps must be 0..T-1, "
                              f"got {steps[:5]}...")
    return [ComplexSignal.from_arrays(c, *frames[t]) for t in steps]


def save_series(path, series: Sequence[ComplexSignal],
                start: int = 0) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "level", "simplex_id", "value"])
        for t, sig in enumerate(series, start=start):
            for level, x in ((0, sig.x0), (1, sig.x1), (2, sig.x2)):
                for i, v in enumerate(x.values):
                    writer.writerow([t, level, i, _fmt(v)])


_BANKS = ("h00", "g01", "h01", "h11", "g10", "h10", "g12", "h12",
          "g21", "h21", "h22")


def load_model(path, c: SimplicialComplex) -> SCVarModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}: "
                              f"{exc.msg}") from exc
    lags_json = data.get("lags")
    if not isinstance(lags_json, list) or not lags_json:
        raise FileFormatError(f"{path}: 'lags' must be a nonempty list")
    if data.get("order") != len(lags_json):
        raise FileFormatError(f"{path}: 'order' does not match the number "
                              f"of lags")
    lags = []
    for p, lag_json in enumerate(lags_json, start=1):
        kwargs = {}
        for name in _BANKS:
            if name in lag_json:
                kwargs[name] = _spec_from_json(
                    lag_json[name], f"{path}: lag {p}, bank {name}"
                )
        unknown = set(lag_json) - set(_BANKS)
        if unknown:
            raise FileFormatError(
                f"{path}: lag {p}: unknown banks {sorted(unknown)}"
            )
        lags.append(SCVarLag(**kwargs))
    return SCVarModel(complex=c, lags=tuple(lags))


def save_model(path, model: SCVarModel) -> None:
    data = {
        "order": model.order,
        "lags": [
            {name: _spec_to_json(getattr(lag, name)) for name in _BANKS}
            for lag in model.lags
        ],
    }
    Path(path).write_text(json.dumps(data, indent=1) + "\n")
