"""Field files: one JSON header line, then raw little-endian float64 values.

The payload is row-major with rows of constant y, i.e. the transpose of the in-memory
``(nx, ny)`` layout. Masked domains carry their inclusion grid in the header as one
``0``/``1`` string per row.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from dinilab.errors import CorruptFileError, InvalidArgumentError
from dinilab.grid import Domain, FloatArray, SampledField, VectorField

FORMAT = "dinilab-field"
VERSION = 1
DTYPE = "f64-le"
_HEADER_LIMIT = 1 << 24


def _encode_mask(mask: np.ndarray) -> list[str]:
    return ["".join("1" if v else "0" for v in row) for row in mask.T]


def _decode_mask(rows: Any, nx: int, ny: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != ny or any(not isinstance(r, str) or len(r) != nx for r in rows):
        raise CorruptFileError(f"mask does not describe a {nx}x{ny} grid")
    if any(set(r) - {"0", "1"} for r in rows):
        raise CorruptFileError("mask rows may contain only 0 and 1")
    return np.array([[c == "1" for c in r] for r in rows], dtype=bool).T


def write_array(values: FloatArray, header: dict[str, Any], path: Path) -> Path:
    """Write ``values`` (shape ``(nx, ny)``) after ``header``."""
    values = np.asarray(values, dtype=np.float64)
    nx, ny = values.shape
    full = {"format": FORMAT, "version": VERSION, "dtype": DTYPE, **header, "nx": nx, "ny": ny}
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = np.ascontiguousarray(values.T).astype("<f8").tobytes()
    with path.open("wb") as handle:
        handle.write(json.dumps(full, sort_keys=True).encode() + b"\n")
        handle.write(payload)
    return path


def read_array(path: Path) -> tuple[dict[str, Any], FloatArray]:
    """Header and values of a field file; nothing is returned unless the whole file checks out."""
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise CorruptFileError(f"Cannot read field file {path}: {e}") from e
    end = raw.find(b"\n", 0, _HEADER_LIMIT)
    if end < 0:
        raise CorruptFileError(f"{path}: no header line")
    try:
        header = json.loads(raw[:end])
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CorruptFileError(f"{path}: header is not JSON ({e})") from e
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise CorruptFileError(f"{path}: not a {FORMAT} file")
    if header.get("dtype") != DTYPE:
        raise CorruptFileError(f"{path}: unsupported dtype {header.get('dtype')!r}")
    try:
        nx, ny = int(header["nx"]), int(header["ny"])
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptFileError(f"{path}: header lacks grid size") from e
    payload = raw[end + 1 :]
    expected = nx * ny * 8
    if nx < 1 or ny < 1 or len(payload) != expected:
        raise CorruptFileError(f"{path}: payload has {len(payload)} bytes, header promises {expected}")
    values = np.frombuffer(payload, dtype="<f8").reshape(ny, nx).T.astype(np.float64)
    return header, values


def write_field(field: SampledField, path: Path) -> Path:
    d = field.domain
    header: dict[str, Any] = {"x0": d.x0, "y0": d.y0, "dx": d.dx, "dy": d.dy, "shape": d.shape}
    if d.mask is not None:
        header["mask"] = _encode_mask(d.mask)
    return write_array(field.values, header, path)


def read_field(path: Path) -> SampledField:
    header, values = read_array(path)
    nx, ny = values.shape
    mask = _decode_mask(header["mask"], nx, ny) if "mask" in header else None
    try:
        domain = Domain(
            x0=float(header["x0"]),
            y0=float(header["y0"]),
            dx=float(header["dx"]),
            dy=float(header["dy"]),
            nx=nx,
            ny=ny,
            shape=header.get("shape", "square"),
            mask=mask,
        )
        return SampledField(domain, values)
    except (KeyError, TypeError, ValueError, InvalidArgumentError) as e:
        raise CorruptFileError(f"{path}: invalid grid description ({e})") from e


def write_vector_field(v: VectorField, directory: Path, stem: str) -> list[Path]:
    """Staggered components as ``<stem>.v1.field`` and ``<stem>.v2.field`` plus a ``<stem>.json`` grid record."""
    d = v.domain
    grid = {"x0": d.x0, "y0": d.y0, "dx": d.dx, "dy": d.dy, "nx": d.nx, "ny": d.ny}
    paths = [
        write_array(v.v1, {"x0": d.x0, "y0": d.y0 + 0.5 * d.dy, "dx": d.dx, "dy": d.dy, "component": "v1"}, directory / f"{stem}.v1.field"),
        write_array(v.v2, {"x0": d.x0 + 0.5 * d.dx, "y0": d.y0, "dx": d.dx, "dy": d.dy, "component": "v2"}, directory / f"{stem}.v2.field"),
    ]
    record = directory / f"{stem}.json"
    record.write_text(json.dumps({"grid": grid, "components": [p.name for p in paths]}, indent=2, sort_keys=True) + "\n")
    return [*paths, record]


def read_vector_field(directory: Path, stem: str) -> VectorField:
    try:
        grid = json.loads((directory / f"{stem}.json").read_text())["grid"]
        domain = Domain(grid["x0"], grid["y0"], grid["dx"], grid["dy"], grid["nx"], grid["ny"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, InvalidArgumentError) as e:
        raise CorruptFileError(f"{directory / stem}: invalid vector field record ({e})") from e
    _, v1 = read_array(directory / f"{stem}.v1.field")
    _, v2 = read_array(directory / f"{stem}.v2.field")
    try:
        return VectorField(domain, v1, v2)
    except InvalidArgumentError as e:
        raise CorruptFileError(f"{directory / stem}: {e}") from e
