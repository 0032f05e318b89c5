"""Binary field and matrix files.

Field files hold a little-endian flat array, sites in row-major order with
the component index fastest, next to a JSON sidecar ``<path>.json`` with
keys ``n, box, offset, components, dtype``.

Matrix files are a single line of JSON header terminated by a newline,
followed by the row-major little-endian complex128 entries.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .fields import FIELD_TYPES, Field, GridSpec
from .operators import DenseHermitian

DTYPES = {"float64": "<f8", "complex128": "<c16"}


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_field(path, f: Field) -> None:
    path = Path(path)
    dtype = "float64" if f.real else "complex128"
    path.write_bytes(f.flat().astype(DTYPES[dtype]).tobytes())
    meta = {**f.grid.as_dict(), "components": f.components, "dtype": dtype}
    sidecar_path(path).write_text(json.dumps(meta, sort_keys=True) + "\n")


def read_field(path) -> Field:
    path = Path(path)
    try:
        meta = json.loads(sidecar_path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"missing sidecar {sidecar_path(path)}") from None
    missing = {"n", "box", "offset", "components", "dtype"} - set(meta)
    if missing:
        raise ConfigError(f"sidecar lacks keys {sorted(missing)}")
    if meta["dtype"] not in DTYPES:
        raise ConfigError(f"unsupported dtype {meta['dtype']!r}")
    grid = GridSpec(int(meta["n"]), float(meta["box"]), bool(meta["offset"]))
    c = int(meta["components"])
    flat = np.frombuffer(path.read_bytes(), dtype=DTYPES[meta["dtype"]])
    if flat.size != c * grid.sites:
        raise ConfigError(f"{path} holds {flat.size} values, expected {c * grid.sites}")
    data = np.moveaxis(flat.reshape(grid.n, grid.n, grid.n, c), -1, 0)
    return FIELD_TYPES[c](grid, data)


def write_matrix(path, H: DenseHermitian, **extra) -> None:
    header = {
        "dim": H.dim,
        "basis": H.basis,
        "grid": H.grid.as_dict() if H.grid is not None else None,
        "dtype": "complex128",
        **extra,
    }
    with open(path, "wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode())
        fh.write(np.ascontiguousarray(H.data).astype("<c16").tobytes())


def read_matrix(path) -> tuple[DenseHermitian, dict]:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        raw = fh.read()
    dim = int(header["dim"])
    flat = np.frombuffer(raw, dtype="<c16")
    if flat.size != dim * dim:
        raise ConfigError(f"{path} holds {flat.size} entries, expected {dim * dim}")
    g = header.get("grid")
    grid = GridSpec(int(g["n"]), float(g["box"]), bool(g["offset"])) if g else None
    return DenseHermitian(flat.reshape(dim, dim), header.get("basis", "scalar"), grid), header
