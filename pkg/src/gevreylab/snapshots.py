"""Field snapshot files: one JSON header line + raw little-endian float64 samples."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .spectral import SpectralField, forward_transform


def write_snapshot(path, fld: SpectralField, name: str = "field",
                   time: float = 0.0, r: float = 2.0) -> None:
    values = fld.require_values()
    header = {
        "dim": fld.dim,
        "n": fld.n,
        "r": r,
        "time": time,
        "field": name,
        "scale": fld.scale,
        "dtype": "<f8",
        "order": "C",
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(values, dtype="<f8").tobytes())


def read_snapshot(path):
    """Returns (field, header); the field comes back transformed."""
    raw = Path(path).read_bytes()
    nl = raw.index(b"\n")
    header = json.loads(raw[:nl].decode("utf-8"))
    n, dim = header["n"], header["dim"]
    values = np.frombuffer(raw[nl + 1:], dtype="<f8", count=n ** dim).reshape((n,) * dim)
    fld = SpectralField.from_values(values.copy(), scale=header.get("scale", 1.0))
    return forward_transform(fld), header
