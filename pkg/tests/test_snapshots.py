import json

import numpy as np

from gevreylab.snapshots import read_snapshot, write_snapshot
from gevreylab.spectral import SpectralField, forward_transform


def test_round_trip(tmp_path):
    f = forward_transform(SpectralField.from_function(
        lambda x, y: np.sin(x) * np.cos(y), 2, 32, scale=2.0))
    path = tmp_path / "f.snap"
    write_snapshot(path, f, name="vorticity", time=0.25)
    g, header = read_snapshot(path)
    assert header["field"] == "vorticity"
    assert header["time"] == 0.25
    assert header["n"] == 32 and header["dim"] == 2
    assert g.scale == 2.0
    err = np.max(np.abs(g.require_values() - f.require_values()))
    assert err < 1e-15


def test_header_is_one_json_line(tmp_path):
    f = SpectralField.from_values(np.zeros((8, 8)))
    path = tmp_path / "z.snap"
    write_snapshot(path, f)
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
        payload = fh.read()
    assert header["dtype"] == "<f8"
    assert len(payload) == 8 * 8 * 8
