"""File formats: flat binary grid files and paired-series CSV.

Grid files are a length-prefixed JSON header followed by a raw float64
payload:

    bytes 0..8    header length H as a 64-bit little-endian unsigned integer
    bytes 8..8+H  UTF-8 JSON {"dims": [n_time, n_lat, n_lon], "times": [...],
                  "lats": [...], "lons": [...], "variable": str, "units": str}
    remainder     n_time * n_lat * n_lon IEEE-754 float64 values,
                  little-endian, row-major (time outer, lon inner),
                  NaN = missing

Series files are RFC-4180 CSV with header ``time,x,y``, CRLF line endings,
integer times, and floats in shortest round-trip notation with a ``.``
decimal separator. Both writers are canonical: write(read(f)) reproduces a
canonical file byte for byte, independent of host endianness.
"""

from __future__ import annotations

import csv
import json
import struct

import numpy as np

from .core import GridField
from .errors import GridParseError, SeriesParseError

_HEADER_KEYS = ("dims", "times", "lats", "lons", "variable", "units")
SERIES_HEADER = ("time", "x", "y")


def write_grid(field: GridField, path) -> None:
    """Write a GridField as a flat binary grid file (canonical form)."""
    header = {
        "dims": [int(d) for d in field.shape],
        "times": [int(t) for t in field.times],
        "lats": [float(v) for v in field.lats],
        "lons": [float(v) for v in field.lons],
        "variable": field.variable,
        "units": field.units,
    }
    blob = json.dumps(header, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(struct.pack("<Q", len(blob)))
        f.write(blob)
        f.write(field.values.astype("<f8", copy=False).tobytes(order="C"))


def read_grid(path) -> GridField:
    """Read a flat binary grid file written by write_grid.

    Raises GridParseError on structural problems (truncation, bad JSON,
    missing keys, payload size mismatch); coordinate or value violations
    surface as the usual validation errors.
    """
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 8:
        raise GridParseError(
            f"file is {len(data)} bytes, too short for a header length prefix"
        )
    (header_len,) = struct.unpack("<Q", data[:8])
    if 8 + header_len > len(data):
        raise GridParseError(
            f"header length {header_len} exceeds file size {len(data)}"
        )
    try:
        header = json.loads(data[8 : 8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise GridParseError(f"malformed JSON header: {exc}") from exc
    if not isinstance(header, dict):
        raise GridParseError("header is not a JSON object")
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise GridParseError(f"header is missing keys: {', '.join(missing)}")
    dims = header["dims"]
    if (
        not isinstance(dims, list)
        or len(dims) != 3
        or not all(isinstance(d, int) and d >= 0 for d in dims)
    ):
        raise GridParseError(f"dims must be 3 nonnegative integers, got {dims}")
    n_time, n_lat, n_lon = dims
    for name, n in (("times", n_time), ("lats", n_lat), ("lons", n_lon)):
        if len(header[name]) != n:
            raise GridParseError(
                f"{name} has {len(header[name])} entries but dims say {n}"
            )
    payload = data[8 + header_len :]
    expected = 8 * n_time * n_lat * n_lon
    if len(payload) != expected:
        raise GridParseError(
            f"payload is {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(n_time, n_lat, n_lon)
    return GridField(
        times=header["times"],
        lats=header["lats"],
        lons=header["lons"],
        values=values.astype(np.float64),
        variable=str(header["variable"]),
        units=str(header["units"]),
    )


def write_series(times, x, y, path) -> None:
    """Write aligned (time, x, y) columns as canonical series CSV."""
    times = np.asarray(times, dtype=np.int64).reshape(-1)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if not len(times) == len(x) == len(y):
        raise ValueError(
            f"column lengths differ: {len(times)}, {len(x)}, {len(y)}"
        )
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow(SERIES_HEADER)
        for t, xv, yv in zip(times, x, y):
            writer.writerow([str(int(t)), repr(float(xv)), repr(float(yv))])


def read_series(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a series CSV into (times, x, y) arrays.

    Raises SeriesParseError carrying the 1-based line number of the first
    malformed row (wrong header, wrong field count, or non-numeric token).
    """
    times: list[int] = []
    xs: list[float] = []
    ys: list[float] = []
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesParseError("file is empty, expected header time,x,y",
                                   line=1) from None
        if [h.strip() for h in header] != list(SERIES_HEADER):
            raise SeriesParseError(
                f"expected header time,x,y, got {','.join(header)}", line=1
            )
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 3:
                raise SeriesParseError(
                    f"expected 3 fields, got {len(row)}", line=line
                )
            try:
                times.append(int(row[0]))
                xs.append(float(row[1]))
                ys.append(float(row[2]))
            except ValueError as exc:
                raise SeriesParseError(
                    f"non-numeric value: {exc}", line=line
                ) from exc
    return (
        np.asarray(times, dtype=np.int64),
        np.asarray(xs, dtype=np.float64),
        np.asarray(ys, dtype=np.float64),
    )


__all__ = [
    "SERIES_HEADER",
    "read_grid",
    "read_series",
    "write_grid",
    "write_series",
]
