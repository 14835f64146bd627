"""On-disk formats: CSV for grid fields, JSON for tables.

Grid CSV layout: '#'-prefixed header lines carrying model parameters, the
grid specification, normalization and the package version, then one
`q,p,W` row per node (17 significant digits, row-major over q then p).
Complex-valued fields write `q,p,re_W,im_W` and set `complex=1` in the
header.  Byte output is deterministic for a fixed field and metadata.
"""

from __future__ import annotations

import io
import json
from dataclasses import asdict

import numpy as np

from . import __version__
from .grid import GridField, GridSpec

_FMT = "{:.16e}"


def _header_lines(field: GridField, metadata: dict, is_complex: bool) -> list:
    spec = field.spec
    meta = " ".join(f"{k}={metadata[k]}" for k in sorted(metadata))
    lines = [
        "# moyal-grid v1",
        f"# version={__version__}",
    ]
    if meta:
        lines.append(f"# {meta}")
    lines.append(
        "# " + " ".join([
            f"qmin={_FMT.format(spec.qmin)}", f"qmax={_FMT.format(spec.qmax)}",
            f"pmin={_FMT.format(spec.pmin)}", f"pmax={_FMT.format(spec.pmax)}",
            f"nq={spec.nq}", f"np={spec.np}", f"hbar={_FMT.format(field.hbar)}",
        ]))
    lines.append(f"# complex={int(is_complex)}")
    for w in field.warnings:
        lines.append(f"# warning={w}")
    lines.append("# columns=" + ("q,p,re_W,im_W" if is_complex else "q,p,W"))
    return lines


def write_grid_csv(field: GridField, target, metadata: dict = None) -> None:
    """Write a GridField to a path or text file object."""
    metadata = metadata or {}
    is_complex = bool(np.abs(field.values.imag).max()
                      > 1e-12 * max(np.abs(field.values).max(), 1e-300))
    out = io.StringIO()
    for line in _header_lines(field, metadata, is_complex):
        out.write(line + "\n")
    qs, ps = field.spec.qs, field.spec.ps
    vals = field.values
    for i in range(field.spec.nq):
        qi = _FMT.format(qs[i])
        row = vals[i]
        for j in range(field.spec.np):
            if is_complex:
                out.write(f"{qi},{_FMT.format(ps[j])},"
                          f"{_FMT.format(row[j].real)},"
                          f"{_FMT.format(row[j].imag)}\n")
            else:
                out.write(f"{qi},{_FMT.format(ps[j])},"
                          f"{_FMT.format(row[j].real)}\n")
    text = out.getvalue()
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)


def read_grid_csv(source) -> tuple:
    """Read a GridField CSV; returns (GridField, metadata dict)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    meta = {}
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            for tok in line[1:].strip().split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            continue
        rows.append([float(t) for t in line.split(",")])
    data = np.asarray(rows)
    spec = GridSpec(float(meta["qmin"]), float(meta["qmax"]),
                    float(meta["pmin"]), float(meta["pmax"]),
                    int(meta["nq"]), int(meta["np"]))
    if data.shape[0] != spec.nq * spec.np:
        raise ValueError("row count does not match the declared grid")
    if int(meta.get("complex", "0")):
        values = (data[:, 2] + 1j * data[:, 3]).reshape(spec.nq, spec.np)
    else:
        values = data[:, 2].astype(complex).reshape(spec.nq, spec.np)
    field = GridField(spec, values, float(meta.get("hbar", "1")))
    return field, meta


def records_to_json(records, extra: dict = None) -> str:
    """Negativity or spectrum records as a deterministic JSON document."""
    def encode(rec):
        if hasattr(rec, "__dataclass_fields__"):
            return asdict(rec)
        return rec

    doc = {"version": __version__}
    if extra:
        doc.update(extra)
    doc["records"] = [encode(r) for r in records]
    return json.dumps(doc, indent=2) + "\n"
