"""CSV and JSON serialisation of fields, contour sets and reports.

Floats are written with 17 significant digits so every value reads back
bit-for-bit; config dictionaries are emitted with sorted keys so identical
runs give identical bytes.
"""

import csv
import io
import json
import math

import numpy as np

from .contours import ContourSet
from .grid import Field, Grid, Quantity


def _num(v):
    return format(float(v), ".17g")


def _grid_spec(grid):
    return "%s:%s:%s:%s:%dx%d" % (_num(grid.x_min), _num(grid.x_max),
                                  _num(grid.y_min), _num(grid.y_max),
                                  grid.nx, grid.ny)


def dumps_json(obj):
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def field_to_csv(field, config=None):
    """Comment lines (config, grid, t, quantity), then ``x,y,value`` rows
    with x varying slowest. Masked nodes are written as ``nan``."""
    buf = io.StringIO()
    buf.write("# config: %s\n" % json.dumps(config or {}, sort_keys=True))
    buf.write("# grid: %s\n" % _grid_spec(field.grid))
    buf.write("# t: %s\n" % _num(field.t))
    buf.write("# quantity: %s\n" % field.quantity.value)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "value"])
    xs, ys = field.grid.x, field.grid.y
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            value = "nan" if field.mask[i, j] else _num(field.values[i, j])
            writer.writerow([_num(x), _num(y), value])
    return buf.getvalue()


def field_from_csv(text):
    """Inverse of :func:`field_to_csv`; returns ``(field, config)``."""
    meta = {}
    rows = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
        elif line and not line.startswith("x,"):
            rows.append(line)
    grid = Grid.parse(meta["grid"])
    values = np.array([float(r.split(",")[2]) for r in rows], dtype=float)
    values = values.reshape(grid.nx, grid.ny)
    field = Field(grid, float(meta["t"]), values, Quantity(meta["quantity"]),
                  ~np.isfinite(values))
    return field, json.loads(meta.get("config", "{}"))


def field_to_dict(field, config=None):
    values = [[None if m else float(v) for v, m in zip(row, mrow)]
              for row, mrow in zip(field.values, field.mask)]
    return {"config": config or {}, "grid": field.grid.to_dict(),
            "t": float(field.t), "quantity": field.quantity.value,
            "values": values, "mask": field.mask.tolist()}


def field_to_json(field, config=None):
    return dumps_json(field_to_dict(field, config))


def field_from_json(text):
    d = json.loads(text)
    grid = Grid.from_dict(d["grid"])
    values = np.array([[math.nan if v is None else v for v in row]
                       for row in d["values"]], dtype=float)
    field = Field(grid, float(d["t"]), values, Quantity(d["quantity"]),
                  np.array(d["mask"], dtype=bool))
    return field, d.get("config", {})


def read_field(text):
    """Read a field written in either format."""
    return field_from_json(text) if text.lstrip().startswith("{") else field_from_csv(text)


def contours_to_dict(contour_sets, t=None, config=None):
    return {"config": config or {}, "t": None if t is None else float(t),
            "contours": [c.to_dict() for c in contour_sets]}


def contours_to_json(contour_sets, t=None, config=None):
    return dumps_json(contours_to_dict(contour_sets, t, config))


def contours_to_csv(contour_sets, t=None, config=None):
    """One row per vertex: ``level,polyline,closed,x,y``."""
    buf = io.StringIO()
    buf.write("# config: %s\n" % json.dumps(config or {}, sort_keys=True))
    if t is not None:
        buf.write("# t: %s\n" % _num(t))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["level", "polyline", "closed", "x", "y"])
    for cs in contour_sets:
        for n, line in enumerate(cs.polylines):
            for x, y in line.points:
                writer.writerow([_num(cs.level), n, int(line.closed), _num(x), _num(y)])
    return buf.getvalue()


def contours_from_json(text):
    d = json.loads(text)
    return [ContourSet.from_dict(c) for c in d["contours"]], d.get("config", {})
