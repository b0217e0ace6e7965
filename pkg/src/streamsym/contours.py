"""Iso-lines of gridded fields by marching squares."""

from dataclasses import dataclass, field
import warnings

import numpy as np

DEFAULT_LEVEL_COUNT = 9


@dataclass
class Polyline:
    points: np.ndarray
    closed: bool

    def to_dict(self):
        return {"closed": self.closed,
                "points": [[float(x), float(y)] for x, y in self.points]}


@dataclass
class ContourSet:
    level: float
    polylines: list = field(default_factory=list)

    def to_dict(self):
        return {"level": float(self.level),
                "polylines": [p.to_dict() for p in self.polylines]}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["level"]),
                   [Polyline(np.array(p["points"], dtype=float).reshape(-1, 2),
                             bool(p["closed"])) for p in d["polylines"]])


def default_levels(field_, count=DEFAULT_LEVEL_COUNT):
    """``count`` levels evenly spaced between the 5th and 95th percentiles
    of the unmasked samples."""
    data = field_.unmasked
    if data.size == 0:
        return []
    lo, hi = np.percentile(data, [5.0, 95.0])
    return [float(v) for v in np.linspace(lo, hi, count)]


# edge ids: ("h", i, j) joins nodes (i, j)-(i+1, j); ("v", i, j) joins (i, j)-(i, j+1)
def _cell_edges(i, j):
    return {"B": ("h", i, j), "R": ("v", i + 1, j),
            "T": ("h", i, j + 1), "L": ("v", i, j)}


def _segments_for_level(values, blocked, level):
    above = values > level
    c0, c1 = above[:-1, :-1], above[1:, :-1]
    c2, c3 = above[1:, 1:], above[:-1, 1:]
    code = c0 * 1 + c1 * 2 + c2 * 4 + c3 * 8
    active = (code != 0) & (code != 15) & ~blocked
    segments = []
    for i, j in zip(*np.nonzero(active)):
        e = _cell_edges(i, j)
        corners = (c0[i, j], c1[i, j], c2[i, j], c3[i, j])
        crossed = [name for name, (a, b) in
                   (("B", (0, 1)), ("R", (1, 2)), ("T", (3, 2)), ("L", (0, 3)))
                   if corners[a] != corners[b]]
        if len(crossed) == 2:
            segments.append((e[crossed[0]], e[crossed[1]]))
            continue
        # saddle: the cell-centre average decides which diagonal is joined
        centre = values[i:i + 2, j:j + 2].mean() > level
        if centre == corners[0]:
            segments += [(e["B"], e["R"]), (e["T"], e["L"])]
        else:
            segments += [(e["L"], e["B"]), (e["R"], e["T"])]
    return segments


def _chain(segments):
    """Join segments sharing an edge into maximal polylines of edge ids."""
    touching = {}
    for n, (a, b) in enumerate(segments):
        touching.setdefault(a, []).append(n)
        touching.setdefault(b, []).append(n)
    used = [False] * len(segments)

    def walk(start_edge, first_seg):
        path = [start_edge]
        edge, seg = start_edge, first_seg
        while seg is not None:
            used[seg] = True
            a, b = segments[seg]
            edge = b if a == edge else a
            path.append(edge)
            seg = next((s for s in touching[edge] if not used[s]), None)
        return path

    chains = []
    ends = sorted(e for e, segs in touching.items() if len(segs) == 1)
    for e in ends:
        seg = touching[e][0]
        if not used[seg]:
            chains.append((walk(e, seg), False))
    for n in range(len(segments)):
        if not used[n]:
            path = walk(segments[n][0], n)
            chains.append((path[:-1] if path[-1] == path[0] else path,
                           path[-1] == path[0]))
    return chains


def _vertex(edge, values, xs, ys, level):
    kind, i, j = edge
    a = values[i, j]
    if kind == "h":
        b = values[i + 1, j]
        w = (level - a) / (b - a)
        return xs[i] + w * (xs[i + 1] - xs[i]), ys[j]
    b = values[i, j + 1]
    w = (level - a) / (b - a)
    return xs[i], ys[j] + w * (ys[j + 1] - ys[j])


def extract_contours(field_, levels=DEFAULT_LEVEL_COUNT):
    """One ContourSet per level. ``levels`` may be a count (see
    ``default_levels``) or explicit values. Cells touching a masked node
    are skipped."""
    mask = np.asarray(field_.mask, dtype=bool)
    if mask.all():
        warnings.warn("field is fully masked; no contours extracted")
        return []
    if np.isscalar(levels) and float(levels).is_integer() and not isinstance(levels, float):
        levels = default_levels(field_, int(levels))
    values = np.where(mask, 0.0, field_.values)
    blocked = mask[:-1, :-1] | mask[1:, :-1] | mask[1:, 1:] | mask[:-1, 1:]
    xs, ys = field_.grid.x, field_.grid.y
    out = []
    for level in levels:
        level = float(level)
        lines = []
        for path, closed in _chain(_segments_for_level(values, blocked, level)):
            pts = np.array([_vertex(e, values, xs, ys, level) for e in path])
            lines.append(Polyline(pts, closed))
        out.append(ContourSet(level, lines))
    return out
