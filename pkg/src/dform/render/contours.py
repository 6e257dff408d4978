"""Marching-squares contour extraction.

Cells with any masked corner are skipped.  Level crossings are computed
once per grid edge by linear interpolation and shared by both adjacent
cells, so polyline chains join exactly.  Output is canonicalized for
determinism: closed loops run counter-clockwise starting from their
lexicographically smallest vertex (first point repeated at the end),
open chains start at their smaller endpoint, and polylines are sorted
by starting point.
"""

from __future__ import annotations

import numpy as np

from ..fields import FINITE, Grid2

# cell corners: A=(i,j) B=(i+1,j) C=(i+1,j+1) D=(i,j+1); bits A|B|C|D =
# 1|2|4|8 set when the corner value is above the level.  Edges are
# b(ottom) A-B, r(ight) B-C, t(op) D-C, l(eft) A-D.  Each entry lists
# the separating segments; cases 5 and 10 are saddles resolved by the
# cell-center mean (True entry when the center is above).
_CASES = {
    0: (), 15: (),
    1: (("l", "b"),), 14: (("l", "b"),),
    2: (("b", "r"),), 13: (("b", "r"),),
    3: (("l", "r"),), 12: (("l", "r"),),
    4: (("r", "t"),), 11: (("r", "t"),),
    6: (("b", "t"),), 9: (("b", "t"),),
    7: (("l", "t"),), 8: (("l", "t"),),
}
_SADDLE = {
    (5, True): (("l", "t"), ("b", "r")),
    (5, False): (("l", "b"), ("r", "t")),
    (10, True): (("b", "l"), ("r", "t")),
    (10, False): (("b", "r"), ("t", "l")),
}


def _edge_key(edge: str, i: int, j: int):
    if edge == "b":
        return ("h", i, j)
    if edge == "t":
        return ("h", i, j + 1)
    if edge == "l":
        return ("v", i, j)
    return ("v", i + 1, j)


def _crossing(grid: Grid2, values: np.ndarray, level: float, key):
    kind, i, j = key
    v0 = values[i, j]
    if kind == "h":
        v1 = values[i + 1, j]
        t = (level - v0) / (v1 - v0)
        return (grid.x[i] + t * (grid.x[i + 1] - grid.x[i]), grid.y[j])
    v1 = values[i, j + 1]
    t = (level - v0) / (v1 - v0)
    return (grid.x[i], grid.y[j] + t * (grid.y[j + 1] - grid.y[j]))


def _signed_area(pts) -> float:
    s = 0.0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        s += x0 * y1 - x1 * y0
    x0, y0 = pts[-1]
    x1, y1 = pts[0]
    s += x0 * y1 - x1 * y0
    return 0.5 * s


def _canonical_loop(pts):
    """Rotate a closed chain to its smallest vertex, run it CCW, close it."""
    if _signed_area(pts) < 0:
        pts = pts[::-1]
    k = min(range(len(pts)), key=lambda i: pts[i])
    pts = pts[k:] + pts[:k]
    return pts + [pts[0]]


def contour_lines(grid: Grid2, values: np.ndarray, mask: np.ndarray,
                  level: float) -> list[list[tuple[float, float]]]:
    """All polylines of the level set, each a list of (x, y) vertices."""
    above = values > level
    ok = mask == FINITE
    segments = []
    for i in range(grid.nx - 1):
        for j in range(grid.ny - 1):
            if not (ok[i, j] and ok[i + 1, j] and ok[i + 1, j + 1] and ok[i, j + 1]):
                continue
            case = (int(above[i, j]) | int(above[i + 1, j]) << 1
                    | int(above[i + 1, j + 1]) << 2 | int(above[i, j + 1]) << 3)
            if case in (5, 10):
                center = 0.25 * (values[i, j] + values[i + 1, j]
                                 + values[i + 1, j + 1] + values[i, j + 1])
                pairs = _SADDLE[(case, bool(center > level))]
            else:
                pairs = _CASES[case]
            for e1, e2 in pairs:
                segments.append((_edge_key(e1, i, j), _edge_key(e2, i, j)))

    nodes = {}
    adjacency = {}
    for k1, k2 in segments:
        for k in (k1, k2):
            if k not in nodes:
                nodes[k] = _crossing(grid, values, level, k)
                adjacency[k] = []
        adjacency[k1].append(k2)
        adjacency[k2].append(k1)

    visited = set()

    def walk(start, first_next):
        chain = [start, first_next]
        visited.add(start)
        visited.add(first_next)
        while True:
            nxt = [n for n in adjacency[chain[-1]] if n != chain[-2]]
            nxt = [n for n in nxt if n not in visited or n == chain[0]]
            if not nxt:
                return chain, False
            if nxt[0] == chain[0]:
                return chain, True
            visited.add(nxt[0])
            chain.append(nxt[0])

    polylines = []
    # open chains first: start from every degree-1 node
    for key in adjacency:
        if key in visited or len(adjacency[key]) != 1:
            continue
        chain, _ = walk(key, adjacency[key][0])
        pts = [nodes[k] for k in chain]
        if pts[-1] < pts[0]:
            pts = pts[::-1]
        polylines.append(pts)
    # remaining nodes all have degree 2: closed loops
    for key in adjacency:
        if key in visited:
            continue
        chain, closed = walk(key, adjacency[key][0])
        pts = [nodes[k] for k in chain]
        polylines.append(_canonical_loop(pts) if closed else pts)
    polylines.sort(key=lambda pts: (pts[0], len(pts)))
    return polylines
