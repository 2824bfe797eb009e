"""Independent overlap-radius oracle for constant-gradient fields.

Develops faces with 50-digit complex arithmetic (rotation by law-of-cosines angles)
and measures pairwise intersections with shapely. Prints JSON.
"""
import json
import sys
from collections import deque

import mpmath as mp
from shapely.geometry import Polygon
from shapely.strtree import STRtree

mp.mp.dps = 50
DIRS = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def hexdist(v):
    return max(abs(v[0]), abs(v[1]), abs(v[0] + v[1]))


def faces_in_ball(R):
    out = []
    for m in range(-R - 1, R + 2):
        for n in range(-R - 1, R + 2):
            up = [(m, n), (m + 1, n), (m, n + 1)]
            down = [(m + 1, n), (m + 1, n + 1), (m, n + 1)]
            for f in (up, down):
                if all(hexdist(v) <= R for v in f):
                    out.append(tuple(f))
    return out


def develop(M, N, R):
    u = lambda v: M * v[0] + N * v[1]
    length = lambda a, b: mp.e ** (u(a) + u(b))
    faces = faces_in_ball(R)
    by_edge = {}
    for f in faces:
        for i in range(3):
            by_edge[(f[i], f[(i + 1) % 3])] = f
    start = ((0, 0), (1, 0), (0, 1))
    pos = {}
    placed = {}

    def third(p, q, lpq, lpz, lqz):
        cosang = (lpq ** 2 + lpz ** 2 - lqz ** 2) / (2 * lpq * lpz)
        ang = mp.acos(max(-1, min(1, cosang)))
        return p + (q - p) / abs(q - p) * lpz * mp.expj(ang)

    a, b, c = start
    pa = mp.mpc(0)
    pb = mp.mpc(length(a, b))
    placed[start] = (pa, pb, third(pa, pb, length(a, b), length(a, c), length(b, c)))
    queue = deque([start])
    while queue:
        f = queue.popleft()
        cs = placed[f]
        for i in range(3):
            x, y = f[i], f[(i + 1) % 3]
            g = by_edge.get((y, x))
            if g is None or g in placed:
                continue
            k = g.index(y)
            z = g[(k + 2) % 3]
            py, px = cs[(i + 1) % 3], cs[i]
            pz = third(py, px, length(x, y), length(y, z), length(x, z))
            corners = {y: py, x: px, z: pz}
            placed[g] = tuple(corners[w] for w in g)
            queue.append(g)
    return placed


def has_overlap(M, N, R):
    placed = develop(M, N, R)
    # GEOS misbehaves on ~1e-49 coordinates, so snap to 12 decimals.
    polys = [Polygon([(round(float(p.real), 12), round(float(p.imag), 12)) for p in cs]) for cs in placed.values()]
    minx = min(b.bounds[0] for b in polys)
    maxx = max(b.bounds[2] for b in polys)
    miny = min(b.bounds[1] for b in polys)
    maxy = max(b.bounds[3] for b in polys)
    threshold = 1e-12 * ((maxx - minx) ** 2 + (maxy - miny) ** 2)
    tree = STRtree(polys)
    for i, p in enumerate(polys):
        for j in tree.query(p):
            if j > i and p.intersection(polys[j]).area > threshold:
                return True
    return False


def overlap_radius(M, N, R_max):
    for R in range(1, R_max + 1):
        if has_overlap(M, N, R):
            return R
    return None


if __name__ == "__main__":
    cases = [(0.1, 0.0), (0.2, 0.0), (0.3, 0.0), (0.5, 0.0), (0.2, 0.1), (0.0, 0.0)]
    R_max = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    out = [{"M": M, "N": N, "R_max": R_max, "R": overlap_radius(M, N, R_max)} for M, N in cases]
    print(json.dumps({"overlap_radius": out}, indent=2))
