"""Hyperbolic-plane realization: right-angled polygons, reflections, tiling,
vertex deformation, convexity checks, and SVG output.

All geometry lives in the hyperboloid model (x, y, z) with x^2+y^2-z^2 = -1,
z > 0, where isometries are linear; the Klein disk is used for convexity
(geodesics are chords there) and the Poincare disk only at render time.
"""

from dataclasses import dataclass
from math import acos, acosh, cos, cosh, pi, sin, sinh, sqrt

import numpy as np

from .errors import GeometryError

J = np.diag([1.0, 1.0, -1.0])
BASEPOINT = np.array([0.0, 0.0, 1.0])


def lorentz_dot(u, v) -> float:
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


def hyp_dist(u, v) -> float:
    return acosh(max(1.0, -lorentz_dot(u, v)))


def on_hyperboloid(p, tol=1e-8) -> bool:
    return abs(lorentz_dot(p, p) + 1.0) < tol and p[2] > 0


def polar_point(r: float, theta: float) -> np.ndarray:
    return np.array([sinh(r) * cos(theta), sinh(r) * sin(theta), cosh(r)])


def to_klein(p) -> tuple[float, float]:
    return (p[0] / p[2], p[1] / p[2])


def to_poincare(p) -> tuple[float, float]:
    return (p[0] / (1.0 + p[2]), p[1] / (1.0 + p[2]))


def tangent_toward(base, target) -> np.ndarray:
    """Unit tangent at base pointing along the geodesic to target."""
    u = target + lorentz_dot(target, base) * base
    nn = lorentz_dot(u, u)
    if nn <= 0:
        raise GeometryError("degenerate tangent direction")
    return u / sqrt(nn)


def angle_at(b, a, c) -> float:
    """Interior angle at b of the geodesic triangle a-b-c."""
    ta = tangent_toward(b, a)
    tc = tangent_toward(b, c)
    return acos(max(-1.0, min(1.0, lorentz_dot(ta, tc))))


def geodesic_point(a, b, t: float) -> np.ndarray:
    d = hyp_dist(a, b)
    if d < 1e-15:
        return a.copy()
    return (sinh((1.0 - t) * d) * a + sinh(t * d) * b) / sinh(d)


# -- the base polygon -----------------------------------------------------------


@dataclass
class HPolygon:
    """Counterclockwise vertex list on the hyperboloid."""

    vertices: np.ndarray  # shape (p, 3)

    @property
    def p(self) -> int:
        return len(self.vertices)

    def side(self, k: int):
        return self.vertices[k], self.vertices[(k + 1) % self.p]

    def angles(self):
        p = self.p
        return [
            angle_at(self.vertices[k], self.vertices[k - 1], self.vertices[(k + 1) % p])
            for k in range(p)
        ]

    def side_length(self) -> float:
        return hyp_dist(self.vertices[0], self.vertices[1])


def _regular_polygon(p: int, radius: float) -> HPolygon:
    return HPolygon(np.array([polar_point(radius, 2.0 * pi * k / p) for k in range(p)]))


def build_polygon(n: int) -> HPolygon:
    """Regular right-angled 2n-gon centered at the basepoint.

    The circumradius is found by bisection on the interior angle, which
    decreases from the Euclidean limit toward zero as the radius grows; a
    right angle needs 2n >= 5.
    """
    p = 2 * n
    if p <= 4:
        raise GeometryError(f"no right-angled regular {p}-gon exists in the hyperbolic plane")
    target = pi / 2.0

    def angle_of(radius):
        return _regular_polygon(p, radius).angles()[0]

    lo, hi = 1e-9, 1.0
    while angle_of(hi) > target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if angle_of(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return _regular_polygon(p, 0.5 * (lo + hi))


# -- reflections ------------------------------------------------------------------


def side_normal(a, b) -> np.ndarray:
    """Unit spacelike Lorentz normal of the geodesic through a and b."""
    n = J @ np.cross(a, b)
    nn = lorentz_dot(n, n)
    if nn <= 1e-12:
        raise GeometryError("degenerate side normal")
    return n / sqrt(nn)


def reflection_matrix(normal) -> np.ndarray:
    return np.eye(3) - 2.0 * np.outer(normal, J @ normal)


def reflection_matrices(polygon: HPolygon) -> list[np.ndarray]:
    """One Lorentz reflection per side, side k joining vertices k and k+1."""
    return [reflection_matrix(side_normal(*polygon.side(k))) for k in range(polygon.p)]


def preserves_lorentz_form(M, tol=1e-9) -> bool:
    return bool(np.max(np.abs(M.T @ J @ M - J)) < tol) and M[2, 2] > 0


def lorentz_renormalize(M) -> np.ndarray:
    """Gram-Schmidt in the Lorentz form, keeping the upper sheet."""
    c0, c1, c2 = M[:, 0].copy(), M[:, 1].copy(), M[:, 2].copy()
    c0 /= sqrt(lorentz_dot(c0, c0))
    c1 -= lorentz_dot(c1, c0) * c0
    c1 /= sqrt(lorentz_dot(c1, c1))
    c2 -= lorentz_dot(c2, c0) * c0
    c2 -= lorentz_dot(c2, c1) * c1
    c2 /= sqrt(-lorentz_dot(c2, c2))
    if c2[2] < 0:
        c2 = -c2
    return np.column_stack([c0, c1, c2])


# -- tile placement ----------------------------------------------------------------


@dataclass
class PlacedTile:
    word: tuple
    matrix: np.ndarray
    vertices: np.ndarray


def place_tiles(ball, polygon: HPolygon, matrices, max_norm=None) -> list[PlacedTile]:
    """One placed polygon per ball element, by evaluating its normal form
    in the side reflections; matrices are re-orthonormalized every six
    letters to keep drift below tolerance."""
    mats = {(): np.eye(3)}
    placed = []
    limit = ball.radius if max_norm is None else max_norm
    for eid in range(len(ball.words)):
        w = ball.words[eid]
        if len(w) > limit:
            continue
        if w:
            M = mats[w[:-1]] @ matrices[w[-1]]
            if len(w) % 6 == 0:
                M = lorentz_renormalize(M)
            mats[w] = M
        placed.append(PlacedTile(w, mats[w], (mats[w] @ polygon.vertices.T).T))
    return placed


# -- convexity and simplicity --------------------------------------------------------


def _segments_intersect(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return (o1 * o2 < 0) and (o3 * o4 < 0)


def is_simple(vertices) -> bool:
    pts = [to_klein(v) for v in vertices]
    p = len(pts)
    for i in range(p):
        for j in range(i + 1, p):
            if j in (i, (i + 1) % p) or (j + 1) % p == i:
                continue
            if _segments_intersect(pts[i], pts[(i + 1) % p], pts[j], pts[(j + 1) % p]):
                return False
    return True


def convexity_check(vertices, tol=1e-12) -> bool:
    """Hyperbolic convexity via the Klein disk, where geodesics are chords.

    Raises GeometryError when the polygon is not simple.
    """
    if not is_simple(vertices):
        raise GeometryError("polygon is not simple")
    pts = [to_klein(v) for v in vertices]
    p = len(pts)
    signs = set()
    for i in range(p):
        a, b, c = pts[i], pts[(i + 1) % p], pts[(i + 2) % p]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cross) > tol:
            signs.add(cross > 0)
    return len(signs) <= 1


# -- overlap sampling ------------------------------------------------------------------


def _signed_area(pts) -> float:
    p = len(pts)
    return 0.5 * sum(
        pts[i][0] * pts[(i + 1) % p][1] - pts[(i + 1) % p][0] * pts[i][1] for i in range(p)
    )


def _ccw(pts):
    return pts if _signed_area(pts) >= 0 else list(reversed(pts))


def _klein_contains(pts, q, margin=1e-9) -> bool:
    # convex counterclockwise polygon in the Klein disk
    p = len(pts)
    for i in range(p):
        a, b = pts[i], pts[(i + 1) % p]
        cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        if cross < margin:
            return False
    return True


def sample_overlap_fraction(tiles, samples_per_tile=40, seed=0, margin=1e-6) -> float:
    """Largest sampled interior-overlap fraction over nearby tile pairs.

    Reflected placements come out clockwise in the Klein disk, so rings are
    reoriented before the half-plane containment test.
    """
    rng = np.random.RandomState(seed)

    def center_of(t):
        c = t.vertices.sum(axis=0)
        return c / sqrt(-lorentz_dot(c, c))

    centers = [center_of(t) for t in tiles]
    radius = max(hyp_dist(tiles[0].vertices[k], centers[0]) for k in range(len(tiles[0].vertices)))
    klein = [_ccw([to_klein(v) for v in t.vertices]) for t in tiles]
    samples = []
    for t, ct in zip(tiles, centers):
        pts = [to_klein(v) for v in t.vertices]
        c = to_klein(ct)
        sams = []
        for _ in range(samples_per_tile):
            i = rng.randint(0, len(pts))
            u, v = rng.random_sample(2)
            if u + v > 1:
                u, v = 1 - u, 1 - v
            a, b = pts[i], pts[(i + 1) % len(pts)]
            sams.append(
                (
                    c[0] + u * (a[0] - c[0]) + v * (b[0] - c[0]),
                    c[1] + u * (a[1] - c[1]) + v * (b[1] - c[1]),
                )
            )
        samples.append(sams)
    worst = 0.0
    for i in range(len(tiles)):
        for j in range(i + 1, len(tiles)):
            if hyp_dist(centers[i], centers[j]) > 2.05 * radius:
                continue
            hits = sum(1 for q in samples[i] if _klein_contains(klein[j], q, margin))
            hits += sum(1 for q in samples[j] if _klein_contains(klein[i], q, margin))
            worst = max(worst, hits / (2.0 * samples_per_tile))
    return worst


# -- vertex deformation -------------------------------------------------------------------


@dataclass
class DeformedTile:
    word: tuple
    vertices: np.ndarray
    vertex_keys: list


def default_magnitudes(a_colors, b_colors, epsilon: float):
    """d for the (i, j)-th color pair: epsilon * (9 i + j + 1) / 100.

    With nine colors per class all 81 values are distinct.
    """
    a_index = {c: i for i, c in enumerate(sorted(a_colors, key=str))}
    b_index = {c: i for i, c in enumerate(sorted(b_colors, key=str))}

    def magnitude(ca, cb):
        return epsilon * (9 * a_index[ca] + b_index[cb] + 1) / 100.0

    return magnitude


def vertex_orbit_key(system, word, k: int):
    """Canonical id of the geometric vertex k of chamber `word`.

    The four chambers around the vertex are g, g s_{k-1}, g s_k and
    g s_{k-1} s_k, and each sees the point as its own vertex k; the
    ShortLex-least of the four words identifies the point combinatorially.
    """
    p = system.rank
    sa, sb = (k - 1) % p, k
    orbit = [
        tuple(word),
        system.mul(word, (sa,)),
        system.mul(word, (sb,)),
        system.mul(word, (sa, sb)),
    ]
    return (min(orbit, key=lambda w: (len(w), w)), k)


def deform_vertices(
    ball,
    wallset,
    placed,
    wall_colors: dict,
    class_of_color,
    orientation: dict,
    magnitude,
    check_simple: bool = True,
) -> list[DeformedTile]:
    """Move every geometric vertex along the bisector of the positive
    quadrant of its two oriented walls, by the magnitude assigned to the
    color pair; each vertex is displaced once, so tiles stay face to face.
    """
    system = ball.system
    p = system.rank
    displaced: dict = {}
    out = []
    for tile in placed:
        cid = ball.index[tile.word]
        new_vertices = []
        keys = []
        for k in range(p):
            key = vertex_orbit_key(system, tile.word, k)
            keys.append(key)
            if key not in displaced:
                displaced[key] = _displace_vertex(
                    ball, wallset, tile, cid, k, wall_colors, class_of_color,
                    orientation, magnitude,
                )
            new_vertices.append(displaced[key])
        verts = np.array(new_vertices)
        if check_simple and not is_simple(verts):
            bad = keys[0]
            raise GeometryError(f"deformation breaks simplicity near vertex {bad}")
        out.append(DeformedTile(tile.word, verts, keys))
    return out


def _displace_vertex(ball, wallset, tile, cid, k, wall_colors, class_of_color, orientation, magnitude):
    p = ball.system.rank
    sa, sb = (k - 1) % p, k
    point = tile.vertices[k]
    labels = {}
    direction = np.zeros(3)
    for s in (sa, sb):
        wid = wallset.wall_of_face(cid, s)
        a, b = tile.vertices[s], tile.vertices[(s + 1) % p]
        n = side_normal(a, b)
        base_side = lorentz_dot(BASEPOINT, n)
        n_pos = n * (1.0 if base_side > 0 else -1.0) * orientation[wid]
        direction += n_pos
        color = wall_colors[wid]
        labels[class_of_color(color)] = color
    if set(labels) != {"a", "b"}:
        raise GeometryError(f"vertex of chamber {tile.word} not an a/b crossing")
    d = magnitude(labels["a"], labels["b"])
    if d == 0:
        return point
    nn = lorentz_dot(direction, direction)
    if nn <= 0:
        raise GeometryError("degenerate deformation direction")
    u = direction / sqrt(nn)
    u = u + lorentz_dot(u, point) * point  # project to the tangent plane
    u /= sqrt(lorentz_dot(u, u))
    return cosh(d) * point + sinh(d) * u


def max_convex_epsilon(probe, lo=0.0, hi=1.0, steps=24) -> float:
    """Bisect for the largest epsilon whose deformation stays convex.

    `probe` maps epsilon to True (all tiles convex) or False; reported, not
    derived from any bound.
    """
    if not probe(lo):
        return 0.0
    while probe(hi):
        hi *= 2.0
        if hi > 64:
            return hi
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if probe(mid):
            lo = mid
        else:
            hi = mid
    return lo


# -- SVG ---------------------------------------------------------------------------------


_SVG_COLORS = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
]


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _sample_edge(a, b, tol=0.005):
    """Poincare-disk polyline for the geodesic a-b with chordal error <= tol."""
    pts = [(0.0, a), (1.0, b)]
    out = [to_poincare(a)]

    def recurse(t0, p0, t1, p1, depth):
        tm = 0.5 * (t0 + t1)
        pm = geodesic_point(a, b, tm)
        q0, q1, qm = to_poincare(p0), to_poincare(p1), to_poincare(pm)
        mid = ((q0[0] + q1[0]) / 2, (q0[1] + q1[1]) / 2)
        err = sqrt((mid[0] - qm[0]) ** 2 + (mid[1] - qm[1]) ** 2)
        if err > tol and depth < 10:
            recurse(t0, p0, tm, pm, depth + 1)
            out.append(qm)
            recurse(tm, pm, t1, p1, depth + 1)

    recurse(0.0, a, 1.0, b, 0)
    out.append(to_poincare(b))
    return out


def render_svg(tiles, face_data=None, stroke_width=0.004, tick_length=0.02) -> str:
    """Poincare-disk SVG of placed or deformed tiles.

    `face_data[i][k]` may carry (color, seen_sign, tick_direction_point) for
    side k of tile i: sides are stroked by color and a tick is drawn from
    the side midpoint toward the wall's positive side.  Deterministic: no
    timestamps, fixed float formatting.
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.10 2.10">',
        f'<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" stroke-width="{_fmt(stroke_width)}"/>',
    ]
    color_index: dict = {}

    def css(color):
        if color not in color_index:
            color_index[color] = _SVG_COLORS[len(color_index) % len(_SVG_COLORS)]
        return color_index[color]

    for i, tile in enumerate(tiles):
        verts = tile.vertices
        p = len(verts)
        word = ".".join(str(s) for s in tile.word) or "e"
        sides = face_data[i] if face_data is not None else [None] * p
        colors_attr = ",".join(
            "" if sd is None else str(sd[0]) for sd in sides
        )
        lines.append(f'<g data-word="{word}" data-colors="{colors_attr}">')
        outline = []
        for k in range(p):
            outline.extend(_sample_edge(verts[k], verts[(k + 1) % p])[:-1])
        path = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in outline) + " Z"
        lines.append(f'<path d="{path}" fill="#ffffff" fill-opacity="0.0" stroke="none"/>')
        for k in range(p):
            a, b = verts[k], verts[(k + 1) % p]
            pts = _sample_edge(a, b)
            d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts)
            sd = sides[k]
            stroke = "#444444" if sd is None else css(sd[0])
            lines.append(
                f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"/>'
            )
            if sd is not None and sd[1] is not None:
                mid = geodesic_point(a, b, 0.5)
                tip = sd[1]
                q0 = to_poincare(mid)
                q1 = to_poincare(tip)
                dx, dy = q1[0] - q0[0], q1[1] - q0[1]
                norm = sqrt(dx * dx + dy * dy) or 1.0
                scale = tick_length * (1.0 - (q0[0] ** 2 + q0[1] ** 2)) / norm
                lines.append(
                    f'<line x1="{_fmt(q0[0])}" y1="{_fmt(q0[1])}" '
                    f'x2="{_fmt(q0[0] + dx * scale)}" y2="{_fmt(q0[1] + dy * scale)}" '
                    f'stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"/>'
                )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
