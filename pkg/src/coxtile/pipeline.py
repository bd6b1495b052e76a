"""End-to-end assembly of wall colorings and tile resolutions for a system.

The full construction: enumerate a ball, identify walls, certify the
palette classes disjoint, peel levels, optionally refine each class by its
tree coloring (nine colors per class), orient walls, and collect the tile
alphabet.  Both the CLI and the acceptance suite drive this module.
"""

from dataclasses import dataclass
from math import cosh, sinh, sqrt

import numpy as np

from .coxeter import CoxeterSystem, enumerate_ball
from .errors import ValidationError
from .tiles import TileAlphabet, build_alphabet, orient_all_plus, orient_alternating
from .walls import WallSet, color_walls, enumerate_walls, peel_levels, wall_coloring


def build_walls(system: CoxeterSystem, radius: int, cap=None):
    ball = enumerate_ball(system, radius, cap=cap)
    return ball, enumerate_walls(ball)


@dataclass
class Resolution:
    """A signed tile system: wall colors, per-class levels, orientation, tiles."""

    wallset: WallSet
    wall_colors: dict  # wall id -> color
    class_wids: dict  # color class -> wall ids (classes the orientation alternates over)
    levels: dict  # color class -> {wall id: level}
    orientation: dict  # wall id -> +1 / -1
    alphabet: TileAlphabet


def _classes(wallset: WallSet, palette: dict, refine: bool):
    classes = color_walls(wallset, palette)
    if not classes.disjoint:
        cid, w1, w2 = classes.violations[0]
        raise ValidationError(
            f"palette invalid at radius {classes.radius}: walls {w1} and {w2} "
            f"of one color meet at chamber {cid}"
        )
    if refine:
        wall_colors, _trees, _palette = wall_coloring(wallset, classes)
        class_wids: dict = {}
        for wid, color in wall_colors.items():
            class_wids.setdefault(color, []).append(wid)
    else:
        wall_colors = classes.color_of
        class_wids = classes.by_color
    return wall_colors, class_wids


def alternating_resolution(
    wallset: WallSet, palette: dict, refine: bool = False, flips: dict | None = None
) -> Resolution:
    """The level-alternating resolution: sign (-1)^level per color class."""
    wall_colors, class_wids = _classes(wallset, palette, refine)
    levels = {cls: peel_levels(wallset, wids) for cls, wids in class_wids.items()}
    orientation = orient_alternating(levels, flips)
    alphabet = build_alphabet(wallset, wall_colors, orientation, provenance="alternating")
    return Resolution(wallset, wall_colors, class_wids, levels, orientation, alphabet)


def all_plus_resolution(wallset: WallSet, palette: dict, refine: bool = False) -> Resolution:
    """The resolution orienting every wall canonically."""
    wall_colors, class_wids = _classes(wallset, palette, refine)
    levels = {cls: peel_levels(wallset, wids) for cls, wids in class_wids.items()}
    orientation = orient_all_plus(wallset)
    alphabet = build_alphabet(wallset, wall_colors, orientation, provenance="all-plus")
    return Resolution(wallset, wall_colors, class_wids, levels, orientation, alphabet)


# -- hyperbolic-plane demo -------------------------------------------------------


@dataclass
class RenderBundle:
    system: CoxeterSystem
    ball: object
    wallset: WallSet
    resolution: Resolution
    polygon: object
    matrices: list
    tiles: list  # placed or deformed
    face_data: list  # per tile, per side: (color, tick tip point) or None


def face_metadata(tiles, ball, wallset, wall_colors, orientation, tick=0.12):
    """Per-side (color, tick-tip) records for rendering.

    The tick points toward the wall's positive side: into the tile when the
    tile sees the face with sign +, away otherwise; computed from the
    tile's own vertices so it applies to deformed tiles unchanged.
    """
    from .hyperbolic import geodesic_point, lorentz_dot, tangent_toward

    data = []
    for tile in tiles:
        cid = ball.index[tile.word]
        verts = tile.vertices
        p = len(verts)
        c = verts.sum(axis=0)
        c = c / sqrt(-lorentz_dot(c, c))
        sides = []
        for k in range(p):
            if (cid, k) not in ball.edges:
                sides.append(None)
                continue
            wid = wallset.edge_wall[wallset.edge_key(cid, k)]
            if wid not in wall_colors or wid not in orientation:
                sides.append(None)
                continue
            seen = orientation[wid] * (-1 if wallset.separates(wid, 0, cid) else 1)
            mid = geodesic_point(verts[k], verts[(k + 1) % p], 0.5)
            u = tangent_toward(mid, c)
            delta = tick * max(1e-9, float(np.linalg.norm(verts[k] - verts[(k + 1) % p])))
            tip = cosh(delta) * mid + seen * sinh(delta) * u
            sides.append((wall_colors[wid], tip))
        data.append(sides)
    return data


def render_bundle(
    n: int,
    radius: int,
    refine: bool = True,
    deform: bool = True,
    epsilon_factor: float = 0.05,
    cap=None,
) -> RenderBundle:
    """Assemble the full hyperbolic-plane demo for the right-angled 2n-gon.

    The ball is enumerated one radius deeper than the rendered tiles so
    every rendered face lies on an identified, colored wall.
    """
    from .hyperbolic import (
        build_polygon,
        default_magnitudes,
        deform_vertices,
        place_tiles,
        reflection_matrices,
    )
    from .walls import alternating_palette

    system = CoxeterSystem.right_angled_polygon(2 * n)
    ball, wallset = build_walls(system, radius + 1, cap=cap)
    res = alternating_resolution(wallset, alternating_palette(system), refine=refine)
    polygon = build_polygon(n)
    matrices = reflection_matrices(polygon)
    placed = place_tiles(ball, polygon, matrices, max_norm=radius)
    tiles = placed
    if deform:
        if refine:
            class_of = lambda color: color[0]
            a_colors = [("a", (i, j)) for i in range(3) for j in range(3)]
            b_colors = [("b", (i, j)) for i in range(3) for j in range(3)]
        else:
            class_of = lambda color: color
            a_colors, b_colors = ["a"], ["b"]
        eps = epsilon_factor * polygon.side_length()
        magnitude = default_magnitudes(a_colors, b_colors, eps)
        tiles = deform_vertices(
            ball, wallset, placed, res.wall_colors, class_of, res.orientation, magnitude
        )
    data = face_metadata(tiles, ball, wallset, res.wall_colors, res.orientation)
    return RenderBundle(system, ball, wallset, res, polygon, matrices, tiles, data)
