"""Tile alphabets from wall colorings and orientations; exact balance tests.

A tile records the multiset of (color, sign) face labels a chamber sees.
The sign a chamber sees on a face is the wall's orientation times the side
the chamber is on: with the canonical orientation the base chamber's side
is positive.  The opposition map flips signs, weight functions are
antisymmetric, and the classifier decides, in exact rational arithmetic,
whether some weight makes every tile sum positive (unbalanced), whether a
nontrivial weight keeps every sum nonnegative (semibalanced), or whether
the nonnegativity cone is {0} (strictly balanced).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import ValidationError
from .ratlp import solve_lp
from .walls import WallSet, peel_levels


def _face_key(face):
    color, sign = face
    return (str(color), sign)


def tile_of_faces(faces) -> tuple:
    """Canonical tile: the face multiset as a sorted tuple."""
    return tuple(sorted(faces, key=_face_key))


def opposite(face):
    color, sign = face
    return (color, -sign)


# -- orientations --------------------------------------------------------------


def orient_all_plus(wallset: WallSet) -> dict:
    """Every wall keeps its canonical orientation (base chamber on the left)."""
    return {w.wid: 1 for w in wallset.walls}


def orient_alternating(levels_by_class: dict, flips: dict | None = None) -> dict:
    """Sign (-1)^level per wall, with an optional global flip per class.

    Any flip pattern yields an "allowed" orientation; the default pattern
    starts -, +, -, ... outward from the base chamber.
    """
    flips = flips or {}
    orientation = {}
    for cls, levels in levels_by_class.items():
        f = -1 if flips.get(cls) else 1
        for wid, lev in levels.items():
            orientation[wid] = f * (-1) ** lev
    return orientation


def rebased_alternating(wallset: WallSet, class_wids: dict, chamber: int) -> dict:
    """The alternating orientation as constructed from another base chamber,
    expressed in the canonical frame of the original base.

    Levels are re-peeled from `chamber`; moving the "left side" reference
    back to the original base flips exactly the walls separating the two
    chambers.
    """
    orientation = {}
    for cls, wids in class_wids.items():
        levels = peel_levels(wallset, wids, base=chamber)
        for wid, lev in levels.items():
            side = -1 if wid in wallset.sep[chamber] else 1
            orientation[wid] = side * (-1) ** lev
    return orientation


# -- alphabets -------------------------------------------------------------------


@dataclass
class TileAlphabet:
    """Deduplicated tiles observed on the interior chambers of a ball."""

    tiles: list
    tile_ids: dict
    chamber_tile: dict  # chamber id -> tile id
    excluded: list
    radius: int
    provenance: str = ""

    def __len__(self):
        return len(self.tiles)

    def colors(self):
        cs = {face[0] for t in self.tiles for face in t}
        return sorted(cs, key=str)


def build_alphabet(
    wallset: WallSet, wall_colors: dict, orientation: dict, provenance: str = ""
) -> TileAlphabet:
    """Label every interior chamber with its (color, sign) face multiset.

    A chamber is interior when all its generator edges lie in the ball;
    chambers with a face on an uncolored or unoriented wall are excluded
    and recorded.
    """
    ball = wallset.ball
    rank = ball.system.rank
    base = 0
    chamber_faces = {}
    excluded = []
    for cid in range(len(ball)):
        faces = []
        ok = True
        for s in range(rank):
            if (cid, s) not in ball.edges:
                ok = False
                break
            wid = wallset.edge_wall[wallset.edge_key(cid, s)]
            if wid not in wall_colors or wid not in orientation:
                excluded.append((cid, s))
                ok = False
                break
            side = -1 if wallset.separates(wid, base, cid) else 1
            faces.append((wall_colors[wid], orientation[wid] * side))
        if ok:
            chamber_faces[cid] = tile_of_faces(faces)
    tiles = sorted(set(chamber_faces.values()), key=lambda t: [(_face_key(f)) for f in t])
    tile_ids = {t: i for i, t in enumerate(tiles)}
    chamber_tile = {cid: tile_ids[t] for cid, t in chamber_faces.items()}
    return TileAlphabet(tiles, tile_ids, chamber_tile, excluded, ball.radius, provenance)


# -- weight functions and balance ---------------------------------------------------


@dataclass
class WeightFunction:
    """Antisymmetric by construction: value(color, -1) = -weights[color]."""

    weights: dict  # color -> Fraction

    def value(self, face) -> Fraction:
        color, sign = face
        return Fraction(sign) * Fraction(self.weights.get(color, 0))

    def tile_sum(self, tile) -> Fraction:
        return sum((self.value(f) for f in tile), Fraction(0))

    @property
    def nontrivial(self) -> bool:
        return any(v != 0 for v in self.weights.values())

    def integer_scaled(self) -> "WeightFunction":
        vals = [Fraction(v) for v in self.weights.values()]
        denom = 1
        for v in vals:
            denom = denom * v.denominator // gcd(denom, v.denominator)
        scaled = {c: Fraction(v) * denom for c, v in self.weights.items()}
        g = 0
        for v in scaled.values():
            g = gcd(g, int(v))
        if g > 1:
            scaled = {c: v / g for c, v in scaled.items()}
        return WeightFunction(scaled)


def _tile_vectors(alphabet: TileAlphabet):
    colors = alphabet.colors()
    cindex = {c: i for i, c in enumerate(colors)}
    vectors = []
    for t in alphabet.tiles:
        v = [0] * len(colors)
        for color, sign in t:
            v[cindex[color]] += sign
        vectors.append(v)
    return colors, vectors


@dataclass
class BalanceVerdict:
    verdict: str  # "unbalanced" | "semibalanced" | "strictly_balanced"
    witness: WeightFunction | None = None
    tile_sums: list = field(default_factory=list)


def classify_balance(alphabet: TileAlphabet) -> BalanceVerdict:
    """Exact-rational balance classification of a tile alphabet.

    unbalanced: some weight makes every tile sum positive (witness given,
    integer scaled).  strictly balanced: the only antisymmetric weight with
    all tile sums >= 0 is zero, decided by maximizing each coordinate in
    both directions over the cone boxed to [-1, 1].  semibalanced: the cone
    is nontrivial but no weight achieves all-positive sums (witness given).
    """
    if not alphabet.tiles:
        raise ValidationError("alphabet is empty")
    colors, vectors = _tile_vectors(alphabet)
    k = len(colors)

    # variables u, v (w = u - v), t; maximize t subject to
    # tile sums >= t, u <= 1, v <= 1, t <= 1
    nvar = 2 * k + 1
    A = []
    b = []
    for vec in vectors:
        A.append([-x for x in vec] + [x for x in vec] + [1])
        b.append(0)
    for j in range(2 * k + 1):
        row = [0] * nvar
        row[j] = 1
        A.append(row)
        b.append(1)
    cost = [0] * (2 * k) + [1]
    res = solve_lp(cost, A, b)
    assert res.status == "optimal"
    if res.objective > 0:
        w = {c: res.x[i] - res.x[k + i] for i, c in enumerate(colors)}
        witness = WeightFunction(w).integer_scaled()
        sums = [witness.tile_sum(t) for t in alphabet.tiles]
        assert all(s > 0 for s in sums)
        return BalanceVerdict("unbalanced", witness, sums)

    # cone probe: tile sums >= 0, |w| <= 1; maximize +-w_c for every color
    A_cone = []
    b_cone = []
    for vec in vectors:
        A_cone.append([-x for x in vec] + [x for x in vec])
        b_cone.append(0)
    for j in range(2 * k):
        row = [0] * (2 * k)
        row[j] = 1
        A_cone.append(row)
        b_cone.append(1)
    for i in range(k):
        for sign in (1, -1):
            cost = [0] * (2 * k)
            cost[i] = sign
            cost[k + i] = -sign
            res = solve_lp(cost, A_cone, b_cone)
            assert res.status == "optimal"
            if res.objective > 0:
                w = {c: res.x[j] - res.x[k + j] for j, c in enumerate(colors)}
                witness = WeightFunction(w).integer_scaled()
                sums = [witness.tile_sum(t) for t in alphabet.tiles]
                assert witness.nontrivial and all(s >= 0 for s in sums)
                return BalanceVerdict("semibalanced", witness, sums)
    return BalanceVerdict("strictly_balanced")


def verify_unbalanced_witness(alphabet: TileAlphabet, w) -> tuple[list, bool]:
    """Tile sums under w and whether they are all positive.

    Accepts a WeightFunction or a raw face->value map, which must then be
    antisymmetric.
    """
    if isinstance(w, WeightFunction):
        wf = w
    else:
        weights = {}
        for face, val in w.items():
            color, sign = face
            expect = -Fraction(val) if sign == 1 else Fraction(val)
            other = w.get(opposite(face))
            if other is None or Fraction(other) != expect:
                raise ValidationError(f"weights violate antisymmetry at {face}")
            if sign == 1:
                weights[color] = Fraction(val)
        wf = WeightFunction(weights)
    sums = [wf.tile_sum(t) for t in alphabet.tiles]
    return sums, all(s > 0 for s in sums)


def grid_oracle(alphabet: TileAlphabet, bound: int = 2) -> dict:
    """Brute force over integer weights with entries in [-bound, bound].

    Can confirm unbalance (some grid weight has all sums positive) and can
    refute strict balance (some nonzero grid weight has all sums >= 0); it
    cannot certify either negation beyond the grid.
    """
    from itertools import product

    colors, vectors = _tile_vectors(alphabet)
    found_positive = None
    found_nonneg = None
    for w in product(range(-bound, bound + 1), repeat=len(colors)):
        if all(x == 0 for x in w):
            continue
        sums = [sum(a * b for a, b in zip(vec, w)) for vec in vectors]
        if found_positive is None and all(s > 0 for s in sums):
            found_positive = dict(zip(colors, w))
        if found_nonneg is None and all(s >= 0 for s in sums):
            found_nonneg = dict(zip(colors, w))
        if found_positive and found_nonneg:
            break
    return {
        "confirms_unbalanced": found_positive is not None,
        "refutes_strict_balance": found_nonneg is not None,
        "positive_witness": found_positive,
        "nonnegative_witness": found_nonneg,
    }


# -- rebasing --------------------------------------------------------------------


@dataclass
class RebaseReport:
    chamber: int
    flips: dict  # class -> 0 or 1 parity shift
    is_global_flip: bool
    orientation: dict


def rebase_parity_check(
    wallset: WallSet, class_wids: dict, base_orientation: dict, chamber: int
) -> RebaseReport:
    """Re-peel levels from another chamber and compare oriented signs.

    The rebased alternating orientation, carried back to the original
    canonical frame, must differ from the original by a global flip on each
    class; the report records the per-class flip pattern.
    """
    reor = rebased_alternating(wallset, class_wids, chamber)
    flips = {}
    ok = True
    for cls, wids in class_wids.items():
        pattern = {(1 - base_orientation[w] * reor[w]) // 2 for w in wids}
        if len(pattern) != 1:
            ok = False
            flips[cls] = None
        else:
            flips[cls] = pattern.pop()
    return RebaseReport(chamber, flips, ok, reor)
