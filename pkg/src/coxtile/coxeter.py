"""Coxeter systems, word normal forms, and Cayley-ball enumeration.

Elements are represented by ShortLex-least geodesic words in generator
indices.  Right-angled systems (all off-diagonal orders in {2, infinity})
get an exact rewriting backend; general systems are enumerated through the
standard reflection representation (floating point, hashed at 1e-9) with a
braid-move word reducer available as an independent oracle.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import OutOfBallError, SizeLimitError, ValidationError

DEFAULT_BALL_CAP = 200_000
MATRIX_HASH_DECIMALS = 9


def _cap_from_env(default=DEFAULT_BALL_CAP):
    raw = os.environ.get("COXTILE_BALL_CAP")
    return int(raw) if raw else default


@dataclass(frozen=True)
class CoxeterSystem:
    """A Coxeter presentation: named involutions s_i with (s_i s_j)^{m_ij} = 1.

    The matrix entry 0 encodes an infinite order product (no relation).
    """

    generators: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise ValidationError("generator names must be distinct")
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValidationError("matrix must be square of rank = #generators")
        for i in range(n):
            if self.matrix[i][i] != 1:
                raise ValidationError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValidationError(f"matrix asymmetric at m[{i}][{j}]")
                if i != j and self.matrix[i][j] == 1:
                    raise ValidationError(f"off-diagonal m[{i}][{j}] cannot be 1")
                if self.matrix[i][j] < 0:
                    raise ValidationError(f"negative entry m[{i}][{j}]")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def commutes(self, i: int, j: int) -> bool:
        return self.matrix[i][j] == 2

    @property
    def is_right_angled(self) -> bool:
        n = self.rank
        return all(self.matrix[i][j] in (0, 2) for i in range(n) for j in range(n) if i != j)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_dict(cls, data) -> "CoxeterSystem":
        try:
            gens = tuple(str(g) for g in data["generators"])
            matrix = tuple(tuple(int(x) for x in row) for row in data["matrix"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad system description: {exc}") from exc
        return cls(gens, matrix)

    @classmethod
    def from_json(cls, text: str) -> "CoxeterSystem":
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"generators": list(self.generators), "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def dihedral(cls, m: int) -> "CoxeterSystem":
        return cls(("s", "t"), ((1, m), (m, 1)))

    @classmethod
    def infinite_dihedral(cls) -> "CoxeterSystem":
        return cls.dihedral(0)

    @classmethod
    def right_angled_polygon(cls, p: int) -> "CoxeterSystem":
        """Reflection group of a right-angled p-gon: cycle of p generators,
        adjacent pairs commute, all other products have infinite order."""
        if p < 3:
            raise ValidationError("polygon needs at least 3 sides")
        rows = []
        for i in range(p):
            row = []
            for j in range(p):
                if i == j:
                    row.append(1)
                elif (i - j) % p in (1, p - 1):
                    row.append(2)
                else:
                    row.append(0)
            rows.append(tuple(row))
        return cls(tuple(f"s{i}" for i in range(p)), tuple(rows))

    # -- word operations --------------------------------------------------

    def normal_form(self, word) -> tuple[int, ...]:
        """ShortLex-least geodesic word for the element spelled by `word`."""
        word = tuple(word)
        for s in word:
            if not 0 <= s < self.rank:
                raise ValidationError(f"letter {s} is not a generator index")
        if self.is_right_angled:
            nf = ()
            for s in word:
                nf = _ra_mul_gen(self, nf, s)
            return nf
        return _braid_normal_form(self, word)

    def norm(self, word) -> int:
        return len(self.normal_form(word))

    def mul(self, u, v) -> tuple[int, ...]:
        """Product of two elements given by words, in normal form."""
        if self.is_right_angled:
            nf = self.normal_form(u)
            for s in v:
                nf = _ra_mul_gen(self, nf, s)
            return nf
        return self.normal_form(tuple(u) + tuple(v))

    def inv(self, word) -> tuple[int, ...]:
        """Inverse (generators are involutions, so reverse and renormalize)."""
        return self.normal_form(tuple(reversed(tuple(word))))


def load_system(source) -> CoxeterSystem:
    """Build a validated system from a dict, JSON text, or a file path."""
    if isinstance(source, CoxeterSystem):
        return source
    if isinstance(source, dict):
        return CoxeterSystem.from_dict(source)
    text = str(source)
    if text.lstrip().startswith("{"):
        return CoxeterSystem.from_json(text)
    with open(text, "r", encoding="utf-8") as fh:
        return CoxeterSystem.from_dict(json.load(fh))


# -- right-angled rewriting ------------------------------------------------
#
# Canonical form = lexicographically least reduced word.  Appending one
# generator preserves canonicity: either it cancels against a matching
# letter whose suffix commutes with it, or it is inserted in front of the
# larger letters of the maximal commuting suffix.


def _ra_mul_gen(system: CoxeterSystem, nf: tuple[int, ...], s: int) -> tuple[int, ...]:
    m = system.matrix
    for i in range(len(nf) - 1, -1, -1):
        x = nf[i]
        if x == s:
            return nf[:i] + nf[i + 1 :]
        if m[x][s] != 2:
            blocker = i
            break
    else:
        blocker = -1
    pos = blocker + 1
    while pos < len(nf) and nf[pos] < s:
        pos += 1
    return nf[:pos] + (s,) + nf[pos:]


# -- braid-move machinery (general systems, and the word-level oracle) -----


def _alt_word(i: int, j: int, length: int) -> tuple[int, ...]:
    return tuple(i if k % 2 == 0 else j for k in range(length))


def braid_closure(system: CoxeterSystem, word, limit: int = 200_000) -> set:
    """All words reachable from `word` by braid moves (no cancellations)."""
    word = tuple(word)
    seen = {word}
    frontier = [word]
    matrix = system.matrix
    n = system.rank
    while frontier:
        nxt = []
        for w in frontier:
            L = len(w)
            for p in range(L - 1):
                i, j = w[p], w[p + 1]
                if i == j:
                    continue
                m = matrix[i][j]
                if m < 2 or p + m > L:
                    continue
                if w[p : p + m] == _alt_word(i, j, m):
                    w2 = w[:p] + _alt_word(j, i, m) + w[p + m :]
                    if w2 not in seen:
                        seen.add(w2)
                        nxt.append(w2)
            if len(seen) > limit:
                raise SizeLimitError("braid closure too large", partial_count=len(seen))
        frontier = nxt
    return seen


def _braid_normal_form(system: CoxeterSystem, word) -> tuple[int, ...]:
    """Tits' solution to the word problem: cancel within the braid closure
    until reduced, then take the lexicographically least reduced word."""
    w = tuple(word)
    while True:
        done = True
        for v in braid_closure(system, w):
            for p in range(len(v) - 1):
                if v[p] == v[p + 1]:
                    w = v[:p] + v[p + 2 :]
                    done = False
                    break
            if not done:
                break
        if done:
            break
    if not w:
        return ()
    return min(braid_closure(system, w))


# -- reflection representation (float backend for general systems) ---------


def reflection_generators(system: CoxeterSystem) -> list[np.ndarray]:
    """Matrices of the generators in the standard reflection representation."""
    n = system.rank
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = system.matrix[i][j]
            B[i, j] = -1.0 if m == 0 else -np.cos(np.pi / m)
    mats = []
    for i in range(n):
        M = np.eye(n)
        M[i, :] -= 2.0 * B[i, :]
        mats.append(M)
    return mats


def _mat_key(M: np.ndarray) -> bytes:
    # adding 0.0 collapses -0.0 to +0.0 so both hash identically
    return (np.round(M, MATRIX_HASH_DECIMALS) + 0.0).tobytes()


# -- ball enumeration -------------------------------------------------------


@dataclass
class Ball:
    """All elements of norm <= radius with their generator edges.

    `words[i]` is the ShortLex normal form of element i; `edges[(i, s)]`
    is the id of element i * s when that product lies in the ball.
    """

    system: CoxeterSystem
    radius: int
    words: list[tuple[int, ...]]
    index: dict
    norms: list[int]
    edges: dict
    sphere_sizes: list[int]

    def __len__(self) -> int:
        return len(self.words)

    def word_of(self, eid: int) -> tuple[int, ...]:
        return self.words[eid]

    def id_of(self, word) -> int:
        nf = self.system.normal_form(word)
        if nf not in self.index:
            raise OutOfBallError(f"element {nf} is outside the radius-{self.radius} ball")
        return self.index[nf]

    def norm_of(self, eid: int) -> int:
        return self.norms[eid]

    # group-ops protocol shared with the lattice backend (keys are words)

    def members(self):
        return self.words

    def norm(self, word) -> int:
        # members are stored in normal form, so their norm is their length
        if word in self.index:
            return len(word)
        return self.system.norm(word)

    def mul(self, u, v):
        if self.system.is_right_angled and u in self.index:
            nf = u
            for s in v:
                nf = _ra_mul_gen(self.system, nf, s)
            return nf
        return self.system.mul(u, v)

    def inv(self, u):
        return self.system.inv(u)

    def contains(self, word) -> bool:
        return self.system.normal_form(word) in self.index

    @property
    def identity(self):
        return ()


def enumerate_ball(system: CoxeterSystem, radius: int, cap: int | None = None) -> Ball:
    """Breadth-first enumeration of the ball of the given radius.

    Exploration is in ShortLex order, so each element is first reached by
    its ShortLex-least geodesic word and the stored words are prefix-closed.
    """
    if radius < 0:
        raise ValidationError("radius must be nonnegative")
    cap = _cap_from_env() if cap is None else cap
    ra = system.is_right_angled
    gens = list(range(system.rank))
    if not ra:
        mats = reflection_generators(system)
        keys = {_mat_key(np.eye(system.rank)): 0}
        matrices = [np.eye(system.rank)]
    words: list[tuple[int, ...]] = [()]
    index = {(): 0}
    norms = [0]
    edges: dict = {}
    sphere_sizes = [1]
    frontier = [0]
    for level in range(1, radius + 1):
        nxt = []
        for eid in frontier:
            w = words[eid]
            for s in gens:
                if ra:
                    prod = _ra_mul_gen(system, w, s)
                    known = index.get(prod)
                    if known is None:
                        if len(words) >= cap:
                            raise SizeLimitError(
                                f"ball cap {cap} exceeded at radius {level}",
                                partial_count=len(words),
                            )
                        jid = len(words)
                        words.append(prod)
                        index[prod] = jid
                        norms.append(level)
                        nxt.append(jid)
                    else:
                        jid = known
                else:
                    M = matrices[eid] @ mats[s]
                    k = _mat_key(M)
                    known = keys.get(k)
                    if known is None:
                        if len(words) >= cap:
                            raise SizeLimitError(
                                f"ball cap {cap} exceeded at radius {level}",
                                partial_count=len(words),
                            )
                        jid = len(words)
                        keys[k] = jid
                        matrices.append(M)
                        words.append(w + (s,))
                        index[w + (s,)] = jid
                        norms.append(level)
                        nxt.append(jid)
                    else:
                        jid = known
                if abs(norms[jid] - norms[eid]) != 1:
                    raise AssertionError("norm parity violated; element identification failed")
                edges[(eid, s)] = jid
                edges[(jid, s)] = eid
        sphere_sizes.append(len(nxt))
        frontier = nxt
        if not frontier:
            break
    while len(sphere_sizes) < radius + 1:
        sphere_sizes.append(0)
    return Ball(system, radius, words, index, norms, edges, sphere_sizes)


# -- geodesics and cocycles --------------------------------------------------


def radial_segment(ball: Ball, g) -> list[tuple[int, ...]]:
    """The prefix path of g's normal form: a geodesic from e to g along
    which norms strictly increase."""
    nf = ball.system.normal_form(g)
    if nf not in ball.index:
        raise OutOfBallError(f"{nf} not in the enumerated ball")
    return [nf[:i] for i in range(len(nf) + 1)]


def reflection_cocycle(system: CoxeterSystem, word):
    """Reflections crossed by the path spelled by `word`.

    Entry i is the normal form of prefix_{i-1} * s_i * prefix_{i-1}^{-1}.
    Returns (entries, was_reduced); unreduced input is reduced first.
    """
    word = tuple(word)
    nf = system.normal_form(word)
    was_reduced = len(nf) == len(word)
    use = word if was_reduced else nf
    entries = []
    for i in range(len(use)):
        prefix = use[:i]
        refl = prefix + (use[i],) + tuple(reversed(prefix))
        entries.append(system.normal_form(refl))
    return entries, was_reduced


# -- displacement exponents ---------------------------------------------------


@dataclass
class DisplacementVerdict:
    """Result of the bounded-displacement search for powers of `a`.

    `exponent` is the least n such that every ball element g sees a norm
    change within n steps along powers of a; when some g never does within
    n_max, `witnesses` lists those g and exponent is None.  `order_of_a`
    reports a detected finite order (the search is meaningful only for
    infinite-order a, so this is surfaced rather than asserted away).
    """

    exponent: int | None
    witnesses: list
    order_of_a: int | None = None
    n_max: int = 0


def displacement_exponent(group, a, members=None, n_max: int = 10) -> DisplacementVerdict:
    """Search for the least n with: every g has some k <= n, |g a^k| != |g|.

    `group` is a Ball or a lattice ball (the shared group-ops protocol);
    `members` defaults to everything enumerated in `group`.
    """
    ident = group.identity
    if a == ident:
        raise ValidationError("a must differ from the identity")
    powers = [ident]
    order = None
    for _ in range(n_max):
        powers.append(group.mul(powers[-1], a))
        if powers[-1] == ident and order is None:
            order = len(powers) - 1
    members = list(group.members() if members is None else members)
    witnesses = []
    worst = 0
    for g in members:
        base = group.norm(g)
        for k in range(1, n_max + 1):
            if group.norm(group.mul(g, powers[k])) != base:
                worst = max(worst, k)
                break
        else:
            witnesses.append(g)
    if witnesses:
        return DisplacementVerdict(None, witnesses, order, n_max)
    return DisplacementVerdict(worst, [], order, n_max)


# -- independent naive enumeration (test oracle) ------------------------------


def oracle_canonical(system: CoxeterSystem, word) -> tuple[int, ...]:
    """Word-level canonical form via braid closure only (no rewriting
    shortcuts, no matrix hashing); used to cross-check the fast paths."""
    return _braid_normal_form(system, word)


def naive_ball(system: CoxeterSystem, radius: int, max_elements: int = 10_000):
    """Raw-word BFS deduplicated by the braid-closure canonical form.

    Returns (sphere_sizes, canonical word set).  Independent of both the
    right-angled rewriting backend and the reflection representation.
    """
    seen = {(): ()}
    frontier = [()]
    sphere_sizes = [1]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for s in range(system.rank):
                c = oracle_canonical(system, w + (s,))
                if c not in seen:
                    seen[c] = c
                    nxt.append(c)
                    if len(seen) > max_elements:
                        raise SizeLimitError("naive ball too large", partial_count=len(seen))
        sphere_sizes.append(len(nxt))
        frontier = nxt
        if not frontier:
            break
    while len(sphere_sizes) < radius + 1:
        sphere_sizes.append(0)
    return sphere_sizes, set(seen)
