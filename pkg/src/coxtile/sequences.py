"""Substitution sequences and the integer-line colorings built from them.

Provides the Thue-Morse binary sequence (cube-free), the square-free
ternary sequence obtained by recoding its length-2 factors, power-freeness
scanning, and the two colorings of the integers (Thue-Morse by |x|, and
the perfect-square indicator) together with their witness searches.
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import ValidationError, WindowError

MORSE_THUE = "morse_thue"
SQUARES = "squares"

_PAIR_CODES = {(0, 1): 0, (1, 0): 1, (0, 0): 2, (1, 1): 2}

# Materialized prefix, grown on demand by applying 0->01, 1->10.
_mt_cache: list[int] = [0]


def _grow_mt(n: int) -> None:
    global _mt_cache
    while len(_mt_cache) < n:
        old = len(_mt_cache)
        _mt_cache = [b for a in _mt_cache for b in (a, 1 - a)]
        # Guard against drift: term i must equal the parity of popcount(i).
        for i in range(old, len(_mt_cache)):
            if _mt_cache[i] != (bin(i).count("1") & 1):
                raise AssertionError(f"substitution/digit-sum mismatch at {i}")


def thue_morse_prefix(n: int) -> list[int]:
    """First n terms of the Thue-Morse sequence (0-indexed, starts 0,1,1,0...)."""
    if n < 0:
        raise ValidationError("prefix length must be nonnegative")
    _grow_mt(n)
    return _mt_cache[:n]


def square_free_prefix(n: int) -> list[int]:
    """First n terms of the ternary square-free sequence.

    Term i recodes the Thue-Morse pair (m(i), m(i+1)):
    01 -> 0, 10 -> 1, 00 -> 2, 11 -> 2.
    """
    if n < 0:
        raise ValidationError("prefix length must be nonnegative")
    mt = thue_morse_prefix(n + 1)
    return [_PAIR_CODES[(mt[i], mt[i + 1])] for i in range(n)]


def ternary_term(i: int) -> int:
    """Term i of the ternary square-free sequence (cached prefix lookup)."""
    if i < 0:
        raise ValidationError("index must be nonnegative")
    _grow_mt(i + 2)
    return _PAIR_CODES[(_mt_cache[i], _mt_cache[i + 1])]


@dataclass(frozen=True)
class PowerWitness:
    """Leftmost repetition W^p found by verify_power_free."""

    position: int
    word: tuple[int, ...]


def verify_power_free(seq, power: int, n: int):
    """Scan the first n symbols for a factor W^power.

    Returns None when no such factor exists (the prefix is power-free),
    otherwise the leftmost witness, ties broken by the shortest W.
    """
    if power not in (2, 3):
        raise ValidationError("power must be 2 or 3")
    if n < 0 or n > len(seq):
        raise WindowError(f"scan length {n} exceeds sequence length {len(seq)}")
    arr = np.asarray(list(seq[:n]), dtype=np.int8)
    best = None
    for period in range(1, n // power + 1):
        eq = arr[: n - period] == arr[period:]
        need = (power - 1) * period
        m = eq.shape[0]
        if need > m:
            continue
        c = np.cumsum(eq)
        window = c[need - 1 :] - np.concatenate(([0], c[: m - need]))
        starts = np.flatnonzero(window == need)
        if starts.size:
            cand = (int(starts[0]), period)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    i, period = best
    return PowerWitness(i, tuple(int(x) for x in arr[i : i + period]))


def is_perfect_square(x: int) -> bool:
    """True iff |x| is k*k for some integer k >= 0."""
    x = abs(x)
    r = isqrt(x)
    return r * r == x


def z_color(kind: str, x: int) -> int:
    """Value of the integer-line coloring at x (both kinds depend on |x| only)."""
    if kind == MORSE_THUE:
        _grow_mt(abs(x) + 1)
        return _mt_cache[abs(x)]
    if kind == SQUARES:
        return 1 if is_perfect_square(x) else 0
    raise ValidationError(f"unknown coloring kind {kind!r}")


def z_witness(n: int, m: int):
    """Find q with |q - m| <= 3|n| and differing Thue-Morse colors at q, q + n.

    Scans outward from m (at equal distance the smaller q is tried first);
    returns q, or None if the whole window fails, which falsifies the
    bounded-displacement property at this instance.
    """
    if n == 0:
        raise ValidationError("n must be nonzero")
    bound = 3 * abs(n)
    for d in range(bound + 1):
        for q in ((m - d, m + d) if d else (m,)):
            if z_color(MORSE_THUE, q) != z_color(MORSE_THUE, q + n):
                return q
    return None


def squares_limit_defect(a: int, rho: int) -> int:
    """Least m >= 1 whose square sits in an otherwise square-free window.

    Returns the least m such that every x in [-rho-|a|, rho+|a|] except
    x = 0 has non-square m*m + x: around m*m the squares coloring looks
    like a window of zeros, so translating by squares drives the coloring
    toward a fixed pattern regardless of the displacement a.
    """
    if a == 0:
        raise ValidationError("a must be nonzero")
    if rho < 0:
        raise ValidationError("rho must be nonnegative")
    width = rho + abs(a)
    m = 1
    while True:
        c = m * m
        if all(not is_perfect_square(c + x) for x in range(-width, width + 1) if x):
            return m
        m += 1
