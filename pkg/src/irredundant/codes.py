"""Binary codes used by the code-based constructions.

Codewords are vertices of {0,1}^n stored as n-bit integers, with the same
bit convention as :mod:`irredundant.cube` (coordinate ``i`` is bit ``i``,
leftmost character of a word).
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .bounds import ball_volume
from .cube import CubeError, Vertex, format_vertex

#: largest n for which ``is_perfect`` sweeps the whole cube
PERFECT_SWEEP_LIMIT = 24
#: largest n accepted by ``max_separated_set``
SEPARATED_SET_CAP = 12

# Coefficients of the generator polynomial 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
# of the binary cyclic [23, 12, 7] Golay code; bit j holds the x^j coefficient.
GOLAY_POLY = 0b110001110101


class CodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Code:
    n: int
    words: np.ndarray
    claimed_min_distance: int | None = None
    generator: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        words = np.unique(np.asarray(self.words, dtype=np.int64))
        if words.size == 0:
            raise CodeError("a code needs at least one word")
        if words[0] < 0 or int(words[-1]) >> self.n:
            raise CodeError(f"codeword does not fit in n={self.n} bits")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    def __len__(self) -> int:
        return int(self.words.size)

    def __contains__(self, x: int) -> bool:
        i = np.searchsorted(self.words, x)
        return bool(i < self.words.size and self.words[i] == x)

    def vertices(self) -> list[Vertex]:
        return [Vertex(int(w), self.n) for w in self.words]

    def word_strings(self) -> list[str]:
        return [format_vertex(int(w), self.n) for w in self.words]


def _span(n: int, rows: Sequence[int]) -> np.ndarray:
    words = np.zeros(1, dtype=np.int64)
    for r in rows:
        words = np.concatenate((words, words ^ r))
    return words


def code_from_words(n: int, words: Iterable[int], name: str = "") -> Code:
    return Code(n, np.fromiter((int(w) for w in words), dtype=np.int64), name=name)


def hamming_code(s: int) -> Code:
    """The Hamming code of length 2^s - 1.

    Its parity-check matrix has the numbers 1..2^s-1 as columns in increasing
    order, so coordinate ``j`` carries the syndrome ``j + 1``.
    """
    if not 2 <= s <= 5:
        raise CodeError(f"Hamming code parameter s must be in 2..5, got {s}")
    n = (1 << s) - 1
    rows = []
    for j in range(n):
        col = j + 1
        if col & (col - 1) == 0:
            continue  # check position
        row = 1 << j
        for b in range(s):
            if col >> b & 1:
                row |= 1 << ((1 << b) - 1)
        rows.append(row)
    return Code(n, _span(n, rows), claimed_min_distance=3, generator=tuple(rows),
                name=f"hamming({s})")


def golay_code() -> Code:
    """The binary [23, 12, 7] Golay code, spanned by shifts of its generator polynomial."""
    rows = tuple(GOLAY_POLY << i for i in range(12))
    return Code(23, _span(23, rows), claimed_min_distance=7, generator=rows, name="golay")


def trivial_code(n: int) -> Code:
    """The two antipodal words 0...0 and 1...1."""
    if n < 1:
        raise CodeError("n must be positive")
    return Code(n, np.array([0, (1 << n) - 1], dtype=np.int64),
                claimed_min_distance=n, name=f"trivial({n})")


def translate_code(code: Code, x: int) -> Code:
    return Code(code.n, code.words ^ x, claimed_min_distance=code.claimed_min_distance,
                name=code.name)


def _weights(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def min_distance(code: Code, method: str = "auto") -> int:
    """Exact minimum Hamming distance between distinct codewords.

    ``method="weight"`` uses the minimum nonzero weight (valid for linear
    codes only); ``"pairwise"`` compares every pair; ``"auto"`` picks the
    former when a generator is known.
    """
    words = code.words
    if words.size < 2:
        raise CodeError("minimum distance needs at least two codewords")
    if method == "auto":
        method = "weight" if code.generator is not None else "pairwise"
    if method == "weight":
        w = _weights(words[words != 0])
        return int(w.min())
    if method != "pairwise":
        raise ValueError(f"unknown method {method!r}")
    best = code.n + 1
    chunk = max(1, 4_000_000 // words.size)
    for start in range(0, words.size - 1, chunk):
        block = words[start:start + chunk]
        for off, x in enumerate(block):
            i = start + off
            rest = words[i + 1:]
            if rest.size:
                best = min(best, int(_weights(rest ^ x).min()))
        if best == 1:
            break
    return best


def is_separated(code: Code, d: int) -> bool:
    if len(code) < 2:
        return True
    return min_distance(code) >= d


def is_perfect(code: Code, k: int, sweep_limit: int = PERFECT_SWEEP_LIMIT,
               method: str = "auto") -> bool:
    """Do the radius-k balls around the codewords partition {0,1}^n?

    ``method="sweep"`` counts ball coverage of every vertex; ``"algebraic"``
    checks ``min distance >= 2k+1`` together with the sphere-packing identity.
    ``"auto"`` sweeps when ``n <= sweep_limit``.
    """
    if k < 0:
        raise CodeError("radius must be non-negative")
    n = code.n
    if method == "auto":
        method = "sweep" if n <= sweep_limit else "algebraic"
    if method == "algebraic":
        if len(code) * ball_volume(n, k) != 1 << n:
            return False
        return len(code) < 2 or min_distance(code) >= 2 * k + 1
    if method != "sweep":
        raise ValueError(f"unknown method {method!r}")
    if n > sweep_limit:
        raise CodeError(f"n={n} too large for a full sweep (limit {sweep_limit})")
    if len(code) * ball_volume(n, k) != 1 << n:
        return False
    offsets = ball_offsets(n, k)
    counts = np.bincount((code.words[:, None] ^ offsets[None, :]).ravel(), minlength=1 << n)
    return bool((counts == 1).all())


def ball_offsets(n: int, r: int) -> np.ndarray:
    """All n-bit masks of weight at most r."""
    all_masks = np.arange(1 << n, dtype=np.int64) if n <= 24 else None
    if all_masks is not None:
        return all_masks[_weights(all_masks) <= r]
    out = [0]
    for w in range(1, r + 1):
        out.extend(sum(1 << i for i in c) for c in combinations(range(n), w))
    return np.array(sorted(out), dtype=np.int64)


# -- maximum separated sets --------------------------------------------------------

def _adjacency(n: int, d: int) -> list[int]:
    """Row x: bitset of vertices at distance >= d from x."""
    size = 1 << n
    xs = np.arange(size, dtype=np.int64)
    out = []
    for x in range(size):
        row = _weights(xs ^ x) >= d
        out.append(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little"))
    return out


def _color_bound(p: int, adj: list[int]) -> int:
    """Greedy colouring of the candidates into pairwise-close classes."""
    colours = 0
    while p:
        colours += 1
        q = p
        while q:
            v = (q & -q).bit_length() - 1
            q &= ~adj[v] & ~(1 << v)
            p &= ~(1 << v)
    return colours


class _CliqueSearch:
    def __init__(self, adj: list[int], best: list[int], target: int | None = None):
        self.adj = adj
        self.best = list(best)
        self.target = target
        self.nodes = 0
        self.done = False

    def run(self, cur: list[int], p: int) -> None:
        self.nodes += 1
        if len(cur) > len(self.best):
            self.best = list(cur)
            if self.target is not None and len(cur) >= self.target:
                self.done = True
                return
        goal = len(self.best) if self.target is None else self.target - 1
        while p:
            if len(cur) + _color_bound(p, self.adj) <= goal:
                return
            v = (p & -p).bit_length() - 1
            p &= ~(1 << v)
            cur.append(v)
            self.run(cur, p & self.adj[v])
            cur.pop()
            if self.done:
                return


def _atoms(n: int, chosen: Sequence[int]) -> list[list[int]]:
    cells: dict[tuple, list[int]] = {}
    for i in range(n):
        cells.setdefault(tuple(v >> i & 1 for v in chosen), []).append(i)
    return sorted(cells.values())


def max_separated_set(n: int, d: int, cap: int = SEPARATED_SET_CAP
                      ) -> tuple[int, list[int]]:
    """Largest set of vertices with pairwise distance at least ``d``.

    Returns ``(size, witness)`` where the witness is the numerically
    (lexicographically) smallest maximum set.  The search fixes 0 in the set
    (translation invariance) and then branches on orbit representatives of
    the coordinate permutations fixing every chosen vertex; a final pass
    without symmetry, bounded by the known optimum, recovers the smallest
    witness.
    """
    if not 1 <= n <= cap:
        raise CodeError(f"n={n} outside 1..{cap}")
    if d <= 1:
        return 1 << n, list(range(1 << n))
    if d > n:
        return 1, [0]
    adj = _adjacency(n, d)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, (1 << n) + 200))
    try:
        optimum = _symmetric_clique(n, adj)
        finder = _CliqueSearch(adj, [0], target=optimum)
        finder.run([0], adj[0])
    finally:
        sys.setrecursionlimit(limit)
    witness = sorted(finder.best)
    if len(witness) != optimum:
        raise AssertionError("witness search disagrees with the optimum")
    return optimum, witness


def _symmetric_clique(n: int, adj: list[int]) -> int:
    best = [0]

    def branch(cur: list[int], p: int) -> None:
        if len(cur) > len(best):
            best[:] = cur
        atoms = _atoms(n, cur)
        if all(len(a) == 1 for a in atoms):
            search = _CliqueSearch(adj, best)
            search.run(list(cur), p)
            best[:] = search.best
            return
        orbits: dict[tuple, list[int]] = {}
        q = p
        while q:
            v = (q & -q).bit_length() - 1
            q &= ~(1 << v)
            key = tuple(sum(v >> i & 1 for i in a) for a in atoms)
            orbits.setdefault(key, []).append(v)
        excluded = 0
        for orbit in sorted(orbits.values()):
            rep = orbit[0]
            rest = p & ~excluded & ~(1 << rep) & adj[rep]
            if len(cur) + 1 + _color_bound(rest, adj) > len(best):
                branch(cur + [rep], rest)
            for v in orbit:
                excluded |= 1 << v

    branch([0], adj[0])
    return len(best)


def corradi_katai_bound(n: int) -> int:
    """Upper bound on an (n/2)-separated set of {0,1}^n by the residue of n mod 4."""
    if n % 2:
        return n + 1
    if n % 4 == 2:
        return n + 2
    return 2 * n


# -- text format -------------------------------------------------------------------

def format_code(code: Code) -> str:
    return "".join(w + "\n" for w in code.word_strings())


def parse_code(text: str) -> Code:
    """One binary word per line; ``#`` comments and blank lines ignored."""
    n = None
    words = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = Vertex.parse(line)
        except CubeError as exc:
            raise CodeError(f"line {lineno}: {exc}") from None
        if n is None:
            n = v.n
        elif v.n != n:
            raise CodeError(f"line {lineno}: word length {v.n}, expected {n}")
        words.append(v.bits)
    if n is None:
        raise CodeError("code file contains no words")
    return code_from_words(n, words)


def load_code(path: str | os.PathLike) -> Code:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())


def save_code(path: str | os.PathLike, code: Code) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_code(code))


def perfect_code_count(n: int, k: int) -> int | None:
    """Size a perfect k-error-correcting code of length n would need, or None."""
    vol = ball_volume(n, k)
    return (1 << n) // vol if (1 << n) % vol == 0 else None


def hamming_length(s: int) -> int:
    return (1 << s) - 1


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


__all__ = [
    "Code", "CodeError", "hamming_code", "golay_code", "trivial_code", "code_from_words",
    "translate_code", "min_distance", "is_separated", "is_perfect", "max_separated_set",
    "corradi_katai_bound", "format_code", "parse_code", "load_code", "save_code",
    "ball_offsets", "perfect_code_count",
]
