"""Vertices, subcubes and families of subcubes of the discrete cube {0,1}^n.

Vertices are n-bit masks: coordinate ``i`` (0-based, leftmost character of a
word) is bit ``i``.  A subcube is stored as two masks, ``moving`` (the ``*``
positions) and ``values`` (the fixed-1 positions), so the subcube is the
interval ``values <= y <= values | moving`` in the subset lattice.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_N = 32
#: default cap for operations that sweep all 2**n vertices or all subcubes
ENUMERATION_CAP = 20
#: coverage uses a dense 2**n array up to this many entries, a hash map above
DENSE_COVERAGE_LIMIT = 1 << 24


class CubeError(ValueError):
    """Invalid vertex, subcube or family."""


class CubesFormatError(CubeError):
    """A ``.cubes`` file could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise CubeError(f"dimension n={n} outside 1..{MAX_N}")


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True, order=True, slots=True)
class Vertex:
    bits: int
    n: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise CubeError(f"vertex bits {self.bits:#x} do not fit in n={self.n}")

    @classmethod
    def parse(cls, word: str) -> "Vertex":
        word = word.strip()
        if not word:
            raise CubeError("empty vertex word")
        if len(word) > MAX_N:
            raise CubeError(f"vertex word longer than {MAX_N}")
        bits = 0
        for i, ch in enumerate(word):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise CubeError(f"invalid character {ch!r} in vertex word {word!r}")
        return cls(bits, len(word))

    @classmethod
    def zero(cls, n: int) -> "Vertex":
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> "Vertex":
        return cls((1 << n) - 1, n)

    @property
    def weight(self) -> int:
        return _popcount(self.bits)

    def __xor__(self, other: "Vertex") -> "Vertex":
        _same_n(self.n, other.n)
        return Vertex(self.bits ^ other.bits, self.n)

    def __str__(self) -> str:
        return format_vertex(self.bits, self.n)


def format_vertex(bits: int, n: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(n))


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise CubeError(f"dimension mismatch: {a} != {b}")


@dataclass(frozen=True, slots=True)
class Subcube:
    """A subcube ``{y : y_i = values_i for every fixed i}``."""

    n: int
    moving: int
    values: int

    def __post_init__(self):
        _check_n(self.n)
        full = (1 << self.n) - 1
        if self.moving & ~full or self.values & ~full or self.moving < 0 or self.values < 0:
            raise CubeError("subcube masks exceed the ambient dimension")
        if self.moving & self.values:
            raise CubeError("fixed values set on moving coordinates")

    @property
    def dim(self) -> int:
        return _popcount(self.moving)

    @property
    def size(self) -> int:
        return 1 << self.dim

    @property
    def start(self) -> Vertex:
        """The minimum vertex (all moving coordinates 0)."""
        return Vertex(self.values, self.n)

    @property
    def end(self) -> Vertex:
        """The maximum vertex (all moving coordinates 1)."""
        return Vertex(self.values | self.moving, self.n)

    @property
    def fixed_zeros(self) -> int:
        return ((1 << self.n) - 1) & ~(self.moving | self.values)

    @property
    def word(self) -> str:
        out = []
        for i in range(self.n):
            if self.moving >> i & 1:
                out.append("*")
            else:
                out.append("1" if self.values >> i & 1 else "0")
        return "".join(out)

    def __str__(self) -> str:
        return self.word

    def __repr__(self) -> str:
        return f"Subcube({self.word!r})"

    def __contains__(self, x: Vertex) -> bool:
        return contains(self, x)

    def vertex_bits(self) -> np.ndarray:
        """All vertices of the subcube as an increasing int64 array."""
        return self.values | _submasks(self.moving)

    def contains_bits(self, x: int) -> bool:
        return (x & ~self.moving) == self.values


@lru_cache(maxsize=4096)
def _submasks_cached(moving: int) -> np.ndarray:
    offs = np.zeros(1, dtype=np.int64)
    i = 0
    m = moving
    while m:
        if m & 1:
            offs = np.concatenate((offs, offs | (1 << i)))
        m >>= 1
        i += 1
    offs.setflags(write=False)
    return offs


def _submasks(moving: int) -> np.ndarray:
    return _submasks_cached(moving)


def parse_subcube(word: str) -> Subcube:
    """Parse a word over ``{0,1,*}``; character ``i`` describes coordinate ``i``.

    >>> parse_subcube("***01").dim
    3
    """
    word = word.strip()
    if not word:
        raise CubeError("empty subcube word")
    if len(word) > MAX_N:
        raise CubeError(f"subcube word longer than {MAX_N}")
    moving = values = 0
    for i, ch in enumerate(word):
        if ch == "*":
            moving |= 1 << i
        elif ch == "1":
            values |= 1 << i
        elif ch != "0":
            raise CubeError(f"invalid character {ch!r} in subcube word {word!r}")
    return Subcube(len(word), moving, values)


def format_subcube(c: Subcube) -> str:
    return c.word


def lower_interval(v: Vertex) -> Subcube:
    """The subcube of all subsets of ``v`` (``v`` itself is the end vertex)."""
    return Subcube(v.n, v.bits, 0)


def upper_interval(v: Vertex) -> Subcube:
    """The subcube of all supersets of ``v`` (``v`` is the start vertex)."""
    full = (1 << v.n) - 1
    return Subcube(v.n, full & ~v.bits, v.bits)


def between(a: Vertex, b: Vertex) -> Subcube:
    """The smallest subcube containing both ``a`` and ``b``."""
    _same_n(a.n, b.n)
    moving = a.bits ^ b.bits
    return Subcube(a.n, moving, a.bits & ~moving)


def contains(c: Subcube, x: Vertex) -> bool:
    _same_n(c.n, x.n)
    return (x.bits & ~c.moving) == c.values


def chi_eval(c: Subcube, x: Vertex) -> int:
    """Evaluate the product of ``(1 - x_i)`` over fixed zeros and ``x_i`` over fixed ones."""
    _same_n(c.n, x.n)
    value = 1
    zeros = c.fixed_zeros
    for i in range(c.n):
        xi = x.bits >> i & 1
        if zeros >> i & 1:
            value *= 1 - xi
        elif c.values >> i & 1:
            value *= xi
    return value


def hamming(x: Vertex, y: Vertex) -> int:
    _same_n(x.n, y.n)
    return _popcount(x.bits ^ y.bits)


def all_subcubes(n: int, k: int) -> list[Subcube]:
    """Every k-subcube of {0,1}^n, sorted by word."""
    _check_n(n)
    if not 0 <= k <= n:
        raise CubeError(f"need 0 <= k <= n, got k={k}, n={n}")
    out = []
    full = (1 << n) - 1
    for mv in itertools.combinations(range(n), k):
        moving = sum(1 << i for i in mv)
        fixed = full & ~moving
        sub = fixed
        while True:
            out.append(Subcube(n, moving, sub))
            if sub == 0:
                break
            sub = (sub - 1) & fixed
    out.sort(key=lambda c: c.word)
    return out


class _Coverage:
    """Coverage counts of a family, computed member by member."""

    def __init__(self, family: "Family"):
        m = len(family.members)
        size = 1 << family.k
        if m == 0:
            self.verts = np.zeros((0, size), dtype=np.int64)
            self.member_counts = np.zeros((0, size), dtype=np.int64)
            self.vertices = np.zeros(0, dtype=np.int64)
            self.counts = np.zeros(0, dtype=np.int64)
            return
        values = np.fromiter((c.values for c in family.members), dtype=np.int64, count=m)
        offsets = np.stack([_submasks(c.moving) for c in family.members])
        verts = values[:, None] | offsets
        flat = verts.ravel()
        if family.n <= 62 and (1 << family.n) <= DENSE_COVERAGE_LIMIT:
            dense = np.bincount(flat, minlength=1 << family.n)
            self.vertices = np.flatnonzero(dense)
            self.counts = dense[self.vertices]
            self.member_counts = dense[verts]
        else:
            uniq, inv, cnt = np.unique(flat, return_inverse=True, return_counts=True)
            self.vertices = uniq
            self.counts = cnt
            self.member_counts = cnt[inv].reshape(verts.shape)
        self.verts = verts

    @property
    def private_mask(self) -> np.ndarray:
        return self.member_counts == 1


@dataclass(frozen=True)
class Family:
    """An ordered collection of distinct k-subcubes of {0,1}^n."""

    n: int
    k: int
    members: tuple[Subcube, ...] = ()

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise CubeError(f"dimension n={self.n} outside 0..{MAX_N}")
        if not 0 <= self.k <= self.n:
            raise CubeError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        seen = set()
        for c in members:
            if c.n != self.n:
                raise CubeError(f"member {c.word} has n={c.n}, family has n={self.n}")
            if c.dim != self.k:
                raise CubeError(f"member {c.word} has dimension {c.dim}, family has k={self.k}")
            if c in seen:
                raise CubeError(f"duplicate member {c.word}")
            seen.add(c)

    @classmethod
    def from_words(cls, words: Iterable[str], n: int | None = None,
                   k: int | None = None) -> "Family":
        members = [parse_subcube(w) for w in words]
        if members:
            n = members[0].n if n is None else n
            k = members[0].dim if k is None else k
        if n is None or k is None:
            raise CubeError("empty family needs explicit n and k")
        return cls(n, k, tuple(members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subcube]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Subcube:
        return self.members[i]

    def words(self) -> list[str]:
        return [c.word for c in self.members]

    def sorted(self) -> "Family":
        return Family(self.n, self.k, tuple(sorted(self.members, key=lambda c: c.word)))

    def same_members(self, other: "Family") -> bool:
        return (self.n, self.k) == (other.n, other.k) and set(self.members) == set(other.members)

    def extend(self, extra: Iterable[Subcube]) -> "Family":
        return Family(self.n, self.k, self.members + tuple(extra))

    def without(self, i: int) -> "Family":
        return Family(self.n, self.k, self.members[:i] + self.members[i + 1:])

    @cached_property
    def _coverage(self) -> _Coverage:
        return _Coverage(self)

    def __repr__(self) -> str:
        return f"Family(n={self.n}, k={self.k}, members={self.words()!r})"


def coverage_counts(family: Family) -> dict[Vertex, int]:
    """Number of members containing each covered vertex (uncovered vertices omitted)."""
    cov = family._coverage
    n = family.n
    return {Vertex(int(x), n): int(c) for x, c in zip(cov.vertices, cov.counts)}


def _check_index(family: Family, i: int) -> None:
    if not 0 <= i < len(family):
        raise IndexError(f"member index {i} out of range for family of size {len(family)}")


def private_bits(family: Family, i: int) -> np.ndarray:
    """Private vertices of member ``i`` as an increasing int64 array."""
    _check_index(family, i)
    cov = family._coverage
    return cov.verts[i][cov.private_mask[i]]


def private_vertices(family: Family, i: int) -> frozenset[Vertex]:
    return frozenset(Vertex(int(x), family.n) for x in private_bits(family, i))


def private_counts(family: Family) -> list[int]:
    return [int(c) for c in family._coverage.private_mask.sum(axis=1)]


def redundant_members(family: Family) -> list[int]:
    """Indices of members contained in the union of the others."""
    return [i for i, c in enumerate(private_counts(family)) if c == 0]


def is_irredundant(family: Family) -> bool:
    return bool(family._coverage.private_mask.any(axis=1).all())


def union_size(family: Family) -> int:
    return int(family._coverage.vertices.size)


def addable_subcubes(family: Family, cap: int = ENUMERATION_CAP) -> list[Subcube]:
    """Every k-subcube outside ``family`` whose addition keeps it irredundant.

    ``family`` must be irredundant.  A candidate is addable iff it contains an
    uncovered vertex and does not swallow every private vertex of a member.
    """
    if family.n > cap:
        raise CubeError(f"n={family.n} above enumeration cap {cap}")
    if not is_irredundant(family):
        raise CubeError("family is not irredundant")
    n, k = family.n, family.k
    size = 1 << n
    cov = family._coverage
    counts = np.zeros(size, dtype=np.int64)
    counts[cov.vertices] = cov.counts
    owner = np.full(size, -1, dtype=np.int64)
    pm = cov.private_mask
    rows, cols = np.nonzero(pm)
    owner[cov.verts[rows, cols]] = rows
    n_priv = pm.sum(axis=1)
    present = set(family.members)
    out = []
    for c in all_subcubes(n, k):
        if c in present:
            continue
        verts = c.vertex_bits()
        if not (counts[verts] == 0).any():
            continue
        owners = owner[verts]
        owners = owners[owners >= 0]
        if owners.size:
            hit = np.bincount(owners, minlength=len(family))
            if (hit == n_priv).any():
                continue
        out.append(c)
    return out


def is_maximal_irredundant(family: Family, cap: int = ENUMERATION_CAP) -> bool:
    """True iff no k-subcube can be added while keeping the family irredundant."""
    return not addable_subcubes(family, cap)


def project(family: Family, coord: int) -> Family:
    """Delete coordinate ``coord`` (0-based), which every member must move."""
    n = family.n
    if not 0 <= coord < n:
        raise CubeError(f"coordinate {coord} outside 0..{n - 1}")
    if n == 1:
        raise CubeError("cannot project a 1-dimensional cube")
    bit = 1 << coord
    low = bit - 1

    def squeeze(x: int) -> int:
        return (x & low) | ((x >> (coord + 1)) << coord)

    members = []
    for c in family.members:
        if not c.moving & bit:
            raise CubeError(f"member {c.word} fixes coordinate {coord}")
        members.append(Subcube(n - 1, squeeze(c.moving), squeeze(c.values)))
    return Family(n - 1, max(family.k - 1, 0), tuple(members))


def translate_subcube(c: Subcube, x: int) -> Subcube:
    return Subcube(c.n, c.moving, (c.values ^ x) & ~c.moving)


def translate(family: Family, x: Vertex) -> Family:
    """XOR every member by ``x``."""
    _same_n(family.n, x.n)
    return Family(family.n, family.k,
                  tuple(translate_subcube(c, x.bits) for c in family.members))


def _permute_bits(x: int, sigma: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(sigma):
        if x >> i & 1:
            out |= 1 << j
    return out


def _check_perm(sigma: Sequence[int], n: int) -> None:
    if sorted(sigma) != list(range(n)):
        raise CubeError(f"{list(sigma)!r} is not a permutation of 0..{n - 1}")


def permute_subcube(c: Subcube, sigma: Sequence[int]) -> Subcube:
    return Subcube(c.n, _permute_bits(c.moving, sigma), _permute_bits(c.values, sigma))


def permute(family: Family, sigma: Sequence[int]) -> Family:
    """Relabel coordinates: coordinate ``i`` becomes coordinate ``sigma[i]``."""
    _check_perm(sigma, family.n)
    return Family(family.n, family.k,
                  tuple(permute_subcube(c, sigma) for c in family.members))


def permute_vertex(x: Vertex, sigma: Sequence[int]) -> Vertex:
    _check_perm(sigma, x.n)
    return Vertex(_permute_bits(x.bits, sigma), x.n)


# -- .cubes text format ------------------------------------------------------

def parse_cubes(text: str) -> Family:
    """Parse the ``.cubes`` format: optional ``n=<n> k=<k>`` header, one word per line."""
    n = k = None
    members: list[Subcube] = []
    seen: dict[Subcube, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            if members or n is not None:
                raise CubesFormatError("header must precede all subcubes", lineno)
            n, k = _parse_header(line, lineno)
            continue
        try:
            c = parse_subcube(line)
        except CubeError as exc:
            raise CubesFormatError(str(exc), lineno) from None
        if n is None:
            n, k = c.n, c.dim
        if c.n != n:
            raise CubesFormatError(f"word length {c.n}, expected {n}", lineno)
        if c.dim != k:
            raise CubesFormatError(f"subcube dimension {c.dim}, expected {k}", lineno)
        if c in seen:
            raise CubesFormatError(f"duplicate of line {seen[c]}", lineno)
        seen[c] = lineno
        members.append(c)
    if n is None:
        n = k = 0
    return Family(n, k, tuple(members))


def _parse_header(line: str, lineno: int) -> tuple[int, int]:
    fields = dict(part.split("=", 1) for part in line.split() if "=" in part)
    try:
        n, k = int(fields["n"]), int(fields["k"])
    except (KeyError, ValueError):
        raise CubesFormatError(f"bad header {line!r}", lineno) from None
    if not 1 <= n <= MAX_N or not 0 <= k <= n:
        raise CubesFormatError(f"header values out of range: n={n} k={k}", lineno)
    return n, k


def format_cubes(family: Family, header: bool = True,
                 comments: Mapping[int, str] | None = None) -> str:
    lines = []
    if header and family.n >= 1:
        lines.append(f"n={family.n} k={family.k}")
    for i, c in enumerate(family.members):
        note = comments.get(i) if comments else None
        lines.append(f"{c.word}  # {note}" if note else c.word)
    return "\n".join(lines) + "\n"


def load_cubes(path: str | os.PathLike) -> Family:
    with open(path, encoding="utf-8") as fh:
        return parse_cubes(fh.read())


def save_cubes(path: str | os.PathLike, family: Family, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_cubes(family, **kwargs))
