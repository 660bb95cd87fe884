"""Exact maxima of irredundant families by branch and bound.

Irredundance is hereditary, so a depth-first search that only ever extends
irredundant families, and never revisits a rejected candidate deeper in the
same branch, sees every irredundant family.  The inner loop lives in the
compiled kernel (``_backend.branch_and_bound``).  Around it a driver breaks
symmetry: at each level it branches on one representative per orbit of the
symmetries fixing the already chosen subcubes, and excludes the orbits
handled by earlier branches.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import _backend
from .bounds import meshulam_floor
from .cube import (
    CubeError,
    Family,
    Subcube,
    Vertex,
    all_subcubes as _all_k_subcubes,
    is_irredundant,
    translate,
)

UNIVERSES = ("all", "through01", "ball")
#: default caps on n: exact search over every subcube, and over restricted pools
CAP_ALL = 6
CAP_RESTRICTED = 8
#: largest n accepted by ``canonical_form`` (the group has n! 2^n elements)
CANONICAL_CAP = 8
DEFAULT_BUDGET = 10 ** 9
#: symmetry tables larger than this many entries are not built
GROUP_TABLE_LIMIT = 5 * 10 ** 7


@dataclass(frozen=True)
class SearchProblem:
    n: int
    k: int
    universe: str = "all"
    radius: int | None = None
    center: Vertex | None = None
    enumerate: bool = False
    budget: int = DEFAULT_BUDGET
    time_limit: float | None = None
    cap: int | None = None
    #: levels of orbit branching before handing over to the kernel (0 disables)
    symmetry_depth: int = 5

    def __post_init__(self):
        if self.universe not in UNIVERSES:
            raise ValueError(f"unknown universe {self.universe!r}; choose from {', '.join(UNIVERSES)}")
        if not 0 <= self.k <= self.n or self.n < 1:
            raise CubeError(f"need 0 <= k <= n and n >= 1, got n={self.n}, k={self.k}")
        if self.n > self.effective_cap:
            raise CubeError(f"n={self.n} above the {self.universe} search cap {self.effective_cap}")
        if self.budget < 1:
            raise ValueError("node budget must be positive")
        if self.center is not None and self.center.n != self.n:
            raise CubeError("ball centre has the wrong dimension")

    @property
    def effective_cap(self) -> int:
        if self.cap is not None:
            return self.cap
        return CAP_ALL if self.universe == "all" else CAP_RESTRICTED

    @property
    def ball_radius(self) -> int:
        return self.k if self.radius is None else self.radius


@dataclass
class SearchResult:
    n: int
    k: int
    universe: str
    optimum: int
    witness: Family
    node_count: int
    complete: bool
    extremal_classes: list[Family] | None = None
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "universe": self.universe,
            "optimum": self.optimum,
            "complete": self.complete,
            "node_count": self.node_count,
            "witness": self.witness.words(),
            "extremal_classes": (None if self.extremal_classes is None
                                 else [f.words() for f in self.extremal_classes]),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# -- candidate pools ---------------------------------------------------------------

def _ball_bits(n: int, radius: int) -> list[int]:
    return [x for x in range(1 << n) if bin(x).count("1") <= radius]


def all_subcubes(n: int, k: int, universe: str = "all", radius: int | None = None,
                 cap: int | None = None) -> list[Subcube]:
    """The candidate pool of a search, in word order.

    ``through01``: subcubes containing the all-zeros or the all-ones vertex.
    ``ball``: subcubes meeting the ball of the given radius (default k) around 0.
    """
    if universe not in UNIVERSES:
        raise ValueError(f"unknown universe {universe!r}")
    limit = cap if cap is not None else (CAP_ALL if universe == "all" else CAP_RESTRICTED)
    if n > limit:
        raise CubeError(f"n={n} above the {universe} cap {limit}")
    pool = _all_k_subcubes(n, k)
    full = (1 << n) - 1
    if universe == "through01":
        pool = [c for c in pool if c.values == 0 or c.values | c.moving == full]
    elif universe == "ball":
        r = k if radius is None else radius
        # the vertex of C nearest to 0 is its start vertex
        pool = [c for c in pool if bin(c.values).count("1") <= r]
    return pool


def _region_bits(problem: SearchProblem) -> list[int]:
    if problem.universe == "ball":
        return _ball_bits(problem.n, problem.ball_radius)
    return list(range(1 << problem.n))


def _to_words(bitsets: Sequence[int], n: int) -> np.ndarray:
    """Python-int vertex bitsets as an (N, W) uint64 array."""
    W = max(1, (1 << n) // 64)
    out = np.zeros((len(bitsets), W), dtype=np.uint64)
    for i, b in enumerate(bitsets):
        for w in range(W):
            out[i, w] = (b >> (64 * w)) & 0xFFFF_FFFF_FFFF_FFFF
    return out


def _vertex_bitset(c: Subcube) -> int:
    out = 0
    for x in c.vertex_bits().tolist():
        out |= 1 << x
    return out


# -- symmetry ----------------------------------------------------------------------

def _permute_bits(x: int, sigma: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(sigma):
        if x >> i & 1:
            out |= 1 << j
    return out


def _symmetry_table(pool: list[Subcube], n: int, universe: str) -> np.ndarray:
    """Every pool-preserving symmetry as a permutation of pool indices.

    The group is coordinate permutations combined with the translations that
    preserve the universe: all of them, only {0, 1...1}, or none for a ball
    around 0.
    """
    full = (1 << n) - 1
    if universe == "all":
        shifts = range(1 << n)
    elif universe == "through01":
        shifts = (0, full)
    else:
        shifts = (0,)
    size = math.factorial(n) * len(shifts)
    if size * len(pool) > GROUP_TABLE_LIMIT:
        return np.arange(len(pool), dtype=np.int32)[None, :]
    index = {(c.moving, c.values): i for i, c in enumerate(pool)}
    rows = []
    for sigma in itertools.permutations(range(n)):
        pm = [_permute_bits(c.moving, sigma) for c in pool]
        for t in shifts:
            rows.append([index[(m, _permute_bits((c.values ^ t) & ~c.moving, sigma))]
                         for m, c in zip(pm, pool)])
    return np.array(rows, dtype=np.int32)


# -- driver ------------------------------------------------------------------------

class _Driver:
    def __init__(self, problem: SearchProblem, pool: list[Subcube], upper: int):
        self.problem = problem
        self.pool = pool
        self.enumerate = problem.enumerate
        self.upper = upper
        region = _region_bits(problem)
        self.region = sum(1 << x for x in region)
        self.bitsets = [_vertex_bitset(c) for c in pool]
        self.masks = _to_words(self.bitsets, problem.n)
        self.region_words = _to_words([self.region], problem.n)[0]
        self.best = 0
        self.families: list[list[int]] = []
        self.nodes = 0
        self.exhausted = False
        self.deadline = (None if problem.time_limit is None
                         else time.monotonic() + problem.time_limit)

    def _compatible(self, chosen: list[int], c: int) -> bool:
        once = twice = 0
        for i in chosen + [c]:
            m = self.bitsets[i]
            twice |= once & m
            once = (once ^ m) & ~twice
        return all(self.bitsets[i] & once & self.region for i in chosen + [c])

    def _record(self, fam: list[int], size: int) -> None:
        if size > self.best:
            self.best = size
            self.families = [list(fam)]
        elif self.enumerate and size == self.best and size > 0:
            self.families.append(list(fam))

    def _out_of_budget(self) -> bool:
        if self.nodes >= self.problem.budget:
            self.exhausted = True
        elif self.deadline is not None and time.monotonic() > self.deadline:
            self.exhausted = True
        return self.exhausted

    def _capped(self) -> bool:
        return not self.enumerate and self.best >= self.upper

    def leaf(self, chosen: list[int], cands: list[int]) -> None:
        budget = self.problem.budget - self.nodes
        best, fams, nodes, exhausted = _backend.branch_and_bound(
            self.masks, self.region_words, chosen, cands, self.best, self.enumerate,
            self.upper, budget)
        self.nodes += nodes
        if exhausted:
            self.exhausted = True
        if best > self.best:
            self.best = best
            self.families = [list(f) for f in fams]
        elif self.enumerate and best == self.best:
            self.families.extend(list(f) for f in fams)

    def branch(self, chosen: list[int], cands: list[int], group: np.ndarray) -> None:
        if self._out_of_budget() or self._capped():
            return
        if group.shape[0] == 1 or len(chosen) >= self.problem.symmetry_depth:
            self.leaf(chosen, cands)
            return
        self.nodes += 1
        self._record(chosen, len(chosen))
        position = {c: i for i, c in enumerate(cands)}
        seen: set[int] = set()
        orbits = []
        for c in cands:
            if c in seen:
                continue
            orbit = sorted(set(group[:, c].tolist()), key=position.__getitem__)
            seen.update(orbit)
            orbits.append(orbit)
        excluded: set[int] = set()
        for orbit in orbits:
            rep = orbit[0]
            rest = [c for c in cands if c not in excluded and c != rep]
            ub = len(chosen) + 1 + len(rest)
            if ub > self.best or (self.enumerate and ub == self.best):
                nxt = chosen + [rep]
                rest = [c for c in rest if self._compatible(nxt, c)]
                self.branch(nxt, rest, group[group[:, rep] == rep])
            excluded.update(orbit)
            if self.exhausted or self._capped():
                return


def _solve(problem: SearchProblem) -> tuple[list[Subcube], _Driver]:
    n, k = problem.n, problem.k
    pool = all_subcubes(n, k, problem.universe, problem.ball_radius, problem.effective_cap)
    upper = min(meshulam_floor(n, k), len(pool))
    driver = _Driver(problem, pool, upper)
    start = [i for i in range(len(pool)) if driver._compatible([], i)]
    if problem.symmetry_depth > 0:
        group = _symmetry_table(pool, n, problem.universe)
    else:
        group = np.arange(len(pool), dtype=np.int32)[None, :]
    driver.branch([], start, group)
    return pool, driver


def _family_of(pool: list[Subcube], fam: list[int], n: int, k: int,
               center: Vertex | None) -> Family:
    out = Family(n, k, tuple(sorted((pool[i] for i in fam), key=lambda c: c.word)))
    if center is not None and center.bits:
        out = translate(out, center).sorted()
    return out


def max_irredundant(problem: SearchProblem) -> SearchResult:
    """Largest irredundant family of the problem's universe.

    With ``problem.enumerate`` set, every extremal family met by the search is
    collected and the isomorphism classes are returned (see
    :func:`enumerate_extremal`).
    """
    t0 = time.monotonic()
    n, k = problem.n, problem.k
    pool, driver = _solve(problem)
    center = problem.center if problem.universe == "ball" else None
    if driver.families:
        witness = _family_of(pool, driver.families[0], n, k, center)
    else:
        witness = Family(n, k, ())
    classes = None
    if problem.enumerate:
        found = {}
        for fam in driver.families:
            f = _family_of(pool, fam, n, k, center)
            key = _canonical_keys(f)
            found.setdefault(tuple(key), f)
        classes = [_decode(n, k, list(key)) for key in sorted(found)]
    return SearchResult(n, k, problem.universe, driver.best, witness, driver.nodes,
                        not driver.exhausted, classes, time.monotonic() - t0)


def enumerate_extremal(problem: SearchProblem) -> list[Family]:
    """Canonical forms of all maximum-size families, sorted and deduplicated."""
    if not problem.enumerate:
        problem = replace(problem, enumerate=True)
    result = max_irredundant(problem)
    if not result.complete:
        raise RuntimeError("node or time budget exhausted before the enumeration finished")
    return result.extremal_classes


def restricted_max_through_01(n: int, k: int, budget: int = DEFAULT_BUDGET,
                              enumerate: bool = False) -> SearchResult:
    """Largest irredundant family whose members all contain 0...0 or 1...1."""
    return max_irredundant(SearchProblem(n, k, "through01", budget=budget, enumerate=enumerate))


def ball_private_max(n: int, k: int, radius: int | None = None, center: Vertex | None = None,
                     budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Largest family in which every member has a private vertex inside the
    ball of the given radius (default k) around ``center`` (default 0).
    """
    return max_irredundant(SearchProblem(n, k, "ball", radius=radius, center=center,
                                         budget=budget))


def brute_force_max(n: int, k: int, universe: str = "all", limit: int = 20) -> int:
    """Check every subset of the candidate pool; only for pools of at most ``limit`` subcubes."""
    pool = all_subcubes(n, k, universe, cap=n)
    if len(pool) > limit:
        raise CubeError(f"pool of {len(pool)} subcubes is too large for brute force")
    best = 0
    for r in range(len(pool), 0, -1):
        for subset in itertools.combinations(pool, r):
            if is_irredundant(Family(n, k, subset)):
                return r
    return best


# -- canonical forms ---------------------------------------------------------------

_PERM_CACHE: dict[int, np.ndarray] = {}


def _all_perms(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))),
                                  dtype=np.int64).reshape(-1, n)
    return _PERM_CACHE[n]


def _pow3(n: int) -> np.ndarray:
    return np.array([3 ** (n - 1 - i) for i in range(n)], dtype=np.int64)


def _canonical_keys(family: Family) -> list[int]:
    n = family.n
    if n > CANONICAL_CAP:
        raise CubeError(f"canonical_form supports n <= {CANONICAL_CAP}, got {n}")
    moving = np.array([c.moving for c in family.members], dtype=np.int64)
    values = np.array([c.values for c in family.members], dtype=np.int64)
    return list(_backend.min_orbit_keys(n, moving, values, _all_perms(n), _pow3(n)))


def _decode(n: int, k: int, keys: list[int]) -> Family:
    members = []
    for key in keys:
        moving = values = 0
        for i in range(n - 1, -1, -1):
            key, digit = divmod(key, 3)
            if digit == 0:
                moving |= 1 << i
            elif digit == 2:
                values |= 1 << i
        members.append(Subcube(n, moving, values))
    return Family(n, k, tuple(members))


def canonical_form(family: Family) -> Family:
    """Smallest image of ``family`` under translations and coordinate permutations.

    Members of the result are in word order (``*`` < ``0`` < ``1``), and
    families are compared by their sorted word lists.
    """
    if family.n == 0:
        return family
    return _decode(family.n, family.k, _canonical_keys(family))


def isomorphic(a: Family, b: Family) -> bool:
    if (a.n, a.k, len(a)) != (b.n, b.k, len(b)):
        return False
    return _canonical_keys(a) == _canonical_keys(b)


def backend() -> str:
    return _backend.BACKEND


__all__ = [
    "SearchProblem", "SearchResult", "UNIVERSES", "all_subcubes", "max_irredundant",
    "enumerate_extremal", "restricted_max_through_01", "ball_private_max",
    "brute_force_max", "canonical_form", "isomorphic", "backend",
]
