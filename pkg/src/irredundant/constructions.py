"""Explicit irredundant families: principal families, translates, code-based
families, the two-line family for n = 2k and its extension, the exceptional
(5, 3) family, the product family for k = 1 and the random construction.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _backend
from .bounds import ball_volume, optimal_t
from .codes import Code, hamming_code, min_distance
from .cube import (
    CubeError,
    Family,
    Subcube,
    Vertex,
    is_irredundant,
    lower_interval,
    upper_interval,
)

#: largest n accepted by the random construction (it sweeps all 2**n vertices)
RANDOM_CAP = 24

EXCEPTIONAL_5_3_WORDS = (
    "***00", "0***0", "00***", "*00**", "**00*",
    "***11", "1***1", "11***", "*11**", "**11*",
)
#: the unique private vertex of each member of ``exceptional_5_3()``
EXCEPTIONAL_5_3_PRIVATE = (
    "10100", "01010", "00101", "10010", "01001",
    "01011", "10101", "11010", "01101", "10110",
)


def _by_word(members) -> tuple[Subcube, ...]:
    return tuple(sorted(members, key=lambda c: c.word))


def _masks_of_weight(n: int, k: int):
    for coords in combinations(range(n), k):
        yield sum(1 << i for i in coords)


def principal(n: int, k: int, v: Vertex | None = None) -> Family:
    """All C(n, k) k-subcubes through ``v`` (default the zero vertex)."""
    if not 0 <= k <= n:
        raise CubeError(f"need 0 <= k <= n, got n={n}, k={k}")
    bits = 0 if v is None else v.bits
    if v is not None and v.n != n:
        raise CubeError(f"anchor vertex has n={v.n}, expected {n}")
    members = (Subcube(n, m, bits & ~m) for m in _masks_of_weight(n, k))
    return Family(n, k, _by_word(members))


def translates(n: int, moving: int) -> Family:
    """Every translate of the subcube with moving set ``moving``; they partition the cube."""
    full = (1 << n) - 1
    if moving < 0 or moving & ~full:
        raise CubeError(f"moving mask {moving:#x} does not fit in n={n}")
    fixed = full & ~moving
    members = []
    sub = fixed
    while True:
        members.append(Subcube(n, moving, sub))
        if sub == 0:
            break
        sub = (sub - 1) & fixed
    return Family(n, bin(moving).count("1"), _by_word(members))


def from_code(n: int, k: int, code: Code) -> Family:
    """Union of the principal families through the codewords.

    The codewords must be (2k+1)-separated, which makes the principal
    families pairwise disjoint and their union irredundant.
    """
    if code.n != n:
        raise CubeError(f"code has length {code.n}, expected {n}")
    if len(code) > 1 and min_distance(code) < 2 * k + 1:
        raise CubeError(f"code minimum distance {min_distance(code)} is below 2k+1 = {2 * k + 1}")
    members = []
    for w in code.words.tolist():
        members.extend(Subcube(n, m, w & ~m) for m in _masks_of_weight(n, k))
    return Family(n, k, _by_word(members))


def b_family(k: int) -> Family:
    """The C(2k, k) subcubes of {0,1}^{2k} through the line ``*0...0`` or ``1...1*``.

    Lower intervals of k-sets containing the first coordinate, and upper
    intervals of k-sets avoiding the last one.
    """
    if k < 1:
        raise CubeError("b_family needs k >= 1")
    n = 2 * k
    first, last = 1, 1 << (n - 1)
    members = []
    for x in _masks_of_weight(n, k):
        if x & first:
            members.append(lower_interval(Vertex(x, n)))
        if not x & last:
            members.append(upper_interval(Vertex(x, n)))
    return Family(n, k, _by_word(members))


def e_extension(k: int) -> Family:
    """Subcubes with first coordinate 0, last coordinate 1, second coordinate
    moving and every other coordinate either moving or 0.

    These can be added to ``b_family(k)`` without losing irredundance.
    """
    if k < 2:
        raise CubeError("e_extension needs k >= 2")
    n = 2 * k
    last = 1 << (n - 1)
    members = []
    for extra in combinations(range(2, n - 1), k - 1):
        moving = 0b10 | sum(1 << i for i in extra)
        members.append(Subcube(n, moving, last))
    return Family(n, k, tuple(members))


def exceptional_5_3() -> Family:
    """Ten 3-subcubes of Q5, five through 0 and five through 1, not isomorphic to F_0."""
    return Family.from_words(EXCEPTIONAL_5_3_WORDS)


def product_k1(n: int) -> Family:
    """Hamming-code family on the first m = 2^s - 1 coordinates, copied to every
    setting of the remaining n - m coordinates; size m/(m+1) * 2^n.
    """
    if n < 3:
        raise CubeError("product_k1 needs n >= 3")
    s = (n + 1).bit_length() - 1
    m = (1 << s) - 1
    base = from_code(m, 1, hamming_code(s))
    members = []
    for high in range(1 << (n - m)):
        shift = high << m
        members.extend(Subcube(n, c.moving, c.values | shift) for c in base.members)
    return Family(n, 1, _by_word(members))


# -- random construction ---------------------------------------------------------

def optimal_p(n: int, k: int) -> float:
    """Density p with (1-p)^V(n,k) equal to the optimal t = (1-beta)^(1/beta)."""
    if not 1 <= k <= n:
        raise ValueError(f"optimal_p needs 1 <= k <= n, got n={n}, k={k}")
    t = optimal_t(n, k)
    if t == 0.0:
        return 1.0
    return -math.expm1(math.log(t) / ball_volume(n, k))


def expected_size(n: int, k: int, p: float) -> float:
    """2^n ((1-p)^V(n,k-1) - (1-p)^V(n,k)): exact mean size of ``random_family``."""
    _check_p(p)
    q = 1.0 - p
    return 2.0 ** n * (q ** ball_volume(n, k - 1) - q ** ball_volume(n, k))


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")


@dataclass(frozen=True)
class RandomSample:
    family: Family
    n: int
    k: int
    p: float
    seed: int
    sample_size: int
    #: the vertex w behind each member; it is a private vertex of that member
    witnesses: tuple[int, ...] = field(repr=False)

    def sidecar(self) -> dict:
        return {"n": self.n, "k": self.k, "p": self.p, "seed": self.seed,
                "sample_size": self.sample_size, "family_size": len(self.family)}


def sample_random_family(n: int, k: int, p: float, seed: int = 0) -> RandomSample:
    """Random irredundant family from an i.i.d. Bernoulli(p) vertex sample S.

    For each vertex w at distance exactly k from S, take the numerically
    smallest x in S at distance k and add the subcube spanned by w and x.
    """
    _check_p(p)
    if not 1 <= n <= RANDOM_CAP:
        raise CubeError(f"random construction needs 1 <= n <= {RANDOM_CAP}, got {n}")
    if not 0 <= k <= n:
        raise CubeError(f"need 0 <= k <= n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    member = rng.random(1 << n) < p
    k_masks = np.fromiter(_masks_of_weight(n, k), dtype=np.int64)
    ws, xs = _backend.random_family_core(n, k, member.astype(np.uint8), k_masks)
    ws, xs = ws.tolist(), xs.tolist()
    members = tuple(Subcube(n, w ^ x, w & ~(w ^ x)) for w, x in zip(ws, xs))
    return RandomSample(Family(n, k, members), n, k, p, seed, int(member.sum()), tuple(ws))


def random_family(n: int, k: int, p: float, seed: int = 0) -> Family:
    return sample_random_family(n, k, p, seed).family


@dataclass(frozen=True)
class ExperimentStats:
    n: int
    k: int
    p: float
    seed: int
    trials: int
    sizes: tuple[int, ...]
    expected: float
    all_irredundant: bool

    @property
    def mean(self) -> float:
        return float(np.mean(self.sizes))

    @property
    def std(self) -> float:
        return float(np.std(self.sizes, ddof=1)) if self.trials > 1 else 0.0

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.trials)

    @property
    def z(self) -> float:
        se = self.stderr
        if se == 0.0:
            return 0.0 if self.mean == self.expected else math.inf
        return (self.mean - self.expected) / se

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "p": self.p, "seed": self.seed, "trials": self.trials,
            "mean": self.mean, "std": self.std, "stderr": self.stderr,
            "expected": self.expected, "z": self.z, "all_irredundant": self.all_irredundant,
        }


def _trial(n: int, k: int, p: float, seed: int, verify: bool) -> tuple[int, bool]:
    fam = random_family(n, k, p, seed)
    return len(fam), (is_irredundant(fam) if verify else True)


def random_experiment(n: int, k: int, p: float, trials: int, seed: int = 0,
                      verify: bool = True, threads: int = 1) -> ExperimentStats:
    """Sample ``trials`` random families (trial i uses seed ``seed + i``)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    _check_p(p)
    args = [(n, k, p, seed + i, verify) for i in range(trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda a: _trial(*a), args))
    else:
        results = [_trial(*a) for a in args]
    sizes = tuple(r[0] for r in results)
    return ExperimentStats(n, k, p, seed, trials, sizes, expected_size(n, k, p),
                           all(r[1] for r in results))


# -- dispatch ----------------------------------------------------------------------

KINDS = ("principal", "translates", "from_code", "b_family", "e_extension",
         "exceptional_5_3", "product_k1", "random")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int | None = None
    k: int | None = None
    anchor: Vertex | None = None
    moving: int | None = None
    code: Code | None = None
    p: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown construction {self.kind!r}; choose from {', '.join(KINDS)}")
        need = {
            "principal": ("n", "k"),
            "translates": ("n", "moving"),
            "from_code": ("k", "code"),
            "b_family": ("k",),
            "e_extension": ("k",),
            "exceptional_5_3": (),
            "product_k1": ("n",),
            "random": ("n", "k", "p"),
        }[self.kind]
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} needs {', '.join(missing)}")

    def build(self) -> Family:
        kind = self.kind
        if kind == "principal":
            return principal(self.n, self.k, self.anchor)
        if kind == "translates":
            return translates(self.n, self.moving)
        if kind == "from_code":
            return from_code(self.code.n, self.k, self.code)
        if kind == "b_family":
            return b_family(self.k)
        if kind == "e_extension":
            return e_extension(self.k)
        if kind == "exceptional_5_3":
            return exceptional_5_3()
        if kind == "product_k1":
            return product_k1(self.n)
        return random_family(self.n, self.k, self.p, self.seed)
