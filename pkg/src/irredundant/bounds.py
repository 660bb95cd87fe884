"""Upper and lower bounds on the size of irredundant families, and
packing certificates for concrete families.

All bound formulas are exact (``int`` / ``Fraction``); floating point is
used only for the entropy function, its half-value point, the lower/upper
ratio ``g`` and the probabilistic lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .cube import (
    CubeError,
    Family,
    Vertex,
    _popcount,
    private_bits,
    translate,
)


def _check_nk(n: int, k: int) -> None:
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")


def ball_volume(n: int, r: int) -> int:
    """Number of vertices within Hamming distance ``r`` of a fixed vertex."""
    if r < 0:
        return 0
    return sum(math.comb(n, i) for i in range(min(r, n) + 1))


def ah_upper(n: int, k: int) -> int:
    """Dimension bound: sum of C(n, i) for i = k..n."""
    _check_nk(n, k)
    return sum(math.comb(n, i) for i in range(k, n + 1))


def meshulam_upper(n: int, k: int) -> Fraction:
    """2^n C(n,k) / V(n,k), where V(n,k) is the volume of a radius-k ball."""
    _check_nk(n, k)
    return Fraction(2 ** n * math.comb(n, k), ball_volume(n, k))


def meshulam_floor(n: int, k: int) -> int:
    return math.floor(meshulam_upper(n, k))


def meshulam_grid_upper(m: int, n: int, k: int) -> Fraction:
    """The bound for irredundant families of k-subgrids of Z_m^n."""
    if m < 2:
        raise ValueError(f"grid side m must be >= 2, got {m}")
    _check_nk(n, k)
    den = sum((m - 1) ** j * math.comb(n, j) for j in range(n - k, n + 1))
    return Fraction(m ** n * (m - 1) ** (n - k) * math.comb(n, k), den)


def beta(n: int, k: int) -> Fraction:
    _check_nk(n, k)
    return Fraction(math.comb(n, k), ball_volume(n, k))


def eta(n: int, k: int) -> Fraction:
    return 1 - beta(n, k)


def lower_factor(b: float) -> float:
    """b (1-b)^((1-b)/b), the maximum of t^(1-b) - t over t in [0, 1].

    Uses 0^0 = 1, so ``lower_factor(1) == 1``.
    """
    if not 0 < b <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {b}")
    if b == 1:
        return 1.0
    return b * ratio_g(b)


def random_lower(n: int, k: int) -> float:
    """Expected size of the probabilistic construction at the optimal density."""
    return lower_factor(float(beta(n, k))) * 2.0 ** n


def optimal_t(n: int, k: int) -> float:
    """The maximiser (1 - beta)^(1/beta) of t^(1-beta) - t."""
    b = float(beta(n, k))
    if b == 1:
        return 0.0
    return math.exp(math.log1p(-b) / b)


def ratio_g(b: float) -> float:
    """(1-b)^((1-b)/b) for b in (0, 1); increases from 1/e to 1."""
    if not 0 < b < 1:
        raise ValueError(f"g is defined on the open interval (0, 1), got {b}")
    return math.exp((1 - b) / b * math.log1p(-b))


def ratio_g_limit(b: float) -> float:
    """``ratio_g`` extended by its limits, 1/e at 0 and 1 at 1."""
    if b <= 0:
        return math.exp(-1)
    if b >= 1:
        return 1.0
    return ratio_g(b)


def entropy(gamma: float) -> float:
    if not 0 < gamma < 1:
        raise ValueError(f"entropy needs 0 < gamma < 1, got {gamma}")
    return -gamma * math.log2(gamma) - (1 - gamma) * math.log2(1 - gamma)


def gamma0(tol: float = 1e-12) -> float:
    """The root of H2(gamma) = 1/2 in (1/2, 1), found by bisection."""
    lo, hi = 0.5, 1 - 1e-15
    # H2 decreases on (1/2, 1): H2(lo) = 1 > 1/2 > H2(hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        h = entropy(mid)
        if abs(h - 0.5) <= tol:
            return mid
        if h > 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def averaging_constant(n: int, k: int) -> Fraction:
    """Sum over l of C(k,l) / C(l+n-k, n-k): the certificate mass of one member."""
    _check_nk(n, k)
    return sum((Fraction(math.comb(k, l), math.comb(l + n - k, n - k))
                for l in range(k + 1)), Fraction(0))


def averaging_identity_rhs(n: int, k: int) -> Fraction:
    _check_nk(n, k)
    return Fraction(ball_volume(n, k), math.comb(n, k))


# -- certificates --------------------------------------------------------------

@dataclass(frozen=True)
class PrivateAssignment:
    """A chosen private vertex for every member of a family (by index)."""

    vertices: Mapping[int, Vertex] = field(default_factory=dict)

    def __getitem__(self, i: int) -> Vertex:
        return self.vertices[i]

    def __len__(self) -> int:
        return len(self.vertices)

    def validate(self, family: Family) -> None:
        if set(self.vertices) != set(range(len(family))):
            raise CubeError("assignment must cover every member index exactly")
        for i, w in self.vertices.items():
            if w.n != family.n:
                raise CubeError(f"assigned vertex {w} has wrong length")
            if w.bits not in set(private_bits(family, i).tolist()):
                raise CubeError(f"{w} is not a private vertex of member {i} ({family[i]})")


def smallest_private_assignment(family: Family, radius: int | None = None,
                                center: Vertex | None = None) -> PrivateAssignment:
    """Numerically smallest private vertex per member.

    With ``radius`` set, only private vertices within that distance of
    ``center`` (default the zero vertex) are eligible.
    """
    c = 0 if center is None else center.bits
    chosen = {}
    for i in range(len(family)):
        privs = private_bits(family, i)
        if radius is not None:
            privs = [x for x in privs.tolist() if _popcount(x ^ c) <= radius]
        if len(privs) == 0:
            where = "" if radius is None else f" within distance {radius} of the centre"
            raise CubeError(f"member {i} ({family[i]}) has no private vertex{where}")
        chosen[i] = Vertex(int(min(privs)), family.n)
    return PrivateAssignment(chosen)


def bollobas_certificate(family: Family, assignment: PrivateAssignment,
                         x: Vertex, validate: bool = True) -> Fraction:
    """Sum over members C containing x of 1 / C(|w_C ^ x| + n - k, n - k).

    For an irredundant family this never exceeds 1.
    """
    if validate:
        assignment.validate(family)
    if x.n != family.n:
        raise CubeError("vertex and family dimensions differ")
    n, k = family.n, family.k
    total = Fraction(0)
    for i, c in enumerate(family.members):
        if c.contains_bits(x.bits):
            d = _popcount(assignment[i].bits ^ x.bits)
            total += Fraction(1, math.comb(d + n - k, n - k))
    return total


def bollobas_sweep(family: Family, assignment: PrivateAssignment
                   ) -> tuple[Fraction, Vertex | None, Fraction]:
    """Evaluate the certificate at every covered vertex.

    Returns ``(max value, a maximising vertex, total over all vertices)``;
    uncovered vertices contribute 0.  Ties go to the smallest vertex.
    """
    assignment.validate(family)
    n, k = family.n, family.k
    denoms = [math.comb(l + n - k, n - k) for l in range(k + 1)]
    scale = math.lcm(*denoms)
    acc: dict[int, int] = {}
    for i, c in enumerate(family.members):
        w = assignment[i].bits
        for x in c.vertex_bits().tolist():
            acc[x] = acc.get(x, 0) + scale // denoms[_popcount(w ^ x)]
    if not acc:
        return Fraction(0), None, Fraction(0)
    best_x = min(acc, key=lambda x: (-acc[x], x))
    return (Fraction(acc[best_x], scale), Vertex(best_x, n),
            Fraction(sum(acc.values()), scale))


def _ball_terms(family: Family, assignment: PrivateAssignment, k: int):
    for i, c in enumerate(family.members):
        w = assignment[i].bits
        if _popcount(w) > k:
            raise CubeError(f"private vertex {assignment[i]} of member {i} lies outside the ball")
        end = c.values | c.moving
        top = k - _popcount(w)
        yield w, end, Fraction(1, math.comb(_popcount(c.values) + top, top))


def _recentre(family: Family, assignment: PrivateAssignment, center: Vertex | None):
    if center is None or center.bits == 0:
        return family, assignment
    moved = translate(family, center)
    return moved, PrivateAssignment({i: w ^ center for i, w in assignment.vertices.items()})


def ball_certificate(family: Family, assignment: PrivateAssignment, x: Vertex,
                     center: Vertex | None = None, validate: bool = True) -> Fraction:
    """Sum over members C with x in [w_C, u_C] of 1 / C(|v_C| + k - |w_C|, k - |w_C|).

    Distances are measured from ``center`` (default the zero vertex): every
    assigned private vertex must lie within distance k of it and ``x`` must be
    at distance exactly k.
    """
    if validate:
        assignment.validate(family)
    if x.n != family.n:
        raise CubeError("vertex and family dimensions differ")
    family, assignment = _recentre(family, assignment, center)
    xb = x.bits if center is None else x.bits ^ center.bits
    k = family.k
    if _popcount(xb) != k:
        raise CubeError(f"x must have weight exactly k={k} relative to the centre")
    total = Fraction(0)
    for w, end, term in _ball_terms(family, assignment, k):
        if (w & ~xb) == 0 and (xb & ~end) == 0:
            total += term
    return total


def ball_sweep(family: Family, assignment: PrivateAssignment,
               center: Vertex | None = None) -> tuple[Fraction, Vertex | None]:
    """Maximum of ``ball_certificate`` over every x at distance k from the centre."""
    assignment.validate(family)
    family0, assignment0 = _recentre(family, assignment, center)
    n, k = family.n, family.k
    c = 0 if center is None else center.bits
    terms = list(_ball_terms(family0, assignment0, k))
    best, best_x = Fraction(0), None
    for coords in combinations(range(n), k):
        xb = sum(1 << i for i in coords)
        total = sum((t for w, end, t in terms if (w & ~xb) == 0 and (xb & ~end) == 0),
                    Fraction(0))
        x = xb ^ c
        if total > best or (total == best and best_x is not None and x < best_x.bits):
            best, best_x = total, Vertex(x, n)
    return best, best_x


# -- report ----------------------------------------------------------------------

def _is_hamming_length(n: int) -> bool:
    return n >= 3 and (n + 1) & n == 0


def equality_cases(n: int, k: int) -> list[str]:
    """Known (n, k) where a perfect code makes the upper bound exact."""
    cases = []
    if n == 2 * k + 1:
        cases.append("n=2k+1")
    if k == 1 and _is_hamming_length(n):
        cases.append("perfect code: Hamming")
    if (n, k) == (23, 3):
        cases.append("perfect code: Golay")
    return cases


def _rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    ah_bound: int
    meshulam: Fraction
    meshulam_floor: int
    beta: Fraction
    eta: Fraction
    random_lower: float
    t_opt: float
    ratio_g: float
    equality: tuple[str, ...]
    grid_m: int | None = None
    grid_bound: Fraction | None = None

    @property
    def meshulam_is_integer(self) -> bool:
        return self.meshulam.denominator == 1

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "ah_bound": str(self.ah_bound),
            "meshulam": _rational(self.meshulam),
            "meshulam_decimal": _sig6(float(self.meshulam)),
            "meshulam_floor": str(self.meshulam_floor),
            "beta": _rational(self.beta),
            "beta_decimal": _sig6(float(self.beta)),
            "eta": _rational(self.eta),
            "eta_decimal": _sig6(float(self.eta)),
            "random_lower": _sig6(self.random_lower),
            "t_opt": _sig6(self.t_opt),
            "ratio_g": _sig6(self.ratio_g),
            "equality": list(self.equality),
        }
        if self.grid_m is not None:
            out["grid_m"] = self.grid_m
            out["grid_bound"] = _rational(self.grid_bound)
            out["grid_bound_decimal"] = _sig6(float(self.grid_bound))
        return out


def bounds_report(n: int, k: int, grid_m: int | None = None) -> BoundsReport:
    _check_nk(n, k)
    b = beta(n, k)
    mesh = meshulam_upper(n, k)
    return BoundsReport(
        n=n,
        k=k,
        ah_bound=ah_upper(n, k),
        meshulam=mesh,
        meshulam_floor=math.floor(mesh),
        beta=b,
        eta=1 - b,
        random_lower=random_lower(n, k),
        t_opt=optimal_t(n, k),
        ratio_g=ratio_g_limit(float(b)),
        equality=tuple(equality_cases(n, k)),
        grid_m=grid_m,
        grid_bound=None if grid_m is None else meshulam_grid_upper(grid_m, n, k),
    )


def sandwich_holds(n: int, k: int, slack: float = 1e-9) -> bool:
    """random_lower <= meshulam <= ah_upper."""
    mesh = meshulam_upper(n, k)
    return random_lower(n, k) <= float(mesh) * (1 + slack) and mesh <= ah_upper(n, k)
