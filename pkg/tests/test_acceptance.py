"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with its wall time; the lines are printed
together at the end of the pytest run (see ``conftest.py``).
"""
import contextlib
import math
import random
import time
from fractions import Fraction
from math import comb

import pytest

from irredundant import bounds as B
from irredundant import constructions as C
from irredundant.codes import (
    corradi_katai_bound,
    golay_code,
    hamming_code,
    is_perfect,
    max_separated_set,
    min_distance,
    trivial_code,
)
from irredundant.cube import (
    Family,
    Vertex,
    all_subcubes,
    is_irredundant,
    is_maximal_irredundant,
    permute,
    private_counts,
    project,
    translate,
)
from irredundant.search import (
    SearchProblem,
    all_subcubes as search_pool,
    ball_private_max,
    brute_force_max,
    canonical_form,
    max_irredundant,
    restricted_max_through_01,
)

RESULTS: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str, limit: float):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit:.0f}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        RESULTS.append(f"[{status}] {number:2d}. {title} ({elapsed:.2f}s, limit {limit:g}s)")


def test_01_bounds_table():
    with criterion(1, "bounds table", 1):
        assert B.ah_upper(5, 3) == 16
        assert B.meshulam_upper(5, 3) == Fraction(160, 13)
        assert B.meshulam_floor(5, 3) == 12
        assert B.meshulam_upper(7, 3) == 70 == 2 * comb(7, 3)
        assert isinstance(B.meshulam_upper(7, 3), Fraction)
        assert all(B.meshulam_upper(n, n) == 1 for n in range(0, 65))


def test_02_gamma0():
    with criterion(2, "entropy half-point gamma0", 1):
        g = B.gamma0()
        assert abs(g - 0.8900) <= 5e-5
        assert abs(B.entropy(g) - 0.5) <= 1e-12


def test_03_sandwich():
    with criterion(3, "random lower <= packing bound <= dimension bound, n <= 20", 10):
        for n in range(0, 21):
            for k in range(0, n + 1):
                mesh = B.meshulam_upper(n, k)
                assert mesh <= B.ah_upper(n, k)
                assert B.random_lower(n, k) <= float(mesh) * (1 + 1e-9)


def test_04_ratio_g():
    with criterion(4, "g(beta) in [1/e, 1] and increasing", 1):
        grid = [i / 1001 for i in range(1, 1001)]
        values = [B.ratio_g(b) for b in grid]
        assert all(1 / math.e - 1e-12 <= v <= 1 + 1e-12 for v in values)
        assert all(b > a for a, b in zip(values, values[1:]))


def test_05_perfect_codes():
    with criterion(5, "perfect-code families meet the packing bound", 60):
        fam = C.from_code(7, 1, hamming_code(3))
        assert len(fam) == 112 == B.meshulam_upper(7, 1)
        assert is_irredundant(fam)
        for k in (2, 3):
            n = 2 * k + 1
            fam = C.from_code(n, k, trivial_code(n))
            assert len(fam) == B.meshulam_upper(n, k)
            assert is_irredundant(fam)
        golay = golay_code()
        assert min_distance(golay) == 7
        assert is_perfect(golay, 3)
        assert len(golay) * B.ball_volume(23, 3) == 4096 * 2048 == 2 ** 23


def test_06_search_exactness():
    with criterion(6, "exact maxima and the two (5,3) extremal classes", 600):
        assert brute_force_max(2, 1) == 2
        assert brute_force_max(3, 1) == 6
        assert brute_force_max(3, 2) == 3
        result = max_irredundant(SearchProblem(5, 3, enumerate=True))
        assert result.optimum == 10 and result.complete
        classes = result.extremal_classes
        assert len(classes) == 2
        assert {tuple(f.words()) for f in classes} == {
            tuple(canonical_form(C.principal(5, 3)).words()),
            tuple(canonical_form(C.exceptional_5_3()).words()),
        }


def test_07_restricted_search():
    with criterion(7, "restricted maxima through 0/1 and with private vertices in the ball", 300):
        for k in (2, 3):
            n = 2 * k
            result = restricted_max_through_01(n, k)
            assert result.complete
            assert result.optimum <= comb(n, k)
            fam = C.b_family(k)
            pool = set(search_pool(n, k, "through01"))
            assert all(c in pool for c in fam)
            assert len(fam) == comb(2 * k, k) == result.optimum
        ball = ball_private_max(4, 2)
        assert ball.complete and ball.optimum == 6


def _repo_families():
    fams = [C.principal(n, k) for n in range(1, 6) for k in range(n + 1)]
    fams += [C.principal(5, 2, Vertex.parse("10110")), C.translates(5, 0b00111),
             C.translates(4, 0b0101), C.exceptional_5_3(), C.b_family(1), C.b_family(2),
             C.b_family(2).extend(C.e_extension(2).members), C.e_extension(2),
             C.from_code(3, 1, hamming_code(2)), C.from_code(5, 2, trivial_code(5)),
             C.from_code(3, 1, trivial_code(3)), C.product_k1(3), C.product_k1(4),
             C.product_k1(5)]
    fams += [C.random_family(n, k, 0.2, seed) for n in (4, 5) for k in (1, 2, 3)
             for seed in range(3)]
    return [f for f in fams if len(f)]


def _ball_subfamily(rng, n, k):
    pool = [c for c in all_subcubes(n, k) if bin(c.values).count("1") <= k]
    rng.shuffle(pool)
    members = []
    for c in pool:
        fam = Family(n, k, tuple(members + [c]))
        if not is_irredundant(fam):
            continue
        try:
            B.smallest_private_assignment(fam, radius=k)
        except ValueError:
            continue
        members.append(c)
    return Family(n, k, tuple(members))


def test_08_certificates():
    with criterion(8, "packing certificates never exceed 1", 60):
        for fam in _repo_families():
            assert fam.n <= 5 and is_irredundant(fam)
            value, _, _ = B.bollobas_sweep(fam, B.smallest_private_assignment(fam))
            assert isinstance(value, Fraction) and value <= 1
        for n in range(1, 6):
            for k in range(1, n + 1):
                fam = C.principal(n, k)
                value, _ = B.ball_sweep(fam, B.smallest_private_assignment(fam, radius=k))
                assert value <= 1
        rng = random.Random(8)
        for _ in range(60):
            n = rng.randint(2, 5)
            k = rng.randint(1, n)
            fam = _ball_subfamily(rng, n, k)
            value, _ = B.ball_sweep(fam, B.smallest_private_assignment(fam, radius=k))
            assert value <= 1


def test_09_constructions():
    with criterion(9, "n = 2k family sizes and maximality", 120):
        for k in (2, 3, 4):
            fam = C.b_family(k)
            ext = C.e_extension(k)
            assert len(fam) == comb(2 * k, k)
            assert len(ext) == comb(2 * k - 3, k - 1)
            assert is_irredundant(fam.extend(ext.members))
            assert not is_maximal_irredundant(fam)
        for n in range(1, 7):
            for k in range((n + 1) // 2, n + 1):
                assert is_maximal_irredundant(C.principal(n, k))
        for n in range(1, 6):
            for moving in range(1 << n):
                assert is_maximal_irredundant(C.translates(n, moving))


def test_10_random_construction():
    with criterion(10, "Monte-Carlo mean of the random construction", 120):
        small = C.random_experiment(4, 1, 0.5, trials=10_000, seed=2024)
        assert small.expected == pytest.approx(7.5, abs=1e-12)
        assert abs(small.mean - 7.5) <= 3 * small.stderr
        assert small.all_irredundant
        p = C.optimal_p(10, 3)
        large = C.random_experiment(10, 3, p, trials=2000, seed=2024)
        assert large.expected == pytest.approx(B.random_lower(10, 3), rel=1e-9)
        assert abs(large.mean - B.random_lower(10, 3)) <= 3 * large.stderr
        assert large.all_irredundant


def test_11_product_construction():
    with criterion(11, "product construction at n = 10", 30):
        fam = C.product_k1(10)
        assert len(fam) == 896 >= 10 / 12 * 2 ** 10
        assert is_irredundant(fam)


def test_12_separated_sets():
    with criterion(12, "separated sets respect the case-split bound", 120):
        for n in (2, 4, 6, 8, 10):
            size, witness = max_separated_set(n, n // 2)
            assert len(witness) == size
            assert size <= corradi_katai_bound(n)
            if n % 4 == 0:
                assert size <= 2 * n
            else:
                assert size <= n + 2
            assert all(bin(a ^ b).count("1") >= n // 2
                       for i, a in enumerate(witness) for b in witness[i + 1:])


def _random_irredundant(rng, n, k):
    pool = all_subcubes(n, k)
    rng.shuffle(pool)
    fam = Family(n, k, ())
    for c in pool[: rng.randint(1, len(pool))]:
        cand = fam.extend([c])
        if is_irredundant(cand):
            fam = cand
    return fam


def test_13_property_suites():
    cases = 200
    with criterion(13, f"property suites, {cases} cases each at n <= 5", 120):
        rng = random.Random(13)
        for _ in range(cases):
            n = rng.randint(1, 5)
            fam = _random_irredundant(rng, n, rng.randint(0, n))
            assert is_irredundant(fam)
            for i in range(len(fam)):
                assert is_irredundant(fam.without(i))
        for _ in range(cases):
            n = rng.randint(1, 5)
            k = rng.randint(0, n)
            pool = all_subcubes(n, k)
            fam = Family(n, k, tuple(rng.sample(pool, rng.randint(1, min(5, len(pool))))))
            x = Vertex(rng.randrange(2 ** n), n)
            sigma = list(range(n))
            rng.shuffle(sigma)
            for image in (translate(fam, x), permute(fam, sigma)):
                assert is_irredundant(image) == is_irredundant(fam)
                assert sorted(private_counts(image)) == sorted(private_counts(fam))
        for _ in range(cases):
            n = rng.randint(2, 5)
            k = rng.randint(1, n)
            coord = rng.randrange(n)
            pool = [c for c in all_subcubes(n, k) if c.moving >> coord & 1]
            rng.shuffle(pool)
            fam = Family(n, k, ())
            for c in pool[: rng.randint(1, len(pool))]:
                if is_irredundant(fam.extend([c])):
                    fam = fam.extend([c])
            assert is_irredundant(project(fam, coord))
        for _ in range(cases):
            n = rng.randint(1, 5)
            k = rng.randint(0, n)
            pool = all_subcubes(n, k)
            fam = Family(n, k, tuple(rng.sample(pool, rng.randint(1, min(6, len(pool))))))
            can = canonical_form(fam)
            assert canonical_form(can) == can
            x = Vertex(rng.randrange(2 ** n), n)
            assert canonical_form(translate(fam, x)) == can
