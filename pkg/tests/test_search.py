import json
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from irredundant import constructions as C
from irredundant.codes import trivial_code
from irredundant.cube import CubeError, Family, Vertex, all_subcubes as k_subcubes, permute, translate
from irredundant.search import (
    SearchProblem,
    all_subcubes,
    ball_private_max,
    brute_force_max,
    canonical_form,
    enumerate_extremal,
    isomorphic,
    max_irredundant,
    restricted_max_through_01,
)


def test_pool_sizes():
    for n in range(1, 6):
        for k in range(n + 1):
            assert len(all_subcubes(n, k)) == comb(n, k) * 2 ** (n - k)
    # subcubes through 0 and through 1 overlap only when k = n
    assert len(all_subcubes(4, 2, "through01")) == 2 * comb(4, 2)
    assert len(all_subcubes(3, 3, "through01")) == 1
    # start vertex of weight at most r
    assert len(all_subcubes(4, 2, "ball")) == comb(4, 2) * (1 + 2 + 1)
    assert len(all_subcubes(4, 1, "ball", radius=0)) == 4
    with pytest.raises(CubeError):
        all_subcubes(7, 2)
    with pytest.raises(ValueError):
        all_subcubes(3, 1, "sphere")


@pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
def test_small_maxima_match_oracle(n, k):
    expected = oracles.max_irredundant_brute(n, k)
    result = max_irredundant(SearchProblem(n, k))
    assert result.optimum == expected
    assert result.complete
    assert len(result.witness) == expected
    assert oracles.irredundant(result.witness.words())


def test_known_small_values():
    assert brute_force_max(2, 1) == 2
    assert brute_force_max(3, 1) == 6
    assert brute_force_max(3, 2) == 3
    assert max_irredundant(SearchProblem(4, 2)).optimum == 8


def test_k0_and_kn():
    for n in range(1, 6):
        assert max_irredundant(SearchProblem(n, 0)).optimum == 2 ** n
        r = max_irredundant(SearchProblem(n, n))
        assert r.optimum == 1 and r.witness.words() == ["*" * n]


def test_brute_force_limit():
    with pytest.raises(CubeError):
        brute_force_max(4, 2)


def test_restricted_pool_oracle():
    pool = [c.word for c in all_subcubes(4, 2, "through01")]
    assert restricted_max_through_01(4, 2).optimum == oracles.max_irredundant_brute(4, 2, pool)
    assert restricted_max_through_01(4, 2).optimum <= comb(4, 2)


def test_five_three_classes():
    classes = enumerate_extremal(SearchProblem(5, 3))
    assert len(classes) == 2
    assert canonical_form(C.principal(5, 3)) in classes
    assert canonical_form(C.exceptional_5_3()) in classes
    for f in classes:
        assert len(f) == 10 and oracles.irredundant(f.words())


def test_four_two_single_class():
    r = max_irredundant(SearchProblem(4, 2, enumerate=True))
    assert r.optimum == 8 and len(r.extremal_classes) == 1
    assert oracles.maximal(r.witness.words(), 4, 2)


def test_restricted_and_ball():
    assert restricted_max_through_01(5, 3).optimum == 10
    assert ball_private_max(4, 2).optimum == 6
    assert ball_private_max(3, 1).optimum == 3
    c = Vertex.parse("0110")
    r = ball_private_max(4, 2, center=c)
    assert r.optimum == 6
    assert r.witness.same_members(translate(ball_private_max(4, 2).witness, c))


def test_budget_exhaustion_is_reported():
    r = max_irredundant(SearchProblem(5, 2, budget=50))
    assert not r.complete
    assert r.optimum >= 1 and len(r.witness) == r.optimum
    with pytest.raises(RuntimeError):
        enumerate_extremal(SearchProblem(5, 2, budget=50))


def test_symmetry_depth_does_not_change_answer():
    for depth in (0, 1, 2, 5):
        assert max_irredundant(SearchProblem(4, 2, symmetry_depth=depth)).optimum == 8
        assert len(enumerate_extremal(SearchProblem(4, 2, symmetry_depth=depth))) == 1


def test_search_dominates_constructions():
    assert max_irredundant(SearchProblem(4, 2)).optimum >= len(C.b_family(2).extend(
        C.e_extension(2).members))
    assert max_irredundant(SearchProblem(3, 1)).optimum >= len(C.product_k1(3))
    assert max_irredundant(SearchProblem(5, 2)).optimum >= len(C.from_code(5, 2, trivial_code(5)))


def test_problem_validation():
    with pytest.raises(ValueError):
        SearchProblem(3, 1, universe="nope")
    with pytest.raises(CubeError):
        SearchProblem(3, 4)
    with pytest.raises(CubeError):
        SearchProblem(7, 3)
    with pytest.raises(ValueError):
        SearchProblem(3, 1, budget=0)


def test_json_shape():
    r = max_irredundant(SearchProblem(3, 2, enumerate=True))
    d = json.loads(r.to_json())
    assert set(d) == {"n", "k", "universe", "optimum", "complete", "node_count",
                      "witness", "extremal_classes"}
    assert d["optimum"] == 3 and d["complete"] is True
    assert len(d["extremal_classes"]) == 1
    assert r.to_json() == max_irredundant(SearchProblem(3, 2, enumerate=True)).to_json()


# -- canonical forms ---------------------------------------------------------------

def test_principal_families_share_canonical_form():
    base = canonical_form(C.principal(4, 2))
    for bits in range(16):
        assert canonical_form(C.principal(4, 2, Vertex(bits, 4))) == base
    assert not isomorphic(C.principal(5, 3), C.exceptional_5_3())


def test_canonical_form_of_empty_family():
    empty = Family(3, 1, ())
    assert len(canonical_form(empty)) == 0


@st.composite
def families(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(0, n))
    pool = k_subcubes(n, k)
    members = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=6, unique=True))
    return Family(n, k, tuple(members))


@settings(max_examples=150, deadline=None)
@given(families(), st.data())
def test_canonical_form_invariance(fam, data):
    n = fam.n
    x = Vertex(data.draw(st.integers(0, 2 ** n - 1)), n)
    sigma = data.draw(st.permutations(range(n)))
    image = permute(translate(fam, x), sigma)
    can = canonical_form(fam)
    assert canonical_form(image) == can
    assert canonical_form(can) == can
    assert isomorphic(fam, image)
    assert len(can) == len(fam)


def _coverage_profile(fam):
    counts = {}
    for w in fam.words():
        for x in oracles.members_of(w):
            counts[x] = counts.get(x, 0) + 1
    return sorted(counts.values())


def test_isomorphic_families_share_invariants():
    rng = random.Random(4)
    hits = 0
    for _ in range(300):
        n = rng.randint(2, 4)
        k = rng.randint(0, n - 1)
        pool = k_subcubes(n, k)
        a = Family(n, k, tuple(rng.sample(pool, min(3, len(pool)))))
        b = Family(n, k, tuple(rng.sample(pool, min(3, len(pool)))))
        if isomorphic(a, b):
            hits += 1
            assert _coverage_profile(a) == _coverage_profile(b)
            assert sorted(len(s) for s in oracles.private_sets(a.words())) == \
                sorted(len(s) for s in oracles.private_sets(b.words()))
        elif _coverage_profile(a) != _coverage_profile(b):
            assert canonical_form(a) != canonical_form(b)
    assert hits > 0
