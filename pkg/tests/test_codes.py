import itertools
from math import comb

import numpy as np
import pytest

import oracles
from irredundant.codes import (
    Code,
    CodeError,
    code_from_words,
    corradi_katai_bound,
    format_code,
    golay_code,
    hamming_code,
    is_perfect,
    is_separated,
    max_separated_set,
    min_distance,
    parse_code,
    translate_code,
    trivial_code,
)
from irredundant.cube import Vertex


def _pairwise_min(words):
    return min(bin(a ^ b).count("1") for a, b in itertools.combinations(words, 2))


def test_hamming_s2():
    code = hamming_code(2)
    assert code.n == 3
    assert code.word_strings() == ["000", "111"]
    assert min_distance(code) == 3


@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_hamming_parameters(s):
    code = hamming_code(s)
    n = 2 ** s - 1
    assert code.n == n and len(code) == 2 ** (n - s)
    assert min_distance(code) == code.claimed_min_distance == 3
    assert is_perfect(code, 1)


def test_hamming_s3_pairwise_and_ball_cover():
    code = hamming_code(3)
    words = code.words.tolist()
    assert _pairwise_min(words) == 3
    assert min_distance(code, "pairwise") == 3
    covered = [0] * 128
    for w in words:
        for x in range(128):
            if bin(w ^ x).count("1") <= 1:
                covered[x] += 1
    assert covered == [1] * 128
    assert 16 * (1 + 7) == 2 ** 7


def test_hamming_syndromes_vanish():
    # column j of the parity-check matrix is the number j + 1
    for s in (2, 3, 4):
        for w in hamming_code(s).words.tolist():
            syndrome = 0
            for j in range(2 ** s - 1):
                if w >> j & 1:
                    syndrome ^= j + 1
            assert syndrome == 0


def test_hamming_range():
    for s in (1, 6):
        with pytest.raises(CodeError):
            hamming_code(s)


def test_golay():
    code = golay_code()
    assert code.n == 23 and len(code) == 4096
    assert min_distance(code) == 7
    assert min_distance(code) == code.claimed_min_distance
    weights = np.bitwise_count(code.words.astype(np.uint64))
    # the weight distribution of the perfect Golay code
    assert sorted(set(weights.tolist())) == [0, 7, 8, 11, 12, 15, 16, 23]
    assert 4096 * sum(comb(23, i) for i in range(4)) == 2 ** 23
    assert is_perfect(code, 3)
    assert is_perfect(code, 3, method="algebraic")


def test_golay_is_linear():
    code = golay_code()
    words = code.words
    rng = np.random.default_rng(0)
    a = rng.choice(words, 200)
    b = rng.choice(words, 200)
    assert all((x ^ y) in code for x, y in zip(a.tolist(), b.tolist()))


def test_trivial_code():
    code = trivial_code(7)
    assert code.word_strings() == ["0000000", "1111111"]
    assert min_distance(code) == 7
    assert is_perfect(trivial_code(5), 2)
    assert 2 * oracles.ball_volume(5, 2) == 32
    assert not is_perfect(trivial_code(4), 2)
    assert not is_perfect(trivial_code(6), 2)
    for k in range(0, 6):
        assert is_perfect(trivial_code(2 * k + 1), k)


def test_min_distance_needs_two_words():
    with pytest.raises(CodeError):
        min_distance(code_from_words(4, [3]))
    assert is_separated(code_from_words(4, [3]), 4)


def test_translation_invariance():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(3, 9))
        words = rng.choice(2 ** n, size=int(rng.integers(2, 10)), replace=False)
        code = code_from_words(n, words.tolist())
        x = int(rng.integers(0, 2 ** n))
        assert min_distance(translate_code(code, x)) == min_distance(code)
        assert min_distance(code) == _pairwise_min(code.words.tolist())
    h = hamming_code(3)
    assert min_distance(translate_code(h, 5), "pairwise") == 3


def test_perfect_criteria_agree_small():
    rng = np.random.default_rng(2)
    codes = [hamming_code(2), hamming_code(3), hamming_code(4), trivial_code(3),
             trivial_code(9), trivial_code(8)]
    for _ in range(30):
        n = int(rng.integers(3, 9))
        words = rng.choice(2 ** n, size=int(rng.integers(1, 6)), replace=False)
        codes.append(code_from_words(n, words.tolist()))
    for code in codes:
        for k in range(0, 4):
            sweep = is_perfect(code, k, method="sweep")
            assert sweep == is_perfect(code, k, method="algebraic")
            if sweep:
                assert is_separated(code, 2 * k + 1)
                assert len(code) * oracles.ball_volume(code.n, k) == 2 ** code.n


def test_separated_small_values():
    assert max_separated_set(4, 2)[0] == 8
    assert max_separated_set(5, 5)[0] == 2
    assert max_separated_set(6, 3)[0] == 8


def test_separated_even_weight_witness():
    size, witness = max_separated_set(4, 2)
    assert witness == sorted(x for x in range(16) if bin(x).count("1") % 2 == 0)


@pytest.mark.parametrize("n,d", [(3, 2), (4, 3), (5, 2), (5, 3), (6, 2), (6, 4), (7, 4)])
def test_separated_matches_brute_force(n, d):
    size, witness = max_separated_set(n, d)
    assert size == oracles.max_separated_brute(n, d)
    assert len(witness) == size
    assert _pairwise_min(witness) >= d if size > 1 else True


def test_separated_witness_is_lexicographically_smallest():
    # compare with a direct scan of all candidate sets of the optimum size
    for n, d in [(4, 3), (5, 3), (4, 2)]:
        size, witness = max_separated_set(n, d)
        best = None
        for combo in itertools.combinations(range(2 ** n), size):
            if _pairwise_min(combo) >= d:
                best = list(combo)
                break
        assert witness == best


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_corradi_katai_case_split(n):
    size, witness = max_separated_set(n, n // 2)
    assert size <= corradi_katai_bound(n)
    assert _pairwise_min(witness) >= n // 2


def test_separated_cap():
    with pytest.raises(CodeError):
        max_separated_set(13, 6)


def test_code_file_round_trip():
    code = hamming_code(3)
    back = parse_code("# hamming\n" + format_code(code))
    assert np.array_equal(back.words, code.words)
    with pytest.raises(CodeError, match="line 2"):
        parse_code("000\n00\n")
    with pytest.raises(CodeError):
        parse_code("")


def test_code_validation():
    with pytest.raises(CodeError):
        Code(3, np.array([8]))
    with pytest.raises(CodeError):
        Code(3, np.array([], dtype=np.int64))
    assert hamming_code(2).vertices() == [Vertex(0, 3), Vertex(7, 3)]
