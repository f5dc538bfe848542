import json
import random
from collections import Counter

import pytest

from braid import (
    BraidParseError, BraidWord, closure, conjugate, inverse, mirror, parse, permutation,
    resolve, stabilize,
)


def random_word(rng, n, length):
    return BraidWord(n, tuple(rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)))


def test_parse_examples():
    assert parse("1 1 1", 2) == BraidWord(2, (1, 1, 1))
    assert parse("", 1) == BraidWord(1, ())
    assert parse("1 -2 1 -2", 3).letters == (1, -2, 1, -2)


def test_parse_infers_strands():
    assert parse("1 1 1").n == 2
    assert parse("-3 1").n == 4
    assert parse("").n == 1
    assert parse("1,-2, 1").letters == (1, -2, 1)


@pytest.mark.parametrize("text, n, position", [
    ("1 0 1", None, 2),
    ("1 3", 3, 2),
    ("x", None, 1),
    ("1 1 -2", 2, 3),
])
def test_parse_errors_carry_position(text, n, position):
    with pytest.raises(BraidParseError) as err:
        parse(text, n)
    assert err.value.position == position


def test_trefoil_closure():
    info = closure(BraidWord(2, (1, 1, 1)))
    assert info.r == 1
    assert info.wr_total == 3
    assert info.self_wr == (3,)
    assert info.d == (0, 1)
    assert info.leftmost == (1,)
    assert info.perm == (2, 1)


def test_hopf_closure():
    info = closure(BraidWord(2, (1, 1)))
    assert info.components == ((1,), (2,))
    assert info.wr_total == 2
    assert info.self_wr == (0, 0)
    assert info.mixed_wr == 2
    assert info.d == (0, 0)


def test_unknot_closure():
    info = closure(BraidWord(1, ()))
    assert info.r == 1
    assert info.wr_total == 0
    assert info.d == (0,)


def test_figure_eight_is_a_knot():
    info = closure(parse("1 -2 1 -2", 3))
    assert info.is_knot()
    assert info.wr_total == 0
    assert sorted(info.d) == [0, 1, 2]


def test_components_numbered_by_leftmost_strand():
    # strands 1 and 3 swap, strand 2 and 4 are fixed
    info = closure(BraidWord(4, (2, 1, -2)))
    assert info.components == ((1, 3), (2,), (4,))
    assert info.leftmost == (1, 2, 4)
    assert info.comp(3) == 0


def test_d_recurrence_on_random_words():
    rng = random.Random(2)
    for _ in range(40):
        b = random_word(rng, rng.randint(2, 5), rng.randint(0, 8))
        info = closure(b)
        sizes = info.sizes()
        for i in range(1, b.n + 1):
            c = info.comp(i)
            assert 0 <= info.dist(i) < sizes[c]
            if info.dist(i) > 0:
                assert info.dist(info.beta(i)) == info.dist(i) - 1
            elif sizes[c] > 1:
                assert info.dist(info.beta(i)) == sizes[c] - 1
        assert info.wr_total == sum(info.self_wr) + info.mixed_wr
        assert sum(sizes) == b.n


def test_permutation_applies_letters_right_to_left():
    # sigma_1 sigma_2: 1 -> sigma_1(sigma_2(1)) = 2, 3 -> sigma_1(2) = 1
    assert permutation(BraidWord(3, (1, 2))) == (2, 3, 1)


def test_conjugate_is_literal():
    b = BraidWord(2, (1, 1, 1))
    assert conjugate(b, [1]) == BraidWord(2, (1, 1, 1, 1, -1))
    assert conjugate(b, BraidWord(3, (2, -1))).letters == (2, -1, 1, 1, 1, 1, -2)


def test_stabilize():
    assert stabilize(BraidWord(2, (1, 1, 1)), 1) == BraidWord(3, (1, 1, 1, 2))
    assert stabilize(BraidWord(1, ()), -1) == BraidWord(2, (-1,))
    with pytest.raises(ValueError):
        stabilize(BraidWord(2, (1,)), 0)


def test_conjugation_preserves_closure_statistics():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(2, 4)
        b = random_word(rng, n, rng.randint(1, 6))
        w = random_word(rng, n, rng.randint(1, 3))
        before, after = closure(b), closure(conjugate(b, w))
        assert before.r == after.r
        assert Counter(before.sizes()) == Counter(after.sizes())
        assert Counter(before.self_wr) == Counter(after.self_wr)


def test_stabilization_keeps_component_count():
    rng = random.Random(4)
    for _ in range(20):
        b = random_word(rng, rng.randint(2, 4), rng.randint(0, 6))
        for sign in (1, -1):
            assert closure(stabilize(b, sign)).r == closure(b).r


def test_inverse_and_mirror():
    b = BraidWord(3, (1, -2, 2))
    assert inverse(b).letters == (-2, 2, -1)
    assert mirror(b).letters == (-1, 2, -2)
    assert closure(mirror(b)).wr_total == -closure(b).wr_total


def test_resolve_triple():
    plus, minus, zero = resolve(BraidWord(2, (1, -1, 1)), 1)
    assert plus.letters == (1, 1, 1)
    assert minus.letters == (1, -1, 1)
    assert zero.letters == (1, 1)


def test_closure_json():
    data = json.loads(closure(BraidWord(2, (1, 1))).to_json())
    assert data['components'] == [[1], [2]]
    assert data['self_wr'] == [0, 0]
