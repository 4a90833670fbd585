import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import BudgetExceededError, InputError
from loops import F, LoopItinerary, earring_word, loop_eq, sigma_set
from points import project_group
from words import MonoidWord, parse_word, reduce, retract

loops = st.lists(st.integers(-3, 3).filter(bool), max_size=8).map(MonoidWord.from_ints).map(LoopItinerary)


def loop(text):
    return LoopItinerary.parse(text)


def _random_loop(rng):
    values = rng.choice([-4, -3, -2, -1, 1, 2, 3, 4], size=int(rng.integers(0, 9)))
    return LoopItinerary(MonoidWord.from_ints(int(v) for v in values))


def _with_cancelling_pair(f, rng):
    letters = list(f.word.letters)
    k = int(rng.integers(1, 5))
    at = int(rng.integers(0, len(letters) + 1))
    pair = list(MonoidWord.from_ints([k, -k]).letters)
    return LoopItinerary(MonoidWord(tuple(letters[:at] + pair + letters[at:])))


def test_loop_equality():
    assert loop_eq(loop('x1 x2 X2'), loop('x1'))
    assert not loop_eq(loop('x1 x2'), loop('x2 x1'))
    assert loop_eq(loop('x1') * loop('X1'), loop('e'))
    assert str(loop('x1') * loop('x3')) == 'x1 x3'
    assert loop_eq(loop('x3 X3'), loop('e'), depth=5)


def test_loop_eq_agrees_with_levelwise_reduction():
    rng = np.random.default_rng(8)
    for i in range(1000):
        f = _random_loop(rng)
        g = _with_cancelling_pair(f, rng) if i % 2 else _random_loop(rng)
        top = max(f.level, g.level, 1)
        levelwise = all(reduce(retract(f.word, n)) == reduce(retract(g.word, n)) for n in range(1, top + 1))
        assert loop_eq(f, g) == levelwise == (reduce(f.word) == reduce(g.word))
        if i % 2:
            assert loop_eq(f, g)


def test_loop_class_respects_products():
    rng = np.random.default_rng(9)
    for _ in range(200):
        u, v = _random_loop(rng), _random_loop(rng)
        for n in range(1, 5):
            expected = project_group(F(u), n) * project_group(F(v), n)
            assert project_group(F(u * v), n) == expected


@given(loops, loops, loops)
def test_loop_eq_is_an_equivalence(f, g, h):
    assert loop_eq(f, f)
    assert loop_eq(f, g) == loop_eq(g, f)
    if loop_eq(f, g) and loop_eq(g, h):
        assert loop_eq(f, h)


def test_loop_class():
    assert str(F(loop('x1 x2 X2 X1 x3')).project(3)) == 'x3'


def test_sigma_set():
    result = sigma_set(loop('x1 x2 X2 X1 x3'), 3)
    assert len(result) == 3
    assert parse_word('x1 X1 x3') in result
    assert [str(w) for w in result] == ['x3', 'x1 X1 x3', 'x1 x2 X2 X1 x3']
    assert result.endpoints == frozenset([parse_word('x3')])


def test_sigma_set_retracts_first():
    result = sigma_set(loop('x1 x2 X1'), 1)
    assert [str(w) for w in result] == ['e', 'x1 X1']
    assert result.endpoints == frozenset([parse_word('e')])


def test_sigma_set_limits():
    with pytest.raises(BudgetExceededError):
        sigma_set(loop('x1 x2 X2 X1 x3'), 3, budget=1)
    with pytest.raises(InputError):
        sigma_set(loop('x1'), 0)


def test_earring_word():
    assert str(earring_word(1)) == 'x1 x2 X1 x2 x1'
    assert earring_word(3).level == 4
    with pytest.raises(InputError):
        earring_word(0)
