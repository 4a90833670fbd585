import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import EmptySetError, UndecidedPairError
from order import Outcome, cmp_G, min_of, order_key, point_key, sort_points
from points import GroupPoint
from words import enumerate_reduced

reduced = list(enumerate_reduced(3, 2))
reduced_points = st.sampled_from(reduced).map(GroupPoint.embed)


def test_identity_is_least(pt):
    verdict = cmp_G(pt('e'), pt('x1'), 8)
    assert verdict.is_less and verdict.decided_at == 1


def test_declared_minimum_decides_level_one(pt):
    # level-1 words are e and x1, and e is the declared minimum
    assert cmp_G(pt('x2'), pt('x1'), 8).is_less
    assert str(cmp_G(pt('x1'), pt('x2'), 8)) == '>'


def test_extension_sits_above_its_context(pt):
    verdict = cmp_G(pt('x1'), pt('x1 x2'), 8)
    assert verdict.is_less and verdict.decided_at == 2


def test_shortlex_among_images(pt):
    assert cmp_G(pt('x1'), pt('X1'), 8).is_less
    assert cmp_G(pt('X1'), pt('x1 x1'), 8).is_less


def test_equal_points(pt):
    assert cmp_G(pt('x1 x2 X2'), pt('x1'), 8).outcome is Outcome.EQUAL_UP_TO_DEPTH


def test_min_and_sort(pt):
    points = [pt('x1 x2'), pt('x1'), pt('x2')]
    assert str(min_of(points, 8)) == 'x2'
    assert [str(p) for p in sort_points(points + [pt('e')], 8)] == ['e', 'x2', 'x1', 'x1 x2']
    with pytest.raises(EmptySetError):
        min_of([], 8)


def test_streams_agreeing_to_depth_are_undecided(pt):
    a = pt('stream e :: x%n', depth=4)
    b = pt('stream e :: x%n x%n X%n', depth=4)
    assert cmp_G(a, b, 4).is_equal
    with pytest.raises(UndecidedPairError):
        min_of([a, b], 4)


def test_streams_against_finite_points(pt):
    s = pt('stream e :: x%n')
    assert cmp_G(pt('e'), s, 8).is_less
    assert cmp_G(pt('x1 x2'), s, 8).is_less
    assert cmp_G(s, pt('x1 x2 x3 x4'), 8).is_greater


@given(reduced_points, reduced_points)
def test_order_key_matches_comparison(p, q):
    verdict = cmp_G(p, q, 8)
    kp, kq = point_key(p, 2), point_key(q, 2)
    if p == q:
        assert verdict.is_equal and kp == kq
    else:
        assert verdict.is_less == (kp < kq)
        assert cmp_G(q, p, 8).is_less == (not verdict.is_less)


@given(reduced_points, reduced_points, reduced_points)
def test_order_is_transitive(p, q, r):
    ordered = sort_points([p, q, r], 8)
    for lo, hi in zip(ordered, ordered[1:]):
        assert cmp_G(lo, hi, 8).is_less
    if len(ordered) == 3:
        assert cmp_G(ordered[0], ordered[2], 8).is_less


def test_order_key_levels():
    assert len(order_key(reduced[5].word, 3)) == 3
