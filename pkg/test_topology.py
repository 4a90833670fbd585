import numpy as np
import pytest

from errors import DepthExceededError, InputError, WordSyntaxError
from order import cmp_G
from points import Cylinder, GroupPoint, sigma
from topology import (ClopenExpr, PointSequence, Universe, converge, cyl_contains, cyl_min,
                      cylinder_meet, first_not_above, first_not_below, member, parse_clopen,
                      relatively_clopen, set_less)
from words import parse_word, reduce


def cyl(level, text):
    return Cylinder(level, reduce(parse_word(text)))


def test_cylinder_containment():
    assert cyl_contains(cyl(1, 'x1'), cyl(2, 'x1 x2'))
    assert not cyl_contains(cyl(2, 'x1 x2'), cyl(1, 'x1'))
    assert cylinder_meet(cyl(1, 'x1'), cyl(1, 'e')) is None
    assert cylinder_meet(cyl(1, 'x1'), cyl(3, 'x1 x3')) == cyl(3, 'x1 x3')
    assert str(cyl_min(cyl(2, 'x1 x2'))) == 'x1 x2'


def test_parse_clopen(pt):
    expr = parse_clopen('Cyl(1; x1) - Cyl(2; x1 x2)')
    assert str(expr) == 'Cyl(1; x1) - Cyl(2; x1 x2)'
    assert member(pt('x1'), expr)
    assert member(pt('x1 X2'), expr)
    assert not member(pt('x1 x2'), expr)
    assert not member(pt('x1 x2 x3'), expr)
    assert parse_clopen('empty').is_empty
    assert str(parse_clopen('∅')) == 'empty'


@pytest.mark.parametrize('text', ['Cyl(a; x1)', 'Cyl(1; x1', 'Cyl(1; x1) +', 'Cyl(1; y1)', 'x1'])
def test_parse_clopen_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_clopen(text)


def test_difference_of_punctured_cylinder(pt):
    expr = parse_clopen('Cyl(1; e) - (Cyl(2; x2) - Cyl(3; x2 x3))')
    assert member(pt('e'), expr)
    assert member(pt('x3'), expr)
    assert not member(pt('x2'), expr)
    assert member(pt('x2 x3'), expr)
    assert not member(pt('x1'), expr)


def test_union_and_intersection(pt):
    left = ClopenExpr.of(cyl(1, 'x1'))
    right = ClopenExpr.of(cyl(1, 'e'))
    both = left + right
    assert member(pt('x1 x2'), both) and member(pt('x2'), both)
    assert left.intersect_cylinder(cyl(1, 'e')).is_empty
    assert str(left.intersect_cylinder(cyl(2, 'x1 x2'))) == 'Cyl(2; x1 x2)'
    assert (left - left).is_empty
    assert both.max_level == 1


def test_stream_membership_needs_depth(pt):
    s = pt('stream e :: x%n', depth=3)
    assert member(s, ClopenExpr.of(cyl(2, 'x1 x2')))
    with pytest.raises(DepthExceededError):
        member(s, ClopenExpr.of(cyl(5, 'e')))


def test_universe_sizes(small_universe, universe):
    assert len(small_universe) == 161
    assert len(universe) == 937
    assert str(Universe.parse('L=2,len=4')) == 'L=2,len=4'
    assert list(small_universe.table.columns) == ['word', 'level', 'length', 'pi_1', 'pi_2']
    for text in ('L=2', 'L=2,len=x', 'depth=3,len=2'):
        with pytest.raises(InputError):
            Universe.parse(text)


def test_mask_matches_membership(small_universe):
    expr = parse_clopen('Cyl(1; x1) - Cyl(2; x1 x2) + Cyl(2; x2)')
    expected = [member(p, expr) for p in small_universe.points]
    assert small_universe.mask(expr).tolist() == expected
    assert len(small_universe.members(expr)) == sum(expected)


def test_ranks_follow_the_order(small_universe):
    ranks, keys = small_universe.ranks(2)
    assert sorted(ranks.tolist()) == list(range(len(small_universe.points)))
    rng = np.random.default_rng(7)
    points = small_universe.points
    for i, j in rng.integers(len(points), size=(100, 2)):
        if i != j:
            assert (ranks[i] < ranks[j]) == cmp_G(points[i], points[j], 8).is_less


def test_extra_points(small_universe, pt):
    extended = small_universe.with_extra([pt('x5')])
    assert len(extended) == 162
    assert len(small_universe) == 161
    assert pt('x5') in extended.members(ClopenExpr.of(cyl(1, 'e')))


def test_set_comparisons(small_universe, pt):
    assert set_less(ClopenExpr.of(cyl(1, 'e')), pt('x1'), small_universe, 8)
    witness = first_not_below(ClopenExpr.of(cyl(1, 'x1')), pt('x1'), small_universe, 8)
    assert witness is not None
    assert not cmp_G(witness, pt('x1'), 8).is_less
    assert set_less([pt('e'), pt('x2')], pt('x1'), None, 8)
    assert str(first_not_below([pt('e'), pt('x1 x2')], pt('x1'), None, 8)) == 'x1 x2'
    assert first_not_above(pt('e'), ClopenExpr.of(cyl(1, 'x1')), small_universe, 8) is None
    assert str(first_not_above(pt('x1'), ClopenExpr.of(cyl(1, 'x1')), small_universe, 8)) == 'x1'
    assert str(first_not_above(pt('x2'), ClopenExpr.of(cyl(1, 'e')), small_universe, 8)) == 'e'


def test_tracked_points_join_the_comparison(small_universe, pt):
    high = pt('x1 X2')
    assert not set_less(ClopenExpr.of(cyl(1, 'x1')), pt('x1 x2'), None, 8, tracked=[high])
    assert set_less(ClopenExpr.of(cyl(1, 'e')), pt('x1'), None, 8, tracked=[high])


def test_converge_to_identity():
    verdict = converge(PointSequence.from_rule('x1 x%n X1', start=2), 8)
    assert verdict.converges
    assert str(verdict) == 'converges e'
    assert verdict.indices == tuple(range(2, 9))
    assert str(converge(PointSequence.from_rule('x%n x%{n+1}'), 8)) == 'converges e'


def test_sigma_is_discontinuous_at_the_limit(pt):
    for n in range(2, 8):
        assert str(sigma(pt(f'x1 x{n} X1'), 8).word_at(1)) == 'x1 X1'
    verdict = converge(PointSequence.from_rule('x1 x%n X1', start=2), 8)
    assert str(verdict) == 'converges e'
    assert str(sigma(verdict.limit, 8).word_at(1)) == 'e'


def test_converge_detects_linear_growth():
    verdict = converge(PointSequence.from_rule('(x1 x%n X1 x%n)^%n'), 8)
    assert verdict.diverges
    assert 'grows by 2' in verdict.certificate
    assert verdict.records[0].counts == (2, 4, 6, 8, 10, 12, 14, 16)


def test_converge_explicit_terms():
    verdict = converge(PointSequence.from_terms(['x1', 'e', 'x1', 'e']), 8)
    assert verdict.diverges
    assert 'period 2' in verdict.certificate
    assert str(converge(PointSequence.from_terms(['x2', 'x1', 'x1']), 8)) == 'converges x1'
    assert converge(PointSequence.from_terms(['x1']), 8).outcome.value == 'inconclusive'


def test_converge_frame():
    frame = converge(PointSequence.from_rule('x1 x%n X1', start=2), 8).to_frame()
    assert list(frame.columns) == ['level', 'stable_from', 'value', 'period', 'counts']
    assert frame['value'].tolist() == ['e'] * len(frame)


def test_sequence_file(tmp_path):
    path = tmp_path / 'seq.txt'
    path.write_text('# tail\nrule: x1 x%n X1\nstart: 2\nstop: 6\n')
    seq = PointSequence.read(str(path))
    assert seq.start == 2 and seq.stop == 6
    assert seq.indices(8) == [2, 3, 4, 5, 6]
    assert str(seq.term(3)) == 'x1 x3 X1'
    with pytest.raises(InputError):
        seq.term(1)

    path.write_text('start: two\n')
    with pytest.raises(InputError):
        PointSequence.read(str(path))
    with pytest.raises(InputError):
        PointSequence.from_lines(['# nothing'])


def test_relatively_clopen(small_universe):
    assert relatively_clopen(parse_clopen('Cyl(1; x1)'), small_universe, 8).ok
    assert relatively_clopen(ClopenExpr.empty(), small_universe, 8).ok
    assert str(relatively_clopen(ClopenExpr.empty(), small_universe, 8)) == 'ok'


def test_union_of_point_cylinders_is_not_clopen(small_universe):
    naive = parse_clopen(' + '.join(f'Cyl({n}; x{n})' for n in range(1, 6)))
    check = relatively_clopen(naive, small_universe, 8)
    assert not check.ok
    assert str(check) == 'boundary_witness((x_n x_n+1)_n, e)'
