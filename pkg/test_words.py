import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from audit import check_confluence
from errors import InputError, WordSyntaxError
from words import (GroupWord, Letter, MonoidWord, delete_inessential, enumerate_reduced,
                   enumerate_words, exponent_sum, letter_count, maximal_reductions, parse_template,
                   parse_word, read_word_file, reduce, retract, shortlex_cmp, Comparison)

words = st.lists(st.integers(-3, 3).filter(bool), max_size=10).map(MonoidWord.from_ints)
levels = st.integers(0, 4)


def w(text):
    return parse_word(text)


def test_parse_and_print():
    assert str(w('x1 X2 x10')) == 'x1 X2 x10'
    assert str(w('e')) == 'e'
    assert len(w('e')) == 0
    assert str(w('(x1 x2)^2 X1')) == 'x1 x2 x1 x2 X1'
    assert str(w('(x1)^0')) == 'e'


@pytest.mark.parametrize('text, position', [
    ('x1 y2', 3),
    ('x0', 1),
    ('', 0),
    ('x1 e', 3),
    ('(x1 x2', 6),
    ('(x1 x2) x3', 8),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text)
    assert info.value.position == position


def test_level_variable_only_in_templates():
    with pytest.raises(WordSyntaxError):
        parse_word('x%n')
    template = parse_template('x%n x%{n+1}')
    assert str(template.instantiate(3)) == 'x3 x4'
    assert not template.is_constant
    assert not template.indices_are_level


def test_letters_validate():
    with pytest.raises(InputError):
        Letter(0)
    with pytest.raises(InputError):
        Letter(1, 2)
    with pytest.raises(InputError):
        GroupWord(w('x1 X1'))


def test_reduce():
    assert str(reduce(w('x1 X1'))) == 'e'
    assert str(reduce(w('x1 x2 X2 X1 x3'))) == 'x3'
    assert str(reduce(w('x1 x2 X1'))) == 'x1 x2 X1'


def test_retract():
    assert str(retract(w('x1 x2 X1 x3'), 1)) == 'x1 X1'
    assert str(retract(w('x1 x2'), 0)) == 'e'
    assert retract(w('x1 x2'), 5) == w('x1 x2')
    with pytest.raises(InputError):
        retract(w('x1'), -1)


def test_counts():
    assert letter_count(w('x1 x2 X2 x3'), 2) == 2
    assert exponent_sum(w('x1 x2 X2 x2'), 2) == 1
    with pytest.raises(InputError):
        letter_count(w('x1'), 0)


def test_shortlex():
    assert shortlex_cmp(reduce(w('x1')), reduce(w('X1'))) is Comparison.LESS
    assert shortlex_cmp(reduce(w('x2')), reduce(w('x1 x1'))) is Comparison.LESS
    assert [str(g) for g in enumerate_reduced(2, 1)] == ['e', 'x1', 'X1', 'x1 x1', 'X1 X1']


def test_inessential_deletion():
    assert delete_inessential(w('x1 X1 x2')) == frozenset([w('x2')])
    assert delete_inessential(w('x1 x2 X2 X1 x3')) == frozenset([w('x3'), w('x1 X1 x3')])
    assert maximal_reductions(w('x1 x2 X2 X1')) == frozenset([w('e')])
    assert delete_inessential(w('x1 x2')) == frozenset()


def test_read_word_file(tmp_path):
    path = tmp_path / 'set.txt'
    path.write_text('# points\nx1 x2\n\ne\n')
    assert [str(x) for x in read_word_file(str(path))] == ['x1 x2', 'e']

    path.write_text('x1\nx1 ?\n')
    with pytest.raises(WordSyntaxError, match='set.txt:2') as info:
        read_word_file(str(path))
    assert str(info.value).count('at position') == 1


@given(words)
def test_reduce_is_idempotent(word):
    g = reduce(word)
    assert reduce(g.word) == g
    assert not reduce(word + word.inverse())


@given(words, levels)
def test_retraction_commutes_with_reduction(word, n):
    assert reduce(retract(reduce(word).word, n)) == reduce(retract(word, n))


@given(words, levels, levels)
def test_retractions_compose(word, m, n):
    assert retract(retract(word, m), n) == retract(word, min(m, n))


@settings(max_examples=50)
@given(words)
def test_maximal_reductions_are_confluent(word):
    assert maximal_reductions(word) == frozenset([reduce(word).word])


def test_confluence_short_words():
    assert check_confluence(5, 2).passed


@pytest.mark.slow
def test_confluence_exhaustive():
    result = check_confluence(8, 2)
    assert result.checked == sum(4 ** k for k in range(9))
    assert result.passed


@pytest.mark.slow
def test_retraction_commutes_exhaustive():
    for word in enumerate_words(6, 3):
        for n in range(4):
            assert reduce(retract(reduce(word).word, n)) == reduce(retract(word, n))
