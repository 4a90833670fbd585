"""
Linear order on X_infinity and G
Level n decides by lexical inspection of (R_{n-1} x, q_n x_n, x_n): the shared
level-(n-1) word first, then the q_n image (declared minimum q_n(x_{n-1})
first, shortlex otherwise), then the raw word by (length, lex). G is ordered
through sigma.
"""

import functools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from errors import EmptySetError, UndecidedPairError
from points import GroupPoint, Point, sigma
from words import EMPTY, Comparison, MonoidWord, fiber_key, reduce, retract, shortlex_key

logger = logging.getLogger(__name__)


class Outcome(Enum):
    LESS = '<'
    EQUAL_UP_TO_DEPTH = '='
    GREATER = '>'


@dataclass(frozen=True)
class OrderVerdict:
    outcome: Outcome
    decided_at: Optional[int] = None

    @property
    def is_less(self) -> bool:
        return self.outcome is Outcome.LESS

    @property
    def is_greater(self) -> bool:
        return self.outcome is Outcome.GREATER

    @property
    def is_equal(self) -> bool:
        return self.outcome is Outcome.EQUAL_UP_TO_DEPTH

    def __str__(self):
        return self.outcome.value


def level_key(word: MonoidWord, context: MonoidWord) -> Tuple:
    """Rank of a level-n word among the words sharing the level-(n-1) word `context`"""
    image = reduce(word)
    declared = 0 if image == reduce(context) else 1
    return (declared, shortlex_key(image), fiber_key(word))


def _scan_limit(x: Point, y: Point, depth: int) -> int:
    if x.is_stream or y.is_stream:
        return depth
    # finite-stage words are constant past their level, so this scan is exact
    return max(x.settled_level, y.settled_level)


def cmp_X(x: Point, y: Point, depth: int) -> OrderVerdict:
    context = EMPTY
    for n in range(1, _scan_limit(x, y, depth) + 1):
        x_n = x.word_at(n)
        y_n = y.word_at(n)
        if x_n != y_n:
            c = Comparison.of(level_key(x_n, context), level_key(y_n, context))
            return OrderVerdict(Outcome.LESS if c is Comparison.LESS else Outcome.GREATER, n)
        context = x_n
    return OrderVerdict(Outcome.EQUAL_UP_TO_DEPTH)


def cmp_G(g: GroupPoint, h: GroupPoint, depth: int) -> OrderVerdict:
    """g < h iff sigma(g) < sigma(h)"""
    return cmp_X(sigma(g, depth), sigma(h, depth), depth)


def order_key(word: MonoidWord, levels: int) -> Tuple:
    """Tuple order equals cmp_X on finite-stage points of level <= levels"""
    parts = []
    context = EMPTY
    for n in range(1, levels + 1):
        w_n = retract(word, n)
        parts.append(level_key(w_n, context))
        context = w_n
    return tuple(parts)


def point_key(p: GroupPoint, levels: int) -> Tuple:
    """order_key of sigma(p); p must be finite-stage"""
    return order_key(reduce(p.representative.word).word, levels)


def min_of(points: Iterable[GroupPoint], depth: int) -> GroupPoint:
    candidates = list(dict.fromkeys(points))
    if not candidates:
        raise EmptySetError('min_of needs a nonempty set')
    best = candidates[0]
    for p in candidates[1:]:
        verdict = cmp_G(p, best, depth)
        if verdict.is_equal:
            raise UndecidedPairError(p, best, depth)
        if verdict.is_less:
            best = p
    logger.debug('min of %d points: %s', len(candidates), best)
    return best


def sort_points(points: Iterable[GroupPoint], depth: int) -> List[GroupPoint]:
    def compare(p: GroupPoint, q: GroupPoint) -> int:
        if p == q:
            return 0
        verdict = cmp_G(p, q, depth)
        if verdict.is_equal:
            raise UndecidedPairError(p, q, depth)
        return -1 if verdict.is_less else 1

    return sorted(dict.fromkeys(points), key=functools.cmp_to_key(compare))
