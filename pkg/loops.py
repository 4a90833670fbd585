"""
Loop itineraries on the Hawaiian earring
Each letter of an itinerary is one full signed traversal of circle x_i. F sends
an itinerary to its class in G; equality in G decides path homotopy.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Optional

from errors import BudgetExceededError, InputError
from points import GroupPoint, project_group
from settings import SIGMA_BUDGET
from words import Letter, MonoidWord, delete_inessential, parse_word, retract

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoopItinerary:
    word: MonoidWord

    @classmethod
    def parse(cls, text: str) -> 'LoopItinerary':
        return cls(parse_word(text))

    @property
    def level(self) -> int:
        return self.word.level

    def __mul__(self, other: 'LoopItinerary') -> 'LoopItinerary':
        return concatenate(self, other)

    def __str__(self):
        return str(self.word)


def concatenate(u: LoopItinerary, v: LoopItinerary) -> LoopItinerary:
    return LoopItinerary(u.word + v.word)


def loop_class(loop: LoopItinerary) -> GroupPoint:
    return GroupPoint.embed(loop.word)


F = loop_class


def loop_eq(f: LoopItinerary, g: LoopItinerary, depth: Optional[int] = None) -> bool:
    """Projections agree at every level up to the larger itinerary level"""
    top = max(f.level, g.level, 1)
    if depth is not None:
        top = max(top, depth)
    left, right = loop_class(f), loop_class(g)
    return all(project_group(left, n) == project_group(right, n) for n in range(1, top + 1))


@dataclass(frozen=True)
class SigmaSet:
    """Words reachable from R_N(beta) by deleting inessential subwords"""

    words: FrozenSet[MonoidWord]
    endpoints: FrozenSet[MonoidWord]

    def __contains__(self, w: MonoidWord) -> bool:
        return w in self.words

    def __iter__(self) -> Iterator[MonoidWord]:
        return iter(sorted(self.words, key=lambda w: (len(w), w.key)))

    def __len__(self):
        return len(self.words)


def sigma_set(beta: LoopItinerary, level: int, budget: int = SIGMA_BUDGET) -> SigmaSet:
    if level < 1:
        raise InputError(f"level must be >= 1, got {level}")
    start = retract(beta.word, level)
    seen = {start}
    endpoints = set()
    queue = deque([start])
    while queue:
        w = queue.popleft()
        successors = delete_inessential(w)
        if not successors:
            endpoints.add(w)
        for nxt in successors:
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > budget:
                    raise BudgetExceededError(f"Sigma({beta}, {level}) exceeds {budget} words")
                queue.append(nxt)
    logger.debug('Sigma(%s, %d): %d words, %d endpoints', beta, level, len(seen), len(endpoints))
    return SigmaSet(frozenset(seen), frozenset(endpoints))


def earring_word(k: int) -> MonoidWord:
    """w(k) = (x1 x_{k+1} X1 x_{k+1})^k x_k"""
    if k < 1:
        raise InputError(f"earring_word needs k >= 1, got {k}")
    block = (Letter(1), Letter(k + 1), Letter(1, -1), Letter(k + 1))
    return MonoidWord(block * k + (Letter(k),))
