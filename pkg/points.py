"""
Points of X_infinity and of the Hawaiian earring group G
Finite-stage words and coherent streams, the projections Pi_n, phi, the
minimal-representative map sigma, blowups and the induced maps r_n / j_n.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

from errors import (DepthExceededError, InputError, NotFiniteStageError,
                    StabilizationError, WordSyntaxError)
from settings import DEFAULT_DEPTH
from words import (EMPTY, GroupWord, MonoidWord, Template, letter_count,
                   parse_template, parse_word, reduce, retract)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteStage:
    """Eventually constant sequence (R_1 w, R_2 w, ..., w, w, ...)"""

    word: MonoidWord
    probe_depth: Optional[int] = None

    is_stream = False

    def word_at(self, n: int) -> MonoidWord:
        return retract(self.word, n)

    @property
    def settled_level(self) -> int:
        return self.word.level

    def __str__(self):
        return str(self.word)


@dataclass(frozen=True)
class Stream:
    """
    Coherent stream: word_at(n) = R_n(base) followed by the tail blocks for
    levels start_level..n. Every block at level k uses only letters of index k,
    so R_n(word_at(n+1)) = word_at(n) holds by construction.
    """

    base: MonoidWord
    template: Template
    start_level: int
    probe_depth: int = DEFAULT_DEPTH
    reduce_blocks: bool = False

    is_stream = True

    def __post_init__(self):
        if not self.template.indices_are_level:
            raise InputError(f"tail template '{self.template}' must use index %n in every letter")
        if self.start_level < 1:
            raise InputError(f"stream start level must be >= 1, got {self.start_level}")
        if self.probe_depth < 0:
            raise InputError(f"probe depth must be >= 0, got {self.probe_depth}")

    def block(self, n: int) -> MonoidWord:
        block = self.template.instantiate(n)
        return reduce(block).word if self.reduce_blocks else block

    def word_at(self, n: int) -> MonoidWord:
        if n > self.probe_depth:
            raise DepthExceededError(n, self.probe_depth)
        return _materialize(self, n)

    @property
    def settled_level(self) -> int:
        # beyond this level each step only appends the next block
        return max(self.base.level, self.start_level - 1)

    def with_depth(self, probe_depth: int) -> 'Stream':
        return Stream(self.base, self.template, self.start_level, probe_depth, self.reduce_blocks)

    def __str__(self):
        text = f"stream {self.base} :: {self.template}"
        if self.start_level != self.base.level + 1:
            text += f" @ {self.start_level}"
        return text


Point = Union[FiniteStage, Stream]


@lru_cache(maxsize=8192)
def _materialize(stream: Stream, n: int) -> MonoidWord:
    word = retract(stream.base, n)
    for k in range(stream.start_level, n + 1):
        word = word + stream.block(k)
    return word


_STREAM = re.compile(r'^stream\s+(?P<base>.*?)\s*::\s*(?P<tail>.+?)(?:\s*@\s*(?P<start>\d+))?\s*$')


def parse_point(text: str, probe_depth: int = DEFAULT_DEPTH) -> Point:
    """Word literal, or 'stream <base> :: <tail-template> [@ <start>]'"""
    text = text.strip()
    if not text.startswith('stream'):
        return FiniteStage(parse_word(text))
    match = _STREAM.match(text)
    if not match:
        raise WordSyntaxError("expected 'stream <base> :: <tail-template>'", 0)
    base = parse_word(match.group('base'))
    template = parse_template(match.group('tail'))
    if not template.nodes:
        raise WordSyntaxError("tail template must contain letters", match.start('tail'))
    start = int(match.group('start')) if match.group('start') else base.level + 1
    return Stream(base, template, start, probe_depth)


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """Element of G presented by one representative in X_infinity"""

    representative: Point

    @classmethod
    def of(cls, text: str, probe_depth: int = DEFAULT_DEPTH) -> 'GroupPoint':
        return cls(parse_point(text, probe_depth))

    @classmethod
    def embed(cls, g: Union[GroupWord, MonoidWord]) -> 'GroupPoint':
        word = g.word if isinstance(g, GroupWord) else g
        return cls(FiniteStage(word))

    @property
    def is_stream(self) -> bool:
        return self.representative.is_stream

    @property
    def probe_depth(self) -> Optional[int]:
        return self.representative.probe_depth

    def project(self, n: int) -> GroupWord:
        return project_group(self, n)

    def finite_stage_level(self, depth: Optional[int] = None) -> Optional[int]:
        """Least M with Pi_n constant for M <= n <= depth, or None when some tail block survives"""
        rep = self.representative
        if not rep.is_stream:
            return reduce(rep.word).level
        limit = rep.probe_depth if depth is None else min(depth, rep.probe_depth)
        for k in range(rep.start_level, max(limit, rep.start_level + 1) + 1):
            if reduce(rep.block(k)):
                return None
        return reduce(rep.word_at(min(rep.settled_level, rep.probe_depth))).level

    @property
    def key(self) -> Tuple:
        rep = self.representative
        if not rep.is_stream:
            return ('finite', reduce(rep.word).word.key)
        return ('stream', rep.base.key, rep.template.source, rep.start_level, rep.reduce_blocks)

    def __eq__(self, other):
        return isinstance(other, GroupPoint) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return str(self.representative)

    def __repr__(self):
        return f"GroupPoint({self})"


def project_group(p: GroupPoint, n: int) -> GroupWord:
    """Pi_n(p) = q_n(word_at(n))"""
    if n < 0:
        raise InputError(f"level must be >= 0, got {n}")
    return reduce(p.representative.word_at(n))


def phi(p: GroupPoint, depth: int) -> Tuple[GroupWord, ...]:
    return tuple(project_group(p, n) for n in range(1, depth + 1))


@dataclass(frozen=True)
class FiniteStageVerdict:
    finite: bool
    level: Optional[int]
    depth: int

    def __str__(self):
        return f"yes({self.level})" if self.finite else 'no-up-to-depth'


def is_finite_stage(p: GroupPoint, depth: int) -> FiniteStageVerdict:
    level = p.finite_stage_level(depth)
    return FiniteStageVerdict(level is not None, level, depth)


def sigma(p: GroupPoint, depth: int) -> Point:
    """Minimal representative: level-N word = lim_n R_N(sigma_n Pi_n(p))"""
    rep = p.representative
    if not rep.is_stream:
        return FiniteStage(reduce(rep.word).word)
    if depth > rep.probe_depth:
        raise DepthExceededError(depth, rep.probe_depth)
    # reduced tail blocks of distinct indices never cancel, so R_N(sigma_n Pi_n)
    # is constant once n reaches the settled level
    settled = rep.settled_level
    if settled > depth:
        raise StabilizationError(1, depth)
    base = reduce(rep.word_at(settled)).word
    logger.debug('sigma(%s) settles at level %d', p, settled)
    return Stream(base, rep.template, settled + 1, rep.probe_depth, reduce_blocks=True)


@dataclass(frozen=True)
class Cylinder:
    """Pi_N^{-1}(base)"""

    level: int
    base: GroupWord

    def __post_init__(self):
        if self.level < 1:
            raise InputError(f"cylinder level must be >= 1, got {self.level}")
        if self.base.level > self.level:
            raise InputError(f"cylinder base '{self.base}' does not lie in G_{self.level}")

    def __str__(self):
        return f"Cyl({self.level}; {self.base})"


def blowup(k: GroupPoint) -> Cylinder:
    level = k.finite_stage_level()
    if level is None:
        raise NotFiniteStageError(f"{k} is not a finite-stage element")
    level = max(level, 1)
    return Cylinder(level, project_group(k, level))


def induced_r(g: GroupWord, n: int) -> GroupWord:
    """r_n : G_{n+1} -> G_n"""
    if g.level > n + 1:
        raise InputError(f"'{g}' does not lie in G_{n + 1}")
    return reduce(retract(g.word, n))


def induced_j(g: GroupWord, n: int) -> GroupWord:
    """j_n : G_n -> G_{n+1}, the inclusion"""
    if g.level > n:
        raise InputError(f"'{g}' does not lie in G_{n}")
    return g


def count_profile(x: Point, depth: int) -> Tuple[int, ...]:
    """T(x) = (N_1, N_2, ...), N_k = occurrences of x_k^{+-1} in the level-k word"""
    return tuple(letter_count(x.word_at(k), k) for k in range(1, depth + 1))


def working_depth(depth: int, points: Iterable[GroupPoint]) -> int:
    levels = [p.representative.settled_level for p in points if not p.is_stream]
    return max([depth, *levels])


def embed_projection(p: GroupPoint, n: int) -> GroupPoint:
    return GroupPoint.embed(project_group(p, n))


def identity_point() -> GroupPoint:
    return GroupPoint(FiniteStage(EMPTY))
