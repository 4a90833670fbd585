"""
Clopen sets, the finite test universe and the convergence oracle
A clopen expression is a union of cylinders with cylinder holes punched out.
Global quantifiers (set comparisons, clopen-ness) are evaluated over a
Universe: every reduced word of bounded level and length, plus optional extra
points and a catalog of witness sequences.
"""

import bisect
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from errors import DepthExceededError, InputError, StabilizationError, UndecidedPairError, WordSyntaxError
from order import cmp_G, point_key, order_key
from points import Cylinder, FiniteStage, GroupPoint, project_group, sigma
from words import GroupWord, Template, enumerate_reduced, letter_count, parse_template, parse_word, reduce, retract

logger = logging.getLogger(__name__)


def cyl_contains(outer: Cylinder, inner: Cylinder) -> bool:
    """outer ⊇ inner, decided exactly from (level, base)"""
    if outer.level > inner.level:
        return False
    return reduce(retract(inner.base.word, outer.level)) == outer.base


def cylinder_meet(c: Cylinder, d: Cylinder) -> Optional[Cylinder]:
    # cylinders are nested or disjoint
    if cyl_contains(c, d):
        return d
    if cyl_contains(d, c):
        return c
    return None


def cyl_min(c: Cylinder) -> GroupPoint:
    return GroupPoint.embed(c.base)


def _in_cylinder(g: GroupPoint, c: Cylinder) -> bool:
    return project_group(g, c.level) == c.base


@dataclass(frozen=True)
class Piece:
    """cylinder minus the union of holes; every hole lies inside the cylinder"""

    cylinder: Cylinder
    holes: Tuple[Cylinder, ...] = ()

    def member(self, g: GroupPoint) -> bool:
        return _in_cylinder(g, self.cylinder) and not any(_in_cylinder(g, h) for h in self.holes)

    def __str__(self):
        return str(self.cylinder) + ''.join(f" - {h}" for h in self.holes)


@dataclass(frozen=True)
class ClopenExpr:
    pieces: Tuple[Piece, ...] = ()

    @classmethod
    def empty(cls) -> 'ClopenExpr':
        return cls()

    @classmethod
    def of(cls, *cylinders: Cylinder) -> 'ClopenExpr':
        result = cls()
        for c in cylinders:
            result = result.union(cls((Piece(c),)))
        return result

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def max_level(self) -> int:
        return max((c.level for c in self.cylinders()), default=0)

    def cylinders(self) -> Iterator[Cylinder]:
        for piece in self.pieces:
            yield piece.cylinder
            yield from piece.holes

    def member(self, g: GroupPoint, depth: Optional[int] = None) -> bool:
        return member(g, self, depth)

    def union(self, other: 'ClopenExpr') -> 'ClopenExpr':
        return ClopenExpr(self.pieces + tuple(p for p in other.pieces if p not in self.pieces))

    def minus_cylinder(self, d: Cylinder) -> 'ClopenExpr':
        pieces = []
        for piece in self.pieces:
            c = piece.cylinder
            if cyl_contains(d, c):
                continue
            if not cyl_contains(c, d) or any(cyl_contains(h, d) for h in piece.holes):
                pieces.append(piece)
                continue
            holes = tuple(h for h in piece.holes if not cyl_contains(d, h)) + (d,)
            pieces.append(Piece(c, holes))
        return ClopenExpr(tuple(pieces))

    def intersect_cylinder(self, d: Cylinder) -> 'ClopenExpr':
        pieces = []
        for piece in self.pieces:
            meet = cylinder_meet(piece.cylinder, d)
            if meet is None or any(cyl_contains(h, meet) for h in piece.holes):
                continue
            pieces.append(Piece(meet, tuple(h for h in piece.holes if cyl_contains(meet, h))))
        return ClopenExpr(tuple(pieces))

    def difference(self, other: 'ClopenExpr') -> 'ClopenExpr':
        result = self
        for piece in other.pieces:
            # X - (D - F) = (X - D) + (X & F) since F lies inside D
            removed = result.minus_cylinder(piece.cylinder)
            for hole in piece.holes:
                removed = removed.union(result.intersect_cylinder(hole))
            result = removed
        return result

    def __add__(self, other: 'ClopenExpr') -> 'ClopenExpr':
        return self.union(other)

    def __sub__(self, other: 'ClopenExpr') -> 'ClopenExpr':
        return self.difference(other)

    def __str__(self):
        return ' + '.join(str(p) for p in self.pieces) if self.pieces else 'empty'


def member(g: GroupPoint, expr: ClopenExpr, depth: Optional[int] = None) -> bool:
    if g.is_stream:
        limit = g.probe_depth if depth is None else min(depth, g.probe_depth)
        if expr.max_level > limit:
            raise DepthExceededError(expr.max_level, limit)
    return any(piece.member(g) for piece in expr.pieces)


# Grammar: expr := diff ('+' diff)* ; diff := atom ('-' atom)* ;
#          atom := 'Cyl(' N ';' word ')' | '(' expr ')' | 'empty'
class _ClopenParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def parse(self) -> ClopenExpr:
        expr = self.expr()
        if self._peek():
            raise WordSyntaxError(f"unexpected '{self.text[self.pos]}'", self.pos)
        return expr

    def expr(self) -> ClopenExpr:
        result = self.diff()
        while self._peek() == '+':
            self.pos += 1
            result = result.union(self.diff())
        return result

    def diff(self) -> ClopenExpr:
        result = self.atom()
        while self._peek() == '-':
            self.pos += 1
            result = result.difference(self.atom())
        return result

    def atom(self) -> ClopenExpr:
        ch = self._peek()
        if self.text.startswith('Cyl(', self.pos):
            return ClopenExpr.of(self.cylinder())
        if self.text.startswith('empty', self.pos):
            self.pos += len('empty')
            return ClopenExpr.empty()
        if ch == '∅':
            self.pos += 1
            return ClopenExpr.empty()
        if ch == '(':
            self.pos += 1
            inner = self.expr()
            if self._peek() != ')':
                raise WordSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return inner
        raise WordSyntaxError("expected 'Cyl(', '(' or 'empty'", self.pos)

    def cylinder(self) -> Cylinder:
        self.pos += len('Cyl(')
        semicolon = self.text.find(';', self.pos)
        if semicolon < 0:
            raise WordSyntaxError("expected 'Cyl(<level>; <word>)'", self.pos)
        level_text = self.text[self.pos:semicolon].strip()
        if not level_text.isdigit():
            raise WordSyntaxError(f"cylinder level must be a number, got '{level_text}'", self.pos)
        nesting = 0
        i = semicolon + 1
        while i < len(self.text):
            if self.text[i] == '(':
                nesting += 1
            elif self.text[i] == ')':
                if nesting == 0:
                    break
                nesting -= 1
            i += 1
        else:
            raise WordSyntaxError("unterminated 'Cyl('", self.pos)
        try:
            word = parse_word(self.text[semicolon + 1:i])
        except WordSyntaxError as e:
            raise WordSyntaxError(e.reason, semicolon + 1 + e.position) from e
        self.pos = i + 1
        return Cylinder(int(level_text), reduce(word))


def parse_clopen(text: str) -> ClopenExpr:
    return _ClopenParser(text).parse()


# ---------------------------------------------------------------------------
# Sequences and the convergence oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointSequence:
    """Explicit terms for indices 1..len(terms), then an optional tail rule from `start`"""

    terms: Tuple[GroupPoint, ...] = ()
    rule: Optional[Template] = None
    start: int = 1
    stop: Optional[int] = None
    name: str = ''

    @classmethod
    def from_rule(cls, rule: str, start: int = 1, stop: Optional[int] = None, name: str = '') -> 'PointSequence':
        if start < 1:
            raise InputError(f"sequence start must be >= 1, got {start}")
        return cls(rule=parse_template(rule), start=start, stop=stop, name=name)

    @classmethod
    def from_terms(cls, terms: Iterable[Union[str, GroupPoint]], name: str = '') -> 'PointSequence':
        points = tuple(t if isinstance(t, GroupPoint) else GroupPoint.of(t) for t in terms)
        return cls(terms=points, name=name)

    @classmethod
    def from_lines(cls, lines: Iterable[str], name: str = '') -> 'PointSequence':
        """Sequence file: term lines, or 'rule:', 'start:', 'stop:' lines"""
        terms, rule, start, stop = [], None, 1, None
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, value = line.partition(':')
            key = key.strip().lower()
            try:
                if sep and key == 'rule':
                    rule = parse_template(value)
                elif sep and key in ('start', 'stop'):
                    if not value.strip().isdigit():
                        raise InputError(f"{key} must be a number, got '{value.strip()}'")
                    if key == 'start':
                        start = int(value)
                    else:
                        stop = int(value)
                else:
                    terms.append(GroupPoint.of(line))
            except WordSyntaxError as e:
                raise WordSyntaxError(f"line {lineno}: {e.reason}", e.position) from e
        if rule is None and not terms:
            raise InputError('sequence has neither terms nor a rule')
        if rule is not None:
            start = max(start, len(terms) + 1) if terms else start
        return cls(tuple(terms), rule, start, stop, name)

    @classmethod
    def read(cls, path: str) -> 'PointSequence':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_lines(f, name=path)

    def last_index(self, depth: int) -> int:
        if self.rule is None:
            return len(self.terms)
        return self.stop if self.stop is not None else depth

    def indices(self, depth: int) -> List[int]:
        return [
            n for n in range(1, self.last_index(depth) + 1)
            if n <= len(self.terms) or (self.rule is not None and n >= self.start)
        ]

    def term(self, n: int) -> GroupPoint:
        if 1 <= n <= len(self.terms):
            return self.terms[n - 1]
        if self.rule is None or n < self.start:
            raise InputError(f"sequence has no term at index {n}")
        return GroupPoint(FiniteStage(self.rule.instantiate(n)))

    def __str__(self):
        if self.name:
            return self.name
        if self.rule is not None:
            return f"({self.rule})_n"
        return '(' + ', '.join(str(t) for t in self.terms) + ')'


class ConvergenceOutcome(Enum):
    CONVERGES = 'converges'
    DIVERGES = 'diverges'
    INCONCLUSIVE = 'inconclusive'


@dataclass(frozen=True)
class LevelRecord:
    level: int
    projections: Tuple[GroupWord, ...]
    stable_from: Optional[int]
    counts: Tuple[int, ...]
    period: Optional[int] = None

    @property
    def value(self) -> Optional[GroupWord]:
        return self.projections[-1] if self.stable_from is not None else None


@dataclass(frozen=True)
class ConvergenceVerdict:
    outcome: ConvergenceOutcome
    limit: Optional[GroupPoint] = None
    certificate: str = ''
    indices: Tuple[int, ...] = ()
    records: Tuple[LevelRecord, ...] = ()

    @property
    def converges(self) -> bool:
        return self.outcome is ConvergenceOutcome.CONVERGES

    @property
    def diverges(self) -> bool:
        return self.outcome is ConvergenceOutcome.DIVERGES

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for rec in self.records:
            rows.append({
                'level': rec.level,
                'stable_from': rec.stable_from,
                'value': str(rec.value) if rec.value is not None else None,
                'period': rec.period,
                'counts': ' '.join(map(str, rec.counts)),
            })
        return pd.DataFrame(rows, columns=['level', 'stable_from', 'value', 'period', 'counts'])

    def __str__(self):
        if self.converges:
            return f"converges {self.limit}"
        return self.outcome.value


def _stable_from(values: Sequence[GroupWord], indices: Sequence[int]) -> Optional[int]:
    i = len(values) - 1
    while i > 0 and values[i - 1] == values[-1]:
        i -= 1
    return indices[i] if len(values) - i >= 2 else None


def _period(values: Sequence[GroupWord]) -> Optional[int]:
    if len(set(values)) < 2:
        return None
    for p in range(2, len(values) // 2 + 1):
        if all(values[i] == values[i + p] for i in range(len(values) - p)):
            return p
    return None


def _linear_growth(counts: Sequence[int]) -> Optional[int]:
    tail = counts[-4:]
    if len(tail) < 3:
        return None
    steps = {b - a for a, b in zip(tail, tail[1:])}
    if len(steps) == 1:
        step = steps.pop()
        return step if step > 0 else None
    return None


def converge(seq: PointSequence, depth: int) -> ConvergenceVerdict:
    """Decide convergence in G from the sampled window of `seq`"""
    indices = seq.indices(depth)
    if len(indices) < 2:
        return ConvergenceVerdict(ConvergenceOutcome.INCONCLUSIVE, certificate='fewer than two sampled terms',
                                  indices=tuple(indices))
    terms = [seq.term(n) for n in indices]
    try:
        reps = [sigma(t, depth) for t in terms]
    except StabilizationError as e:
        return ConvergenceVerdict(ConvergenceOutcome.INCONCLUSIVE, certificate=str(e), indices=tuple(indices))

    if seq.rule is not None:
        bound = min(depth, max(1, indices[-1] - 2))
    elif any(t.is_stream for t in terms):
        bound = depth
    else:
        levels = [t.representative.settled_level for t in terms if not t.is_stream]
        bound = min(depth, max([1, *levels]))

    records = []
    for level in range(1, bound + 1):
        values = tuple(project_group(t, level) for t in terms)
        counts = tuple(letter_count(r.word_at(level), level) for r in reps)
        records.append(LevelRecord(level, values, _stable_from(values, indices), counts, _period(values)))
    records = tuple(records)
    logger.debug('converge %s: %d terms, levels 1..%d', seq, len(terms), bound)

    if seq.rule is not None:
        for rec in records:
            step = _linear_growth(rec.counts)
            if step:
                certificate = (f"c(sigma(g_n), {rec.level}) grows by {step} per term "
                               f"over n = {indices[-min(4, len(indices))]}..{indices[-1]}")
                return ConvergenceVerdict(ConvergenceOutcome.DIVERGES, certificate=certificate,
                                          indices=tuple(indices), records=records)

    if all(rec.stable_from is not None for rec in records):
        limit = terms[-1] if terms[-1] == terms[-2] else GroupPoint.embed(records[-1].value)
        for rec in records:
            if project_group(limit, rec.level) != rec.value:
                return ConvergenceVerdict(ConvergenceOutcome.INCONCLUSIVE,
                                          certificate=f"stable projections disagree at level {rec.level}",
                                          indices=tuple(indices), records=records)
        certificate = 'projections stable at levels 1..{} from n = {}'.format(
            bound, max(rec.stable_from for rec in records))
        return ConvergenceVerdict(ConvergenceOutcome.CONVERGES, limit, certificate, tuple(indices), records)

    for rec in records:
        if rec.period:
            certificate = f"Pi_{rec.level} repeats with period {rec.period} without settling"
            return ConvergenceVerdict(ConvergenceOutcome.DIVERGES, certificate=certificate,
                                      indices=tuple(indices), records=records)

    return ConvergenceVerdict(ConvergenceOutcome.INCONCLUSIVE, certificate='no stabilization within depth',
                              indices=tuple(indices), records=records)


def default_witnesses() -> Tuple[PointSequence, ...]:
    return (
        PointSequence.from_rule('x%n x%{n+1}', name='(x_n x_n+1)_n'),
        PointSequence.from_rule('x1 x%n X1', start=2, name='(x1 x_n X1)_n'),
        PointSequence.from_rule('x%n', name='(x_n)_n'),
    )


# ---------------------------------------------------------------------------
# Universe
# ---------------------------------------------------------------------------

class Universe:
    """Reduced words of level <= max_level and length <= max_length, as a projection table"""

    def __init__(self, max_level: int, max_length: int, extra: Iterable[GroupPoint] = (),
                 witnesses: Optional[Iterable[PointSequence]] = None):
        if max_level < 1:
            raise InputError(f"universe level must be >= 1, got {max_level}")
        if max_length < 0:
            raise InputError(f"universe length must be >= 0, got {max_length}")
        self.max_level = max_level
        self.max_length = max_length
        self.words: List[GroupWord] = list(enumerate_reduced(max_length, max_level))
        self.points: List[GroupPoint] = [GroupPoint.embed(w) for w in self.words]
        self.extra: Tuple[GroupPoint, ...] = tuple(extra)
        self.witnesses: Tuple[PointSequence, ...] = (
            default_witnesses() if witnesses is None else tuple(witnesses))

        table = {
            'word': [str(w) for w in self.words],
            'level': [w.level for w in self.words],
            'length': [len(w) for w in self.words],
        }
        for n in range(1, max_level + 1):
            table[f'pi_{n}'] = [str(reduce(retract(w.word, n))) for w in self.words]
        self.table = pd.DataFrame(table)
        self._ranks: Dict[int, Tuple[np.ndarray, list]] = {}
        logger.info('universe L=%d len=%d: %d elements', max_level, max_length, len(self.words))

    @classmethod
    def parse(cls, text: str, **kwargs) -> 'Universe':
        """'L=<n>,len=<n>'"""
        values = {}
        for part in text.split(','):
            key, sep, value = part.partition('=')
            key = key.strip()
            if not sep or key not in ('L', 'len') or not value.strip().isdigit():
                raise InputError(f"universe must look like 'L=<n>,len=<n>', got '{text}'")
            values[key] = int(value)
        if set(values) != {'L', 'len'}:
            raise InputError(f"universe must give both L and len, got '{text}'")
        return cls(values['L'], values['len'], **kwargs)

    def with_extra(self, points: Iterable[GroupPoint]) -> 'Universe':
        other = object.__new__(Universe)
        other.__dict__.update(self.__dict__)
        other.extra = self.extra + tuple(p for p in points if p not in self.extra)
        return other

    def __len__(self):
        return len(self.points) + len(self.extra)

    def __iter__(self) -> Iterator[GroupPoint]:
        yield from self.points
        yield from self.extra

    def __str__(self):
        return f"L={self.max_level},len={self.max_length}"

    def cylinder_mask(self, c: Cylinder) -> np.ndarray:
        if c.base.level > self.max_level:
            return np.zeros(len(self.words), dtype=bool)
        column = f'pi_{min(c.level, self.max_level)}'
        return (self.table[column] == str(c.base)).to_numpy()

    def mask(self, expr: ClopenExpr) -> np.ndarray:
        result = np.zeros(len(self.words), dtype=bool)
        for piece in expr.pieces:
            inside = self.cylinder_mask(piece.cylinder)
            for hole in piece.holes:
                inside &= ~self.cylinder_mask(hole)
            result |= inside
        return result

    def members(self, expr: ClopenExpr, depth: Optional[int] = None) -> List[GroupPoint]:
        found = [self.points[i] for i in np.flatnonzero(self.mask(expr))]
        found.extend(p for p in self.extra if member(p, expr, depth))
        return found

    def ranks(self, levels: int) -> Tuple[np.ndarray, list]:
        """Rank of every universe word under the order, and the sorted order keys"""
        if levels not in self._ranks:
            keys = [order_key(w.word, levels) for w in self.words]
            order = sorted(range(len(keys)), key=keys.__getitem__)
            ranks = np.empty(len(keys), dtype=np.int64)
            ranks[order] = np.arange(len(keys))
            self._ranks[levels] = (ranks, [keys[i] for i in order])
        return self._ranks[levels]


def _less(p: GroupPoint, b: GroupPoint, depth: int) -> bool:
    if p == b:
        return False
    verdict = cmp_G(p, b, depth)
    if verdict.is_equal:
        raise UndecidedPairError(p, b, depth)
    return verdict.is_less


SetLike = Union[ClopenExpr, Iterable[GroupPoint]]


def first_not_below(E: SetLike, b: GroupPoint, universe: Optional[Universe], depth: int,
                    tracked: Iterable[GroupPoint] = ()) -> Optional[GroupPoint]:
    """An element of E (over the universe) that is not below b, or None when E < b"""
    if not isinstance(E, ClopenExpr):
        for p in E:
            if not _less(p, b, depth):
                return p
        return None

    others = [p for p in tracked if member(p, E, depth)]
    if universe is not None:
        mask = universe.mask(E)
        others.extend(p for p in universe.extra if member(p, E, depth))
        if mask.any():
            if not b.is_stream:
                levels = max(universe.max_level, b.representative.settled_level)
                ranks, keys = universe.ranks(levels)
                limit = bisect.bisect_left(keys, point_key(b, levels))
                offenders = np.flatnonzero(mask & (ranks >= limit))
                if offenders.size:
                    return universe.points[offenders[np.argmax(ranks[offenders])]]
            else:
                for i in np.flatnonzero(mask):
                    if not _less(universe.points[i], b, depth):
                        return universe.points[i]
    for p in others:
        if not _less(p, b, depth):
            return p
    return None


def set_less(E: SetLike, b: GroupPoint, universe: Optional[Universe], depth: int,
             tracked: Iterable[GroupPoint] = ()) -> bool:
    return first_not_below(E, b, universe, depth, tracked) is None


def first_not_above(a: GroupPoint, E: ClopenExpr, universe: Optional[Universe], depth: int,
                    tracked: Iterable[GroupPoint] = ()) -> Optional[GroupPoint]:
    """An element of E (over the universe) that is not above a, or None when a < E"""
    others = [p for p in tracked if member(p, E, depth)]
    if universe is not None:
        mask = universe.mask(E)
        others.extend(p for p in universe.extra if member(p, E, depth))
        if mask.any():
            if not a.is_stream:
                levels = max(universe.max_level, a.representative.settled_level)
                ranks, keys = universe.ranks(levels)
                limit = bisect.bisect_right(keys, point_key(a, levels))
                offenders = np.flatnonzero(mask & (ranks < limit))
                if offenders.size:
                    return universe.points[offenders[np.argmin(ranks[offenders])]]
            else:
                for i in np.flatnonzero(mask):
                    if not _less(a, universe.points[i], depth):
                        return universe.points[i]
    for p in others:
        if not _less(a, p, depth):
            return p
    return None


@dataclass(frozen=True)
class ClopenCheck:
    ok: bool
    witness: Optional[PointSequence] = None
    limit: Optional[GroupPoint] = None
    verdicts: Tuple[Tuple[str, str], ...] = field(default=())

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return 'ok'
        return f"boundary_witness({self.witness}, {self.limit})"


def relatively_clopen(E: ClopenExpr, universe: Universe, depth: int) -> ClopenCheck:
    """Refute clopen-ness with a cataloged sequence whose limit crosses the boundary of E"""
    verdicts = []
    for seq in universe.witnesses:
        if seq.rule is not None and seq.stop is None:
            # sample up to the highest level E distinguishes
            seq = replace(seq, stop=max(E.max_level, seq.start + 3))
        verdict = converge(seq, depth)
        verdicts.append((str(seq), str(verdict)))
        if not verdict.converges:
            continue
        inside = [member(seq.term(n), E, depth) for n in verdict.indices]
        limit_inside = member(verdict.limit, E, depth)
        if (all(inside) and not limit_inside) or (not any(inside) and limit_inside):
            logger.info('%s is not clopen: %s -> %s', E, seq, verdict.limit)
            return ClopenCheck(False, seq, verdict.limit, tuple(verdicts))
    return ClopenCheck(True, verdicts=tuple(verdicts))
