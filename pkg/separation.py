"""
Clopen thickening and separation of finite sets
thicken builds V(a, B): a clopen set containing B and lying above a, one
cylinder per step at the least level that keeps the steps increasing.
separate interleaves thickenings to split two disjoint finite sets into
complementary clopen sets. Both return a SeparationTrace with every step.

A step can meet a covered element that is not below the next minimum, so no
clearing level exists. With strict=True this raises OrderTrapViolation; with
strict=False the step takes the least level whose cylinder misses the covered
set and stays above the anchor, and is marked relaxed in the trace.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from errors import (DisjointnessError, EmptySetError, InputError, InvariantViolation,
                    NotLessError, OrderTrapViolation, PreconditionError)
from order import cmp_G, min_of
from points import Cylinder, GroupPoint, embed_projection, project_group, working_depth
from topology import ClopenExpr, Universe, cyl_min, first_not_above, first_not_below, member, set_less

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    j: int
    kappa: GroupPoint
    eta: int
    cylinder: Cylinder
    excluded: ClopenExpr
    gamma: ClopenExpr
    before: ClopenExpr
    side: str = ''
    witness: Optional[GroupPoint] = None

    @property
    def relaxed(self) -> bool:
        return self.witness is not None

    def line(self) -> str:
        text = (f"{self.j} | kappa={self.kappa} | eta={self.eta} | U={self.cylinder} "
                f"| K={self.excluded} | gamma={self.gamma}")
        if self.relaxed:
            text += f" | relaxed={self.witness}"
        return text


@dataclass
class SeparationTrace:
    kind: str
    points: Tuple[GroupPoint, ...] = ()
    anchor: Optional[GroupPoint] = None
    steps: List[TraceStep] = field(default_factory=list)
    outcome: ClopenExpr = field(default_factory=ClopenExpr.empty)

    @property
    def covered(self) -> ClopenExpr:
        """W after the last step"""
        if not self.steps:
            return ClopenExpr.empty()
        return self.steps[-1].before.union(self.steps[-1].gamma)

    @property
    def relaxed(self) -> bool:
        return any(s.relaxed for s in self.steps)

    def lines(self) -> List[str]:
        return [step.line() for step in self.steps] + [f"V={self.outcome}"]

    def to_text(self) -> str:
        return '\n'.join(self.lines()) + '\n'

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                'j': s.j,
                'side': s.side,
                'kappa': str(s.kappa),
                'eta': s.eta,
                'U': str(s.cylinder),
                'K': str(s.excluded),
                'gamma': str(s.gamma),
                'W': str(s.before),
                'relaxed': str(s.witness) if s.relaxed else '',
            }
            for s in self.steps
        ], columns=['j', 'side', 'kappa', 'eta', 'U', 'K', 'gamma', 'W', 'relaxed'])

    def write(self, path: str) -> None:
        """Text lines by default; .csv and .xlsx go through pandas"""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        suffix = os.path.splitext(path)[1].lower()
        if suffix == '.csv':
            self.to_frame().to_csv(path, index=False)
        elif suffix == '.xlsx':
            with pd.ExcelWriter(path, engine='openpyxl') as writer:
                self.to_frame().to_excel(writer, sheet_name='steps', index=False)
                pd.DataFrame({'V': [str(self.outcome)]}).to_excel(writer, sheet_name='outcome', index=False)
        else:
            with open(path, 'w', encoding='utf-8') as f:
                f.write(self.to_text())
        logger.info('wrote %s trace with %d steps to %s', self.kind, len(self.steps), path)


def _level_limit(b: GroupPoint, depth: int) -> int:
    return depth if b.probe_depth is None else min(depth, b.probe_depth)


def _cylinder_at(p: GroupPoint, level: int) -> Cylinder:
    return Cylinder(level, project_group(p, level))


def min_separating_level(a: GroupPoint, b: GroupPoint, depth: int) -> int:
    """Least N with a < Pi_N(b)"""
    depth = working_depth(depth, [a, b])
    if not cmp_G(a, b, depth).is_less:
        raise NotLessError(f"{a} is not below {b}")
    limit = _level_limit(b, depth)
    for n in range(1, limit + 1):
        if cmp_G(a, embed_projection(b, n), depth).is_less:
            return n
    raise InvariantViolation(f"no level <= {limit} separates {a} from {b}")


def min_clearing_level(W, b: GroupPoint, universe: Optional[Universe], depth: int,
                       tracked: Sequence[GroupPoint] = ()) -> int:
    """Least N with W < Pi_N(b); W is a ClopenExpr or a finite set"""
    depth = working_depth(depth, [b])
    check = tuple(tracked) + (b,) if isinstance(W, ClopenExpr) else tracked
    witness = first_not_below(W, b, universe, depth, check)
    if witness is not None:
        raise PreconditionError(f"{witness} lies in W but is not below {b}")
    limit = _level_limit(b, depth)
    for n in range(1, limit + 1):
        if set_less(W, embed_projection(b, n), universe, depth, tracked):
            return n
    raise InvariantViolation(f"no level <= {limit} clears W below {b}")


def _misses(W: ClopenExpr, U: Cylinder, anchor: Optional[GroupPoint], depth: int) -> bool:
    if not W.intersect_cylinder(U).is_empty:
        return False
    if anchor is None:
        return True
    return cmp_G(anchor, cyl_min(U), depth).is_less


def min_disjoint_level(W: ClopenExpr, b: GroupPoint, depth: int, anchor: Optional[GroupPoint] = None) -> int:
    """Least N whose cylinder around b misses W and lies above the anchor"""
    limit = _level_limit(b, working_depth(depth, [b]))
    for n in range(1, limit + 1):
        if _misses(W, _cylinder_at(b, n), anchor, depth):
            return n
    raise InvariantViolation(f"no level <= {limit} keeps {b} clear of {W}")


def _next_level(W: ClopenExpr, b: GroupPoint, universe: Optional[Universe], depth: int,
                tracked: Sequence[GroupPoint], anchor: Optional[GroupPoint],
                strict: bool) -> Tuple[int, Optional[GroupPoint]]:
    try:
        return min_clearing_level(W, b, universe, depth, tracked), None
    except PreconditionError as e:
        witness = first_not_below(W, b, universe, depth, tuple(tracked) + (b,))
        if strict:
            raise OrderTrapViolation(f"covered set is not below the next minimum {b}: {witness}",
                                     witness, b) from e
    logger.warning('%s is covered but not below %s; taking the least disjoint level', witness, b)
    return min_disjoint_level(W, b, depth, anchor), witness


def thicken(a: GroupPoint, B: Sequence[GroupPoint], universe: Optional[Universe], depth: int,
            strict: bool = False) -> Tuple[ClopenExpr, SeparationTrace]:
    """Clopen V with B inside V and a outside V, below every step"""
    B = list(dict.fromkeys(B))
    if not B:
        raise EmptySetError('thicken needs a nonempty set B')
    depth = working_depth(depth, [a, *B])
    for b in B:
        if not cmp_G(a, b, depth).is_less:
            raise PreconditionError(f"{a} is not below {b}")

    tracked = (a, *B)
    trace = SeparationTrace('thicken', tuple(B), a)
    W = ClopenExpr.empty()
    b = min_of(B, depth)
    eta, witness = min_separating_level(a, b, depth), None
    while True:
        U = _cylinder_at(b, eta)
        gamma = ClopenExpr.of(U)
        trace.steps.append(TraceStep(len(trace.steps), b, eta, U, ClopenExpr.empty(), gamma, W,
                                     witness=witness))
        logger.debug('thicken step %s', trace.steps[-1].line())
        W = W.union(gamma)
        remaining = [p for p in B if not member(p, W, depth)]
        if not remaining:
            break
        if len(trace.steps) >= len(B):
            raise InvariantViolation(f"thicken did not cover B within {len(B)} steps")
        b = min_of(remaining, depth)
        eta, witness = _next_level(W, b, universe, depth, tracked, a, strict)

    below = first_not_above(a, W, universe, depth, tracked)
    if below is not None:
        raise InvariantViolation(f"thickening {W} holds {below}, which is not above its anchor {a}")
    trace.outcome = W
    return W, trace


@dataclass(frozen=True)
class ClopenComplement:
    """G minus a clopen expression"""

    inner: ClopenExpr

    def member(self, g: GroupPoint, depth: Optional[int] = None) -> bool:
        return not member(g, self.inner, depth)

    def __str__(self):
        return f"complement({self.inner})"


def separate(A: Sequence[GroupPoint], B: Sequence[GroupPoint], universe: Optional[Universe], depth: int,
             strict: bool = False) -> Tuple[ClopenExpr, ClopenComplement, SeparationTrace]:
    """Clopen U_A containing A and missing B; the B side is its complement"""
    A = list(dict.fromkeys(A))
    B = list(dict.fromkeys(B))
    if not A or not B:
        raise EmptySetError('separate needs nonempty sets A and B')
    common = set(A) & set(B)
    if common:
        raise DisjointnessError(f"A and B share {', '.join(sorted(str(p) for p in common))}")
    depth = working_depth(depth, [*A, *B])
    on_a = set(A)
    tracked = (*A, *B)
    trace = SeparationTrace('separate', tracked)

    W = ClopenExpr.empty()
    U_A = ClopenExpr.empty()
    while True:
        remaining = [p for p in tracked if not member(p, W, depth)]
        if not remaining:
            break
        if len(trace.steps) >= len(tracked):
            raise InvariantViolation(f"separate did not cover A and B within {len(tracked)} steps")
        kappa = min_of(remaining, depth)
        side = 'A' if kappa in on_a else 'B'
        opposite = [p for p in (B if side == 'A' else A) if not member(p, W, depth)]
        K = thicken(kappa, opposite, universe, depth, strict)[0] if opposite else ClopenExpr.empty()
        eta, witness = _next_level(W, kappa, universe, depth, tracked, None, strict)
        U = _cylinder_at(kappa, eta)
        gamma = ClopenExpr.of(U).difference(K)
        trace.steps.append(TraceStep(len(trace.steps), kappa, eta, U, K, gamma, W, side, witness))
        logger.debug('separate step %s (%s)', trace.steps[-1].line(), side)
        W = W.union(gamma)
        if side == 'A':
            U_A = U_A.union(gamma)

    leaked = [str(b) for b in B if member(b, U_A, depth)]
    missed = [str(p) for p in A if not member(p, U_A, depth)]
    if leaked or missed:
        raise InvariantViolation(f"separation failed: B inside U_A {leaked}, A outside U_A {missed}")
    trace.outcome = U_A
    return U_A, ClopenComplement(U_A), trace


def naive_thicken(B: Sequence[GroupPoint]) -> ClopenExpr:
    """Union of Cyl(n; Pi_n(b)) with n the first level where b is visible"""
    result = ClopenExpr.empty()
    for b in dict.fromkeys(B):
        limit = b.probe_depth if b.is_stream else b.representative.settled_level
        level = next((n for n in range(1, limit + 1) if project_group(b, n)), None)
        if level is None:
            raise InputError(f"{b} has no nonidentity projection")
        result = result.union(ClopenExpr.of(_cylinder_at(b, level)))
    return result


def _trace_tracked(trace: SeparationTrace) -> Tuple[GroupPoint, ...]:
    return trace.points + ((trace.anchor,) if trace.anchor is not None else ())


def check_monotone(trace: SeparationTrace, universe: Universe, depth: int) -> List[Tuple[int, int]]:
    """Pairs j < j' where some element of gamma(j) is not below some element of gamma(j')"""
    ranks, _ = universe.ranks(universe.max_level)
    tracked = _trace_tracked(trace)
    lows, highs = [], []
    for step in trace.steps:
        extras = [p for p in (*tracked, *universe.extra) if member(p, step.gamma, depth)]
        low, high = list(extras), list(extras)
        idx = universe.mask(step.gamma).nonzero()[0]
        if idx.size:
            low.append(universe.points[idx[ranks[idx].argmin()]])
            high.append(universe.points[idx[ranks[idx].argmax()]])
        lows.append(low)
        highs.append(high)

    failures = []
    for j in range(len(trace.steps)):
        for k in range(j + 1, len(trace.steps)):
            if any(p == q or not cmp_G(p, q, depth).is_less for p in highs[j] for q in lows[k]):
                failures.append((j, k))
    return failures


def check_eta_minimal(trace: SeparationTrace, universe: Optional[Universe], depth: int) -> List[int]:
    """Steps whose level could be lowered without breaking the construction"""
    tracked = _trace_tracked(trace)
    failures = []
    for step in trace.steps:
        if step.eta <= 1:
            continue
        lower = step.eta - 1
        if step.relaxed:
            admissible = _misses(step.before, _cylinder_at(step.kappa, lower), trace.anchor, depth)
        elif trace.kind == 'thicken' and step.j == 0:
            admissible = cmp_G(trace.anchor, embed_projection(step.kappa, lower), depth).is_less
        else:
            admissible = set_less(step.before, embed_projection(step.kappa, lower), universe, depth, tracked)
        if admissible:
            failures.append(step.j)
    return failures
