"""
Property suite behind `heg axioms`
Each property is checked exhaustively or on seeded samples of the universe and
reported as one row: how many cases were checked, how many failed, and the
first counterexample. Properties marked 'measured' are reported without
affecting the verdict; they are laws that are known to fail on some triples.
"""

import itertools
import logging
import os
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional

import numpy as np
import pandas as pd

from order import cmp_G, cmp_X
from points import Cylinder, FiniteStage, GroupPoint, blowup, project_group
from topology import Universe, cyl_contains, cylinder_meet
from words import (Letter, MonoidWord, enumerate_words, fiber_key, maximal_reductions, reduce, retract,
                   shortlex_key)

logger = logging.getLogger(__name__)


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: int = 0
    example: str = ''
    measured: bool = False

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, example: str) -> None:
        self.failures += 1
        if not self.example:
            self.example = example

    def line(self) -> str:
        mark = '✅' if self.passed else ('⚠️' if self.measured else '❌')
        text = f"{mark} {self.name}: {self.checked - self.failures}/{self.checked} passed"
        if self.example:
            text += f" (first failure: {self.example})"
        return text


def _le(p: GroupPoint, q: GroupPoint, depth: int) -> bool:
    return p == q or cmp_G(p, q, depth).is_less


def check_confluence(max_length: int, max_index: int = 2) -> PropertyResult:
    result = PropertyResult('reduction confluence')
    for w in enumerate_words(max_length, max_index):
        result.checked += 1
        ends = maximal_reductions(w)
        if ends != frozenset([reduce(w).word]):
            result.fail(f"{w} -> {', '.join(sorted(map(str, ends)))}")
    return result


def check_projection_coherence(points: List[GroupPoint], levels: int) -> PropertyResult:
    result = PropertyResult('Pi_(n-1) = Pi_(n-1) Pi_n')
    for p in points:
        for n in range(2, levels + 2):
            result.checked += 1
            stepped = project_group(GroupPoint.embed(project_group(p, n)), n - 1)
            if stepped != project_group(p, n - 1):
                result.fail(f"{p} at n={n}")
    return result


def check_projection_chain(points: List[GroupPoint], levels: int, depth: int) -> PropertyResult:
    result = PropertyResult('Pi_n <= Pi_(n+1) <= id')
    for p in points:
        previous = GroupPoint.embed(project_group(p, 1))
        for n in range(2, levels + 2):
            result.checked += 1
            current = GroupPoint.embed(project_group(p, n))
            if not (_le(previous, current, depth) and _le(current, p, depth)):
                result.fail(f"{p} at n={n}")
            previous = current
    return result


def _fiber(context: MonoidWord, n: int, inserted: int) -> Iterator[MonoidWord]:
    """Words of X_n retracting to the context, with up to `inserted` x_n letters"""
    letters = context.letters
    alphabet = (Letter(n), Letter(n, -1))
    for count in range(1, inserted + 1):
        for block in itertools.product(alphabet, repeat=count):
            for gaps in itertools.combinations_with_replacement(range(len(letters) + 1), count):
                out, previous = [], 0
                for gap, letter in zip(gaps, block):
                    out.extend(letters[previous:gap])
                    out.append(letter)
                    previous = gap
                out.extend(letters[previous:])
                yield MonoidWord(tuple(out))


def check_order_constraints(max_length: int, max_index: int = 3, inserted: int = 2) -> PropertyResult:
    """Plain shortlex puts q_n(context) first in its fiber group, and the context is least in its q_n fiber"""
    result = PropertyResult('order constraints on fibers')
    for context in enumerate_words(max_length, max_index - 1):
        image = reduce(context)
        own_image, own_word = shortlex_key(image), fiber_key(context)
        for n in range(context.level + 1, max_index + 1):
            result.checked += 1
            for w in _fiber(context, n, inserted):
                other = reduce(w)
                if other == image:
                    bad = fiber_key(w) <= own_word
                else:
                    bad = shortlex_key(other) <= own_image
                if bad:
                    result.fail(f"{w} not above context {context} at level {n}")
                    break
    return result


def check_trichotomy(points: List[GroupPoint], depth: int, rng: np.random.Generator,
                     samples: int) -> PropertyResult:
    result = PropertyResult('order trichotomy and transitivity')
    for _ in range(samples):
        a, b, c = (points[i] for i in rng.integers(len(points), size=3))
        result.checked += 1
        ab, ba = cmp_G(a, b, depth), cmp_G(b, a, depth)
        if (a == b) != ab.is_equal or (ab.is_less != ba.is_greater):
            result.fail(f"{a}, {b}")
            continue
        if _le(a, b, depth) and _le(b, c, depth) and not _le(a, c, depth):
            result.fail(f"{a} <= {b} <= {c}")
    return result


def _sorted_triple(points: List[GroupPoint], depth: int, rng: np.random.Generator) -> Optional[list]:
    triple = list({points[i] for i in rng.integers(len(points), size=3)})
    if len(triple) < 3:
        return None
    triple.sort(key=lambda p: sum(1 for q in triple if cmp_G(q, p, depth).is_less))
    return triple


def check_trap_law(points: List[GroupPoint], depth: int, rng: np.random.Generator,
                   samples: int) -> PropertyResult:
    """k1 < k2 < k3 and Blowup(k3) in Blowup(k1) imply Blowup(k2) in Blowup(k1)"""
    result = PropertyResult('blowup nesting (trap law)', measured=True)
    for _ in range(samples):
        triple = _sorted_triple(points, depth, rng)
        if triple is None:
            continue
        k1, k2, k3 = triple
        c1 = blowup(k1)
        result.checked += 1
        if cyl_contains(c1, blowup(k3)) and not cyl_contains(c1, blowup(k2)):
            result.fail(f"{k1} < {k2} < {k3}")
    return result


def check_lifted_trap_law(points: List[GroupPoint], depth: int, rng: np.random.Generator,
                          samples: int) -> PropertyResult:
    """On minimal representatives: R_N1(x3) = x1 forces R_N1(x2) = x1"""
    result = PropertyResult('lifted trap law on representatives')
    for _ in range(samples):
        triple = _sorted_triple(points, depth, rng)
        if triple is None:
            continue
        x1, x2, x3 = (reduce(k.representative.word).word for k in triple)
        result.checked += 1
        level = x1.level
        if retract(x3, level) == x1 and retract(x2, level) != x1:
            result.fail(f"{x1} < {x2} < {x3}")
    return result


def check_triple_law(points: List[GroupPoint], level: int, depth: int, rng: np.random.Generator,
                     samples: int) -> PropertyResult:
    """x < y < z in X_n with equal level-(n-1) images force the same image on y"""
    result = PropertyResult('non-interlacing triples', measured=True)
    for _ in range(samples):
        triple = _sorted_triple(points, depth, rng)
        if triple is None:
            continue
        x, y, z = (reduce(retract(reduce(k.representative.word).word, level - 1)) for k in triple)
        result.checked += 1
        if x == z and y != x:
            result.fail(' < '.join(str(k) for k in triple))
    return result


def check_retraction_monotone(points: List[GroupPoint], levels: int, depth: int) -> PropertyResult:
    result = PropertyResult('R_n(x) <= x')
    for p in points:
        x = FiniteStage(reduce(p.representative.word).word)
        for n in range(1, levels + 1):
            result.checked += 1
            if cmp_X(FiniteStage(retract(x.word, n)), x, depth).is_greater:
                result.fail(f"{x} at n={n}")
    return result


def _sample_cylinders(universe: Universe, rng: np.random.Generator, samples: int) -> List[Cylinder]:
    cylinders = []
    for i in rng.integers(len(universe.points), size=samples):
        level = int(rng.integers(1, universe.max_level + 1))
        cylinders.append(Cylinder(level, project_group(universe.points[i], level)))
    return cylinders


def check_cylinder_minimum(universe: Universe, rng: np.random.Generator, samples: int) -> PropertyResult:
    result = PropertyResult('cylinder minimum is its base')
    ranks, _ = universe.ranks(universe.max_level)
    position = {str(w): i for i, w in enumerate(universe.words)}
    for c in _sample_cylinders(universe, rng, samples):
        result.checked += 1
        inside = universe.cylinder_mask(c)
        if ranks[inside].min() != ranks[position[str(c.base)]]:
            result.fail(str(c))
    return result


def check_nested_or_disjoint(universe: Universe, rng: np.random.Generator, samples: int) -> PropertyResult:
    result = PropertyResult('cylinders nested or disjoint')
    cylinders = _sample_cylinders(universe, rng, 2 * samples)
    for c, d in zip(cylinders[::2], cylinders[1::2]):
        result.checked += 1
        overlap = (universe.cylinder_mask(c) & universe.cylinder_mask(d)).any()
        if overlap and cylinder_meet(c, d) is None:
            result.fail(f"{c}, {d}")
    return result


def run_axioms(universe: Universe, samples: int, seed: int, depth: int,
               confluence_length: int = 6, context_length: int = 5,
               echo: Callable[[str], None] = print) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    points = universe.points
    sampled = [points[i] for i in rng.integers(len(points), size=samples)]
    levels = universe.max_level

    checks = [
        lambda: check_confluence(confluence_length),
        lambda: check_projection_coherence(sampled, levels),
        lambda: check_projection_chain(sampled, levels, depth),
        lambda: check_retraction_monotone(sampled, levels, depth),
        lambda: check_order_constraints(context_length),
        lambda: check_trichotomy(points, depth, rng, samples),
        lambda: check_cylinder_minimum(universe, rng, samples),
        lambda: check_nested_or_disjoint(universe, rng, samples),
        lambda: check_trap_law(points, depth, rng, samples),
        lambda: check_lifted_trap_law(points, depth, rng, samples),
        lambda: check_triple_law(points, levels, depth, rng, samples),
    ]
    echo(f"🔎 Auditing universe {universe} ({len(points)} elements), {samples} samples, seed {seed}")
    results = []
    for check in checks:
        outcome = check()
        logger.info('%s: %d checked, %d failed', outcome.name, outcome.checked, outcome.failures)
        echo(outcome.line())
        results.append(outcome)

    return pd.DataFrame([
        {
            'property': r.name,
            'checked': r.checked,
            'failures': r.failures,
            'status': 'pass' if r.passed else 'fail',
            'kind': 'measured' if r.measured else 'law',
            'example': r.example,
        }
        for r in results
    ], columns=['property', 'checked', 'failures', 'status', 'kind', 'example'])


def audit_passed(report: pd.DataFrame) -> bool:
    laws = report[report['kind'] == 'law']
    return bool((laws['failures'] == 0).all())


def write_report(report: pd.DataFrame, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    if path.lower().endswith('.xlsx'):
        report.to_excel(path, index=False, engine='openpyxl')
    else:
        report.to_csv(path, index=False)
    logger.info('wrote audit report to %s', path)
