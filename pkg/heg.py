#!/usr/bin/env python3
"""
heg - command line front end for earring-kit

Exit codes: 0 success or true, 1 false or negative verdict, 2 input error,
3 internal invariant violation.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from audit import audit_passed, run_axioms, write_report
from errors import EarringError, InputError
from loops import LoopItinerary, loop_eq
from order import cmp_G, min_of
from points import GroupPoint, project_group, sigma, working_depth
from settings import DEFAULT_DEPTH, DEFAULT_UNIVERSE, configure_logging
from separation import separate, thicken
from topology import PointSequence, Universe, converge
from words import parse_word, read_word_file, reduce

logger = logging.getLogger('heg')


def _point(text: str, depth: int) -> GroupPoint:
    return GroupPoint.of(text, probe_depth=depth)


def _point_set(path: str) -> List[GroupPoint]:
    if not os.path.exists(path):
        raise InputError(f"set file not found: {path}")
    return [GroupPoint.embed(w) for w in read_word_file(path)]


def cmd_reduce(args) -> int:
    print(reduce(parse_word(args.word)))
    return 0


def cmd_project(args) -> int:
    print(project_group(_point(args.word, max(args.depth, args.N)), args.N))
    return 0


def cmd_sigma(args) -> int:
    p = _point(args.point, args.depth)
    rep = sigma(p, args.depth)
    print(rep)
    if args.levels:
        for n in range(1, args.depth + 1):
            print(f"{n}: {rep.word_at(n)}")
    return 0


def cmd_cmp(args) -> int:
    g, h = _point(args.w1, args.depth), _point(args.w2, args.depth)
    print(cmp_G(g, h, working_depth(args.depth, [g, h])))
    return 0


def cmd_min(args) -> int:
    points = _point_set(args.file)
    print(min_of(points, working_depth(args.depth, points)))
    return 0


def cmd_thicken(args) -> int:
    universe = Universe.parse(args.universe)
    V, trace = thicken(_point(args.a, args.depth), _point_set(args.B), universe, args.depth,
                       strict=args.strict)
    if args.trace:
        trace.write(args.trace)
    print(V)
    return 0


def cmd_separate(args) -> int:
    universe = Universe.parse(args.universe)
    U_A, U_B, trace = separate(_point_set(args.A), _point_set(args.B), universe, args.depth,
                              strict=args.strict)
    if args.trace:
        trace.write(args.trace)
    print(f"U_A={U_A}")
    print(f"U_B={U_B}")
    return 0


def _sequence(args) -> PointSequence:
    if os.path.exists(args.file):
        return PointSequence.read(args.file)
    rule = args.file.split(':', 1)[1] if args.file.startswith('rule:') else args.file
    if '%' not in rule:
        raise InputError(f"'{args.file}' is neither a sequence file nor a tail rule")
    return PointSequence.from_rule(rule, start=args.start, stop=args.stop)


def cmd_converge(args) -> int:
    verdict = converge(_sequence(args), args.depth)
    print(verdict)
    if args.verbose:
        print(verdict.certificate)
        print(verdict.to_frame().to_string(index=False))
    return 0 if verdict.converges else 1


def cmd_loopeq(args) -> int:
    equal = loop_eq(LoopItinerary.parse(args.w1), LoopItinerary.parse(args.w2))
    print('true' if equal else 'false')
    return 0 if equal else 1


def cmd_axioms(args) -> int:
    universe = Universe.parse(args.universe)
    report = run_axioms(universe, args.samples, args.seed, args.depth,
                        confluence_length=args.confluence_length, context_length=args.context_length)
    if args.report:
        write_report(report, args.report)
        print(f"📁 Report written to {args.report}")
    return 0 if audit_passed(report) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='heg', description='Hawaiian earring group toolkit')
    parser.add_argument('--log-level', default=None, help='logging threshold (default: HEG_LOG_LEVEL)')
    sub = parser.add_subparsers(dest='command', required=True)

    def command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--depth', type=int, default=DEFAULT_DEPTH, help='probe depth')
        p.set_defaults(handler=handler)
        return p

    p = command('reduce', cmd_reduce, 'free reduction of a word')
    p.add_argument('word')

    p = command('project', cmd_project, 'level-N projection Pi_N')
    p.add_argument('-N', type=int, required=True)
    p.add_argument('word')

    p = command('sigma', cmd_sigma, 'minimal representative of a point')
    p.add_argument('point')
    p.add_argument('--levels', action='store_true', help='print the word at every level')

    p = command('cmp', cmd_cmp, 'compare two points')
    p.add_argument('w1')
    p.add_argument('w2')

    p = command('min', cmd_min, 'minimum of a set file')
    p.add_argument('-f', dest='file', required=True)

    p = command('thicken', cmd_thicken, 'clopen thickening V(a, B)')
    p.add_argument('-a', dest='a', required=True)
    p.add_argument('-B', dest='B', required=True)
    p.add_argument('--universe', default=DEFAULT_UNIVERSE)
    p.add_argument('--trace')
    p.add_argument('--strict', action='store_true', help='fail instead of relaxing a step')

    p = command('separate', cmd_separate, 'separate two finite sets by clopen sets')
    p.add_argument('-A', dest='A', required=True)
    p.add_argument('-B', dest='B', required=True)
    p.add_argument('--universe', default=DEFAULT_UNIVERSE)
    p.add_argument('--trace')
    p.add_argument('--strict', action='store_true', help='fail instead of relaxing a step')

    p = command('converge', cmd_converge, 'convergence oracle')
    p.add_argument('-f', dest='file', required=True, help='sequence file or tail rule')
    p.add_argument('--start', type=int, default=1)
    p.add_argument('--stop', type=int)
    p.add_argument('-v', '--verbose', action='store_true')

    p = command('loopeq', cmd_loopeq, 'homotopy equality of loop itineraries')
    p.add_argument('w1')
    p.add_argument('w2')

    p = command('axioms', cmd_axioms, 'run the property suite over a universe')
    p.add_argument('--universe', default=DEFAULT_UNIVERSE)
    p.add_argument('--samples', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--confluence-length', type=int, default=6)
    p.add_argument('--context-length', type=int, default=5)
    p.add_argument('--report', help='write the report as .csv or .xlsx')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except EarringError as e:
        logger.debug('command %s failed', args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
