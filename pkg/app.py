#!/usr/bin/env python3
"""
earring-kit - JSON API
Every heg command is exposed as a POST endpoint under /api/ taking the same
arguments as the command line.
"""

import os
from datetime import datetime
from functools import lru_cache
from typing import Any, Dict, List

from flask import Flask, jsonify, request
from flask_cors import CORS
from werkzeug.utils import secure_filename

from audit import audit_passed, run_axioms, write_report
from errors import EarringError, InputError
from loops import LoopItinerary, loop_eq, sigma_set
from order import cmp_G, min_of
from points import GroupPoint, is_finite_stage, phi, sigma, working_depth
from separation import separate, thicken
from settings import DEFAULT_DEPTH, DEFAULT_UNIVERSE, PORT, REPORT_DIR, configure_logging
from topology import PointSequence, Universe, converge, parse_clopen, relatively_clopen
from words import parse_word, reduce

app = Flask(__name__)
CORS(app)

ALLOWED_REPORTS = {'.csv', '.xlsx'}


@lru_cache(maxsize=8)
def _universe(text: str) -> Universe:
    return Universe.parse(text)


def _body() -> Dict[str, Any]:
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise InputError('request body must be a JSON object')
    return body


def _field(body: Dict[str, Any], name: str) -> Any:
    if name not in body:
        raise InputError(f"missing field '{name}'")
    return body[name]


def _int(body: Dict[str, Any], name: str, default: int) -> int:
    value = body.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"field '{name}' must be an integer")
    return value


def _depth(body: Dict[str, Any]) -> int:
    return _int(body, 'depth', DEFAULT_DEPTH)


def _point(text: Any, depth: int) -> GroupPoint:
    if not isinstance(text, str):
        raise InputError('points are given as strings')
    return GroupPoint.of(text, probe_depth=depth)


def _points(body: Dict[str, Any], name: str, depth: int) -> List[GroupPoint]:
    values = _field(body, name)
    if not isinstance(values, list):
        raise InputError(f"field '{name}' must be a list of words")
    return [_point(v, depth) for v in values]


@app.errorhandler(EarringError)
def handle_earring_error(e: EarringError):
    return jsonify({'error': str(e), 'kind': type(e).__name__}), e.http_status


@app.route('/', methods=['GET'])
def root():
    return jsonify({
        'service': 'earring-kit',
        'status': 'ok',
        'time': datetime.now().isoformat()
    })


@app.route('/healthz', methods=['GET'])
def healthz():
    try:
        reduce(parse_word('x1 X1'))
        return jsonify({'status': 'healthy'}), 200
    except Exception as e:
        return jsonify({'status': 'unhealthy', 'error': str(e)}), 500


@app.route('/api/reduce', methods=['POST'])
def api_reduce():
    body = _body()
    return jsonify({'result': str(reduce(parse_word(_field(body, 'word'))))})


@app.route('/api/project', methods=['POST'])
def api_project():
    body = _body()
    level = _int(body, 'level', 1)
    depth = max(_depth(body), level)
    p = _point(_field(body, 'word'), depth)
    return jsonify({
        'result': str(p.project(level)),
        'phi': [str(g) for g in phi(p, level)],
    })


@app.route('/api/sigma', methods=['POST'])
def api_sigma():
    body = _body()
    depth = _depth(body)
    p = _point(_field(body, 'point'), depth)
    rep = sigma(p, depth)
    return jsonify({
        'result': str(rep),
        'levels': [str(rep.word_at(n)) for n in range(1, depth + 1)],
        'finite_stage': str(is_finite_stage(p, depth)),
    })


@app.route('/api/cmp', methods=['POST'])
def api_cmp():
    body = _body()
    depth = _depth(body)
    g, h = _point(_field(body, 'w1'), depth), _point(_field(body, 'w2'), depth)
    verdict = cmp_G(g, h, working_depth(depth, [g, h]))
    return jsonify({'result': str(verdict), 'decided_at': verdict.decided_at})


@app.route('/api/min', methods=['POST'])
def api_min():
    body = _body()
    depth = _depth(body)
    points = _points(body, 'set', depth)
    return jsonify({'result': str(min_of(points, working_depth(depth, points)))})


@app.route('/api/thicken', methods=['POST'])
def api_thicken():
    body = _body()
    depth = _depth(body)
    universe = _universe(body.get('universe', DEFAULT_UNIVERSE))
    V, trace = thicken(_point(_field(body, 'a'), depth), _points(body, 'B', depth), universe, depth,
                       strict=bool(body.get('strict', False)))
    return jsonify({
        'result': str(V),
        'clopen': str(relatively_clopen(V, universe, working_depth(depth, trace.points))),
        'relaxed': trace.relaxed,
        'trace': trace.lines(),
    })


@app.route('/api/separate', methods=['POST'])
def api_separate():
    body = _body()
    depth = _depth(body)
    universe = _universe(body.get('universe', DEFAULT_UNIVERSE))
    U_A, U_B, trace = separate(_points(body, 'A', depth), _points(body, 'B', depth), universe, depth,
                              strict=bool(body.get('strict', False)))
    return jsonify({'U_A': str(U_A), 'U_B': str(U_B), 'relaxed': trace.relaxed, 'trace': trace.lines()})


@app.route('/api/converge', methods=['POST'])
def api_converge():
    body = _body()
    depth = _depth(body)
    if 'rule' in body:
        stop = _int(body, 'stop', 0) if 'stop' in body else None
        seq = PointSequence.from_rule(_field(body, 'rule'), start=_int(body, 'start', 1), stop=stop)
    else:
        seq = PointSequence.from_terms(_points(body, 'terms', depth))
    verdict = converge(seq, depth)
    return jsonify({
        'result': str(verdict),
        'certificate': verdict.certificate,
        'records': [
            {'level': r.level, 'stable_from': r.stable_from, 'value': None if r.value is None else str(r.value),
             'counts': list(r.counts)}
            for r in verdict.records
        ],
    })


@app.route('/api/clopen', methods=['POST'])
def api_clopen():
    body = _body()
    depth = _depth(body)
    expr = parse_clopen(_field(body, 'expr'))
    universe = _universe(body.get('universe', DEFAULT_UNIVERSE))
    check = relatively_clopen(expr, universe, depth)
    return jsonify({'result': str(check), 'expr': str(expr), 'members': int(universe.mask(expr).sum())})


@app.route('/api/loopeq', methods=['POST'])
def api_loopeq():
    body = _body()
    equal = loop_eq(LoopItinerary.parse(_field(body, 'w1')), LoopItinerary.parse(_field(body, 'w2')))
    return jsonify({'result': equal})


@app.route('/api/sigma-set', methods=['POST'])
def api_sigma_set():
    body = _body()
    result = sigma_set(LoopItinerary.parse(_field(body, 'word')), _int(body, 'level', 1))
    return jsonify({
        'words': [str(w) for w in result],
        'endpoints': sorted(str(w) for w in result.endpoints),
    })


@app.route('/api/axioms', methods=['POST'])
def api_axioms():
    body = _body()
    universe = _universe(body.get('universe', DEFAULT_UNIVERSE))
    report = run_axioms(universe, _int(body, 'samples', 200), _int(body, 'seed', 0), _depth(body),
                        confluence_length=_int(body, 'confluence_length', 5),
                        context_length=_int(body, 'context_length', 5),
                        echo=app.logger.info)
    response = {'passed': audit_passed(report), 'properties': report.to_dict(orient='records')}
    if body.get('report'):
        filename = secure_filename(str(body['report']))
        if os.path.splitext(filename)[1].lower() not in ALLOWED_REPORTS:
            raise InputError('report must be a .csv or .xlsx file name')
        path = os.path.join(REPORT_DIR, filename)
        write_report(report, path)
        response['report'] = path
    return jsonify(response)


if __name__ == '__main__':
    configure_logging()
    print("🚀 earring-kit API started!")
    print(f"🧮 Reduce:   http://localhost:{PORT}/api/reduce")
    print(f"📐 Compare:  http://localhost:{PORT}/api/cmp")
    print(f"🧱 Thicken:  http://localhost:{PORT}/api/thicken")
    app.run(debug=True, host='0.0.0.0', port=PORT)
