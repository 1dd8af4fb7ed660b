from flask import Blueprint, Response, current_app, jsonify, request

from core.analysis import check_conditions, refute_by_counting
from core.digraph import validate
from core.errors import CompgraphError, FormatError, InvalidSizesError
from core.oracle import exists_complete_orientation, minimal_total, synthesize_witness
from core.parser import dump_dot, dump_dmt, parse_sizes, parse_tournament, tournament_to_dict
from core.witnesses import WitnessId, load_witness

api_bp = Blueprint('api', __name__, url_prefix='/api')

_MIMETYPES = {'json': 'application/json', 'dmt': 'text/plain', 'dot': 'text/vnd.graphviz'}


def _sizes_arg():
    raw = request.args.get('sizes', '')
    if not raw.strip():
        raise InvalidSizesError("query parameter 'sizes' is required, e.g. ?sizes=5,4,4")
    return parse_sizes(raw)


def _render(t, fmt, comment=None):
    if fmt == 'json':
        return jsonify(tournament_to_dict(t))
    if fmt == 'dmt':
        return Response(dump_dmt(t, comment), mimetype=_MIMETYPES['dmt'])
    return Response(dump_dot(t), mimetype=_MIMETYPES['dot'])


@api_bp.errorhandler(CompgraphError)
def handle_domain_error(e):
    current_app.logger.info("rejected request %s: %s", request.path, e)
    return jsonify({"error": str(e)}), 400


@api_bp.route('/oracle')
def oracle():
    verdict = exists_complete_orientation(_sizes_arg())
    return jsonify(verdict.to_dict()), 200


@api_bp.route('/witness')
def witness():
    fmt = request.args.get('format', 'json')
    if fmt not in _MIMETYPES:
        return jsonify({"error": f"format must be one of {', '.join(_MIMETYPES)}"}), 400
    sizes = _sizes_arg()
    t = synthesize_witness(sizes)
    if t is None:
        verdict = exists_complete_orientation(sizes)
        return jsonify({"error": "no orientation has a complete competition graph", **verdict.to_dict()}), 404
    return _render(t, fmt, comment=f"witness for K_{sizes}")


@api_bp.route('/witnesses/<name>')
def embedded_witness(name):
    fmt = request.args.get('format', 'json')
    if fmt not in _MIMETYPES:
        return jsonify({"error": f"format must be one of {', '.join(_MIMETYPES)}"}), 400
    try:
        witness_id = WitnessId.parse(name)
    except ValueError as e:
        return jsonify({"error": str(e)}), 404
    return _render(load_witness(witness_id), fmt, comment=witness_id.value)


@api_bp.route('/check', methods=['POST'])
def check():
    """
    Body: a DMT or JSON tournament. Structural violations come back with 422;
    otherwise the full condition report.
    """
    text = request.get_data(as_text=True)
    if not text.strip():
        return jsonify({"error": "request body must hold a DMT or JSON tournament"}), 400
    try:
        t = parse_tournament(text)
    except FormatError as e:
        return jsonify({"error": str(e), "line": e.line}), 400

    violations = validate(t)
    if violations:
        return jsonify({"valid": False, "violations": [str(v) for v in violations]}), 422
    return jsonify({"valid": True, **check_conditions(t).to_dict()}), 200


@api_bp.route('/refute')
def refute():
    return jsonify(refute_by_counting(_sizes_arg()).to_dict()), 200


@api_bp.route('/minimal/<int:k>')
def minimal(k):
    if k < 1:
        return jsonify({"error": "part count must be positive"}), 400
    return jsonify({"k": k, "minimal_total": minimal_total(k)}), 200
