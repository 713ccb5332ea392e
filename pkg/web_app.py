"""Flask API for the Derived Decomposition Workbench
- API: /api/run runs a problem document and returns the machine report
- API: /api/report/pdf renders the same report as PDF
- API: /api/problems lists the shipped problem documents
"""

import io
import logging
import os

from flask import Flask, request, jsonify, send_file
from flask_cors import CORS

import config
from report_generator import generate_pdf_report
from workbench import Workbench

logging.basicConfig(level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO))
logger = logging.getLogger(__name__)

PROBLEMS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'problems')

app = Flask(__name__)
CORS(app)  # Enable CORS for all routes


@app.errorhandler(500)
def internal_error(error):
    logger.exception('unhandled error')
    return jsonify({'error': 'Internal Server Error', 'details': str(error)}), 500


def _run_request():
    """(workbench, None) on success, (None, error response) otherwise."""
    data = request.get_json(force=True, silent=True) or {}
    document = data.get('document')
    if not document:
        return None, (jsonify({'error': 'Missing document'}), 400)
    try:
        depth_cap = int(data['depth_cap']) if data.get('depth_cap') is not None else None
        seed = int(data['seed']) if data.get('seed') is not None else None
    except (TypeError, ValueError):
        return None, (jsonify({'error': 'depth_cap and seed must be integers'}), 400)
    workbench = Workbench(field_spec=data.get('field'), depth_cap=depth_cap, seed=seed)
    if not workbench.load(document):
        line, col = workbench.last_error_location or (0, 0)
        return None, (jsonify({'error': 'Parse error', 'details': workbench.last_error,
                               'line': line, 'col': col}), 400)
    workbench.run()
    return workbench, None


@app.route('/api/health', methods=['GET'])
def health():
    return jsonify({'status': 'ok', 'schema': config.REPORT_SCHEMA, 'schema_version': config.REPORT_SCHEMA_VERSION})


@app.route('/api/run', methods=['POST'])
def run_document():
    try:
        workbench, failure = _run_request()
        if failure:
            return failure
        strict = bool((request.get_json(force=True, silent=True) or {}).get('strict'))
        return jsonify(workbench.machine_report(strict))
    except Exception as e:
        return jsonify({'error': str(e)}), 500


@app.route('/api/report/pdf', methods=['POST'])
def report_pdf():
    try:
        workbench, failure = _run_request()
        if failure:
            return failure
        data = request.get_json(force=True, silent=True) or {}
        name = data.get('name') or 'document'
        pdf_bytes = generate_pdf_report(workbench.machine_report(bool(data.get('strict'))), name)
        return send_file(io.BytesIO(pdf_bytes), mimetype='application/pdf', as_attachment=True,
                         download_name=f"{name}_report.pdf")
    except Exception as e:
        return jsonify({'error': str(e)}), 500


@app.route('/api/problems', methods=['GET'])
def list_problems():
    try:
        names = sorted(f for f in os.listdir(PROBLEMS_DIR) if f.endswith('.txt'))
        return jsonify({'problems': names})
    except OSError as e:
        return jsonify({'error': str(e)}), 500


if __name__ == '__main__':
    print("\n" + "=" * 60)
    print("  Derived Decomposition Workbench - API")
    print("  Visit: http://localhost:5000/api/health")
    print("=" * 60 + "\n")
    port = int(os.environ.get('PORT', 5000))
    app.run(debug=False, use_reloader=False, threaded=False, host='0.0.0.0', port=port)
