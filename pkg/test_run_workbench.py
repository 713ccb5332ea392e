"""
End-to-end runs: the command line, machine reports, PDF rendering and the API.
"""

import json
import os

import config
from report_generator import create_text_pdf, generate_pdf_report
from run_workbench import main, text_report
from web_app import app
from workbench import Workbench

PROBLEMS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'problems')


def _problem(name):
    return os.path.join(PROBLEMS_DIR, name)


def _read(name):
    with open(_problem(name), 'r', encoding='utf-8') as f:
        return f.read()


def test_a2_quotient_holds():
    assert main([_problem('a2-quotient.txt')]) == 0


def test_failing_documents_exit_with_one():
    assert main([_problem('dual-numbers.txt')]) == 1
    assert main([_problem('a2-swapped.txt')]) == 1


def test_z_localization_holds():
    assert main([_problem('z-localization.txt')]) == 0


def test_usage_and_parse_errors_exit_with_two(tmp_path):
    broken = tmp_path / 'broken.txt'
    broken.write_text('field q\ntask five-term pair P module M\n', encoding='utf-8')
    assert main([str(broken)]) == 2
    assert main([str(tmp_path / 'missing.txt')]) == 2
    assert main([]) == 2


def test_undecodable_document_exits_with_two(tmp_path):
    garbled = tmp_path / 'garbled.txt'
    garbled.write_bytes(b'field q\n\xff\xfe task selftest\n')
    assert main([str(garbled)]) == 2


def test_machine_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / 'first.json', tmp_path / 'second.json'
    assert main([_problem('a2-complex.txt'), '--machine', str(first)]) == 0
    assert main([_problem('a2-complex.txt'), '--machine', str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text(encoding='utf-8'))
    assert report['status'] == 'holds'
    assert [t['task'] for t in report['tasks']] == ['five-term', 'decompose-complex']


def test_save_writes_into_the_output_directory(tmp_path, monkeypatch):
    monkeypatch.setattr(config, 'OUTPUT_DIR', str(tmp_path))
    assert main([_problem('a2-quotient.txt'), '--save']) == 0
    assert (tmp_path / 'a2-quotient.txt').read_text(encoding='utf-8').startswith('=' * 50)
    assert json.loads((tmp_path / 'a2-quotient.json').read_text(encoding='utf-8'))['status'] == 'holds'


def test_parallel_run_keeps_document_order():
    serial, parallel = Workbench(), Workbench(parallel=True)
    for wb in (serial, parallel):
        assert wb.load(_read('a2-quotient.txt'))
        wb.run()
    assert serial.machine_text() == parallel.machine_text()


def test_strict_mode_turns_unknown_into_failure():
    wb = Workbench()
    assert wb.load(_read('a2-quotient.txt'))
    wb.run()
    wb.results[0]['status'] = 'unknown-at-cap'
    assert wb.exit_status() == 0
    assert wb.exit_status(strict=True) == 1


def test_five_term_task_summary():
    wb = Workbench()
    assert wb.load(_read('a2-quotient.txt'))
    wb.run()
    five_term = wb.results[2]
    assert five_term['details']['dimensions'] == {'Y_M': 0, 'X_M': 1, 'M': 2, 'Y^M': 1, 'X^M': 0}
    report = text_report(wb, 'a2-quotient.txt')
    assert 'FIVE-TERM SEQUENCE' in report and 'SUMMARY' in report


def test_load_reports_the_error_location():
    wb = Workbench()
    assert not wb.load('field q\nquiver A2 vertices 2 arrows a:1->2\ntask check-epi epi nope\n')
    assert wb.last_error_location == (3, 20)
    assert not wb.run()


def test_pdf_report(tmp_path):
    wb = Workbench()
    assert wb.load(_read('a2-quotient.txt'))
    wb.run()
    assert generate_pdf_report(wb.machine_report(), 'a2-quotient.txt').startswith(b'%PDF')
    target = tmp_path / 'report.pdf'
    assert main([_problem('a2-quotient.txt'), '--pdf', str(target)]) == 0
    assert target.read_bytes().startswith(b'%PDF')
    assert create_text_pdf('fallback', ['x' * 200, ''] * 60).startswith(b'%PDF')


def test_api_health():
    client = app.test_client()
    response = client.get('/api/health')
    assert response.status_code == 200
    assert response.get_json()['status'] == 'ok'


def test_api_run():
    client = app.test_client()
    assert client.post('/api/run', json={}).status_code == 400
    response = client.post('/api/run', json={'document': 'field q\nnonsense here\n'})
    assert response.status_code == 400
    assert response.get_json()['line'] == 2
    response = client.post('/api/run', json={'document': _read('a2-quotient.txt')})
    assert response.status_code == 200
    assert response.get_json()['status'] == 'holds'


def test_api_lists_problems():
    names = app.test_client().get('/api/problems').get_json()['problems']
    assert 'a2-quotient.txt' in names


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    test_a2_quotient_holds()
    test_failing_documents_exit_with_one()
    test_z_localization_holds()
    with tempfile.TemporaryDirectory() as d:
        test_usage_and_parse_errors_exit_with_two(Path(d))
        test_undecodable_document_exits_with_two(Path(d))
        test_machine_reports_are_byte_identical(Path(d))
        test_pdf_report(Path(d))
    test_parallel_run_keeps_document_order()
    test_strict_mode_turns_unknown_into_failure()
    test_five_term_task_summary()
    test_load_reports_the_error_location()
    test_api_health()
    test_api_run()
    test_api_lists_problems()
    print("[OK] workbench run tests passed")
