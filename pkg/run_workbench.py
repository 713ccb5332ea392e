import argparse
import logging
import os
import sys

import pandas as pd

import config
from report_generator import generate_pdf_report
from workbench import Workbench

TASK_TITLES = {
    'check-pair': 'ORTHOGONAL PAIR',
    'five-term': 'FIVE-TERM SEQUENCE',
    'decompose-complex': 'COMPLEX DECOMPOSITION',
    'check-epi': 'RING EPIMORPHISM',
    'pid-decompose': 'DECOMPOSITION OVER Z',
    'pid-stratify': 'STRATIFICATION OVER Z',
    'selftest': 'SELFTEST',
}


def verdict_table(workbench: Workbench) -> pd.DataFrame:
    rows = [{'task': r['task'], 'line': r['line'], 'status': r['status']} for r in workbench.results]
    return pd.DataFrame(rows, columns=['task', 'line', 'status'])


def text_report(workbench: Workbench, source: str) -> str:
    """Readable report: banner, one numbered section per task, verdict table."""
    lines = ["=" * 50,
             f"  DERIVED DECOMPOSITION REPORT: {source}",
             f"  Field: {workbench.env.field.name}   Depth cap: {workbench.depth_cap}   Seed: {workbench.seed}",
             "=" * 50, ""]
    for i, r in enumerate(workbench.results, start=1):
        args = ' '.join(f"{k}={v}" for k, v in r['args'].items())
        lines.append(f"{i}. {TASK_TITLES[r['task']]} ({args or 'no arguments'})")
        lines.append(f"   Verdict: {r['status'].upper()}")
        for line in r['summary']:
            lines.append(f"   {line}")
        lines.append("")
    if workbench.results:
        lines.append(f"{len(workbench.results) + 1}. SUMMARY")
        for row in verdict_table(workbench).to_string(index=False).splitlines():
            lines.append(f"   {row}")
    lines.append("")
    lines.append("=" * 50)
    return '\n'.join(lines) + '\n'


def save_text_report(workbench: Workbench, source: str, filepath: str):
    with open(filepath, 'w', encoding='utf-8') as f:
        f.write(text_report(workbench, source))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Run a derived decomposition problem document')
    parser.add_argument('document', type=str, help='Problem document (e.g. problems/a2-quotient.txt)')
    parser.add_argument('--field', type=str, default=None, help="Ground field override: q or fp:<p>")
    parser.add_argument('--depth-cap', type=int, default=config.DEPTH_CAP, help='Resolution depth cap')
    parser.add_argument('--seed', type=int, default=config.DEFAULT_SEED, help='Corpus seed')
    parser.add_argument('--strict', action='store_true', help='Treat unknown-at-cap verdicts as failures')
    parser.add_argument('--machine', type=str, default=None, help='Write the machine report (JSON) to this path')
    parser.add_argument('--parallel', action='store_true', help='Run independent tasks concurrently')
    parser.add_argument('--pdf', type=str, default=None, help='Also render the report as PDF to this path')
    parser.add_argument('--output', type=str, default=None, help='Write the text report to this path')
    parser.add_argument('--save', action='store_true',
                        help=f"Save text and JSON reports under {config.OUTPUT_DIR}/ named after the document")

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0

    logging.basicConfig(level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        with open(args.document, 'r', encoding='utf-8') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"[!] Cannot read {args.document}: {e}")
        return 2

    workbench = Workbench(field_spec=args.field, depth_cap=args.depth_cap, seed=args.seed, parallel=args.parallel)
    if not workbench.load(text):
        print(f"[!] {args.document}: {workbench.last_error}")
        return 2
    workbench.run()

    report = text_report(workbench, args.document)
    sys.stdout.write(report)
    if args.output:
        save_text_report(workbench, args.document, args.output)
        print(f"[OK] Text report saved to: {args.output}")
    if args.machine:
        workbench.export_to_json(args.machine, strict=args.strict)
    if args.save:
        base_path = os.path.join(config.OUTPUT_DIR, os.path.splitext(os.path.basename(args.document))[0])
        save_text_report(workbench, args.document, f"{base_path}.txt")
        workbench.export_to_json(f"{base_path}.json", strict=args.strict)
        print(f"[OK] Reports saved to: {base_path}.txt, {base_path}.json")
    if args.pdf:
        with open(args.pdf, 'wb') as f:
            f.write(generate_pdf_report(workbench.machine_report(args.strict), args.document))
        print(f"[OK] PDF saved to: {args.pdf}")

    code = workbench.exit_status(args.strict)
    if code:
        print(f"[!] Verdict: {workbench.status} (exit {code})")
    else:
        print(f"[OK] Verdict: {workbench.status}")
    return code


if __name__ == '__main__':
    sys.exit(main())
