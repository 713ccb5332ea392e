"""Derived Decomposition Workbench - task runner.

Key responsibilities:
- Parse and compile a problem document
- Run its tasks (in document order, optionally on a thread pool)
- Fold task verdicts into an exit status
- Export a deterministic machine report
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np

import config
from approximants import check_table
from fixtures import a2_algebra, a2_quotient_epi
from orthogonal import (
    FiveTermError, build_five_term, check_fully_faithful_criteria, check_theorem_conditions, criterion_for,
    decompose_complex, derived_orthogonality, pair_from_epi_left,
)
from pid_spec import (
    PreconditionError, PrimeSet, SymbolicModule, five_term_pid, free, loc, localize_decomposition, pruefer,
    pruefer_sum, rat, render_tree, stratify,
)
from problem_document import Environment, ParseError, ProblemDocument, compile_document, parse
from ring_epi import FAILS, HOLDS, UNKNOWN, HypothesisError, check_flat_criterion, check_pd_criterion, \
    combine_status, is_homological_epi
from theory_props import criterion_route, generate_corpus, homological_membership, run_pair_suite

logger = logging.getLogger(__name__)


def clean_obj(obj):
    """Recursively convert numpy and field scalars to plain JSON types; keys become strings."""
    if isinstance(obj, dict):
        return {str(k): clean_obj(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [clean_obj(item) for item in obj]
    elif isinstance(obj, np.ndarray):
        return clean_obj(obj.tolist())
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return None if (np.isnan(obj) or np.isinf(obj)) else float(obj)
    elif obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def _result(statement, status: str, summary: List[str], details: Optional[Dict] = None,
            error: Optional[str] = None) -> Dict:
    return {
        'task': statement.name,
        'args': dict(statement.args),
        'line': statement.line,
        'status': status,
        'summary': summary,
        'details': details or {},
        'error': error,
    }


class Workbench:
    def __init__(self, field_spec: Optional[str] = None, depth_cap: Optional[int] = None,
                 seed: Optional[int] = None, parallel: bool = False):
        self.field_spec = field_spec
        self.depth_cap = config.DEPTH_CAP if depth_cap is None else depth_cap
        self.seed = config.DEFAULT_SEED if seed is None else seed
        self.parallel = parallel
        self.document: Optional[ProblemDocument] = None
        self.env: Optional[Environment] = None
        self.results: List[Dict] = []
        self.last_error = None
        self.last_error_location = None

    def load(self, text: str) -> bool:
        """Parse and compile a document."""
        self.last_error = None
        self.last_error_location = None
        try:
            self.document = parse(text)
            self.env = compile_document(self.document, self.field_spec)
        except ParseError as e:
            self.last_error = str(e)
            self.last_error_location = (e.line, e.col)
            logger.error(f"document rejected: {e}")
            return False
        return True

    def run(self) -> bool:
        """Run every task; results are kept in document order."""
        if self.env is None:
            self.last_error = 'No document loaded'
            return False
        tasks = self.document.tasks
        logger.info(f"running {len(tasks)} tasks over {self.env.field.name} (depth cap {self.depth_cap})")
        if self.parallel and len(tasks) > 1:
            with ThreadPoolExecutor() as pool:
                self.results = list(pool.map(self.run_task, tasks))
        else:
            self.results = [self.run_task(t) for t in tasks]
        return True

    def run_task(self, statement) -> Dict:
        handler = getattr(self, '_task_' + statement.name.replace('-', '_'))
        logger.info(f"task {statement.name} (line {statement.line})")
        try:
            result = handler(statement)
        except (FiveTermError, HypothesisError, PreconditionError, ValueError) as e:
            result = _result(statement, FAILS, [f"engine error: {e}"], error=str(e))
        logger.info(f"task {statement.name}: {result['status']}")
        return result

    # -- tasks --------------------------------------------------------------

    def _task_check_pair(self, s) -> Dict:
        pair = self.env.pairs[s.get('pair')]
        inventory = [m for m in self.env.modules.values() if m.algebra is pair.algebra]
        report = check_theorem_conditions(pair, inventory, self.depth_cap)
        criterion = criterion_route(pair, inventory, self.depth_cap)
        faithful = check_fully_faithful_criteria(pair, inventory, self.depth_cap, report)
        routes = {'conditions': report.status, 'criterion': criterion.status, 'fully_faithful': faithful.status}
        status = combine_status(list(routes.values()))
        if len(set(routes.values())) > 1:
            status = FAILS
        summary = [f"{config.CONDITION_LABELS[k]}: {v.status}" for k, v in report.conditions.items()]
        summary.append(f"criterion route: {criterion.status}")
        summary.append(f"{config.CONDITION_LABELS['fully_faithful']}: {faithful.status}")
        summary.append(report.note)
        details = {'report': report.to_dict(), 'criterion': criterion.to_dict(), 'fully_faithful': faithful.to_dict(),
                   'routes': routes}
        if s.get('corpus') == 'yes':
            corpus = generate_corpus(pair.algebra, self.seed)
            cert = run_pair_suite(pair, corpus, self.depth_cap)
            details['certificate'] = cert.to_dict()
            summary.append(f"property suite on {len(corpus.modules)} corpus modules: {cert.status}")
            status = combine_status([status, cert.status])
        return _result(s, status, summary, details)

    def _hypothesis(self, s, pair) -> Optional[Dict]:
        hypothesis = criterion_for(pair, self.depth_cap)
        if hypothesis.holds:
            return None
        return _result(s, hypothesis.status, [f"constructor hypothesis: {r}" for r in hypothesis.reasons],
                       {'hypothesis': hypothesis.to_dict()})

    def _task_five_term(self, s) -> Dict:
        pair = self.env.pairs[s.get('pair')]
        blocked = self._hypothesis(s, pair)
        if blocked:
            return blocked
        m = self.env.modules[s.get('module')]
        try:
            eps = build_five_term(m, pair, self.depth_cap)
        except FiveTermError as e:
            return _result(s, FAILS, [f"no valid five-term sequence: {e}"], error=str(e))
        labels = ['Y_M', 'X_M', 'M', 'Y^M', 'X^M']
        dims = eps.dimensions()
        summary = ['0 -> ' + ' -> '.join(f"{l}({d})" for l, d in zip(labels, dims)) + ' -> 0']
        details = {'dimensions': dict(zip(labels, dims)),
                   'dimension_vectors': {l: list(o.dimension_vector()) for l, o in zip(labels, eps.objects)}}
        return _result(s, HOLDS, summary, details)

    def _task_decompose_complex(self, s) -> Dict:
        pair = self.env.pairs[s.get('pair')]
        blocked = self._hypothesis(s, pair)
        if blocked:
            return blocked
        x = self.env.complexes[s.get('complex')]
        decomposition = decompose_complex(x, pair, self.depth_cap)
        sweep = derived_orthogonality(decomposition)
        membership = homological_membership(x, pair)
        tri = decomposition.triangle
        status = HOLDS if not any(sweep.values()) else FAILS
        summary = [f"X-piece dims {tri.a.dimensions()}, Y-piece dims {tri.c.dimensions()}",
                   f"replaced by an r-adapted complex: {decomposition.replaced}",
                   f"Hom(X-piece, Y-piece[n]) dims {sweep}",
                   f"{x.label()} lies in: {membership.classification}"]
        details = {'x_piece': tri.a.dimensions(), 'y_piece': tri.c.dimensions(), 'orthogonality': sweep,
                   'replaced': decomposition.replaced, 'membership': membership.classification,
                   'x_failing': membership.x_failing, 'y_failing': membership.y_failing}
        return _result(s, status, summary, details)

    def _task_check_epi(self, s) -> Dict:
        epi = self.env.epis[s.get('epi')]
        homological = is_homological_epi(epi, self.depth_cap)
        details = {'homological': homological.to_dict()}
        summary = [f"homological epimorphism: {homological.status} ({'; '.join(homological.reasons)})"]
        if not homological.holds:
            return _result(s, homological.status, summary, details)
        pd, flat = check_pd_criterion(epi, self.depth_cap), check_flat_criterion(epi, self.depth_cap)
        details.update(pd_criterion=pd.to_dict(), flat_criterion=flat.to_dict())
        summary += [f"{config.CONDITION_LABELS['pd_criterion']}: {pd.status}",
                    f"{config.CONDITION_LABELS['flat_criterion']}: {flat.status}"]
        if pd.holds or flat.holds:
            status = HOLDS
        elif pd.status == FAILS and flat.status == FAILS:
            status = FAILS
        else:
            status = UNKNOWN
        return _result(s, status, summary, details)

    def _task_pid_decompose(self, s) -> Dict:
        m, phi = self.env.symbolic[s.get('symbolic')], self.env.primes[s.get('primes')]
        mode = s.get('mode', 'five-term')
        eps = localize_decomposition(m, phi) if mode == 'localize' else five_term_pid(m, phi)
        return _result(s, HOLDS, [eps.describe()], eps.to_dict())

    def _task_pid_stratify(self, s) -> Dict:
        limit = int(s.get('limit', config.PID_PARAMS['stratify_prime_limit']))
        root = stratify()
        return _result(s, HOLDS, render_tree(root, limit), root.to_dict(limit))

    def _task_selftest(self, s) -> Dict:
        checks = {}
        eps = localize_decomposition(SymbolicModule.of(free(1)), PrimeSet.all_primes())
        checks['Z in Q'] = (eps.y_upper == SymbolicModule.of(rat())
                            and eps.x_upper == SymbolicModule.of(pruefer_sum(PrimeSet.all_primes())))
        for p in (2, 3, 5):
            eps = five_term_pid(SymbolicModule.of(free(1)), PrimeSet.of(p))
            checks[f"Z at {p}"] = (eps.y_upper == SymbolicModule.of(loc(PrimeSet.of(p)))
                                   and eps.x_upper == SymbolicModule.of(pruefer(p)))
        checks['vanishing table'] = all(c.agrees for c in check_table())
        root = stratify()
        checks['stratification'] = len(root.children) == 2 and root.children[1].abelian_simple
        a2 = a2_algebra(self.env.field)
        pair = pair_from_epi_left(a2_quotient_epi(a=a2), name='A2 quotient')
        checks['A2 quotient pair'] = check_theorem_conditions(pair, [], self.depth_cap).status == HOLDS
        status = HOLDS if all(checks.values()) else FAILS
        summary = [f"[{'OK' if ok else '!'}] {name}" for name, ok in checks.items()]
        return _result(s, status, summary, {'checks': checks})

    # -- outcome ------------------------------------------------------------

    @property
    def status(self) -> str:
        return combine_status([r['status'] for r in self.results])

    def exit_status(self, strict: bool = False) -> int:
        """0 ok or unknown, 1 on any failing verdict (or unknown under strict)."""
        status = self.status
        if status == FAILS or (strict and status == UNKNOWN):
            return 1
        if status == UNKNOWN:
            logger.warning('some verdicts are unknown at the depth cap')
        return 0

    def machine_report(self, strict: bool = False) -> Dict:
        return clean_obj({
            'schema': config.REPORT_SCHEMA,
            'schema_version': config.REPORT_SCHEMA_VERSION,
            'field': self.env.field.name if self.env else None,
            'seed': self.seed,
            'depth_cap': self.depth_cap,
            'status': self.status,
            'exit_status': self.exit_status(strict),
            'tasks': self.results,
        })

    def machine_text(self, strict: bool = False) -> str:
        return json.dumps(self.machine_report(strict), ensure_ascii=False, indent=2, sort_keys=True) + '\n'

    def export_to_json(self, filepath: str, strict: bool = False):
        if not self.results:
            print('No results to export')
            return
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(self.machine_text(strict))
        print(f'[OK] Exported JSON: {filepath}')
