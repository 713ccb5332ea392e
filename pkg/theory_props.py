"""
Property suite: cross-module invariants run over seeded corpora.

A corpus is a list of modules, morphisms and bounded complexes over one
algebra, regenerated deterministically from (algebra, seed).  The suite runs
every invariant of the orthogonal-pair, epimorphism and Z engines on it and
folds the outcomes into DecompositionCertificates in a fixed order.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

import config
from algebra import AlgebraPresentation
from approximants import check_table
from complexes import BoundedComplex, membership_in_dbx, stalk, two_term
from linalg import Matrix
from modules import (
    FdModule, ModuleError, ModuleMap, are_isomorphic, cokernel, direct_sum, generated_submodule, hom_space,
    indecomposable_injective, indecomposable_projective, kernel, module_from_representation, quotient_module,
    radical_layers, radical_submodule, simple_module,
)
from orthogonal import (
    FiveTerm, FiveTermError, OrthogonalPair, PairReport, build_five_term, check_fully_faithful_criteria,
    check_theorem_conditions, criterion_for, decompose_complex, derived_orthogonality, extend_morphism_five_term,
    pair_from_epi_left, pair_from_epi_right, with_structural_objects,
)
from pid_spec import (
    Atom, PrimeSet, SymbolicModule, ext1_vanishes, five_term_pid, hom_vanishes, localize_decomposition,
    product_split, reassemble, supp,
)
from recollement import check_yz_equivalence
from ring_epi import (
    FAILS, HOLDS, UNKNOWN, HypothesisError, Verdict, check_flat_criterion, check_pd_criterion, combine_status,
    l_functor, r_functor,
)

logger = logging.getLogger(__name__)

COMPLETE = 'complete'
SAMPLED = 'sampled'


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------

@dataclass
class Corpus:
    name: str
    algebra: AlgebraPresentation
    seed: int
    modules: List[FdModule]
    morphisms: List[ModuleMap] = dataclass_field(default_factory=list)
    complexes: List[BoundedComplex] = dataclass_field(default_factory=list)
    pairs: List[OrthogonalPair] = dataclass_field(default_factory=list)

    def summary(self) -> Dict:
        return {'name': self.name, 'algebra': self.algebra.name, 'seed': self.seed,
                'modules': len(self.modules), 'morphisms': len(self.morphisms), 'complexes': len(self.complexes)}


def _random_matrix(field, rng: np.random.Generator, rows: int, cols: int, bound: int) -> Matrix:
    return Matrix(field, [[field.random_element(rng, bound) for _ in range(cols)] for _ in range(rows)], rows, cols)


def _random_representation(a: AlgebraPresentation, rng: np.random.Generator, params: Dict) -> Optional[FdModule]:
    arrows = [p for p in a.paths if p.length == 1]
    n = a.vertex_count
    total = int(rng.integers(1, params['max_random_dim'] + 1))
    cuts = sorted(int(c) for c in rng.integers(0, total + 1, size=n - 1))
    dims = [hi - lo for lo, hi in zip([0] + cuts, cuts + [total])]
    maps = {p.arrows[0]: _random_matrix(a.field, rng, dims[p.target - 1], dims[p.source - 1],
                                        params['coefficient_bound']) for p in arrows}
    try:
        return module_from_representation(a, dims, maps, name=f"R{total}")
    except ModuleError:
        return None


def _random_quotient(a: AlgebraPresentation, rng: np.random.Generator, params: Dict) -> Optional[FdModule]:
    """A quotient of a sum of indecomposable projectives by a random cyclic submodule of its radical."""
    count = int(rng.integers(1, 3))
    vertices = [int(v) for v in rng.integers(0, a.vertex_count, size=count)]
    total = direct_sum([indecomposable_projective(a, v) for v in vertices], algebra=a).module
    rad = radical_submodule(total)
    if rad.ncols == 0:
        return total if total.dim <= params['max_random_dim'] else None
    combination = rad @ _random_matrix(a.field, rng, rad.ncols, 1, params['coefficient_bound'])
    q = quotient_module(total, generated_submodule(total, combination), name=f"Q{total.dim}").module
    return q if 0 < q.dim <= params['max_random_dim'] else None


def generate_corpus(a: AlgebraPresentation, seed: Optional[int] = None, name: Optional[str] = None,
                    pairs: Sequence[OrthogonalPair] = (), params: Optional[Dict] = None) -> Corpus:
    """Simples, indecomposable projectives and injectives, radical layers and seeded random modules."""
    params = params or config.CORPUS_PARAMS
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    modules: List[FdModule] = []
    for v in range(a.vertex_count):
        modules += [simple_module(a, v), indecomposable_projective(a, v), indecomposable_injective(a, v)]
    for v in range(a.vertex_count):
        modules += radical_layers(indecomposable_projective(a, v))[1:]
    attempts = 0
    while len(modules) < params['min_modules'] and attempts < params['random_attempts']:
        attempts += 1
        if a.paths is not None and attempts % 2:
            m = _random_representation(a, rng, params)
        else:
            m = _random_quotient(a, rng, params)
        if m is not None and m.dim:
            modules.append(m)
    unique, seen = [], set()
    for m in modules:
        if id(m) not in seen:
            seen.add(id(m))
            unique.append(m)
    corpus = Corpus(name or f"{a.name}#{seed}", a, seed, unique, pairs=list(pairs))
    corpus.morphisms = _corpus_morphisms(corpus, rng, params)
    corpus.complexes = _corpus_complexes(corpus, rng, params)
    logger.info(f"corpus {corpus.name}: {len(unique)} modules, {len(corpus.morphisms)} morphisms, "
                f"{len(corpus.complexes)} complexes ({attempts} random attempts)")
    return corpus


def _corpus_morphisms(corpus: Corpus, rng: np.random.Generator, params: Dict) -> List[ModuleMap]:
    maps = []
    limit = params['complex_count'] + 2
    modules = corpus.modules
    order = rng.permutation(len(modules) * len(modules))
    for k in order:
        m, n = modules[int(k) // len(modules)], modules[int(k) % len(modules)]
        basis = hom_space(m, n)
        if not basis.dim:
            continue
        coefficients = _random_matrix(m.field, rng, basis.dim, 1, params['coefficient_bound'])
        f = basis.combine(coefficients)
        if not f.is_zero():
            maps.append(f)
        if len(maps) >= limit:
            break
    return maps


def _corpus_complexes(corpus: Corpus, rng: np.random.Generator, params: Dict) -> List[BoundedComplex]:
    complexes = []
    for i, f in enumerate(corpus.morphisms[:params['complex_count']]):
        degree = int(rng.integers(-1, 1))
        complexes.append(two_term(f, degree, name=f"C{i}"))
    for m in corpus.modules[:2]:
        complexes.append(stalk(m))
    return complexes


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass
class Claim:
    status: str
    tier: str
    detail: str = ''
    witness: Dict = dataclass_field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'status': self.status, 'tier': self.tier, 'detail': self.detail, 'witness': self.witness}


def _claim(verdict: Verdict, detail: str = '') -> Claim:
    return Claim(verdict.status, COMPLETE if verdict.complete else SAMPLED,
                 detail or '; '.join(verdict.reasons), verdict.witness)


@dataclass
class DecompositionCertificate:
    """Outcome of the property suite for one pair (or one prime set over Z)."""
    pair: str
    seed: Optional[int]
    claims: Dict[str, Claim] = dataclass_field(default_factory=dict)
    report: Optional[PairReport] = None
    five_terms: Dict[str, List[int]] = dataclass_field(default_factory=dict)
    triangles: int = 0
    orthogonality: Dict[str, Dict[int, int]] = dataclass_field(default_factory=dict)
    defects: List[str] = dataclass_field(default_factory=list)

    @property
    def status(self) -> str:
        statuses = [c.status for c in self.claims.values()]
        if self.defects:
            statuses.append(FAILS)
        return combine_status(statuses)

    def add(self, name: str, claim: Claim):
        self.claims[name] = claim

    def to_dict(self) -> Dict:
        return {'pair': self.pair, 'seed': self.seed, 'status': self.status,
                'claims': {k: c.to_dict() for k, c in self.claims.items()},
                'report': self.report.to_dict() if self.report else None,
                'five_terms': self.five_terms, 'triangles': self.triangles,
                'orthogonality': {k: {str(n): d for n, d in v.items()} for k, v in self.orthogonality.items()},
                'defects': list(self.defects)}

    def to_text(self) -> str:
        """Line-oriented form: one certificate line, then one line per claim."""
        lines = [f"certificate {self.pair.replace(' ', '_')} status {self.status} seed {self.seed}"]
        for name, c in self.claims.items():
            lines.append(f"claim {name} status {c.status} tier {c.tier}")
        for d in self.defects:
            lines.append(f"defect {d}")
        return '\n'.join(lines)


def certificate_table(certificates: Sequence[DecompositionCertificate]) -> pd.DataFrame:
    rows = [{'pair': cert.pair, 'claim': name, 'status': c.status, 'tier': c.tier, 'detail': c.detail}
            for cert in certificates for name, c in cert.claims.items()]
    return pd.DataFrame(rows, columns=['pair', 'claim', 'status', 'tier', 'detail'])


# ---------------------------------------------------------------------------
# Routes
# ---------------------------------------------------------------------------

def _reference_pair(pair: OrthogonalPair) -> Optional[OrthogonalPair]:
    if pair.epi is None:
        return None
    if pair.constructor == 'from-epi-left':
        return pair_from_epi_left(pair.epi)
    if pair.constructor == 'from-epi-right':
        return pair_from_epi_right(pair.epi)
    return None


def criterion_route(pair: OrthogonalPair, modules: Sequence[FdModule], depth_cap: Optional[int] = None) -> Verdict:
    """The epimorphism criterion, valid only when the pair is the epimorphism's own pair on the corpus."""
    reference = _reference_pair(pair)
    if reference is None:
        return Verdict(UNKNOWN, ['no epimorphism attached'], complete=False)
    verdict = criterion_for(pair, depth_cap)
    if not verdict.holds:
        return verdict
    for m in with_structural_objects(pair.algebra, modules):
        for side in ('x', 'y'):
            mine = getattr(pair, side).contains(m).holds
            theirs = getattr(reference, side).contains(m).holds
            if mine != theirs:
                return Verdict(FAILS, [f"{side.upper()} differs from the class defined by {pair.epi.name} "
                                       f"on {m.label()}"], {'module': m.label(), 'side': side})
    return verdict


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

def _sweep(pair: OrthogonalPair, modules: List[FdModule], hypothesis: Verdict,
           cert: DecompositionCertificate) -> Dict[int, FiveTerm]:
    sequences = {}
    failures = []
    for m in modules:
        try:
            eps = build_five_term(m, pair, hypothesis=hypothesis)
        except FiveTermError as exc:
            failures.append(f"{m.label()}: {exc}")
            continue
        sequences[id(m)] = eps
        cert.five_terms[m.label()] = eps.dimensions()
    if failures:
        cert.defects += failures
        cert.add('five_term_sweep', Claim(FAILS, SAMPLED, failures[0], {'failures': len(failures)}))
    else:
        cert.add('five_term_sweep', Claim(HOLDS, SAMPLED, f"{len(sequences)} sequences exact with verified members",
                                          {'modules': len(sequences)}))
    return sequences


def _idempotence(pair: OrthogonalPair, sequences: Dict[int, FiveTerm], hypothesis: Verdict) -> Claim:
    bad = []
    for eps in sequences.values():
        again = build_five_term(eps.x_lower, pair, hypothesis=hypothesis)
        if not again.eps_m1.is_isomorphism():
            bad.append(eps.module.label())
    if bad:
        return Claim(FAILS, SAMPLED, f"r(r(M)) -> r(M) not invertible for {', '.join(bad)}", {'modules': bad})
    return Claim(HOLDS, SAMPLED, 'X_{X_M} -> X_M invertible on the corpus')


def _adjunction(pair: OrthogonalPair, modules: List[FdModule], sequences: Dict[int, FiveTerm]) -> Claim:
    xs = [m for m in modules if m.dim and pair.x.contains(m).holds]
    ys = [m for m in modules if m.dim and pair.y.contains(m).holds]
    for m in modules:
        eps = sequences.get(id(m))
        if eps is None:
            continue
        for x in xs:
            if hom_space(x, eps.x_lower).dim != hom_space(x, m).dim:
                return Claim(FAILS, SAMPLED, f"dim Hom({x.label()}, X_M) ≠ dim Hom({x.label()}, {m.label()})")
        for y in ys:
            if hom_space(eps.y_upper, y).dim != hom_space(m, y).dim:
                return Claim(FAILS, SAMPLED, f"dim Hom(Y^M, {y.label()}) ≠ dim Hom({m.label()}, {y.label()})")
    return Claim(HOLDS, SAMPLED, f"adjunction dimensions match for {len(xs)} X and {len(ys)} Y members")


def _sequence_for(m: FdModule, pair: OrthogonalPair, sequences: Dict[int, FiveTerm],
                  hypothesis: Verdict) -> FiveTerm:
    if id(m) not in sequences:
        sequences[id(m)] = build_five_term(m, pair, hypothesis=hypothesis)
    return sequences[id(m)]


def _ladders(pair: OrthogonalPair, morphisms: List[ModuleMap], sequences: Dict[int, FiveTerm],
             hypothesis: Verdict) -> Claim:
    solved = 0
    for f in morphisms:
        try:
            extend_morphism_five_term(f, _sequence_for(f.source, pair, sequences, hypothesis),
                                      _sequence_for(f.target, pair, sequences, hypothesis))
        except FiveTermError as exc:
            return Claim(FAILS, SAMPLED, f"{f.source.label()} -> {f.target.label()}: {exc}")
        solved += 1
    return Claim(HOLDS, SAMPLED, f"unique ladder for {solved} morphisms", {'morphisms': solved})


def _r_exactness(pair: OrthogonalPair, morphisms: List[ModuleMap], sequences: Dict[int, FiveTerm],
                 hypothesis: Verdict) -> Claim:
    """r applied to 0 -> M -> N -> C -> 0 with all three terms r-adapted stays exact."""
    checked = 0
    for f in morphisms:
        if not f.is_injective():
            continue
        c, g = cokernel(f)
        eps = [_sequence_for(m, pair, sequences, hypothesis) for m in (f.source, f.target, c)]
        if any(e.x_upper.dim for e in eps):
            continue
        xf = extend_morphism_five_term(f, eps[0], eps[1]).x_lower
        xg = extend_morphism_five_term(g, eps[1], eps[2]).x_lower
        middle = eps[1].x_lower.dim
        if not (xf.is_injective() and xg.is_surjective() and (xg.matrix @ xf.matrix).is_zero()
                and xf.rank() + xg.rank() == middle):
            return Claim(FAILS, SAMPLED, f"r is not exact on the sequence through {f.target.label()}")
        checked += 1
    return Claim(HOLDS, SAMPLED, f"r exact on {checked} adapted short exact sequences", {'sequences': checked})


def _closure(pair: OrthogonalPair, morphisms: List[ModuleMap]) -> Claim:
    checked = 0
    for side, side_class in (('X', pair.x), ('Y', pair.y)):
        for f in morphisms:
            if not (side_class.contains(f.source).holds and side_class.contains(f.target).holds):
                continue
            for label, obj in (('kernel', kernel(f)[0]), ('cokernel', cokernel(f)[0])):
                if not side_class.contains(obj).holds:
                    return Claim(FAILS, SAMPLED, f"{label} of a map in {side} leaves {side}",
                                 {'source': f.source.label(), 'target': f.target.label()})
            checked += 1
    return Claim(HOLDS, SAMPLED, f"kernels and cokernels stay inside for {checked} maps", {'maps': checked})


def _triangles(pair: OrthogonalPair, complexes: List[BoundedComplex], cert: DecompositionCertificate) -> Claim:
    for x in complexes:
        try:
            decomposition = decompose_complex(x, pair)
        except (FiveTermError, HypothesisError) as exc:
            return Claim(FAILS, SAMPLED, f"{x.label()}: {exc}")
        sweep = derived_orthogonality(decomposition)
        cert.orthogonality[x.label()] = sweep
        cert.triangles += 1
        nonzero = {n: d for n, d in sweep.items() if d}
        if nonzero:
            return Claim(FAILS, SAMPLED, f"Hom(X-piece, Y-piece[n]) ≠ 0 for {x.label()}", {'nonzero': nonzero})
    return Claim(HOLDS, SAMPLED, f"{cert.triangles} triangles with orthogonal pieces")


def _functor_agreement(pair: OrthogonalPair, modules: List[FdModule], sequences: Dict[int, FiveTerm]) -> Claim:
    """ℓ and r through the two-term complex agree with Y^M and X_M from the five-term sequence."""
    left = pair.constructor == 'from-epi-left'
    for m in modules:
        eps = sequences.get(id(m))
        if eps is None:
            continue
        if left:
            computed, expected = l_functor(pair.epi, m, checked=True), eps.y_upper
        else:
            computed, expected = r_functor(pair.epi, m, checked=True), eps.x_lower
        if not are_isomorphic(computed, expected):
            return Claim(FAILS, SAMPLED, f"functor through Q• disagrees on {m.label()}",
                         {'module': m.label(), 'dims': [computed.dim, expected.dim]})
    functor = 'ℓ' if left else 'r'
    return Claim(HOLDS, SAMPLED, f"{functor} through Q• matches the five-term sequences")


def run_pair_suite(pair: OrthogonalPair, corpus: Corpus, depth_cap: Optional[int] = None) -> DecompositionCertificate:
    cert = DecompositionCertificate(pair.name, corpus.seed)
    report = check_theorem_conditions(pair, corpus.modules, depth_cap)
    cert.report = report
    cert.add('conditions', Claim(report.status, SAMPLED if report.sampled else COMPLETE,
                                 f"(a) {report.conditions['a'].status}, (b) {report.conditions['b'].status}"))
    criterion = criterion_route(pair, corpus.modules, depth_cap)
    cert.add('criterion_route', _claim(criterion))
    faithful = check_fully_faithful_criteria(pair, corpus.modules, depth_cap, report)
    cert.add('fully_faithful_route', _claim(faithful))
    routes = {'conditions': report.status, 'criterion': criterion.status, 'fully_faithful': faithful.status}
    agree = len(set(routes.values())) == 1
    cert.add('cross_route', Claim(HOLDS if agree else FAILS, SAMPLED,
                                  'routes agree' if agree else 'routes disagree', routes))

    if not (criterion.holds and report.conditions['b'].holds):
        logger.info(f"suite {pair.name}: no valid constructor, downstream checks skipped")
        return cert
    modules = with_structural_objects(pair.algebra, corpus.modules)
    hypothesis = criterion_for(pair, depth_cap)
    sequences = _sweep(pair, modules, hypothesis, cert)
    cert.add('idempotence', _idempotence(pair, sequences, hypothesis))
    cert.add('adjunction', _adjunction(pair, modules, sequences))
    cert.add('ladder_uniqueness', _ladders(pair, corpus.morphisms, sequences, hypothesis))
    cert.add('r_exactness', _r_exactness(pair, corpus.morphisms, sequences, hypothesis))
    cert.add('closure', _closure(pair, corpus.morphisms))
    cert.add('triangles', _triangles(pair, corpus.complexes, cert))
    cert.add('functor_agreement', _functor_agreement(pair, corpus.modules, sequences))
    both = [check_pd_criterion(pair.epi, depth_cap), check_flat_criterion(pair.epi, depth_cap)]
    if all(v.holds for v in both):
        cert.add('yz_equivalence', _claim(check_yz_equivalence(pair.epi, corpus.modules, depth_cap)))
    logger.info(f"suite {pair.name}: {cert.status}")
    return cert


def run_property_suite(corpus: Corpus, pairs: Optional[Sequence[OrthogonalPair]] = None,
                       depth_cap: Optional[int] = None) -> List[DecompositionCertificate]:
    """Certificates for every pair, in the given order."""
    pairs = corpus.pairs if pairs is None else pairs
    return [run_pair_suite(pair, corpus, depth_cap) for pair in pairs]


# ---------------------------------------------------------------------------
# Z corpus
# ---------------------------------------------------------------------------

def _atoms_of(modules: Sequence[SymbolicModule]) -> List[Atom]:
    atoms = []
    for m in modules:
        for a in m.atoms:
            if a not in atoms:
                atoms.append(a)
    return atoms


def run_symbolic_suite(modules: Sequence[SymbolicModule], phi: PrimeSet) -> DecompositionCertificate:
    cert = DecompositionCertificate(f"Z: Supp^-1({phi.to_text()})", None)
    outputs = []
    failures = []
    for m in modules:
        try:
            eps = five_term_pid(m, phi)
        except (FiveTermError, ValueError) as exc:
            failures.append(f"{m.to_text()}: {exc}")
            continue
        outputs += eps.objects()
        cert.five_terms[m.to_text()] = [len(x.atoms) for x in eps.objects()]
    if failures:
        cert.defects += failures
        cert.add('five_term_membership', Claim(FAILS, SAMPLED, failures[0]))
    else:
        cert.add('five_term_membership', Claim(HOLDS, SAMPLED, f"{len(modules)} symbolic sequences verified"))

    atoms = _atoms_of(list(modules) + outputs)
    xs = [a for a in atoms if supp(SymbolicModule.of(a)).issubset(phi)]
    ys = [a for a in atoms if supp(SymbolicModule.of(a)).issubset(phi.complement())]
    bad = [(x.to_text(), y.to_text()) for x in xs for y in ys if not (hom_vanishes(x, y) and ext1_vanishes(x, y))]
    cert.add('orthogonality', Claim(FAILS if bad else HOLDS, COMPLETE,
                                    f"{len(xs)} x {len(ys)} atom pairs", {'violations': bad}))

    checks = check_table()
    disagreements = [c.key for c in checks if not c.agrees]
    cert.add('oracle_agreement', Claim(FAILS if disagreements else HOLDS, COMPLETE,
                                       f"{len(checks)} table entries recomputed from approximants",
                                       {'disagreements': disagreements}))

    torsion = [m for m in modules if not supp(m).generic and not any(
        a.kind == 'pruefersum' and a.primes.cofinite for a in m.atoms)]
    broken = [m.to_text() for m in torsion if reassemble(product_split(m)) != m]
    cert.add('product_split', Claim(FAILS if broken else HOLDS, SAMPLED,
                                    f"{len(torsion)} torsion modules split and reassembled", {'broken': broken}))

    if not phi.generic and not phi.cofinite:
        for m in modules:
            try:
                eps = localize_decomposition(m, phi)
            except FiveTermError as exc:
                cert.add('localization', Claim(FAILS, SAMPLED, str(exc)))
                break
            if eps.objects() != five_term_pid(m, phi).objects():
                cert.add('localization', Claim(FAILS, SAMPLED, f"localization differs for {m.to_text()}"))
                break
        else:
            cert.add('localization', Claim(HOLDS, SAMPLED, 'Y-side is a module over the localization'))
    logger.info(f"symbolic suite {phi.to_text()}: {cert.status}")
    return cert


# ---------------------------------------------------------------------------
# Membership in D^b
# ---------------------------------------------------------------------------

class HomologicalMembership(NamedTuple):
    in_x: bool
    in_y: bool
    x_failing: List[int]
    y_failing: List[int]

    @property
    def classification(self) -> str:
        if self.in_x and self.in_y:
            return 'both'
        if self.in_x:
            return 'x'
        if self.in_y:
            return 'y'
        return 'neither'


def homological_membership(x: BoundedComplex, pair: OrthogonalPair) -> HomologicalMembership:
    """Whether every cohomology module of x lies in 𝒳, respectively in 𝒴."""
    x_side = membership_in_dbx(x, pair.x)
    y_side = membership_in_dbx(x, pair.y)
    return HomologicalMembership(x_side.holds, y_side.holds, x_side.failing_degrees, y_side.failing_degrees)
