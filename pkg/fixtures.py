"""
Named algebras, epimorphisms and pairs shared by the property suite, the
selftest task and the tests.
"""

import logging
from typing import Dict, List, NamedTuple, Optional

import config
from algebra import (
    AlgebraPresentation, Arrow, QuiverPresentation, Relation, compile_quiver, quotient_algebra,
    structure_constant_algebra,
)
from linalg import Field, Matrix
from orthogonal import OrthogonalPair, pair_from_epi_left, pair_from_epi_right, serre_pair, swapped_pair
from pid_spec import PrimeSet, SymbolicModule, cyc, free, loc, pruefer, pruefer_sum, rat
from ring_epi import RingEpiPresentation, identity_epi, quotient_epi

logger = logging.getLogger(__name__)


def field_of(field=None) -> Field:
    if isinstance(field, Field):
        return field
    return Field(field or config.DEFAULT_FIELD)


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------

def a2_algebra(field=None) -> AlgebraPresentation:
    """1 -a-> 2, basis e1, e2, a."""
    q = QuiverPresentation(2, [Arrow('a', 1, 2)], name='A2')
    return compile_quiver(q, field_of(field))


def a3_algebra(field=None, with_relation: bool = False) -> AlgebraPresentation:
    """1 -a-> 2 -b-> 3, optionally with b.a = 0."""
    relations = [Relation((('1', ('a', 'b')),))] if with_relation else []
    name = 'A3/ba' if with_relation else 'A3'
    q = QuiverPresentation(3, [Arrow('a', 1, 2), Arrow('b', 2, 3)], relations, name=name)
    return compile_quiver(q, field_of(field))


def dual_numbers(field=None) -> AlgebraPresentation:
    """k[x]/(x^2) as the loop quiver with x.x = 0."""
    q = QuiverPresentation(1, [Arrow('x', 1, 1)], [Relation((('1', ('x', 'x')),))], name='k[x]/x^2')
    return compile_quiver(q, field_of(field))


def matrix_algebra(field=None) -> AlgebraPresentation:
    """M2(k) on the matrix units E11, E12, E21, E22."""
    f = field_of(field)
    labels = ['E11', 'E12', 'E21', 'E22']

    def index(i, j):
        return 2 * (i - 1) + (j - 1)

    products = {}
    for i in (1, 2):
        for j in (1, 2):
            for l in (1, 2):
                coords = [0] * 4
                coords[index(i, l)] = 1
                products[(index(i, j), index(j, l))] = coords
    return structure_constant_algebra(f, labels, products, [1, 0, 0, 1], name='M2')


# ---------------------------------------------------------------------------
# Epimorphisms
# ---------------------------------------------------------------------------

def a2_quotient_epi(field=None, a: Optional[AlgebraPresentation] = None) -> RingEpiPresentation:
    """A2 -> A2/<e1>, the simple at vertex 2."""
    a = a or a2_algebra(field)
    return quotient_epi(a, ['1'], name='A2->k')


def radical_epi(a: AlgebraPresentation, name: Optional[str] = None) -> RingEpiPresentation:
    """A -> A/rad(A)."""
    q = quotient_algebra(a, a.radical, name=f"{a.name}/rad")
    return RingEpiPresentation(a, q.algebra, q.projection, name=name or f"{a.name}->{a.name}/rad")


def dual_numbers_epi(field=None) -> RingEpiPresentation:
    return radical_epi(dual_numbers(field), name='k[x]/x^2->k')


def a3_pd2_epi(field=None) -> RingEpiPresentation:
    """A3/ba -> k at vertex 1; pd of S1 over A3/ba is 2."""
    return quotient_epi(a3_algebra(field, with_relation=True), ['2', '3'], name='A3/ba->k')


def triangular_inclusion(field=None) -> RingEpiPresentation:
    """The triangular algebra A2 inside M2(k): e1 -> E11, e2 -> E22, a -> E21.

    Not surjective; S_R is projective. M2's idempotents are never needed.
    """
    a = a2_algebra(field)
    m2 = matrix_algebra(field)
    f = a.field
    images = {'e1': [1, 0, 0, 0], 'e2': [0, 0, 0, 1], 'a': [0, 0, 1, 0]}
    columns = [Matrix.column_vector(f, [f(c) for c in images[label]]) for label in a.labels]
    return RingEpiPresentation(a, m2, Matrix.from_columns(f, columns, m2.dim), name='A2->M2')


# ---------------------------------------------------------------------------
# Pairs
# ---------------------------------------------------------------------------

class PairFixture(NamedTuple):
    name: str
    pair: OrthogonalPair
    expected: str           # verdict every route should agree on


def positive_pairs(field=None) -> List[PairFixture]:
    holds = config.VERDICTS['holds']
    epi = a2_quotient_epi(field)
    a3 = a3_algebra(field)
    return [
        PairFixture('a2-quotient', pair_from_epi_left(epi, name='a2-quotient'), holds),
        PairFixture('a2-serre', serre_pair(epi.source, ['2'], name='a2-serre'), holds),
        PairFixture('a3-quotient', pair_from_epi_left(quotient_epi(a3, ['1']), name='a3-quotient'), holds),
        PairFixture('a2-quotient-f3', pair_from_epi_left(a2_quotient_epi('fp:3'), name='a2-quotient-f3'), holds),
    ]


def negative_pairs(field=None) -> List[PairFixture]:
    fails = config.VERDICTS['fails']
    a = a2_algebra(field)
    return [
        PairFixture('dual-numbers', pair_from_epi_left(dual_numbers_epi(field), name='dual-numbers'), fails),
        PairFixture('a2-swapped', swapped_pair(serre_pair(a, ['2']), name='a2-swapped'), fails),
    ]


def right_pairs(field=None) -> List[PairFixture]:
    """Pairs built from the flat criterion side; no expected verdict is fixed."""
    return [PairFixture('a2-quotient-right', pair_from_epi_right(a2_quotient_epi(field), name='a2-quotient-right'),
                        ''),
            PairFixture('a2-identity-right', pair_from_epi_right(identity_epi(a2_algebra(field)),
                                                                 name='a2-identity-right'), '')]


def named_epis(field=None) -> Dict[str, RingEpiPresentation]:
    a = a2_algebra(field)
    return {
        'a2-quotient': a2_quotient_epi(a=a),
        'a2-identity': identity_epi(a),
        'dual-numbers': dual_numbers_epi(field),
        'a3-pd2': a3_pd2_epi(field),
        'a2-in-m2': triangular_inclusion(field),
    }


# ---------------------------------------------------------------------------
# Z corpus
# ---------------------------------------------------------------------------

def symbolic_corpus() -> List[SymbolicModule]:
    """Finitely generated groups plus the modules the five-term construction produces."""
    return [
        SymbolicModule.of(free(1)),
        SymbolicModule.of(free(2)),
        SymbolicModule.from_order(12),
        SymbolicModule.of(cyc(2, 3), cyc(5, 1)),
        SymbolicModule.of(free(1), cyc(3, 2)),
        SymbolicModule.of(loc(PrimeSet.of(3))),
        SymbolicModule.of(loc(PrimeSet.of(2, 3))),
        SymbolicModule.of(loc(PrimeSet.all_primes(excluding=[5]))),
        SymbolicModule.of(rat()),
        SymbolicModule.of(pruefer(2), pruefer(7)),
        SymbolicModule.of(pruefer_sum(PrimeSet.all_primes())),
        SymbolicModule.of(free(1), rat(), pruefer(3)),
    ]


def symbolic_phis() -> List[PrimeSet]:
    return [PrimeSet.of(2), PrimeSet.of(3), PrimeSet.of(5), PrimeSet.of(2, 3), PrimeSet.empty(),
            PrimeSet.all_primes(), PrimeSet.all_primes(excluding=[2])]
