"""
Property suite over seeded corpora, the Z suite and homological membership.
"""

from complexes import stalk, two_term
from fixtures import a2_algebra, a2_quotient_epi, negative_pairs, positive_pairs, symbolic_corpus
from modules import direct_sum, identity_map, simple_module
from orthogonal import pair_from_epi_left
from pid_spec import PrimeSet
from ring_epi import FAILS, HOLDS
from theory_props import (
    certificate_table, criterion_route, generate_corpus, homological_membership, run_property_suite,
    run_symbolic_suite,
)


def test_corpus_is_deterministic():
    a = a2_algebra()
    first, second = generate_corpus(a, seed=7), generate_corpus(a, seed=7)
    assert first.summary() == second.summary()
    assert [m.dim for m in first.modules] == [m.dim for m in second.modules]
    assert [m.dimension_vector() for m in first.modules] == [m.dimension_vector() for m in second.modules]
    assert len(first.modules) >= 20


def test_positive_pairs_certify():
    fixtures = positive_pairs()[:2]
    corpus = generate_corpus(a2_algebra(), seed=1, pairs=[f.pair for f in fixtures])
    certificates = run_property_suite(corpus)
    assert [c.pair for c in certificates] == ['a2-quotient', 'a2-serre']
    for cert in certificates:
        assert cert.status == HOLDS, cert.to_text()
        assert cert.claims['cross_route'].status == HOLDS
        assert 'ladder_uniqueness' in cert.claims and 'yz_equivalence' in cert.claims


def test_negative_pairs_are_refuted():
    for fixture in negative_pairs():
        corpus = generate_corpus(fixture.pair.algebra, seed=1)
        cert = run_property_suite(corpus, [fixture.pair])[0]
        assert cert.status == FAILS, fixture.name
        assert cert.claims['conditions'].status == FAILS
        if fixture.name == 'dual-numbers':
            assert 'idempotence' not in cert.claims


def test_criterion_route_matches_the_epimorphism():
    pair = pair_from_epi_left(a2_quotient_epi())
    assert criterion_route(pair, []).status == HOLDS


def test_certificate_table_columns():
    corpus = generate_corpus(a2_algebra(), seed=3)
    certificates = run_property_suite(corpus, [positive_pairs()[0].pair])
    table = certificate_table(certificates)
    assert list(table.columns) == ['pair', 'claim', 'status', 'tier', 'detail']
    assert set(table['pair']) == {'a2-quotient'}
    assert len(table) == len(certificates[0].claims)


def test_symbolic_suite_at_two():
    cert = run_symbolic_suite(symbolic_corpus(), PrimeSet.of(2))
    assert cert.status == HOLDS, cert.to_text()
    assert cert.claims['oracle_agreement'].status == HOLDS
    assert cert.claims['orthogonality'].witness['violations'] == []
    assert 'localization' in cert.claims


def test_symbolic_suite_rejects_the_generic_point():
    cert = run_symbolic_suite(symbolic_corpus(), PrimeSet.minimal())
    assert cert.status == FAILS
    assert cert.claims['five_term_membership'].status == FAILS
    assert 'localization' not in cert.claims


def test_certificate_text_is_deterministic():
    first = run_symbolic_suite(symbolic_corpus(), PrimeSet.all_primes()).to_text()
    second = run_symbolic_suite(symbolic_corpus(), PrimeSet.all_primes()).to_text()
    assert first == second
    assert first.splitlines()[0].startswith('certificate Z:_Supp^-1(co{})')


def test_homological_membership():
    pair = pair_from_epi_left(a2_quotient_epi())
    a = pair.algebra
    s1, s2 = simple_module(a, 0), simple_module(a, 1)
    assert homological_membership(stalk(s2), pair).classification == 'x'
    assert homological_membership(stalk(s1, 3), pair).classification == 'y'
    assert homological_membership(two_term(identity_map(s1)), pair).classification == 'both'
    mixed = homological_membership(stalk(direct_sum([s1, s2], algebra=a).module), pair)
    assert mixed.classification == 'neither'
    assert mixed.x_failing == [0] and mixed.y_failing == [0]


if __name__ == "__main__":
    test_corpus_is_deterministic()
    test_positive_pairs_certify()
    test_negative_pairs_are_refuted()
    test_criterion_route_matches_the_epimorphism()
    test_certificate_table_columns()
    test_symbolic_suite_at_two()
    test_symbolic_suite_rejects_the_generic_point()
    test_certificate_text_is_deterministic()
    test_homological_membership()
    print("[OK] property suite tests passed")
