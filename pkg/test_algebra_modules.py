"""
Algebras from quivers and structure constants, modules, Hom spaces.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor

import pytest

from algebra import (
    AlgebraError, Arrow, QuiverPresentation, Relation, compile_quiver, quotient_algebra, structure_constant_algebra,
)
from fixtures import a2_algebra, a3_algebra, dual_numbers, matrix_algebra
from linalg import Field, Matrix
from modules import (
    ModuleError, are_isomorphic, direct_sum, dual_map, dual_module, hom_space, indecomposable_injective,
    indecomposable_projective, injective_envelope, module_from_representation, radical_layers, regular_module,
    simple_module, structural_objects,
)


def _count_homs_by_enumeration(m, n):
    """Number of F_2-linear maps M -> N commuting with every generator."""
    field = m.field
    count = 0
    for entries in itertools.product([0, 1], repeat=m.dim * n.dim):
        rows = [list(entries[i * m.dim:(i + 1) * m.dim]) for i in range(n.dim)]
        x = Matrix.from_values(field, rows, m.dim)
        if all(x @ a == b @ x for a, b in zip(m.generator_actions, n.generator_actions)):
            count += 1
    return count


def test_a2_shape():
    a = a2_algebra()
    assert a.dim == 3
    assert a.vertex_count == 2
    assert a.labels == ['e1', 'e2', 'a']
    assert a.radical.ncols == 1


def test_relations_cut_dimension():
    assert a3_algebra().dim == 6
    assert a3_algebra(with_relation=True).dim == 5
    assert dual_numbers().dim == 2


def test_non_composing_relation_rejected():
    q = QuiverPresentation(2, [Arrow('a', 1, 2)], [Relation((('1', ('a', 'a')),))], name='bad')
    with pytest.raises(AlgebraError):
        compile_quiver(q, Field('q'))


def test_infinite_path_algebra_rejected():
    q = QuiverPresentation(1, [Arrow('x', 1, 1)], name='k[x]')
    with pytest.raises(AlgebraError):
        compile_quiver(q, Field('q'), path_length_cap=5)


def test_matrix_algebra_is_semisimple():
    m2 = matrix_algebra()
    assert m2.dim == 4
    assert m2.radical.ncols == 0


def test_radical_quotient_of_dual_numbers():
    a = dual_numbers()
    q = quotient_algebra(a, a.radical)
    assert q.algebra.dim == 1


def test_opposite_is_involutive():
    a = a2_algebra()
    assert a.opposite().opposite() is a


def test_duality_reverses_maps():
    a = a2_algebra()
    f = hom_space(indecomposable_projective(a, 1), indecomposable_projective(a, 0)).maps[0]
    assert f.is_injective()
    d = dual_map(f)
    assert d.source.algebra is a.opposite()
    assert d.is_surjective()
    assert dual_module(dual_module(simple_module(a, 0))).algebra is a


def test_injective_envelopes():
    a = a2_algebra()
    for v in range(2):
        envelope = injective_envelope(simple_module(a, v))
        assert envelope.summands == [v]
        assert envelope.map.is_injective()
        assert are_isomorphic(envelope.module, indecomposable_injective(a, v))
    assert injective_envelope(indecomposable_injective(a, 1)).map.is_isomorphism()


def test_structural_modules_over_a2():
    a = a2_algebra()
    objects = structural_objects(a)
    assert [s.dim for s in objects.simples] == [1, 1]
    assert [p.dim for p in objects.projectives] == [2, 1]
    assert [i.dim for i in objects.injectives] == [1, 2]
    assert indecomposable_projective(a, 0).dimension_vector() == (1, 1)
    assert simple_module(a, 1).label() == 'S2'
    assert simple_module(a, 0) is simple_module(a, 0)


def test_hom_dimensions_over_a2():
    a = a2_algebra()
    p1, p2 = indecomposable_projective(a, 0), indecomposable_projective(a, 1)
    s1 = simple_module(a, 0)
    assert hom_space(p2, p1).dim == 1
    assert hom_space(p1, p2).dim == 0
    assert hom_space(s1, s1).dim == 1
    assert hom_space(p1, indecomposable_injective(a, 1)).dim == 1


def test_hom_space_matches_enumeration_over_f2():
    a = a2_algebra('fp:2')
    modules = [simple_module(a, 0), simple_module(a, 1), indecomposable_projective(a, 0),
               indecomposable_injective(a, 1)]
    for m in modules:
        for n in modules:
            if m.dim * n.dim > 4:
                continue
            assert 2 ** hom_space(m, n).dim == _count_homs_by_enumeration(m, n), (m.label(), n.label())


def test_hom_space_matches_enumeration_over_dual_numbers():
    a = dual_numbers('fp:2')
    r = regular_module(a)
    s = simple_module(a, 0)
    assert 2 ** hom_space(r, r).dim == _count_homs_by_enumeration(r, r)
    assert 2 ** hom_space(s, r).dim == _count_homs_by_enumeration(s, r)


def test_representation_respects_relations():
    a = a3_algebra(with_relation=True)
    one = Matrix.from_values(a.field, [[1]])
    with pytest.raises(ModuleError):
        module_from_representation(a, [1, 1, 1], {'a': one, 'b': one})
    m = module_from_representation(a, [1, 1, 0], {'a': one, 'b': Matrix.zeros(a.field, 0, 1)})
    assert m.dimension_vector() == (1, 1, 0)


def test_representation_isomorphic_to_projective():
    a = a2_algebra()
    rep = module_from_representation(a, [1, 1], {'a': Matrix.from_values(a.field, [[2]])}, name='R')
    assert are_isomorphic(rep, indecomposable_projective(a, 0))
    zero_arrow = module_from_representation(a, [1, 1], {'a': Matrix.zeros(a.field, 1, 1)})
    assert not are_isomorphic(zero_arrow, indecomposable_projective(a, 0))


def test_direct_sum_and_radical_layers():
    a = a2_algebra()
    p1 = indecomposable_projective(a, 0)
    total = direct_sum([p1, simple_module(a, 1)]).module
    assert total.dim == 3
    assert total.dimension_vector() == (1, 2)
    assert [layer.dim for layer in radical_layers(p1)] == [2, 1]


def _truncated_polynomial(field):
    """k[x]/(x^2) from structure constants on the basis 1, x."""
    products = {(0, 0): [1, 0], (0, 1): [0, 1], (1, 0): [0, 1]}
    return structure_constant_algebra(Field(field), ['1', 'x'], products, [1, 0], name='k[x]/x^2 (table)')


def _upper_triangular(field):
    """2x2 upper triangular matrices on E11, E12, E22."""
    products = {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 2): [0, 1, 0], (2, 2): [0, 0, 1]}
    return structure_constant_algebra(Field(field), ['E11', 'E12', 'E22'], products, [1, 0, 1], name='T2')


def test_radical_in_small_characteristic():
    for field in ('fp:2', 'fp:3'):
        m2 = matrix_algebra(field)
        assert m2.radical.ncols == 0
        with pytest.raises(AlgebraError, match='non-split semisimple quotient'):
            structural_objects(m2)
    t2 = _upper_triangular('fp:2')
    assert t2.radical.ncols == 1
    assert t2.vertex_count == 2
    assert sorted(s.dim for s in structural_objects(t2).simples) == [1, 1]


def test_structure_constant_dual_numbers_over_f2():
    a = _truncated_polynomial('fp:2')
    assert a.radical.ncols == 1
    assert a.radical.column(0) == a.basis_vector(1)
    objects = structural_objects(a)
    assert [s.dim for s in objects.simples] == [1]
    assert [p.dim for p in objects.projectives] == [2]
    assert [i.dim for i in objects.injectives] == [2]
    r = regular_module(a)
    assert 2 ** hom_space(r, r).dim == _count_homs_by_enumeration(r, r)


def test_relations_mixing_path_lengths():
    field = Field('q')
    loop = [Arrow('x', 1, 1)]
    idempotent_square = QuiverPresentation(1, loop, [Relation((('1', ('x', 'x')), ('-1', ('x', 'x', 'x'))))],
                                           name='k[x]/(x^2-x^3)')
    a = compile_quiver(idempotent_square, field)
    # x^2 is idempotent here, so the algebra splits as k[x]/(x^2) x k
    assert a.dim == 3
    assert a.vertex_count == 2
    assert a.radical.ncols == 1
    assert sorted(s.dim for s in structural_objects(a).simples) == [1, 1]

    truncated = QuiverPresentation(1, loop, [Relation((('1', ('x', 'x')), ('-1', ('x', 'x', 'x')))),
                                             Relation((('1', ('x', 'x', 'x')),))], name='k[x]/x^2 again')
    b = compile_quiver(truncated, field)
    assert b.dim == 2
    assert b.vertex_count == 1
    assert b.radical.ncols == 1
    assert b.multiply(b.basis_vector(1), b.basis_vector(1)).is_zero()

    arrows = [Arrow('a', 1, 2), Arrow('b', 2, 3), Arrow('c', 1, 3)]
    q = QuiverPresentation(3, arrows, [Relation((('1', ('a', 'b')), ('-1', ('c',))))], name='A3+c')
    c = compile_quiver(q, field)
    assert c.dim == 6
    assert c.vertex_count == 3
    assert [p.dim for p in structural_objects(c).projectives] == [3, 2, 1]


def test_hom_space_matches_enumeration_on_small_modules():
    for a in (a2_algebra('fp:2'), dual_numbers('fp:2'), a3_algebra('fp:2', with_relation=True),
              _upper_triangular('fp:2')):
        small = [simple_module(a, v) for v in range(a.vertex_count)]
        small += [p for p in structural_objects(a).projectives if p.dim <= 2]
        small += [i for i in structural_objects(a).injectives if i.dim <= 2]
        simples = small[:a.vertex_count]
        small += [direct_sum([s, t]).module for s, t in itertools.combinations_with_replacement(simples, 2)]
        for m in small:
            for n in small:
                if m.dim + n.dim > 3:
                    continue
                assert 2 ** hom_space(m, n).dim == _count_homs_by_enumeration(m, n), (a.name, m.label(), n.label())


def test_concurrent_cache_fills_keep_one_object():
    a = a3_algebra()
    with ThreadPoolExecutor(max_workers=8) as pool:
        simples = list(pool.map(lambda _: simple_module(a, 0), range(16)))
    assert all(s is simples[0] for s in simples)
    assert simple_module(a, 0) is simples[0]

    t2 = _upper_triangular('q')
    with ThreadPoolExecutor(max_workers=8) as pool:
        radicals = list(pool.map(lambda _: t2.radical, range(16)))
        idempotents = list(pool.map(lambda _: t2.idempotents, range(16)))
    assert all(r is t2.radical for r in radicals)
    assert all(e is t2.idempotents for e in idempotents)


if __name__ == "__main__":
    test_a2_shape()
    test_relations_cut_dimension()
    test_non_composing_relation_rejected()
    test_infinite_path_algebra_rejected()
    test_matrix_algebra_is_semisimple()
    test_radical_quotient_of_dual_numbers()
    test_opposite_is_involutive()
    test_duality_reverses_maps()
    test_injective_envelopes()
    test_structural_modules_over_a2()
    test_hom_dimensions_over_a2()
    test_hom_space_matches_enumeration_over_f2()
    test_hom_space_matches_enumeration_over_dual_numbers()
    test_representation_respects_relations()
    test_representation_isomorphic_to_projective()
    test_direct_sum_and_radical_layers()
    test_radical_in_small_characteristic()
    test_structure_constant_dual_numbers_over_f2()
    test_relations_mixing_path_lengths()
    test_hom_space_matches_enumeration_on_small_modules()
    test_concurrent_cache_fills_keep_one_object()
    print("[OK] algebra and module tests passed")
