"""
Bounded complexes: cohomology, cones, shifts, replacements and derived Hom.
"""

import pytest

import config
from complexes import (
    BoundedComplex, ComplexError, cohomology, cohomology_dimensions, compose_chain, cone, derived_hom,
    identity_chain, induced_map, injective_replacement, is_exact, is_quasi_isomorphism, membership_in_dbx,
    projective_replacement, shift, shift_map, stalk, stalk_map, two_term, zero_complex,
)
from fixtures import a2_algebra, a3_algebra, dual_numbers
from linalg import Matrix
from modules import (
    ModuleMap, hom_space, identity_map, indecomposable_injective, indecomposable_projective, regular_module,
    simple_module,
)
from resolutions import ext_dimensions, minimal_resolution
from theory_props import generate_corpus


def _inclusion_p2_p1(a):
    return hom_space(indecomposable_projective(a, 1), indecomposable_projective(a, 0)).maps[0]


def test_stalk_cohomology():
    a = a2_algebra()
    x = stalk(simple_module(a, 0), 2)
    assert cohomology_dimensions(x) == {2: 1}
    assert not is_exact(x)
    assert zero_complex(a).is_zero()


def test_two_term_cohomology_is_kernel_and_cokernel():
    a = a2_algebra()
    f = _inclusion_p2_p1(a)
    x = two_term(f)
    assert x.dimensions() == {-1: 1, 0: 2}
    assert cohomology(x, -1).dim == 0
    h0 = cohomology(x, 0)
    assert h0.dim == 1 and h0.dimension_vector() == (1, 0)


def test_differential_must_square_to_zero():
    a = dual_numbers()
    r = regular_module(a)
    x_action = r.actions[1]
    d = ModuleMap(r, r, x_action)
    BoundedComplex(a, {0: r, 1: r, 2: r}, {0: d, 1: d})
    one = ModuleMap(r, r, Matrix.identity(a.field, 2))
    with pytest.raises(ComplexError):
        BoundedComplex(a, {0: r, 1: r, 2: r}, {0: one, 1: one})


def test_cone_of_identity_is_exact():
    a = a2_algebra()
    x = two_term(_inclusion_p2_p1(a))
    tri = cone(identity_chain(x))
    assert is_exact(tri.c)
    assert is_quasi_isomorphism(identity_chain(x))


def test_cone_of_stalk_map_is_two_term():
    a = a2_algebra()
    c = cone(stalk_map(_inclusion_p2_p1(a))).c
    assert c.dimensions() == {-1: 1, 0: 2}
    assert cohomology(c, -1).dim == 0
    assert cohomology(c, 0).dim == 1


def test_shift_moves_degrees():
    a = a2_algebra()
    x = two_term(_inclusion_p2_p1(a))
    y = shift(x, 1)
    assert y.dimensions() == {-2: 1, -1: 2}
    assert shift(x, 0) is x
    assert cohomology_dimensions(shift(x, -2)) == {1: 0, 2: 1}


def test_chain_maps_compose_shift_and_induce():
    a = a2_algebra()
    f = _inclusion_p2_p1(a)
    chain = stalk_map(f, 1)
    assert compose_chain(identity_chain(chain.target), chain).component(1).matrix == f.matrix
    h = induced_map(chain, 1)
    assert (h.source.dim, h.target.dim) == (1, 2)
    assert h.is_injective()
    assert induced_map(chain, 0).is_zero()
    shifted = shift_map(chain, 1)
    assert shifted.source.dimensions() == {0: 1}
    assert shifted.component(0).matrix == f.matrix


def test_projective_replacement_of_simple():
    a = a2_algebra()
    x = stalk(simple_module(a, 0))
    rep = projective_replacement(x, -3)
    assert rep.complex.dimensions() == {-1: 1, 0: 2}
    assert is_exact(cone(rep.map).c)


def test_injective_replacement_of_simple():
    a = a2_algebra()
    x = stalk(simple_module(a, 1))
    rep = injective_replacement(x)
    assert is_quasi_isomorphism(rep.map)
    assert rep.complex.term(0).dim == indecomposable_injective(a, 1).dim


def test_derived_hom_matches_ext():
    a = a2_algebra()
    s1, s2 = stalk(simple_module(a, 0)), stalk(simple_module(a, 1))
    assert derived_hom(s1, s2, 1) == 1
    assert derived_hom(s2, s1, 1) == 0
    assert derived_hom(s1, s1, 0) == 1
    assert derived_hom(s1, s2, 0) == 0
    assert derived_hom(s1, s2, -1) == 0


def test_derived_hom_of_dual_numbers_simple():
    a = dual_numbers()
    s = stalk(simple_module(a, 0))
    assert [derived_hom(s, s, n) for n in range(4)] == [1, 1, 1, 1]


def test_derived_hom_of_stalks_matches_ext_on_corpora():
    params = dict(config.CORPUS_PARAMS, min_modules=8, max_random_dim=4)
    for a in (a2_algebra(), dual_numbers(), a3_algebra(with_relation=True)):
        modules = generate_corpus(a, params=params).modules
        stalks = [stalk(m) for m in modules]
        for m, sm in zip(modules, stalks):
            res = minimal_resolution(m, 'projective', 5)
            for n, sn in zip(modules, stalks):
                ext = ext_dimensions(m, n, range(5), resolution=res)
                for k in range(5):
                    assert derived_hom(sm, sn, k) == ext[k], (a.name, m.label(), n.label(), k)


def test_membership_in_dbx():
    a = a2_algebra()
    f = _inclusion_p2_p1(a)
    x = two_term(f)
    at_vertex_1 = membership_in_dbx(x, lambda m: m.dimension_vector()[1] == 0)
    assert at_vertex_1.holds and at_vertex_1.failing_degrees == []
    at_vertex_2 = membership_in_dbx(x, lambda m: m.dimension_vector()[0] == 0)
    assert not at_vertex_2.holds and at_vertex_2.failing_degrees == [0]
    exact = two_term(identity_map(simple_module(a, 0)))
    assert membership_in_dbx(exact, lambda m: False).holds


if __name__ == "__main__":
    test_stalk_cohomology()
    test_two_term_cohomology_is_kernel_and_cokernel()
    test_differential_must_square_to_zero()
    test_cone_of_identity_is_exact()
    test_cone_of_stalk_map_is_two_term()
    test_shift_moves_degrees()
    test_chain_maps_compose_shift_and_induce()
    test_projective_replacement_of_simple()
    test_injective_replacement_of_simple()
    test_derived_hom_matches_ext()
    test_derived_hom_of_dual_numbers_simple()
    test_derived_hom_of_stalks_matches_ext_on_corpora()
    test_membership_in_dbx()
    print("[OK] complex tests passed")
