"""
Minimal resolutions, dimensions, Ext and Tor.
"""

import pytest

from algebra import AlgebraError
from fixtures import a2_algebra, a3_algebra, dual_numbers, matrix_algebra
from modules import indecomposable_injective, indecomposable_projective, simple_module, structural_objects
from resolutions import (
    ResolutionError, euler_form, ext_dimensions, ext_group, global_dimension, injective_dimension,
    minimal_resolution, projective_dimension, resolution_complex, tor_group,
)


def test_projective_module_resolves_in_one_step():
    a = a2_algebra()
    res = minimal_resolution(indecomposable_projective(a, 0), 'projective', 3)
    assert res.terminated
    assert res.length == 0
    res.verify()


def test_simple_resolution_over_a2():
    a = a2_algebra()
    res = minimal_resolution(simple_module(a, 0), 'projective', 3)
    assert res.terminated
    assert [p.dim for p in res.terms] == [2, 1]
    assert res.summand_labels() == [['1'], ['2']]
    res.verify()


def test_injective_coresolution_over_a2():
    a = a2_algebra()
    res = minimal_resolution(simple_module(a, 1), 'injective', 3)
    assert res.terminated
    assert [i.dim for i in res.terms] == [2, 1]
    res.verify()


def test_dimensions():
    a = a2_algebra()
    assert projective_dimension(simple_module(a, 0)).value == 1
    assert projective_dimension(simple_module(a, 1)).value == 0
    assert injective_dimension(simple_module(a, 1)).value == 1
    assert global_dimension(a).value == 1
    assert global_dimension(a3_algebra(with_relation=True)).value == 2


def test_dual_numbers_have_infinite_projective_dimension():
    a = dual_numbers()
    verdict = projective_dimension(simple_module(a, 0), depth_cap=4)
    assert verdict.status == 'infinite'
    assert verdict.at_most(1) is False
    assert 'infinite' in verdict.describe()


def test_ext_of_simple_over_dual_numbers_never_vanishes():
    a = dual_numbers()
    s = simple_module(a, 0)
    res = minimal_resolution(s, 'projective', 7)
    dims = ext_dimensions(s, s, list(range(7)), resolution=res)
    assert all(dims[k] == 1 for k in range(0, 7))


def test_ext2_vanishes_over_hereditary_a2():
    a = a2_algebra()
    objects = structural_objects(a)
    modules = objects.simples + objects.projectives + objects.injectives
    for m in modules:
        for n in modules:
            assert ext_group(2, m, n).dimension == 0


def test_ext1_between_simples_over_a2():
    a = a2_algebra()
    s1, s2 = simple_module(a, 0), simple_module(a, 1)
    assert ext_group(1, s1, s2).dimension == 1
    assert ext_group(1, s2, s1).dimension == 0
    assert ext_group(1, indecomposable_injective(a, 0), s2).dimension == 1


def test_euler_form_on_hereditary_quivers():
    for a in (a2_algebra(), a3_algebra()):
        objects = structural_objects(a)
        modules = objects.simples + objects.projectives + objects.injectives
        for m in modules:
            for n in modules:
                dims = ext_dimensions(m, n, [0, 1])
                form = euler_form(a, m.dimension_vector(), n.dimension_vector())
                assert dims[0] - dims[1] == form, (a.name, m.label(), n.label())
    assert euler_form(a2_algebra(), (1, 0), (0, 1)) == -1
    with pytest.raises(AlgebraError):
        euler_form(matrix_algebra(), (1,), (1,))


def test_tor_balance():
    for a in (a2_algebra(), dual_numbers(), a3_algebra(with_relation=True)):
        op = a.opposite()
        for v in range(a.vertex_count):
            for w in range(a.vertex_count):
                right, left = simple_module(op, v), simple_module(a, w)
                for k in (0, 1, 2):
                    by_left = tor_group(k, right, left, resolve='left').dimension
                    by_right = tor_group(k, right, left, resolve='right').dimension
                    assert by_left == by_right, (a.name, v, w, k)


def test_tor_over_dual_numbers():
    a = dual_numbers()
    right, left = simple_module(a.opposite(), 0), simple_module(a, 0)
    assert [tor_group(k, right, left).dimension for k in range(4)] == [1, 1, 1, 1]


def test_resolution_complex_degrees():
    a = a2_algebra()
    res = minimal_resolution(simple_module(a, 0), 'projective', 2)
    c = resolution_complex(res, 2)
    assert c.term(0).dim == 2
    assert c.term(-1).dim == 1


def test_bad_requests():
    a = a2_algebra()
    with pytest.raises(ResolutionError):
        minimal_resolution(simple_module(a, 0), 'flat')
    with pytest.raises(ResolutionError):
        minimal_resolution(simple_module(a, 0), 'projective', -1)
    with pytest.raises(ValueError):
        tor_group(-1, simple_module(a.opposite(), 0), simple_module(a, 0))


if __name__ == "__main__":
    test_projective_module_resolves_in_one_step()
    test_simple_resolution_over_a2()
    test_injective_coresolution_over_a2()
    test_dimensions()
    test_dual_numbers_have_infinite_projective_dimension()
    test_ext_of_simple_over_dual_numbers_never_vanishes()
    test_ext2_vanishes_over_hereditary_a2()
    test_ext1_between_simples_over_a2()
    test_euler_form_on_hereditary_quivers()
    test_tor_balance()
    test_tor_over_dual_numbers()
    test_resolution_complex_degrees()
    test_bad_requests()
    print("[OK] resolution tests passed")
