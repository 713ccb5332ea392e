"""
Problem documents: parsing, printing, error locations and compilation.
"""

import glob
import os

import pytest

from problem_document import ParseError, ProblemDocument, compile_document, load_document, parse, print_document

PROBLEMS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'problems')

HEADER = """field q
quiver A2 vertices 2 arrows a:1->2
epi lambda kind quotient algebra A2 kill 1
pair P kind left epi lambda
"""


def test_empty_document():
    doc = parse('')
    assert doc == ProblemDocument()
    assert print_document(doc) == ''
    assert parse('# only a comment\n\n   \n').statements == []


def test_a2_quotient_document():
    doc = load_document(os.path.join(PROBLEMS_DIR, 'a2-quotient.txt'))
    assert len(doc.declared('quiver')) == 1
    assert len(doc.declared('epi')) == 1
    assert [t.get('pair') or t.get('epi') for t in doc.tasks] == ['lambda', 'P', 'P']
    assert doc.field_spec == 'q'


def test_shipped_documents_print_and_reparse():
    paths = sorted(glob.glob(os.path.join(PROBLEMS_DIR, '*.txt')))
    assert len(paths) >= 6
    for path in paths:
        doc = load_document(path)
        assert parse(print_document(doc)) == doc, path


def test_continuation_lines_join_one_statement():
    doc = load_document(os.path.join(PROBLEMS_DIR, 'm2-inclusion.txt'))
    algebra = doc.declared('algebra')[0]
    assert algebra.name == 'M2'
    assert algebra.get('products').startswith('E11*E11=E11;')
    assert algebra.line == 4


def test_comments_are_stripped():
    doc = parse('field q  # rationals\nquiver A vertices 1 # no arrows\n')
    assert doc.statements[1].args == (('vertices', '1'),)


def test_undeclared_reference_is_located():
    with pytest.raises(ParseError) as info:
        parse(HEADER + 'task five-term pair P module M\n')
    assert info.value.line == 5
    assert info.value.col == 30
    assert "undeclared module 'M'" in str(info.value)


def test_unknown_keyword_and_task():
    with pytest.raises(ParseError) as info:
        parse('field q\nlemma L holds\n')
    assert (info.value.line, info.value.col) == (2, 1)
    with pytest.raises(ParseError) as info:
        parse('task frobnicate\n')
    assert (info.value.line, info.value.col) == (1, 6)


def test_statement_shape_errors():
    with pytest.raises(ParseError) as info:
        parse('quiver A2 vertices\n')
    assert info.value.col == 11
    with pytest.raises(ParseError):
        parse('quiver A2 vertices 2\nquiver A2 vertices 3\n')
    with pytest.raises(ParseError):
        parse(HEADER + 'task five-term pair P\n')
    with pytest.raises(ParseError):
        parse('field reals\n')


def test_compile_a2_complex():
    env = compile_document(load_document(os.path.join(PROBLEMS_DIR, 'a2-complex.txt')))
    assert env.complexes['C'].dimensions() == {-1: 1, 0: 2}
    assert env.summary()['modules'] == 2
    assert env.maps['f'].is_injective()


def test_compile_rejects_a_mis_shaped_matrix():
    text = HEADER + ('module R2 over A2 kind rep dims 0,1\n'
                     'module R1 over A2 kind rep dims 1,1 action a=[1]\n'
                     'map f from R2 to R1 matrix [1,0]\n')
    doc = parse(text)
    with pytest.raises(ParseError) as info:
        compile_document(doc)
    assert info.value.line == 7


def test_compile_rejects_a_non_module_map():
    text = HEADER + ('module S1 over A2 kind simple vertex 1\n'
                     'module S2 over A2 kind simple vertex 2\n'
                     'map f from S1 to S2 matrix [1]\n')
    with pytest.raises(ParseError) as info:
        compile_document(parse(text))
    assert info.value.line == 7


def test_field_override():
    doc = load_document(os.path.join(PROBLEMS_DIR, 'a2-quotient.txt'))
    env = compile_document(doc, 'fp:3')
    assert env.field.name == 'fp:3'
    assert env.algebras['A2'].dim == 3


if __name__ == "__main__":
    test_empty_document()
    test_a2_quotient_document()
    test_shipped_documents_print_and_reparse()
    test_continuation_lines_join_one_statement()
    test_comments_are_stripped()
    test_undeclared_reference_is_located()
    test_unknown_keyword_and_task()
    test_statement_shape_errors()
    test_compile_a2_complex()
    test_compile_rejects_a_mis_shaped_matrix()
    test_compile_rejects_a_non_module_map()
    test_field_override()
    print("[OK] problem document tests passed")
