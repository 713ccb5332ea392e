"""
Problem documents: a line-oriented declaration language for the workbench.

Each statement is ``keyword name key value key value ...``.  Values never
contain spaces; ``#`` starts a comment and a trailing backslash continues a
statement on the next line.  Examples::

    field q
    quiver A2 vertices 2 arrows a:1->2
    epi lambda kind quotient algebra A2 kill 1
    pair P kind left epi lambda
    module P1 over A2 kind projective vertex 1
    task check-pair pair P

Every referenced name must be declared on an earlier line.
"""

import logging
import re
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Rational

import config
from algebra import AlgebraError, AlgebraPresentation, Arrow, QuiverPresentation, Relation, compile_quiver, \
    structure_constant_algebra
from complexes import BoundedComplex, ComplexError
from fixtures import radical_epi
from linalg import DimensionError, Field, Matrix
from modules import (
    FdModule, ModuleError, ModuleMap, indecomposable_injective, indecomposable_projective, module_from_representation,
    regular_module, simple_module,
)
from orthogonal import OrthogonalPair, pair_from_epi_left, pair_from_epi_right, serre_pair, swapped_pair
from pid_spec import PreconditionError, PrimeSet, SymbolicModule
from ring_epi import HypothesisError, RingEpiPresentation, identity_epi, quotient_epi

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r'\S+')
NAME_RE = re.compile(r'^[A-Za-z_][\w\-\'^]*$')
ARROW_RE = re.compile(r'^([A-Za-z_]\w*):(\d+)->(\d+)$')
TERM_RE = re.compile(r'([+-]?)(?:(\d+(?:/\d+)?)\*)?([A-Za-z_]\w*(?:\.[A-Za-z_]\w*)*)')

# name category introduced by each declaring keyword
DECLARES = {
    'quiver': 'algebra',
    'algebra': 'algebra',
    'module': 'module',
    'map': 'map',
    'epi': 'epi',
    'pair': 'pair',
    'complex': 'complex',
    'symbolic': 'symbolic',
    'primes': 'primes',
}

# argument keys whose value names an earlier declaration
REFERENCES = {
    'module': {'over': 'algebra'},
    'map': {'from': 'module', 'to': 'module'},
    'epi': {'algebra': 'algebra', 'source': 'algebra', 'target': 'algebra'},
    'pair': {'epi': 'epi', 'algebra': 'algebra', 'pair': 'pair'},
    'complex': {'over': 'algebra'},
    'task': {'pair': 'pair', 'module': 'module', 'complex': 'complex', 'epi': 'epi', 'symbolic': 'symbolic',
             'primes': 'primes'},
}

TASKS = {
    'check-pair': ('pair',),
    'five-term': ('pair', 'module'),
    'decompose-complex': ('pair', 'complex'),
    'check-epi': ('epi',),
    'pid-decompose': ('symbolic', 'primes'),
    'pid-stratify': (),
    'selftest': (),
}


class ParseError(ValueError):
    """Syntax, reference or declaration error, located by line and column (1-based)."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


@dataclass(frozen=True)
class Statement:
    keyword: str
    name: str
    args: Tuple[Tuple[str, str], ...] = ()
    line: int = dataclass_field(default=0, compare=False)
    columns: Tuple[int, ...] = dataclass_field(default=(), compare=False, repr=False)

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.args:
            if k == key:
                return v
        return default

    def get_all(self, key: str) -> List[str]:
        return [v for k, v in self.args if k == key]

    def require(self, key: str) -> str:
        value = self.get(key)
        if value is None:
            raise ParseError(f"{self.keyword} {self.name}: missing '{key}'", self.line, self.column_of(None))
        return value

    def column_of(self, key: Optional[str]) -> int:
        """Column of the value for ``key`` (the statement start when absent)."""
        if not self.columns:
            return 1
        for i, (k, _) in enumerate(self.args):
            if k == key and 3 + 2 * i < len(self.columns):
                return self.columns[3 + 2 * i]
        return self.columns[0]

    def error(self, message: str, key: Optional[str] = None) -> ParseError:
        return ParseError(message, self.line, self.column_of(key))

    def to_text(self) -> str:
        tokens = [self.keyword, self.name]
        for k, v in self.args:
            tokens += [k, v]
        return ' '.join(tokens)


@dataclass
class ProblemDocument:
    statements: List[Statement] = dataclass_field(default_factory=list)

    @property
    def tasks(self) -> List[Statement]:
        return [s for s in self.statements if s.keyword == 'task']

    @property
    def declarations(self) -> List[Statement]:
        return [s for s in self.statements if s.keyword != 'task']

    def declared(self, keyword: str) -> List[Statement]:
        return [s for s in self.statements if s.keyword == keyword]

    @property
    def field_spec(self) -> Optional[str]:
        fields = self.declared('field')
        return fields[-1].name if fields else None

    def to_text(self) -> str:
        return print_document(self)

    def __eq__(self, other):
        return isinstance(other, ProblemDocument) and self.statements == other.statements


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _logical_lines(text: str) -> Iterator[Tuple[int, List[Tuple[int, str]]]]:
    """(first line number, [(column, token), ...]) per statement."""
    pending: List[Tuple[int, str]] = []
    start = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split('#', 1)[0].rstrip()
        continued = body.endswith('\\')
        if continued:
            body = body[:-1]
        tokens = [(m.start() + 1, m.group()) for m in TOKEN_RE.finditer(body)]
        if tokens and not pending:
            start = number
        pending += tokens
        if not continued and pending:
            yield start, pending
            pending = []
    if pending:
        yield start, pending


def _statement(number: int, tokens: List[Tuple[int, str]]) -> Statement:
    col, keyword = tokens[0]
    if keyword not in DECLARES and keyword not in ('field', 'task'):
        raise ParseError(f"unknown keyword {keyword!r}", number, col)
    if len(tokens) < 2:
        raise ParseError(f"'{keyword}' needs a name", number, col + len(keyword))
    name_col, name = tokens[1]
    if keyword in DECLARES and not NAME_RE.match(name):
        raise ParseError(f"invalid name {name!r}", number, name_col)
    rest = tokens[2:]
    if len(rest) % 2:
        key_col, key = rest[-1]
        raise ParseError(f"'{key}' has no value", number, key_col)
    args = tuple((rest[i][1], rest[i + 1][1]) for i in range(0, len(rest), 2))
    columns = tuple(c for c, _ in tokens)
    return Statement(keyword, name, args, number, columns)


def _check_references(s: Statement, names: Dict[str, str]):
    for key, category in REFERENCES.get(s.keyword, {}).items():
        for value in s.get_all(key):
            if names.get(value) != category:
                raise s.error(f"undeclared {category} {value!r}", key)
    if s.keyword == 'complex':
        for key, category in (('terms', 'module'), ('maps', 'map')):
            for entry in (s.get(key) or '').split(','):
                if not entry:
                    continue
                ref = entry.split(':', 1)[-1]
                if names.get(ref) != category:
                    raise s.error(f"undeclared {category} {ref!r}", key)


def parse(text: str) -> ProblemDocument:
    """Parse a document; the first error is raised as ParseError."""
    statements = []
    names: Dict[str, str] = {}
    for number, tokens in _logical_lines(text):
        s = _statement(number, tokens)
        if s.keyword == 'field':
            try:
                Field(s.name)
            except ValueError as exc:
                raise s.error(str(exc)) from exc
        elif s.keyword == 'task':
            if s.name not in TASKS:
                raise ParseError(f"unknown task {s.name!r}", number, s.columns[1])
            for key in TASKS[s.name]:
                s.require(key)
        else:
            if s.name in names:
                raise ParseError(f"{s.name!r} is already declared", number, s.columns[1])
        _check_references(s, names)
        if s.keyword in DECLARES:
            names[s.name] = DECLARES[s.keyword]
        statements.append(s)
    logger.debug(f"parsed {len(statements)} statements")
    return ProblemDocument(statements)


def print_document(doc: ProblemDocument) -> str:
    return '\n'.join(s.to_text() for s in doc.statements) + ('\n' if doc.statements else '')


def load_document(path: str) -> ProblemDocument:
    with open(path, 'r', encoding='utf-8') as f:
        return parse(f.read())


# ---------------------------------------------------------------------------
# Compilation into engine objects
# ---------------------------------------------------------------------------

@dataclass
class Environment:
    field: Field
    algebras: Dict[str, AlgebraPresentation] = dataclass_field(default_factory=dict)
    modules: Dict[str, FdModule] = dataclass_field(default_factory=dict)
    maps: Dict[str, ModuleMap] = dataclass_field(default_factory=dict)
    epis: Dict[str, RingEpiPresentation] = dataclass_field(default_factory=dict)
    pairs: Dict[str, OrthogonalPair] = dataclass_field(default_factory=dict)
    complexes: Dict[str, BoundedComplex] = dataclass_field(default_factory=dict)
    symbolic: Dict[str, SymbolicModule] = dataclass_field(default_factory=dict)
    primes: Dict[str, PrimeSet] = dataclass_field(default_factory=dict)

    def summary(self) -> Dict[str, int]:
        return {k: len(getattr(self, k)) for k in
                ('algebras', 'modules', 'maps', 'epis', 'pairs', 'complexes', 'symbolic', 'primes')}


def parse_matrix(f: Field, text: str, rows: int, cols: int) -> Matrix:
    """``[1,0;0,1]`` row by row; ``[]`` is the zero matrix of the expected shape."""
    if not (text.startswith('[') and text.endswith(']')):
        raise ValueError(f"matrix {text!r} must be bracketed")
    body = text[1:-1].strip()
    if not body:
        return Matrix.zeros(f, rows, cols)
    data = [[f(x) for x in row.split(',')] for row in body.split(';')]
    if len(data) != rows or any(len(r) != cols for r in data):
        raise DimensionError(f"matrix {text} is not {rows}x{cols}")
    return Matrix(f, data, rows, cols)


def parse_combination(text: str, labels: Sequence[str]) -> List[str]:
    """Coordinates of ``2*E11-E22`` against ``labels``, as rational strings."""
    values = [Rational(0)] * len(labels)
    position = 0
    for m in TERM_RE.finditer(text):
        if m.start() != position or not m.group():
            raise ValueError(f"cannot read {text!r}")
        position = m.end()
        label = m.group(3)
        if label not in labels:
            raise ValueError(f"unknown basis element {label!r}")
        c = Rational(m.group(2) or 1)
        values[labels.index(label)] += -c if m.group(1) == '-' else c
    if position != len(text):
        raise ValueError(f"cannot read {text!r}")
    return [str(v) for v in values]


def _relation(text: str) -> Relation:
    terms = []
    for m in TERM_RE.finditer(text):
        sign, c, label = m.groups()
        coefficient = (sign or '') + (c or '1')
        terms.append((coefficient.lstrip('+'), tuple(reversed(label.split('.')))))
    if not terms:
        raise ValueError(f"empty relation {text!r}")
    return Relation(tuple(terms))


def _quiver(s: Statement, f: Field) -> AlgebraPresentation:
    vertices = int(s.require('vertices'))
    arrows = []
    for item in (s.get('arrows') or '').split(','):
        if not item:
            continue
        m = ARROW_RE.match(item)
        if not m:
            raise s.error(f"malformed arrow {item!r}", 'arrows')
        arrows.append(Arrow(m.group(1), int(m.group(2)), int(m.group(3))))
    relations = [_relation(r) for r in (s.get('relations') or '').split(';') if r]
    return compile_quiver(QuiverPresentation(vertices, arrows, relations, name=s.name), f)


def _structure_algebra(s: Statement, f: Field) -> AlgebraPresentation:
    labels = s.require('basis').split(',')
    unit = s.require('unit').split(',')
    if len(unit) != len(labels):
        raise s.error(f"unit has {len(unit)} coordinates for {len(labels)} basis elements", 'unit')
    products = {}
    for entry in (s.get('products') or '').split(';'):
        if not entry:
            continue
        lhs, rhs = entry.split('=', 1)
        left, right = lhs.split('*', 1)
        if left not in labels or right not in labels:
            raise s.error(f"unknown basis element in {entry!r}", 'products')
        products[(labels.index(left), labels.index(right))] = parse_combination(rhs, labels)
    return structure_constant_algebra(f, labels, products, unit, name=s.name)


def _module(s: Statement, env: Environment) -> FdModule:
    a = env.algebras[s.require('over')]
    kind = s.require('kind')
    if kind == 'regular':
        return regular_module(a)
    if kind in ('simple', 'projective', 'injective'):
        v = a.vertex_index(s.require('vertex'))
        build = {'simple': simple_module, 'projective': indecomposable_projective,
                 'injective': indecomposable_injective}[kind]
        return build(a, v)
    if kind == 'rep':
        dims = [int(d) for d in s.require('dims').split(',')]
        if len(dims) != a.vertex_count:
            raise s.error(f"{len(dims)} dimensions for {a.vertex_count} vertices", 'dims')
        arrows = {p.arrows[0]: p for p in a.paths or [] if p.length == 1}
        maps = {}
        for entry in s.get_all('action'):
            label, text = entry.split('=', 1)
            if label not in arrows:
                raise s.error(f"unknown arrow {label!r}", 'action')
            p = arrows[label]
            maps[label] = parse_matrix(a.field, text, dims[p.target - 1], dims[p.source - 1])
        for label, p in arrows.items():
            maps.setdefault(label, Matrix.zeros(a.field, dims[p.target - 1], dims[p.source - 1]))
        return module_from_representation(a, dims, maps, name=s.name)
    raise s.error(f"unknown module kind {kind!r}", 'kind')


def _map(s: Statement, env: Environment) -> ModuleMap:
    source, target = env.modules[s.require('from')], env.modules[s.require('to')]
    matrix = parse_matrix(source.field, s.require('matrix'), target.dim, source.dim)
    return ModuleMap(source, target, matrix, check=True)


def _epi(s: Statement, env: Environment) -> RingEpiPresentation:
    kind = s.require('kind')
    if kind == 'quotient':
        return quotient_epi(env.algebras[s.require('algebra')], s.require('kill').split(','), name=s.name)
    if kind == 'radical':
        return radical_epi(env.algebras[s.require('algebra')], name=s.name)
    if kind == 'identity':
        epi = identity_epi(env.algebras[s.require('algebra')])
        epi.name = s.name
        return epi
    if kind == 'matrix':
        source, target = env.algebras[s.require('source')], env.algebras[s.require('target')]
        images = dict(entry.split('=', 1) for entry in s.require('image').split(';') if entry)
        columns = []
        for label in source.labels:
            coords = parse_combination(images[label], target.labels) if label in images else ['0'] * target.dim
            columns.append(Matrix.column_vector(source.field, [source.field(c) for c in coords]))
        return RingEpiPresentation(source, target, Matrix.from_columns(source.field, columns, target.dim),
                                   name=s.name)
    raise s.error(f"unknown epimorphism kind {kind!r}", 'kind')


def _pair(s: Statement, env: Environment) -> OrthogonalPair:
    kind = s.require('kind')
    if kind == 'left':
        return pair_from_epi_left(env.epis[s.require('epi')], name=s.name)
    if kind == 'right':
        return pair_from_epi_right(env.epis[s.require('epi')], name=s.name)
    if kind == 'serre':
        return serre_pair(env.algebras[s.require('algebra')], s.require('keep').split(','), name=s.name)
    if kind == 'swap':
        return swapped_pair(env.pairs[s.require('pair')], name=s.name)
    raise s.error(f"unknown pair kind {kind!r}", 'kind')


def _complex(s: Statement, env: Environment) -> BoundedComplex:
    a = env.algebras[s.require('over')]
    terms = {}
    for entry in s.require('terms').split(','):
        degree, name = entry.split(':', 1)
        terms[int(degree)] = env.modules[name]
        if env.modules[name].algebra is not a:
            raise s.error(f"{name} is not over {a.name}", 'terms')
    diffs = {}
    for entry in (s.get('maps') or '').split(','):
        if not entry:
            continue
        degree, name = entry.split(':', 1)
        i, f = int(degree), env.maps[name]
        if f.source is not terms.get(i) or f.target is not terms.get(i + 1):
            raise s.error(f"map {name} does not run from degree {i} to degree {i + 1}", 'maps')
        diffs[i] = f
    return BoundedComplex(a, terms, diffs, name=s.name)


def compile_document(doc: ProblemDocument, field_spec: Optional[str] = None) -> Environment:
    """Build every declaration; ``field_spec`` overrides the document's field."""
    spec = field_spec or doc.field_spec or config.DEFAULT_FIELD
    try:
        env = Environment(Field(spec))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    handlers = {
        'quiver': ('algebras', lambda s: _quiver(s, env.field)),
        'algebra': ('algebras', lambda s: _structure_algebra(s, env.field)),
        'module': ('modules', lambda s: _module(s, env)),
        'map': ('maps', lambda s: _map(s, env)),
        'epi': ('epis', lambda s: _epi(s, env)),
        'pair': ('pairs', lambda s: _pair(s, env)),
        'complex': ('complexes', lambda s: _complex(s, env)),
        'symbolic': ('symbolic', lambda s: SymbolicModule.parse(s.require('atoms'))),
        'primes': ('primes', lambda s: PrimeSet.parse(s.require('set'))),
    }
    for s in doc.declarations:
        if s.keyword not in handlers:
            continue
        slot, build = handlers[s.keyword]
        try:
            getattr(env, slot)[s.name] = build(s)
        except ParseError:
            raise
        except (AlgebraError, ModuleError, ComplexError, HypothesisError, PreconditionError,
                DimensionError, ValueError, KeyError) as exc:
            raise s.error(f"{s.keyword} {s.name}: {exc}") from exc
    logger.info(f"compiled document over {env.field.name}: {env.summary()}")
    return env
