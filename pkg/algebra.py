"""Finite-dimensional algebras.

An algebra is stored by its left multiplication matrices: ``left_mult[i]``
is the matrix of x ↦ b_i·x, so its column j holds the coordinates of b_i·b_j.
Quiver algebras are compiled into this form by ``compile_quiver``.

Quiver conventions: a product p·q of paths means "q first, then p", so the
projective P(i) = A·e_i is spanned by the paths starting at vertex i.
Vertices are numbered from 1 in user-facing data.
"""

import logging
import threading
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy import Poly, Symbol

import config
from linalg import (
    Field, Matrix, Subquotient, column_space, hstack, kernel_basis, rref, solve,
)

logger = logging.getLogger(__name__)

# opposite algebras are built lazily and may be requested from worker threads
_opposite_lock = threading.Lock()


class AlgebraError(ValueError):
    """Invalid algebra input or an algebra outside the supported class."""


# ---------------------------------------------------------------------------
# Quiver presentations
# ---------------------------------------------------------------------------

class Arrow(NamedTuple):
    label: str
    source: int
    target: int


class Path(NamedTuple):
    source: int
    target: int
    arrows: Tuple[str, ...]  # traversal order

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return '.'.join(reversed(self.arrows))


class Relation(NamedTuple):
    """A formal combination of parallel paths: ((coefficient text, arrows in traversal order), ...)."""
    terms: Tuple[Tuple[str, Tuple[str, ...]], ...]


@dataclass
class QuiverPresentation:
    vertices: int
    arrows: List[Arrow]
    relations: List[Relation] = dataclass_field(default_factory=list)
    name: Optional[str] = None

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise AlgebraError(f"unknown arrow {label!r}")

    def path_of(self, arrows: Sequence[str]) -> Path:
        """Validate a traversal-ordered arrow sequence and return the path."""
        if not arrows:
            raise AlgebraError("relations need paths of length at least one")
        first = self.arrow(arrows[0])
        current = first.target
        for label in arrows[1:]:
            a = self.arrow(label)
            if a.source != current:
                raise AlgebraError(f"arrows {'.'.join(reversed(arrows))} do not compose")
            current = a.target
        return Path(first.source, current, tuple(arrows))


# ---------------------------------------------------------------------------
# Structure-constant algebras
# ---------------------------------------------------------------------------

class AlgebraPresentation:
    """Associative unital algebra given by left multiplication matrices.

    ``idempotents`` (a complete set of primitive orthogonal idempotents) and
    ``radical`` are either supplied by the front end or computed on first use.
    ``cache`` memoises derived objects (projectives, resolutions of S, ...);
    every entry is a pure function of the algebra, so reuse is idempotent.
    """

    def __init__(self, field: Field, labels: Sequence[str], left_mult: Sequence[Matrix], unit: Matrix,
                 name: Optional[str] = None, generators: Optional[List[Matrix]] = None,
                 idempotents: Optional[List[Matrix]] = None, radical: Optional[Matrix] = None,
                 vertex_labels: Optional[List[str]] = None, paths: Optional[List[Path]] = None,
                 check: bool = True):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.left_mult = list(left_mult)
        self.unit = unit
        self.name = name or 'A'
        self.paths = paths
        self._generators = generators
        self._idempotents = idempotents
        self._radical = radical
        self._vertex_labels = vertex_labels
        self._opposite = None
        self._opposite_of = None
        self.cache: Dict = {}
        self._lock = threading.Lock()
        if len(self.left_mult) != self.dim:
            raise AlgebraError(f"{self.name}: {len(self.left_mult)} multiplication matrices for dimension {self.dim}")
        for L in self.left_mult:
            if L.shape != (self.dim, self.dim):
                raise AlgebraError(f"{self.name}: multiplication matrix of shape {L.shape}")
        if unit.shape != (self.dim, 1):
            raise AlgebraError(f"{self.name}: unit vector of shape {unit.shape}")
        if check:
            self.verify()

    # -- elements -----------------------------------------------------------

    def basis_vector(self, i: int) -> Matrix:
        return Matrix.unit_vector(self.field, self.dim, i)

    def zero_vector(self) -> Matrix:
        return Matrix.zeros(self.field, self.dim, 1)

    def element(self, coefficients: Sequence) -> Matrix:
        return Matrix.column_vector(self.field, [self.field(c) for c in coefficients])

    def left_matrix(self, x: Matrix) -> Matrix:
        """Matrix of y ↦ x·y."""
        result = Matrix.zeros(self.field, self.dim, self.dim)
        for k in range(self.dim):
            c = x.rows[k][0]
            if c != self.field.zero:
                result = result + self.left_mult[k].scale(c)
        return result

    def right_matrix(self, x: Matrix) -> Matrix:
        """Matrix of y ↦ y·x."""
        return Matrix.from_columns(self.field, [L @ x for L in self.left_mult], self.dim) \
            if self.dim else Matrix.zeros(self.field, 0, 0)

    def multiply(self, x: Matrix, y: Matrix) -> Matrix:
        return self.left_matrix(x) @ y

    def product(self, *xs: Matrix) -> Matrix:
        result = self.unit
        for x in xs:
            result = self.multiply(result, x)
        return result

    def is_commutative(self) -> bool:
        return all(self.left_mult[i].column(j) == self.left_mult[j].column(i)
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def verify(self):
        """Check the unit laws and associativity; raise AlgebraError on failure."""
        identity = Matrix.identity(self.field, self.dim)
        if self.left_matrix(self.unit) != identity:
            raise AlgebraError(f"{self.name}: unit does not act as identity on the left")
        if self.right_matrix(self.unit) != identity:
            raise AlgebraError(f"{self.name}: unit does not act as identity on the right")
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.left_mult[i] @ self.left_mult[j]
                rhs = self.left_matrix(self.left_mult[i].column(j))
                if lhs != rhs:
                    raise AlgebraError(
                        f"{self.name}: associativity fails for ({self.labels[i]}, {self.labels[j]}, -)")

    # -- structure ----------------------------------------------------------

    @property
    def generators(self) -> List[Matrix]:
        """Elements generating the algebra; module actions are checked against these."""
        if self._generators is None:
            self._generators = [self.basis_vector(i) for i in range(self.dim)]
        return self._generators

    @property
    def idempotents(self) -> List[Matrix]:
        if self._idempotents is None:
            if self._opposite_of is not None:
                idempotents, radical = self._opposite_of.idempotents, self._opposite_of.radical
            else:
                idempotents, radical = split_idempotents(self)
            with self._lock:
                if self._idempotents is None:
                    self._idempotents = idempotents
                    if self._radical is None:
                        self._radical = radical
                    logger.info(f"{self.name}: {len(idempotents)} primitive idempotents, "
                                f"radical of dimension {radical.ncols}")
        return self._idempotents

    @property
    def radical(self) -> Matrix:
        if self._radical is None:
            if self._opposite_of is not None:
                radical = self._opposite_of.radical
            else:
                radical = compute_radical(self)
            with self._lock:
                if self._radical is None:
                    self._radical = radical
        return self._radical

    def cached(self, key, build: Callable[[], object]):
        """Memoised ``build()`` under ``key``; concurrent fills keep the first stored value."""
        try:
            return self.cache[key]
        except KeyError:
            pass
        value = build()
        with self._lock:
            return self.cache.setdefault(key, value)

    @property
    def vertex_count(self) -> int:
        return len(self.idempotents)

    @property
    def vertex_labels(self) -> List[str]:
        if self._vertex_labels is None:
            self._vertex_labels = [str(i + 1) for i in range(self.vertex_count)]
        return self._vertex_labels

    def vertex_index(self, vertex) -> int:
        """Position of a user-facing vertex label (1-based numbers or labels)."""
        text = str(vertex)
        if text in self.vertex_labels:
            return self.vertex_labels.index(text)
        raise AlgebraError(f"{self.name}: unknown vertex {vertex!r}")

    def idempotent_sum(self, vertices: Sequence) -> Matrix:
        total = self.zero_vector()
        for v in vertices:
            total = total + self.idempotents[self.vertex_index(v)]
        return total

    def opposite(self) -> 'AlgebraPresentation':
        """The opposite algebra; op(op(A)) is A itself."""
        with _opposite_lock:
            if self._opposite is None:
                op = AlgebraPresentation(
                    self.field, self.labels, [self.right_matrix(self.basis_vector(i)) for i in range(self.dim)],
                    self.unit, name=f"{self.name}^op", generators=self._generators,
                    idempotents=self._idempotents, radical=self._radical,
                    vertex_labels=self._vertex_labels, check=False)
                op._opposite = self
                op._opposite_of = self
                self._opposite = op
        return self._opposite

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r}, dim={self.dim}, field={self.field.name})"


# ---------------------------------------------------------------------------
# Radical and idempotents for structure-constant input
# ---------------------------------------------------------------------------

def radical_by_trace_form(a: AlgebraPresentation) -> Matrix:
    """Kernel of the trace form tr(L_x L_y); the radical in characteristic 0."""
    if a.dim == 0:
        return Matrix.zeros(a.field, 0, 0)
    gram = Matrix(a.field, [[(a.left_mult[i] @ a.left_mult[j]).trace() for j in range(a.dim)]
                            for i in range(a.dim)])
    return kernel_basis(gram)


def _lifted_trace_digit(a: AlgebraPresentation, x: Matrix, exponent: int):
    """Tr(L^q) / q mod p for an integer lift L of L_x and q = p^exponent."""
    p = a.field.characteristic
    q = p ** exponent
    lift = sympy.Matrix([[int(a.field.to_sympy(c)) for c in row] for row in a.left_matrix(x).rows])
    return a.field(int((lift ** q).trace()) // q % p)


def radical_by_trace_functions(a: AlgebraPresentation) -> Matrix:
    """The radical over F_p as the last of a chain of trace-function ideals.

    The chain starts at the trace-form kernel I_0; I_i keeps the x of I_{i-1}
    with Tr(L~_{x·b}^{p^i}) / p^i = 0 mod p for every basis element b, where L~
    is an integer lift. On I_{i-1} that function is additive, so each step is a
    kernel computation. The chain stops once p^i exceeds the dimension.
    """
    p = a.field.characteristic
    current = radical_by_trace_form(a)
    exponent = 1
    while p ** exponent <= a.dim and current.ncols:
        rows = [[_lifted_trace_digit(a, a.multiply(current.column(k), a.basis_vector(j)), exponent)
                 for k in range(current.ncols)] for j in range(a.dim)]
        kept = kernel_basis(Matrix(a.field, rows, a.dim, current.ncols))
        current = current @ kept if kept.ncols else Matrix.zeros(a.field, a.dim, 0)
        logger.debug(f"{a.name}: trace-function ideal {exponent} has dimension {current.ncols}")
        exponent += 1
    return current


def compute_radical(a: AlgebraPresentation) -> Matrix:
    if a.field.characteristic:
        return radical_by_trace_functions(a)
    return radical_by_trace_form(a)


def _linear_roots(field: Field, matrix: Matrix) -> List:
    """Eigenvalues of ``matrix``; every irreducible factor of the charpoly must be linear."""
    coefficients = matrix.to_domain_matrix().charpoly()
    t = Symbol('t')
    sym = [field.to_sympy(c) for c in coefficients]
    poly = Poly(sym, t, modulus=field.characteristic) if field.characteristic else Poly(sym, t, domain='QQ')
    _, factors = poly.factor_list()
    roots = []
    for factor, _ in factors:
        if factor.degree() > 1:
            raise AlgebraError("non-split semisimple quotient: the semisimple quotient is not "
                               "a product of copies of the field")
        a1, a0 = factor.all_coeffs()
        root = field(sympy.Rational(-a0)) / field(sympy.Rational(a1))
        if root not in roots:
            roots.append(root)
    return roots


def _split_commutative_semisimple(abar: AlgebraPresentation) -> List[Matrix]:
    """Primitive idempotents of a commutative split semisimple algebra."""
    if not abar.is_commutative():
        raise AlgebraError(f"{abar.name}: non-split semisimple quotient (not a product of copies of the field)")
    field = abar.field
    idempotents = [abar.unit]
    for i in range(abar.dim):
        b = abar.basis_vector(i)
        refined = []
        for e in idempotents:
            x = abar.multiply(e, b)
            roots = _linear_roots(field, abar.left_matrix(x))
            for lam in roots:
                f = e
                for mu in roots:
                    if mu == lam:
                        continue
                    factor = (x - e.scale(mu)).scale(field.one / (lam - mu))
                    f = abar.multiply(f, factor)
                if not f.is_zero():
                    refined.append(f)
        idempotents = refined
    if len(idempotents) != abar.dim:
        raise AlgebraError(f"{abar.name}: non-split semisimple quotient")
    return idempotents


def _refine_idempotent(a: AlgebraPresentation, x: Matrix) -> Matrix:
    for _ in range(config.IDEMPOTENT_LIFT_STEPS):
        x2 = a.multiply(x, x)
        if x2 == x:
            return x
        x3 = a.multiply(x2, x)
        x = x2.scale(a.field(3)) - x3.scale(a.field(2))
    raise AlgebraError(f"{a.name}: idempotent lifting did not converge")


def split_idempotents(a: AlgebraPresentation) -> Tuple[List[Matrix], Matrix]:
    """Primitive orthogonal idempotents summing to 1, lifted from A/rad A."""
    radical = a.radical
    quotient = quotient_algebra(a, radical, name=f"{a.name}/rad", keep_structure=False)
    bar_idempotents = _split_commutative_semisimple(quotient.algebra)
    lifted = []
    remainder = a.unit
    for k, ebar in enumerate(bar_idempotents):
        if k == len(bar_idempotents) - 1:
            f = remainder
        else:
            x = quotient.section @ ebar
            x = a.product(remainder, x, remainder)
            f = _refine_idempotent(a, x)
        lifted.append(f)
        remainder = remainder - f
    return lifted, radical


# ---------------------------------------------------------------------------
# Ideals, quotients and corners
# ---------------------------------------------------------------------------

def two_sided_ideal(a: AlgebraPresentation, vectors: Matrix) -> Matrix:
    """Basis (as columns) of the two-sided ideal A·span(vectors)·A."""
    if vectors.ncols == 0 or a.dim == 0:
        return Matrix.zeros(a.field, a.dim, 0)
    left = column_space(hstack(*[L @ vectors for L in a.left_mult]))
    rights = [a.right_matrix(a.basis_vector(j)) for j in range(a.dim)]
    return column_space(hstack(*[R @ left for R in rights]))


class QuotientAlgebra(NamedTuple):
    algebra: AlgebraPresentation
    projection: Matrix   # dim(A/I) x dim(A)
    section: Matrix      # dim(A) x dim(A/I), representatives


def quotient_algebra(a: AlgebraPresentation, ideal: Matrix, name: Optional[str] = None,
                     keep_structure: bool = True) -> QuotientAlgebra:
    """A/I for a two-sided ideal given by spanning columns."""
    field = a.field
    sub = Subquotient(Matrix.identity(field, a.dim), ideal)
    reps = sub.representatives
    projection = sub.project(Matrix.identity(field, a.dim))
    left_mult = []
    for i in range(sub.dim):
        r = reps.column(i)
        left_mult.append(sub.project(a.left_matrix(r) @ reps) if sub.dim else Matrix.zeros(field, 0, 0))
    unit = sub.project(a.unit)
    labels = []
    for i in range(sub.dim):
        column = reps.column_entries(i)
        labels.append(a.labels[column.index(field.one)] if column.count(field.one) == 1
                      and column.count(field.zero) == a.dim - 1 else f"q{i}")
    idempotents = radical = vertex_labels = None
    if keep_structure and a._idempotents is not None:
        idempotents, vertex_labels = [], []
        for label, e in zip(a.vertex_labels, a._idempotents):
            image = projection @ e
            if not image.is_zero():
                idempotents.append(image)
                vertex_labels.append(label)
        radical = column_space(projection @ a.radical) if a.radical.ncols else Matrix.zeros(field, sub.dim, 0)
    quotient = AlgebraPresentation(field, labels, left_mult, unit, name=name or f"{a.name}/I",
                                   idempotents=idempotents, radical=radical,
                                   vertex_labels=vertex_labels, check=False)
    return QuotientAlgebra(quotient, projection, reps)


class CornerAlgebra(NamedTuple):
    algebra: AlgebraPresentation
    inclusion: Matrix  # dim(A) x dim(eAe)
    idempotent: Matrix


def corner_algebra(a: AlgebraPresentation, e: Matrix, name: Optional[str] = None) -> CornerAlgebra:
    """The corner eAe with unit e."""
    field = a.field
    if a.multiply(e, e) != e:
        raise AlgebraError(f"{a.name}: corner requires an idempotent")
    sandwich = a.left_matrix(e) @ a.right_matrix(e)
    basis = column_space(sandwich)
    r = basis.ncols
    left_mult = []
    for i in range(r):
        coords = solve(basis, a.left_matrix(basis.column(i)) @ basis)
        left_mult.append(coords)
    unit = solve(basis, e) if r else Matrix.zeros(field, 0, 1)
    idempotents = radical = vertex_labels = None
    if a._idempotents is not None and r:
        idempotents, vertex_labels = [], []
        for label, f in zip(a.vertex_labels, a._idempotents):
            if a.product(e, f, e) == f and not f.is_zero():
                idempotents.append(solve(basis, f))
                vertex_labels.append(label)
        radical = column_space(solve(basis, sandwich @ a.radical)) if a.radical.ncols \
            else Matrix.zeros(field, r, 0)
    labels = [f"c{i}" for i in range(r)]
    corner = AlgebraPresentation(field, labels, left_mult, unit, name=name or f"e{a.name}e",
                                 idempotents=idempotents, radical=radical,
                                 vertex_labels=vertex_labels, check=False)
    return CornerAlgebra(corner, basis, e)


def is_idempotent(a: AlgebraPresentation, e: Matrix) -> bool:
    return a.multiply(e, e) == e


# ---------------------------------------------------------------------------
# Quiver compilation
# ---------------------------------------------------------------------------

def _path_key(path: Path, rank: Dict[str, int]):
    if not path.arrows:
        return (0, (path.source,))
    return (path.length, tuple(rank[label] for label in path.arrows))


def _extend_paths(paths: List[Path], arrows: List[Arrow]) -> List[Path]:
    out = []
    for p in paths:
        for a in arrows:
            if a.source == p.target:
                out.append(Path(p.source, a.target, p.arrows + (a.label,)))
    return out


def _graded_normal_forms(q: QuiverPresentation, relations, field: Field, rank: Dict[str, int], cap: int):
    """Layer-by-layer reduction for homogeneous relations; returns (normal forms, reductions)."""
    layers: List[List[Path]] = [[Path(v, v, ()) for v in range(1, q.vertices + 1)]]
    standard: List[List[Path]] = [list(layers[0])]
    reductions: Dict[Path, Dict[Path, object]] = {}
    length = 0
    while True:
        length += 1
        paths = sorted(_extend_paths(layers[-1], q.arrows), key=lambda p: _path_key(p, rank))
        layers.append(paths)
        if not paths:
            break
        if length > cap:
            raise AlgebraError(f"{q.name or 'quiver'}: not finite-dimensional at cap {cap}")
        order = list(reversed(paths))  # largest first
        position = {p: i for i, p in enumerate(order)}
        rows = []
        for terms in relations:
            rlen = terms[0][1].length
            if rlen > length:
                continue
            src, tgt = terms[0][1].source, terms[0][1].target
            for j in range(length - rlen + 1):
                befores = [p for p in layers[j] if p.target == src]
                afters = [p for p in layers[length - rlen - j] if p.source == tgt]
                for v in befores:
                    for u in afters:
                        row = [field.zero] * len(order)
                        for c, path in terms:
                            joined = Path(v.source, u.target, v.arrows + path.arrows + u.arrows)
                            row[position[joined]] = row[position[joined]] + c
                        rows.append(row)
        normal = _reduce_rows(field, rows, order, reductions)
        normal.sort(key=lambda p: _path_key(p, rank))
        if not normal:
            break
        standard.append(normal)
    return [p for layer in standard for p in layer], reductions


def _truncated_normal_forms(q: QuiverPresentation, relations, field: Field, rank: Dict[str, int], cap: int):
    """Reduction of all paths up to the cap at once, for relations mixing path lengths.

    Rows are the products v·r·u of a relation with paths whose terms all stay
    within the cap; a normal form reaching the cap means the quotient did not
    close up below it.
    """
    layers: List[List[Path]] = [[Path(v, v, ()) for v in range(1, q.vertices + 1)]]
    while len(layers) <= cap + 1:
        paths = _extend_paths(layers[-1], q.arrows)
        if not paths:
            break
        layers.append(paths)
    beyond_cap = len(layers) > cap + 1
    layers = layers[:cap + 1]
    order = sorted((p for layer in layers for p in layer), key=lambda p: _path_key(p, rank), reverse=True)
    position = {p: i for i, p in enumerate(order)}
    rows = []
    for terms in relations:
        longest = max(p.length for _, p in terms)
        src, tgt = terms[0][1].source, terms[0][1].target
        room = cap - longest
        befores = [p for layer in layers[:room + 1] for p in layer if p.target == src]
        for v in befores:
            afters = [p for layer in layers[:room - v.length + 1] for p in layer if p.source == tgt]
            for u in afters:
                row = [field.zero] * len(order)
                for c, path in terms:
                    joined = Path(v.source, u.target, v.arrows + path.arrows + u.arrows)
                    row[position[joined]] = row[position[joined]] + c
                rows.append(row)
    reductions: Dict[Path, Dict[Path, object]] = {}
    normal = _reduce_rows(field, rows, order, reductions)
    if beyond_cap and any(p.length == cap for p in normal):
        raise AlgebraError(f"{q.name or 'quiver'}: not finite-dimensional at cap {cap}")
    normal.sort(key=lambda p: _path_key(p, rank))
    return normal, reductions


def _reduce_rows(field: Field, rows, order: List[Path], reductions: Dict[Path, Dict[Path, object]]) -> List[Path]:
    """Row reduce relation rows over ``order`` (largest first); pivots get reductions, the rest are normal."""
    if rows:
        reduced, pivots, _ = rref(Matrix(field, rows, len(rows), len(order)))
    else:
        reduced, pivots = None, ()
    for i, pcol in enumerate(pivots):
        reductions[order[pcol]] = {order[j]: -reduced.rows[i][j]
                                   for j in range(len(order)) if j not in pivots
                                   and reduced.rows[i][j] != field.zero}
    return [order[j] for j in range(len(order)) if j not in pivots]


def _is_nilpotent(a: AlgebraPresentation, ideal: Matrix) -> bool:
    power = ideal
    while power.ncols:
        products = [a.multiply(power.column(i), ideal.column(j))
                    for i in range(power.ncols) for j in range(ideal.ncols)]
        following = column_space(hstack(*products))
        if following.ncols == power.ncols:
            return False
        power = following
    return True


def compile_quiver(q: QuiverPresentation, field: Field, path_length_cap: Optional[int] = None) -> AlgebraPresentation:
    """Path algebra of a quiver modulo relations, reduced to normal-form paths.

    Paths are ordered largest-first (length, then arrow-label order) and the
    relation ideal is row reduced; the non-pivot paths are the normal forms.
    Homogeneous relations are reduced one length at a time. Relations mixing
    lengths are reduced over every path up to the cap, and when the arrows
    no longer generate a nilpotent ideal the vertices and radical are
    recomputed from the structure constants.
    """
    cap = config.PATH_LENGTH_CAP if path_length_cap is None else path_length_cap
    labels_seen = set()
    for a in q.arrows:
        if a.label in labels_seen:
            raise AlgebraError(f"duplicate arrow label {a.label!r}")
        if not (1 <= a.source <= q.vertices and 1 <= a.target <= q.vertices):
            raise AlgebraError(f"arrow {a.label!r} uses a vertex outside 1..{q.vertices}")
        labels_seen.add(a.label)
    rank = {label: i for i, label in enumerate(sorted(labels_seen))}

    relations = []
    for rel in q.relations:
        terms = []
        for coefficient, arrows in rel.terms:
            path = q.path_of(arrows)
            terms.append((field(coefficient), path))
        if not terms:
            continue
        shape = {(p.source, p.target) for _, p in terms}
        if len(shape) != 1:
            raise AlgebraError("relation paths must be parallel")
        relations.append(terms)

    homogeneous = all(len({p.length for _, p in terms}) == 1 for terms in relations)
    if homogeneous:
        basis, reductions = _graded_normal_forms(q, relations, field, rank, cap)
    else:
        basis, reductions = _truncated_normal_forms(q, relations, field, rank, cap)
    index = {p: i for i, p in enumerate(basis)}
    max_length = max(p.length for p in basis)
    dim = len(basis)

    def reduce(path: Path) -> Matrix:
        entries = [field.zero] * dim
        if path in index:
            entries[index[path]] = field.one
        elif path in reductions:
            for target, c in reductions[path].items():
                entries[index[target]] = entries[index[target]] + c
        elif not homogeneous:
            raise AlgebraError(f"{q.name or 'quiver'}: product {path.label} lies beyond cap {cap}")
        return Matrix.column_vector(field, entries)

    left_mult = []
    for p in basis:
        columns = []
        for r in basis:
            if r.target != p.source:
                columns.append(Matrix.zeros(field, dim, 1))
            else:
                columns.append(reduce(Path(r.source, p.target, r.arrows + p.arrows)))
        left_mult.append(Matrix.from_columns(field, columns, dim))

    idempotents = [Matrix.unit_vector(field, dim, index[Path(v, v, ())]) for v in range(1, q.vertices + 1)]
    unit = Matrix.zeros(field, dim, 1)
    for e in idempotents:
        unit = unit + e
    radical_cols = [Matrix.unit_vector(field, dim, i) for i, p in enumerate(basis) if p.length > 0]
    radical = Matrix.from_columns(field, radical_cols, dim)
    generators = idempotents + [reduce(Path(a.source, a.target, (a.label,))) for a in q.arrows]
    vertex_labels = [str(v) for v in range(1, q.vertices + 1)]
    if not homogeneous and radical.ncols:
        untagged = AlgebraPresentation(field, [p.label for p in basis], left_mult, unit, check=False)
        if not _is_nilpotent(untagged, radical):
            logger.info(f"{q.name or 'quiver'}: arrows generate a non-nilpotent ideal, "
                        f"vertices recomputed from structure constants")
            idempotents = radical = vertex_labels = None
    algebra = AlgebraPresentation(field, [p.label for p in basis], left_mult, unit,
                                  name=q.name or 'kQ/I', generators=generators,
                                  idempotents=idempotents, radical=radical,
                                  vertex_labels=vertex_labels, paths=basis)
    logger.info(f"compiled quiver {algebra.name}: dimension {dim}, normal forms up to length {max_length}")
    return algebra


def structure_constant_algebra(field: Field, labels: Sequence[str], products: Dict[Tuple[int, int], Sequence],
                               unit: Sequence, name: Optional[str] = None) -> AlgebraPresentation:
    """Algebra from a table products[(i, j)] = coordinates of b_i·b_j (missing entries are zero)."""
    dim = len(labels)
    left_mult = []
    for i in range(dim):
        columns = []
        for j in range(dim):
            coords = products.get((i, j))
            columns.append(Matrix.column_vector(field, [field(c) for c in coords]) if coords is not None
                           else Matrix.zeros(field, dim, 1))
        left_mult.append(Matrix.from_columns(field, columns, dim))
    return AlgebraPresentation(field, labels, left_mult, Matrix.column_vector(field, [field(c) for c in unit]),
                               name=name)
