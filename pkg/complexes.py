"""Bounded cochain complexes of finite-dimensional modules.

Complexes are stored trimmed: only non-zero terms are kept, and two
complexes are equal when they agree degreewise after trimming. Derived Hom
is computed as chain maps modulo homotopy from a projective replacement of
the source, cut off below the lowest degree that can still reach the
target.
"""

import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from algebra import AlgebraPresentation
from linalg import Matrix, Subquotient, block_matrix, hstack, kernel_basis, rref, solve, vstack
from modules import (
    FdModule, HomBasis, ModuleError, ModuleMap, direct_sum, dual_module, hom_space, map_from_generators, quotient_module, submodule, subquotient_module, top_generators,
    zero_map, zero_module,
)

logger = logging.getLogger(__name__)


class ComplexError(ValueError):
    """A differential squares to a non-zero map or a chain map does not commute."""


class BoundedComplex:
    """X^lo -> ... -> X^hi with ``differentials[i]`` the map d^i: X^i -> X^{i+1}."""

    def __init__(self, algebra: AlgebraPresentation, terms: Dict[int, FdModule],
                 differentials: Optional[Dict[int, ModuleMap]] = None, name: Optional[str] = None,
                 check: bool = True):
        self.algebra = algebra
        self.name = name
        self.terms = {i: m for i, m in sorted(terms.items()) if m.dim}
        for m in self.terms.values():
            if m.algebra is not algebra:
                raise ModuleError(f"term {m.label()} is not over {algebra.name}")
        self.differentials = {}
        for i, d in sorted((differentials or {}).items()):
            if i in self.terms and i + 1 in self.terms:
                if d.source is not self.terms[i] or d.target is not self.terms[i + 1]:
                    d = ModuleMap(self.terms[i], self.terms[i + 1], d.matrix)
                if not d.is_zero():
                    self.differentials[i] = d
        if check:
            self.verify()

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, i: int) -> FdModule:
        return self.terms.get(i) or zero_module(self.algebra)

    def differential(self, i: int) -> ModuleMap:
        if i in self.differentials:
            return self.differentials[i]
        return zero_map(self.term(i), self.term(i + 1))

    def verify(self):
        for i, d in self.differentials.items():
            d.verify()
            following = self.differentials.get(i + 1)
            if following is not None and not (following.matrix @ d.matrix).is_zero():
                raise ComplexError(f"d^{i + 1} ∘ d^{i} ≠ 0 in {self.label()}")

    def equals(self, other: 'BoundedComplex') -> bool:
        if self.algebra is not other.algebra or sorted(self.terms) != sorted(other.terms):
            return False
        for i, m in self.terms.items():
            if m.actions != other.terms[i].actions:
                return False
        return all(self.differential(i).matrix == other.differential(i).matrix for i in self.terms)

    def dimensions(self) -> Dict[int, int]:
        return {i: m.dim for i, m in self.terms.items()}

    def label(self) -> str:
        return self.name or f"complex[{self.lo},{self.hi}]"

    def __repr__(self):
        return f"BoundedComplex({self.label()!r}, dims={self.dimensions()})"


def zero_complex(algebra: AlgebraPresentation) -> BoundedComplex:
    return BoundedComplex(algebra, {}, name='0')


def stalk(m: FdModule, degree: int = 0) -> BoundedComplex:
    """M concentrated in one degree."""
    return BoundedComplex(m.algebra, {degree: m}, name=f"{m.label()}[{-degree}]" if degree else m.label())


def two_term(f: ModuleMap, degree: int = -1, name: Optional[str] = None) -> BoundedComplex:
    """The complex source -> target with the source in ``degree``."""
    return BoundedComplex(f.source.algebra, {degree: f.source, degree + 1: f.target}, {degree: f}, name=name)


class ChainMap:
    """Degreewise module maps f^i: A^i -> B^i commuting with the differentials."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex, components: Dict[int, ModuleMap],
                 check: bool = True):
        self.source = source
        self.target = target
        self.components = {}
        for i, f in components.items():
            if i in source.terms and i in target.terms:
                self.components[i] = ModuleMap(source.terms[i], target.terms[i], f.matrix)
        if check:
            self.verify()

    @property
    def degrees(self) -> List[int]:
        return sorted(set(self.source.terms) | set(self.target.terms))

    def component(self, i: int) -> ModuleMap:
        if i in self.components:
            return self.components[i]
        return zero_map(self.source.term(i), self.target.term(i))

    def verify(self):
        for f in self.components.values():
            f.verify()
        for i in range(min(self.degrees, default=0) - 1, max(self.degrees, default=-1) + 1):
            left = self.target.differential(i).matrix @ self.component(i).matrix
            right = self.component(i + 1).matrix @ self.source.differential(i).matrix
            if left != right:
                raise ComplexError(f"chain map does not commute with the differentials in degree {i}")

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components.values())

    def __repr__(self):
        return f"ChainMap({self.source.label()} -> {self.target.label()})"


def identity_chain(x: BoundedComplex) -> ChainMap:
    return ChainMap(x, x, {i: ModuleMap(m, m, Matrix.identity(m.field, m.dim)) for i, m in x.terms.items()})


def compose_chain(g: ChainMap, f: ChainMap) -> ChainMap:
    """g ∘ f."""
    components = {}
    for i in f.source.terms:
        components[i] = ModuleMap(f.source.term(i), g.target.term(i), g.component(i).matrix @ f.component(i).matrix)
    return ChainMap(f.source, g.target, components)


def stalk_map(f: ModuleMap, degree: int = 0) -> ChainMap:
    return ChainMap(stalk(f.source, degree), stalk(f.target, degree), {degree: f})


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------

class Cohomology(NamedTuple):
    module: FdModule
    subquotient: Subquotient    # cycles / boundaries in coordinates of X^n


def cohomology_data(x: BoundedComplex, n: int) -> Cohomology:
    term = x.term(n)
    field = x.algebra.field
    if term.dim == 0:
        return Cohomology(zero_module(x.algebra), Subquotient(Matrix.zeros(field, 0, 0), Matrix.zeros(field, 0, 0)))
    cycles = kernel_basis(x.differential(n).matrix)
    boundaries = x.differential(n - 1).matrix
    module, sub = subquotient_module(term, cycles, boundaries, name=f"H^{n}({x.label()})")
    return Cohomology(module, sub)


def cohomology(x: BoundedComplex, n: int) -> FdModule:
    """H^n(X) = ker d^n / im d^{n-1} with the induced action."""
    return cohomology_data(x, n).module


def cohomology_dimensions(x: BoundedComplex) -> Dict[int, int]:
    return {n: cohomology(x, n).dim for n in x.degrees}


def is_exact(x: BoundedComplex) -> bool:
    return all(cohomology(x, n).dim == 0 for n in x.degrees)


def induced_map(f: ChainMap, n: int) -> ModuleMap:
    """H^n(f): H^n(A) -> H^n(B)."""
    source = cohomology_data(f.source, n)
    target = cohomology_data(f.target, n)
    field = f.source.algebra.field
    if source.module.dim == 0 or target.module.dim == 0:
        return ModuleMap(source.module, target.module, Matrix.zeros(field, target.module.dim, source.module.dim))
    images = f.component(n).matrix @ source.subquotient.representatives
    return ModuleMap(source.module, target.module, target.subquotient.project(images))


# ---------------------------------------------------------------------------
# Shifts and cones
# ---------------------------------------------------------------------------

def shift(x: BoundedComplex, n: int) -> BoundedComplex:
    """(X[n])^i = X^{n+i} with differential (-1)^n d^{n+i}."""
    if n == 0:
        return x
    sign = -1 if n % 2 else 1
    terms = {i - n: m for i, m in x.terms.items()}
    diffs = {i - n: d.scale(x.algebra.field(sign)) for i, d in x.differentials.items()}
    name = f"{x.label()}[{n}]"
    return BoundedComplex(x.algebra, terms, diffs, name=name, check=False)


def shift_map(f: ChainMap, n: int, source: Optional[BoundedComplex] = None,
              target: Optional[BoundedComplex] = None) -> ChainMap:
    source = source or shift(f.source, n)
    target = target or shift(f.target, n)
    return ChainMap(source, target, {i - n: g for i, g in f.components.items()})


class Triangle(NamedTuple):
    """A -f-> B -g-> C -h-> A[1] with C the mapping cone of f."""
    a: BoundedComplex
    b: BoundedComplex
    c: BoundedComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap


def cone(f: ChainMap, name: Optional[str] = None) -> Triangle:
    """C^i = B^i ⊕ A^{i+1}, d_C = [[d_B, f^{i+1}], [0, -d_A^{i+1}]]."""
    a, b = f.source, f.target
    algebra = a.algebra
    field = algebra.field
    support = set(b.terms) | {i - 1 for i in a.terms}
    lo, hi = (min(support), max(support)) if support else (0, -1)
    sums = {i: direct_sum([b.term(i), a.term(i + 1)], algebra=algebra) for i in range(lo, hi + 1)}
    terms = {i: s.module for i, s in sums.items()}
    diffs = {}
    for i in range(lo, hi):
        d_b = b.differential(i).matrix
        d_a = a.differential(i + 1).matrix
        f_next = f.component(i + 1).matrix
        zero = Matrix.zeros(field, a.term(i + 2).dim, b.term(i).dim)
        matrix = block_matrix(field, [[d_b, f_next], [zero, -d_a]])
        diffs[i] = ModuleMap(terms[i], terms[i + 1], matrix)
    c = BoundedComplex(algebra, terms, diffs, name=name or f"Cone({a.label()}->{b.label()})")
    a_shift = shift(a, 1)
    g = ChainMap(b, c, {i: ModuleMap(b.term(i), terms[i], sums[i].injections[0].matrix) for i in b.terms})
    h = ChainMap(c, a_shift, {i: ModuleMap(terms[i], a.term(i + 1), sums[i].projections[1].matrix)
                              for i in c.terms if a.term(i + 1).dim})
    return Triangle(a, b, c, f, g, h)


def is_quasi_isomorphism(f: ChainMap) -> bool:
    return is_exact(cone(f).c)


# ---------------------------------------------------------------------------
# Replacements
# ---------------------------------------------------------------------------

class Replacement(NamedTuple):
    complex: BoundedComplex
    map: ChainMap          # P -> X for projective, X -> I for injective
    complete: bool         # True when no term was cut off


def projective_replacement(x: BoundedComplex, lowest: int) -> Replacement:
    """Complex of projectives P with P^i = 0 for i < lowest and q: P -> X whose cone is exact in degrees >= lowest.

    Built from the top degree down: at degree i the cycles of the partial
    cone modulo d_X(X^{i-1}) are covered by projectives.
    """
    algebra = x.algebra
    field = algebra.field
    p_terms: Dict[int, FdModule] = {}
    p_diffs: Dict[int, ModuleMap] = {}
    q_maps: Dict[int, ModuleMap] = {}
    complete = False
    top = x.hi
    for i in range(top, lowest - 1, -1):
        x_i = x.term(i)
        p_next = p_terms.get(i + 1, zero_module(algebra))
        summed = direct_sum([x_i, p_next], algebra=algebra)
        cone_term = summed.module
        # d_C^i on X^i ⊕ P^{i+1}
        x_next, p_next2 = x.term(i + 1), p_terms.get(i + 2, zero_module(algebra))
        q_next = q_maps[i + 1].matrix if i + 1 in q_maps else Matrix.zeros(field, x_next.dim, p_next.dim)
        dp_next = p_diffs[i + 1].matrix if i + 1 in p_diffs else Matrix.zeros(field, p_next2.dim, p_next.dim)
        d_cone = block_matrix(field, [[x.differential(i).matrix, q_next],
                                      [Matrix.zeros(field, p_next2.dim, x_i.dim), -dp_next]])
        if cone_term.dim == 0:
            if i < x.lo:
                complete = True
                break
            continue
        cycles_module, cycles = submodule(cone_term, kernel_basis(d_cone))
        incoming = vstack(x.differential(i - 1).matrix, Matrix.zeros(field, p_next.dim, x.term(i - 1).dim))
        coords = solve(cycles.matrix, incoming) if incoming.ncols else Matrix.zeros(field, cycles_module.dim, 0)
        quotient = quotient_module(cycles_module, coords)
        generators = []
        for v, vector in top_generators(quotient.module):
            lifted = cycles_module.act(algebra.idempotents[v]) @ quotient.subquotient.lift(vector)
            generators.append((v, lifted))
        if not generators:
            if i < x.lo:
                complete = True
                break
            continue
        cover = map_from_generators(cycles_module, generators, name=f"P^{i}")
        phi = cycles.matrix @ cover.map.matrix
        p_terms[i] = cover.module
        q_maps[i] = ModuleMap(cover.module, x_i, phi.select_rows(range(x_i.dim)))
        if p_next.dim:
            p_diffs[i] = ModuleMap(cover.module, p_next, -phi.select_rows(range(x_i.dim, x_i.dim + p_next.dim)))
    p = BoundedComplex(algebra, p_terms, p_diffs, name=f"P({x.label()})")
    q = ChainMap(p, x, q_maps)
    logger.debug(f"projective replacement of {x.label()} down to {lowest}: dims {p.dimensions()}, complete={complete}")
    return Replacement(p, q, complete)


def dual_complex(x: BoundedComplex) -> BoundedComplex:
    """D(X)^i = D(X^{-i}) over the opposite algebra."""
    op = x.algebra.opposite()
    terms = {-i: dual_module(m) for i, m in x.terms.items()}
    diffs = {}
    for i, d in x.differentials.items():
        diffs[-i - 1] = ModuleMap(terms[-i - 1], terms[-i], d.matrix.T)
    return BoundedComplex(op, terms, diffs, name=f"D({x.label()})", check=False)


def injective_replacement(x: BoundedComplex, highest: Optional[int] = None) -> Replacement:
    """Quasi-isomorphism X -> I with I^i injective for i < highest and I^highest a quotient of an injective.

    Dual of a projective replacement of D(X) whose bottom term is replaced by
    the image of its differential.
    """
    highest = x.hi + 1 if highest is None else highest
    if highest <= x.hi:
        raise ComplexError("injective replacement must reach past the top degree")
    algebra = x.algebra
    dx = dual_complex(x)
    rep = projective_replacement(dx, -highest)
    p = rep.complex
    lowest = -highest
    terms = dict(p.terms)
    diffs = dict(p.differentials)
    if lowest in terms:
        d_low = p.differential(lowest)
        im_module, inclusion = submodule(p.term(lowest + 1), d_low.matrix)
        terms[lowest] = im_module
        diffs.pop(lowest, None)
        if im_module.dim:
            diffs[lowest] = ModuleMap(im_module, p.term(lowest + 1), inclusion.matrix)
    truncated = BoundedComplex(p.algebra, terms, diffs, check=False)
    i_terms = {-j: dual_module(m, name=f"I^{-j}") for j, m in truncated.terms.items()}
    i_diffs = {}
    for j, d in truncated.differentials.items():
        i_diffs[-j - 1] = ModuleMap(i_terms[-j - 1], i_terms[-j], d.matrix.T)
    i_complex = BoundedComplex(algebra, i_terms, i_diffs, name=f"I({x.label()})")
    components = {}
    for i in x.terms:
        if i in i_complex.terms:
            components[i] = ModuleMap(x.term(i), i_complex.term(i), rep.map.component(-i).matrix.T)
    return Replacement(i_complex, ChainMap(x, i_complex, components), True)


# ---------------------------------------------------------------------------
# Derived Hom
# ---------------------------------------------------------------------------

def _hom_blocks(p: BoundedComplex, y: BoundedComplex, k: int) -> List[Tuple[int, HomBasis]]:
    """Components Hom(P^j, Y^{j+k}) of the total Hom complex in degree k."""
    if y.is_zero():
        return []
    return [(j, hom_space(p.term(j), y.term(j + k))) for j in range(y.lo - k, y.hi - k + 1)]


def _hom_differential(p: BoundedComplex, y: BoundedComplex, k: int,
                      source: List[Tuple[int, HomBasis]], target: List[Tuple[int, HomBasis]]) -> Matrix:
    """D(φ)^j = d_Y φ^j - (-1)^k φ^{j+1} d_P^j as a matrix in the block bases."""
    field = p.algebra.field
    sign = field(-1 if k % 2 else 1)
    target_dim = sum(b.dim for _, b in target)
    columns = []
    for j, basis in source:
        for phi in basis.maps:
            pieces = []
            for t, tb in target:
                if tb.dim == 0:
                    continue
                if t == j:
                    value = y.differential(j + k).matrix @ phi.matrix
                elif t == j - 1:
                    value = (phi.matrix @ p.differential(j - 1).matrix).scale(-sign)
                else:
                    pieces.append(Matrix.zeros(field, tb.dim, 1))
                    continue
                pieces.append(tb.coordinates(value))
            columns.append(vstack(*pieces) if pieces else Matrix.zeros(field, 0, 1))
    if not columns:
        return Matrix.zeros(field, target_dim, 0)
    return hstack(*columns)


def derived_hom(x: BoundedComplex, y: BoundedComplex, n: int) -> int:
    """dim Hom_{D^b}(X, Y[n]): chain maps P -> Y[n] modulo homotopy."""
    if x.algebra is not y.algebra:
        raise ModuleError("algebra mismatch in derived Hom")
    if x.is_zero() or y.is_zero() or n < y.lo - x.hi:
        return 0
    lowest = y.lo - n - 1
    p = projective_replacement(x, lowest).complex
    degree_n = _hom_blocks(p, y, n)
    degree_next = _hom_blocks(p, y, n + 1)
    degree_prev = _hom_blocks(p, y, n - 1)
    dim_n = sum(b.dim for _, b in degree_n)
    if dim_n == 0:
        return 0
    outgoing = _hom_differential(p, y, n, degree_n, degree_next)
    incoming = _hom_differential(p, y, n - 1, degree_prev, degree_n)
    out_rank = rref(outgoing).rank if outgoing.nrows else 0
    in_rank = rref(incoming).rank if incoming.ncols else 0
    return dim_n - out_rank - in_rank


# ---------------------------------------------------------------------------
# Cohomology-wise membership
# ---------------------------------------------------------------------------

class DbxMembership(NamedTuple):
    holds: bool
    failing_degrees: List[int]


def membership_in_dbx(x: BoundedComplex, predicate: Callable[[FdModule], object]) -> DbxMembership:
    """X lies in D^b_𝒳 iff every cohomology module satisfies the predicate."""
    failing = []
    for n in x.degrees:
        h = cohomology(x, n)
        if h.dim == 0:
            continue
        result = predicate(h)
        if not getattr(result, 'holds', result):
            failing.append(n)
    return DbxMembership(not failing, failing)
