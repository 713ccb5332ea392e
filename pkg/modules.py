"""Finite-dimensional modules, module maps and the constructions built on them.

A left module is a tuple of action matrices, one per basis element of its
algebra. Right modules are left modules over the opposite algebra, and
k-duality swaps the two (``dual_module``). Bimodules carry a left module
together with right action matrices; tensor products and Hom modules over
them give the functors S⊗_R - and Hom_R(S, -).
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

import config
from algebra import AlgebraPresentation
from linalg import (
    Matrix, Subquotient, block_diagonal, column_space, hstack, kernel_basis, kron,
    rref, solve, vstack,
)

logger = logging.getLogger(__name__)


class ModuleError(ValueError):
    """Invalid module data or a map that does not intertwine."""


class FdModule:
    """A finite-dimensional left module over ``algebra``."""

    def __init__(self, algebra: AlgebraPresentation, actions: Sequence[Matrix], name: Optional[str] = None,
                 dim: Optional[int] = None, check: bool = False):
        self.algebra = algebra
        self.actions = tuple(actions)
        if len(self.actions) != algebra.dim:
            raise ModuleError(f"{len(self.actions)} action matrices for an algebra of dimension {algebra.dim}")
        self.dim = self.actions[0].nrows if self.actions else (dim or 0)
        self.name = name
        self._generator_actions = None
        self._dimension_vector = None
        for A in self.actions:
            if A.shape != (self.dim, self.dim):
                raise ModuleError(f"action matrix of shape {A.shape} on a module of dimension {self.dim}")
        if check:
            self.verify()

    @property
    def field(self):
        return self.algebra.field

    def act(self, x: Matrix) -> Matrix:
        """Matrix of the action of the algebra element with coordinates x."""
        result = Matrix.zeros(self.field, self.dim, self.dim)
        for k in range(self.algebra.dim):
            c = x.rows[k][0]
            if c != self.field.zero:
                result = result + self.actions[k].scale(c)
        return result

    @property
    def generator_actions(self) -> List[Matrix]:
        if self._generator_actions is None:
            self._generator_actions = [self.act(g) for g in self.algebra.generators]
        return self._generator_actions

    def verify(self):
        a = self.algebra
        if self.act(a.unit) != Matrix.identity(self.field, self.dim):
            raise ModuleError(f"{self.label()}: unit does not act as identity")
        for i in range(a.dim):
            for j in range(a.dim):
                if self.actions[i] @ self.actions[j] != self.act(a.left_mult[i].column(j)):
                    raise ModuleError(f"{self.label()}: action does not respect {a.labels[i]}*{a.labels[j]}")

    def dimension_vector(self) -> Tuple[int, ...]:
        if self._dimension_vector is None:
            self._dimension_vector = tuple(self.act(e).rank() for e in self.algebra.idempotents)
        return self._dimension_vector

    def signature(self) -> Tuple:
        """Cheap isomorphism invariant used before any isomorphism search."""
        return (self.dim, self.dimension_vector())

    def is_zero(self) -> bool:
        return self.dim == 0

    def label(self) -> str:
        return self.name or f"module(dim={self.dim})"

    def __repr__(self):
        return f"FdModule({self.label()!r} over {self.algebra.name}, dim={self.dim})"


class ModuleMap:
    """A linear map source -> target given by a (target.dim x source.dim) matrix."""

    def __init__(self, source: FdModule, target: FdModule, matrix: Matrix, check: bool = False):
        if matrix.shape != (target.dim, source.dim):
            raise ModuleError(f"map matrix {matrix.shape} does not fit {source.dim} -> {target.dim}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self.verify()

    def verify(self):
        if self.source.algebra is not self.target.algebra:
            raise ModuleError("map between modules over different algebras")
        for A, B in zip(self.source.generator_actions, self.target.generator_actions):
            if self.matrix @ A != B @ self.matrix:
                raise ModuleError(f"map {self.source.label()} -> {self.target.label()} does not intertwine")

    def rank(self) -> int:
        return self.matrix.rank()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def __add__(self, other: 'ModuleMap') -> 'ModuleMap':
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: 'ModuleMap') -> 'ModuleMap':
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> 'ModuleMap':
        return ModuleMap(self.source, self.target, -self.matrix)

    def scale(self, c) -> 'ModuleMap':
        return ModuleMap(self.source, self.target, self.matrix.scale(c))

    def __repr__(self):
        return f"ModuleMap({self.source.label()} -> {self.target.label()}, rank={self.rank()})"


def _same_algebra(m: FdModule, n: FdModule):
    if m.algebra is not n.algebra:
        raise ModuleError(f"algebra mismatch: {m.algebra.name} vs {n.algebra.name}")


# ---------------------------------------------------------------------------
# Basic modules and maps
# ---------------------------------------------------------------------------

def zero_module(algebra: AlgebraPresentation) -> FdModule:
    return algebra.cached('zero_module',
                          lambda: FdModule(algebra, [Matrix.zeros(algebra.field, 0, 0)] * algebra.dim, name='0'))


def regular_module(algebra: AlgebraPresentation) -> FdModule:
    return algebra.cached('regular_module', lambda: FdModule(algebra, algebra.left_mult, name=algebra.name))


def identity_map(m: FdModule) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.field, m.dim))


def zero_map(m: FdModule, n: FdModule) -> ModuleMap:
    return ModuleMap(m, n, Matrix.zeros(m.field, n.dim, m.dim))


def compose(*maps: ModuleMap) -> ModuleMap:
    """compose(g, f) = g ∘ f; accepts any number of maps, applied right to left."""
    result = maps[-1]
    for g in reversed(maps[:-1]):
        if g.source.dim != result.target.dim:
            raise ModuleError(f"cannot compose {result} with {g}")
        result = ModuleMap(result.source, g.target, g.matrix @ result.matrix)
    return result


def submodule(m: FdModule, columns: Matrix, name: Optional[str] = None) -> Tuple[FdModule, ModuleMap]:
    """The submodule spanned by ``columns`` (must be invariant) and its inclusion."""
    basis = column_space(columns) if columns.ncols else Matrix.zeros(m.field, m.dim, 0)
    if basis.ncols == 0:
        sub = zero_module(m.algebra)
        return sub, ModuleMap(sub, m, basis)
    actions = []
    for A in m.actions:
        coords = solve(basis, A @ basis)
        if coords is None:
            raise ModuleError(f"subspace of {m.label()} is not a submodule")
        actions.append(coords)
    sub = FdModule(m.algebra, actions, name=name)
    return sub, ModuleMap(sub, m, basis)


class Quotient(NamedTuple):
    module: FdModule
    projection: ModuleMap
    subquotient: Subquotient


def quotient_module(m: FdModule, columns: Matrix, name: Optional[str] = None) -> Quotient:
    """M / span(columns) together with the projection."""
    sub = Subquotient(Matrix.identity(m.field, m.dim), columns)
    if sub.dim == 0:
        q = zero_module(m.algebra)
    else:
        q = FdModule(m.algebra, [sub.project(A @ sub.representatives) for A in m.actions], name=name)
    projection = sub.project(Matrix.identity(m.field, m.dim)) if m.dim else Matrix.zeros(m.field, 0, 0)
    return Quotient(q, ModuleMap(m, q, projection), sub)


def subquotient_module(m: FdModule, top: Matrix, bottom: Matrix, name: Optional[str] = None) -> Tuple[FdModule, Subquotient]:
    """span(top)/span(bottom) for submodules bottom ⊆ top of M."""
    sub = Subquotient(top, bottom)
    if sub.dim == 0:
        return zero_module(m.algebra), sub
    actions = [sub.project(A @ sub.representatives) for A in m.actions]
    return FdModule(m.algebra, actions, name=name), sub


def kernel(f: ModuleMap) -> Tuple[FdModule, ModuleMap]:
    return submodule(f.source, kernel_basis(f.matrix))


class Image(NamedTuple):
    module: FdModule
    inclusion: ModuleMap
    corestriction: ModuleMap


def image(f: ModuleMap) -> Image:
    im, inclusion = submodule(f.target, f.matrix)
    coords = solve(inclusion.matrix, f.matrix)
    return Image(im, inclusion, ModuleMap(f.source, im, coords))


def cokernel(f: ModuleMap) -> Tuple[FdModule, ModuleMap]:
    q = quotient_module(f.target, f.matrix)
    return q.module, q.projection


class DirectSum(NamedTuple):
    module: FdModule
    injections: List[ModuleMap]
    projections: List[ModuleMap]


def direct_sum(modules: Sequence[FdModule], algebra: Optional[AlgebraPresentation] = None,
               name: Optional[str] = None) -> DirectSum:
    if not modules:
        z = zero_module(algebra)
        return DirectSum(z, [], [])
    a = modules[0].algebra
    for m in modules:
        _same_algebra(m, modules[0])
    if len(modules) == 1 and name is None:
        m = modules[0]
        return DirectSum(m, [identity_map(m)], [identity_map(m)])
    field = a.field
    total = sum(m.dim for m in modules)
    actions = [block_diagonal(field, [m.actions[i] for m in modules]) for i in range(a.dim)]
    s = FdModule(a, actions, name=name, dim=total) if total else zero_module(a)
    injections, projections = [], []
    offset = 0
    for m in modules:
        inj = Matrix.zeros(field, total, m.dim)
        rows = [list(r) for r in inj.rows]
        for i in range(m.dim):
            rows[offset + i][i] = field.one
        inj = Matrix(field, rows, total, m.dim)
        injections.append(ModuleMap(m, s, inj))
        projections.append(ModuleMap(s, m, inj.T))
        offset += m.dim
    return DirectSum(s, injections, projections)


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

class HomBasis:
    """A basis of Hom_A(M, N); coordinates are taken against the vectorised basis."""

    def __init__(self, source: FdModule, target: FdModule, kernel: Matrix):
        self.source = source
        self.target = target
        self.kernel = kernel
        self.dim = kernel.ncols
        self.maps = [ModuleMap(source, target, Matrix.unflatten(kernel.column(j), target.dim, source.dim))
                     for j in range(self.dim)]

    def coordinates(self, matrix: Matrix) -> Matrix:
        coords = solve(self.kernel, matrix.flatten())
        if coords is None:
            raise ModuleError("linear map is not a module homomorphism")
        return coords

    def combine(self, coefficients: Matrix) -> ModuleMap:
        field = self.source.field
        total = Matrix.zeros(field, self.target.dim, self.source.dim)
        for j, f in enumerate(self.maps):
            c = coefficients.rows[j][0]
            if c != field.zero:
                total = total + f.matrix.scale(c)
        return ModuleMap(self.source, self.target, total)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.maps)


def hom_space(m: FdModule, n: FdModule) -> HomBasis:
    """Hom_A(M, N) as the kernel of the commuting constraints X·A_g = B_g·X."""
    _same_algebra(m, n)
    field = m.field
    size = m.dim * n.dim
    if size == 0:
        return HomBasis(m, n, Matrix.zeros(field, 0, 0))
    blocks = []
    id_m = Matrix.identity(field, m.dim)
    id_n = Matrix.identity(field, n.dim)
    for A, B in zip(m.generator_actions, n.generator_actions):
        blocks.append(kron(id_n, A.T) - kron(B, id_m))
    return HomBasis(m, n, kernel_basis(vstack(*blocks)))


# ---------------------------------------------------------------------------
# Radical layers
# ---------------------------------------------------------------------------

def radical_submodule(m: FdModule) -> Matrix:
    """Columns spanning rad(M) = J·M."""
    rad = m.algebra.radical
    if rad.ncols == 0 or m.dim == 0:
        return Matrix.zeros(m.field, m.dim, 0)
    return column_space(hstack(*[m.act(rad.column(j)) for j in range(rad.ncols)]))


def top(m: FdModule) -> Quotient:
    return quotient_module(m, radical_submodule(m), name=f"top({m.label()})")


def socle(m: FdModule) -> Matrix:
    """Columns spanning soc(M): the vectors killed by the radical."""
    rad = m.algebra.radical
    if rad.ncols == 0 or m.dim == 0:
        return Matrix.identity(m.field, m.dim)
    return kernel_basis(vstack(*[m.act(rad.column(j)) for j in range(rad.ncols)]))


def generated_submodule(m: FdModule, vectors: Matrix) -> Matrix:
    """Columns spanning A·span(vectors)."""
    if vectors.ncols == 0 or m.dim == 0:
        return Matrix.zeros(m.field, m.dim, 0)
    return column_space(hstack(*[A @ vectors for A in m.actions]))


def radical_layers(m: FdModule) -> List[FdModule]:
    """The radical series rad^i M as submodules, stopping at zero."""
    layers = []
    current = m
    while current.dim:
        layers.append(current)
        rad = radical_submodule(current)
        if rad.ncols == current.dim:
            break
        current, _ = submodule(current, rad, name=f"rad^{len(layers)}({m.label()})")
    return layers


# ---------------------------------------------------------------------------
# Projectives, injectives, simples
# ---------------------------------------------------------------------------

def projective_basis(a: AlgebraPresentation, v: int) -> Matrix:
    """Columns (in A) spanning A·e_v."""
    return a.cached(('projective_basis', v), lambda: column_space(a.right_matrix(a.idempotents[v])))


def indecomposable_projective(a: AlgebraPresentation, v: int) -> FdModule:
    def build():
        module, _ = submodule(regular_module(a), projective_basis(a, v), name=f"P{a.vertex_labels[v]}")
        return module
    return a.cached(('projective', v), build)


def simple_module(a: AlgebraPresentation, v: int) -> FdModule:
    def build():
        t = top(indecomposable_projective(a, v)).module
        t.name = f"S{a.vertex_labels[v]}"
        return t
    return a.cached(('simple', v), build)


def dual_module(m: FdModule, name: Optional[str] = None) -> FdModule:
    """The k-dual D(M) = Hom_k(M, k), a left module over the opposite algebra."""
    return FdModule(m.algebra.opposite(), [A.T for A in m.actions], name=name or f"D({m.label()})", dim=m.dim)


def dual_map(f: ModuleMap, source: Optional[FdModule] = None, target: Optional[FdModule] = None) -> ModuleMap:
    """D(f): D(N) -> D(M) for f: M -> N."""
    return ModuleMap(source or dual_module(f.target), target or dual_module(f.source), f.matrix.T)


def indecomposable_injective(a: AlgebraPresentation, v: int) -> FdModule:
    return a.cached(('injective', v),
                    lambda: dual_module(indecomposable_projective(a.opposite(), v), name=f"I{a.vertex_labels[v]}"))


class StructuralObjects(NamedTuple):
    simples: List[FdModule]
    projectives: List[FdModule]
    injectives: List[FdModule]


def structural_objects(a: AlgebraPresentation) -> StructuralObjects:
    n = a.vertex_count
    return StructuralObjects([simple_module(a, v) for v in range(n)],
                             [indecomposable_projective(a, v) for v in range(n)],
                             [indecomposable_injective(a, v) for v in range(n)])


# ---------------------------------------------------------------------------
# Covers and envelopes
# ---------------------------------------------------------------------------

class ProjectiveCover(NamedTuple):
    module: FdModule
    map: ModuleMap
    summands: List[int]


def top_generators(m: FdModule) -> List[Tuple[int, Matrix]]:
    """Vectors e_v·m_j of M whose classes form a basis of top(M), grouped by vertex."""
    t = top(m)
    reps = t.subquotient.representatives
    gens = []
    for v, e in enumerate(m.algebra.idempotents):
        if t.module.dim == 0:
            break
        layer = column_space(t.module.act(e))
        for j in range(layer.ncols):
            lifted = m.act(e) @ (reps @ layer.column(j))
            gens.append((v, lifted))
    return gens


def map_from_generators(m: FdModule, generators: Sequence[Tuple[int, Matrix]], name: Optional[str] = None) -> ProjectiveCover:
    """The map ⊕ P(v) -> M sending the generator e_v of each summand to the given vector."""
    a = m.algebra
    if not generators:
        z = zero_module(a)
        return ProjectiveCover(z, zero_map(z, m), [])
    summands = [v for v, _ in generators]
    modules = [indecomposable_projective(a, v) for v in summands]
    blocks = []
    for v, vector in generators:
        basis = projective_basis(a, v)
        blocks.append(hstack(*[m.act(basis.column(j)) @ vector for j in range(basis.ncols)]))
    total = direct_sum(modules, name=name or '+'.join(p.label() for p in modules))
    return ProjectiveCover(total.module, ModuleMap(total.module, m, hstack(*blocks)), summands)


def projective_cover(m: FdModule) -> ProjectiveCover:
    return map_from_generators(m, top_generators(m))


class InjectiveEnvelope(NamedTuple):
    module: FdModule
    map: ModuleMap
    summands: List[int]


def injective_envelope(m: FdModule) -> InjectiveEnvelope:
    """Dual of the projective cover of D(M) over the opposite algebra."""
    cover = projective_cover(dual_module(m))
    injective = dual_module(cover.module, name='+'.join(f"I{m.algebra.vertex_labels[v]}" for v in cover.summands) or '0')
    return InjectiveEnvelope(injective, ModuleMap(m, injective, cover.map.matrix.T), cover.summands)


# ---------------------------------------------------------------------------
# Isomorphisms
# ---------------------------------------------------------------------------

def find_isomorphism(m: FdModule, n: FdModule, rng: Optional[np.random.Generator] = None) -> Optional[ModuleMap]:
    """Search Hom(M, N) for an invertible map: basis elements, their sum, then seeded random combinations."""
    _same_algebra(m, n)
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ModuleMap(m, n, Matrix.zeros(m.field, 0, 0))
    if m.dimension_vector() != n.dimension_vector():
        return None
    basis = hom_space(m, n)
    if basis.dim == 0:
        return None
    for f in basis.maps:
        if f.is_isomorphism():
            return f
    field = m.field
    total = basis.combine(Matrix.column_vector(field, [field.one] * basis.dim))
    if total.is_isomorphism():
        return total
    rng = rng if rng is not None else np.random.default_rng(config.DEFAULT_SEED)
    for _ in range(config.ISO_SEARCH_ATTEMPTS):
        coefficients = Matrix.column_vector(field, [field.random_element(rng, config.ISO_SEARCH_BOUND)
                                                    for _ in range(basis.dim)])
        candidate = basis.combine(coefficients)
        if candidate.is_isomorphism():
            return candidate
    logger.debug(f"no isomorphism found between {m.label()} and {n.label()}")
    return None


def are_isomorphic(m: FdModule, n: FdModule) -> bool:
    return find_isomorphism(m, n) is not None


# ---------------------------------------------------------------------------
# Bimodules, tensor products and Hom modules
# ---------------------------------------------------------------------------

class Bimodule:
    """A (L, R)-bimodule: ``left`` is the left L-module, ``right_actions[i]`` is x ↦ x·b_i for b_i in R."""

    def __init__(self, left: FdModule, right_algebra: AlgebraPresentation, right_actions: Sequence[Matrix],
                 unit: Optional[Matrix] = None, name: Optional[str] = None):
        self.left = left
        self.right_algebra = right_algebra
        self.right_actions = tuple(right_actions)
        self.unit = unit
        self.name = name or left.name
        self.right_module = FdModule(right_algebra.opposite(), self.right_actions, name=self.name, dim=left.dim)

    @property
    def left_algebra(self) -> AlgebraPresentation:
        return self.left.algebra

    @property
    def dim(self) -> int:
        return self.left.dim

    def verify(self):
        self.left.verify()
        self.right_module.verify()
        for L in self.left.generator_actions:
            for R in self.right_module.generator_actions:
                if L @ R != R @ L:
                    raise ModuleError(f"{self.name}: left and right actions do not commute")


def regular_bimodule(a: AlgebraPresentation) -> Bimodule:
    def build():
        rights = [a.right_matrix(a.basis_vector(i)) for i in range(a.dim)]
        return Bimodule(regular_module(a), a, rights, unit=a.unit, name=a.name)
    return a.cached('regular_bimodule', build)


def restrict_module(m: FdModule, source: AlgebraPresentation, hom_matrix: Matrix, name: Optional[str] = None) -> FdModule:
    """Restriction of scalars along an algebra map with matrix ``hom_matrix`` (target dim x source dim)."""
    return FdModule(source, [m.act(hom_matrix.column(i)) for i in range(source.dim)], name=name or m.name, dim=m.dim)


def sub_bimodule(b: Bimodule, columns: Matrix, name: Optional[str] = None) -> Bimodule:
    left, inclusion = submodule(b.left, columns, name=name)
    basis = inclusion.matrix
    rights = [solve(basis, R @ basis) if basis.ncols else Matrix.zeros(b.left.field, 0, 0) for R in b.right_actions]
    if any(r is None for r in rights):
        raise ModuleError(f"{b.name}: subspace is not a sub-bimodule")
    return Bimodule(left, b.right_algebra, rights, name=name)


def quotient_bimodule(b: Bimodule, columns: Matrix, name: Optional[str] = None) -> Bimodule:
    q = quotient_module(b.left, columns, name=name)
    sub = q.subquotient
    rights = [sub.project(R @ sub.representatives) if sub.dim else Matrix.zeros(b.left.field, 0, 0)
              for R in b.right_actions]
    unit = sub.project(b.unit) if b.unit is not None and sub.dim else None
    return Bimodule(q.module, b.right_algebra, rights, unit=unit, name=name)


class TensorSpace(NamedTuple):
    """(right ⊗ left) modulo the balancing relations; vectors indexed as i_right * dim(left) + i_left."""
    subquotient: Subquotient
    right: FdModule
    left: FdModule

    @property
    def dim(self) -> int:
        return self.subquotient.dim

    def project(self, vectors: Matrix) -> Matrix:
        return self.subquotient.project(vectors)


def tensor_space(right: FdModule, left: FdModule) -> TensorSpace:
    """right ⊗_A left for a right A-module (left A^op-module) and a left A-module."""
    a = left.algebra
    if right.algebra is not a.opposite():
        raise ModuleError(f"tensor product needs a right {a.name}-module, got one over {right.algebra.name}")
    field = a.field
    size = right.dim * left.dim
    ambient = Matrix.identity(field, size)
    if size == 0:
        return TensorSpace(Subquotient(ambient, ambient), right, left)
    id_r = Matrix.identity(field, right.dim)
    id_l = Matrix.identity(field, left.dim)
    relations = [kron(right.act(g), id_l) - kron(id_r, left.act(g)) for g in a.generators]
    return TensorSpace(Subquotient(ambient, hstack(*relations)), right, left)


def tensor_space_map(f: ModuleMap, source: TensorSpace, target: TensorSpace) -> Matrix:
    """Matrix of 1 ⊗ f between tensor spaces sharing the right factor."""
    id_r = Matrix.identity(f.source.field, source.right.dim)
    return target.project(kron(id_r, f.matrix) @ source.subquotient.representatives) \
        if source.dim and target.dim else Matrix.zeros(f.source.field, target.dim, source.dim)


def tensor_space_map_right(g: ModuleMap, source: TensorSpace, target: TensorSpace) -> Matrix:
    """Matrix of g ⊗ 1 for a map g of right modules."""
    id_l = Matrix.identity(g.source.field, source.left.dim)
    return target.project(kron(g.matrix, id_l) @ source.subquotient.representatives) \
        if source.dim and target.dim else Matrix.zeros(g.source.field, target.dim, source.dim)


class TensorModule(NamedTuple):
    module: FdModule
    space: TensorSpace


def tensor_module(b: Bimodule, m: FdModule, name: Optional[str] = None) -> TensorModule:
    """B ⊗_R M as a left module over the left algebra of B."""
    space = tensor_space(b.right_module, m)
    la = b.left_algebra
    if space.dim == 0:
        return TensorModule(zero_module(la), space)
    id_m = Matrix.identity(m.field, m.dim)
    reps = space.subquotient.representatives
    actions = [space.project(kron(L, id_m) @ reps) for L in b.left.actions]
    return TensorModule(FdModule(la, actions, name=name or f"{b.name}(x){m.label()}"), space)


def tensor_map(f: ModuleMap, source: TensorModule, target: TensorModule) -> ModuleMap:
    return ModuleMap(source.module, target.module, tensor_space_map(f, source.space, target.space))


def tensor_unit_map(b: Bimodule, m: FdModule, tm: TensorModule) -> ModuleMap:
    """The map M -> B ⊗ M, x ↦ 1 ⊗ x (B must carry a unit vector)."""
    if b.unit is None:
        raise ModuleError(f"{b.name} has no distinguished unit element")
    if tm.space.dim == 0:
        return zero_map(m, tm.module)
    return ModuleMap(m, tm.module, tm.space.project(kron(b.unit, Matrix.identity(m.field, m.dim))))


class HomModule(NamedTuple):
    module: FdModule
    basis: HomBasis


def hom_module(b: Bimodule, n: FdModule, name: Optional[str] = None) -> HomModule:
    """Hom_L(B, N) as a left module over the right algebra of B, via (r·φ)(x) = φ(x·r)."""
    basis = hom_space(b.left, n)
    ra = b.right_algebra
    if basis.dim == 0:
        return HomModule(zero_module(ra), basis)
    actions = []
    for R in b.right_actions:
        actions.append(hstack(*[basis.coordinates(phi.matrix @ R) for phi in basis.maps]))
    return HomModule(FdModule(ra, actions, name=name or f"Hom({b.name},{n.label()})"), basis)


def hom_map(f: ModuleMap, source: HomModule, target: HomModule) -> ModuleMap:
    """Postcomposition φ ↦ f∘φ."""
    field = f.source.field
    if source.basis.dim == 0 or target.basis.dim == 0:
        return ModuleMap(source.module, target.module, Matrix.zeros(field, target.module.dim, source.module.dim))
    columns = [target.basis.coordinates(f.matrix @ phi.matrix) for phi in source.basis.maps]
    return ModuleMap(source.module, target.module, hstack(*columns))


def evaluation_map(b: Bimodule, hm: HomModule, n: FdModule) -> ModuleMap:
    """φ ↦ φ(1) from Hom_R(B, N) to N (B must carry a unit vector)."""
    if hm.basis.dim == 0:
        return zero_map(hm.module, n)
    return ModuleMap(hm.module, n, hstack(*[phi.matrix @ b.unit for phi in hm.basis.maps]))


def module_from_representation(a: AlgebraPresentation, dims: Sequence[int], arrow_maps: Dict[str, Matrix],
                               name: Optional[str] = None) -> FdModule:
    """Module of a quiver algebra from a representation: vector spaces per vertex, matrices per arrow."""
    if a.paths is None:
        raise ModuleError(f"{a.name} is not a quiver algebra")
    field = a.field
    offsets = [0]
    for d in dims:
        offsets.append(offsets[-1] + d)
    total = offsets[-1]
    actions = []
    for path in a.paths:
        rows = [[field.zero] * total for _ in range(total)]
        s, t = path.source - 1, path.target - 1
        block = Matrix.identity(field, dims[s])
        for label in path.arrows:
            block = arrow_maps[label] @ block
        for i in range(block.nrows):
            for j in range(block.ncols):
                rows[offsets[t] + i][offsets[s] + j] = block.rows[i][j]
        actions.append(Matrix(field, rows, total, total))
    module = FdModule(a, actions, name=name, dim=total)
    module.verify()
    return module
