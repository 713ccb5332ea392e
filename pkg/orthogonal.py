"""Complete Ext-orthogonal pairs and their five-term sequences.

A pair (𝒳, 𝒴) is given by two subcategory specifications with decidable
membership. Pairs coming from a ring epimorphism λ: R -> S carry a
constructor for the five-term sequence

    0 -> Y_M -> X_M -> M -> Y^M -> X^M -> 0

built as the long exact cohomology sequence of a literal mapping cone:
the evaluation Hom_R(S, I•) -> I• on a minimal injective coresolution
(from-epi-left), or the unit P• -> S ⊗_R P• on a minimal projective
resolution (from-epi-right). Every sequence is verified before it is
returned.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, NamedTuple, Optional, Sequence

import config
from algebra import AlgebraPresentation
from complexes import (
    BoundedComplex, ChainMap, Cohomology, Triangle, cohomology_data, cone,
    derived_hom, injective_replacement, membership_in_dbx,
)
from linalg import Matrix, hstack, kernel_basis, solve, vstack
from modules import (
    FdModule, ModuleError, ModuleMap, evaluation_map, find_isomorphism, hom_map, hom_module,
    hom_space, indecomposable_injective, indecomposable_projective, simple_module,
    tensor_map, tensor_module, tensor_space, tensor_unit_map,
)
from resolutions import ext_dimensions, minimal_resolution, resolution_complex, tor_group
from ring_epi import (
    FAILS, HOLDS, UNKNOWN, HypothesisError, RingEpiPresentation, Verdict, check_flat_criterion,
    check_pd_criterion, combine_status, quotient_epi,
)

logger = logging.getLogger(__name__)

CONSTRUCTORS = ('from-epi-left', 'from-epi-right')


class FiveTermError(ValueError):
    """A five-term sequence or ladder violates exactness, membership or uniqueness."""


class Membership(NamedTuple):
    holds: bool
    complete: bool
    witness: Dict


# ---------------------------------------------------------------------------
# Subcategory specifications
# ---------------------------------------------------------------------------

class SubcategorySpec:
    kind = 'abstract'
    complete = True

    def __init__(self, algebra: AlgebraPresentation, name: str):
        self.algebra = algebra
        self.name = name

    def contains(self, m: FdModule) -> Membership:
        if m.algebra is not self.algebra:
            raise ModuleError(f"{m.label()} is not over {self.algebra.name}")
        if m.dim == 0:
            return Membership(True, True, {'zero': True})
        return self._contains(m)

    def _contains(self, m: FdModule) -> Membership:
        raise NotImplementedError

    def __call__(self, m: FdModule) -> Membership:
        return self.contains(m)

    def describe(self) -> str:
        return f"{self.kind}({self.name})"


class ImageOfEpi(SubcategorySpec):
    """S-Mod inside R-Mod: the R-action factors through λ."""
    kind = 'image-of-epi'

    def __init__(self, epi: RingEpiPresentation):
        super().__init__(epi.source, f"{epi.target.name}-Mod")
        self.epi = epi

    def _contains(self, m: FdModule) -> Membership:
        epi = self.epi
        if epi.is_surjective():
            kernel = kernel_basis(epi.matrix)
            offending = [j for j in range(kernel.ncols) if not m.act(kernel.column(j)).is_zero()]
            return Membership(not offending, True, {'kernel_acting': len(offending)})
        tm = tensor_module(epi.bimodule, m)
        unit = tensor_unit_map(epi.bimodule, m, tm)
        holds = unit.is_isomorphism()
        return Membership(holds, True, {'dim_m': m.dim, 'dim_s_tensor_m': tm.module.dim, 'unit_rank': unit.rank()})


class HomExtPerp(SubcategorySpec):
    """{Y : Hom_R(S, Y) = 0 = Ext¹_R(S, Y)}."""
    kind = 'hom-ext-perp'

    def __init__(self, epi: RingEpiPresentation):
        super().__init__(epi.source, f"{epi.target.name}^perp01")
        self.epi = epi
        self._resolution = None

    @property
    def resolution(self):
        if self._resolution is None:
            self._resolution = minimal_resolution(self.epi.left_target, 'projective', 2)
        return self._resolution

    def _contains(self, m: FdModule) -> Membership:
        s = self.epi.left_target
        dims = ext_dimensions(s, m, [0, 1], resolution=self.resolution)
        return Membership(dims[0] == 0 and dims[1] == 0, True, {'hom': dims[0], 'ext1': dims[1]})


class TorPerp(SubcategorySpec):
    """{Z : S ⊗_R Z = 0 = Tor₁^R(S, Z)}."""
    kind = 'tor-perp'

    def __init__(self, epi: RingEpiPresentation):
        super().__init__(epi.source, f"{epi.target.name}^tor-perp")
        self.epi = epi
        self._resolution = None

    @property
    def resolution(self):
        if self._resolution is None:
            self._resolution = minimal_resolution(self.epi.right_target, 'projective', 2)
        return self._resolution

    def _contains(self, m: FdModule) -> Membership:
        s = self.epi.right_target
        tensor = tensor_space(s, m).dim
        tor1 = tor_group(1, s, m, resolve='right', resolution=self.resolution).dimension
        return Membership(tensor == 0 and tor1 == 0, True, {'tensor': tensor, 'tor1': tor1})


class SerreBySimples(SubcategorySpec):
    """Modules whose composition factors are the simples at ``vertices`` (e·M = 0 for the complementary e)."""
    kind = 'serre'

    def __init__(self, algebra: AlgebraPresentation, vertices: Sequence, name: Optional[str] = None):
        self.vertices = [algebra.vertex_labels[algebra.vertex_index(v)] for v in vertices]
        self.killed = [v for v in algebra.vertex_labels if v not in self.vertices]
        super().__init__(algebra, name or f"Serre{{{','.join(self.vertices)}}}")
        self.idempotent = algebra.idempotent_sum(self.killed)

    def _contains(self, m: FdModule) -> Membership:
        vector = m.dimension_vector()
        labels = self.algebra.vertex_labels
        outside = {labels[v]: d for v, d in enumerate(vector) if d and labels[v] in self.killed}
        return Membership(not outside, True, {'outside_factors': outside})

    def quotient_epi(self) -> RingEpiPresentation:
        return quotient_epi(self.algebra, self.killed)


class ExtPerpOfSimples(SubcategorySpec):
    """𝒳^{⊥0,1} for a Serre subcategory 𝒳: Hom and Ext¹ from its simples vanish."""
    kind = 'ext-perp-of-simples'

    def __init__(self, serre: SerreBySimples):
        super().__init__(serre.algebra, f"{serre.name}^perp01")
        self.serre = serre
        self._resolutions = {}

    def _simples(self):
        a = self.algebra
        for label in self.serre.vertices:
            v = a.vertex_index(label)
            if v not in self._resolutions:
                self._resolutions[v] = minimal_resolution(simple_module(a, v), 'projective', 2)
            yield label, simple_module(a, v), self._resolutions[v]

    def _contains(self, m: FdModule) -> Membership:
        offending = {}
        for label, s, res in self._simples():
            dims = ext_dimensions(s, m, [0, 1], resolution=res)
            if dims[0] or dims[1]:
                offending[label] = {'hom': dims[0], 'ext1': dims[1]}
        return Membership(not offending, True, {'nonvanishing': offending})

    def injective_terms_test(self, m: FdModule) -> bool:
        """No I(x), x in 𝒳, among the first two terms of the minimal injective coresolution."""
        res = minimal_resolution(m, 'injective', 1)
        killed = {self.algebra.vertex_index(v) for v in self.serre.vertices}
        return all(not (set(s) & killed) for s in res.summands[:2])


class FiniteInventory(SubcategorySpec):
    """A listed set of modules, up to isomorphism. Membership is sampled, never complete."""
    kind = 'finite-inventory'
    complete = False

    def __init__(self, algebra: AlgebraPresentation, modules: Sequence[FdModule], name: str = 'inventory'):
        super().__init__(algebra, name)
        self.modules = list(modules)

    def _contains(self, m: FdModule) -> Membership:
        for candidate in self.modules:
            if candidate.signature() == m.signature() and find_isomorphism(candidate, m) is not None:
                return Membership(True, False, {'isomorphic_to': candidate.label()})
        return Membership(False, False, {'sampled': len(self.modules)})


# ---------------------------------------------------------------------------
# Pairs
# ---------------------------------------------------------------------------

class OrthogonalPair:
    """(𝒳, 𝒴) with an optional epimorphism-based five-term constructor."""

    def __init__(self, x: SubcategorySpec, y: SubcategorySpec, epi: Optional[RingEpiPresentation] = None,
                 constructor: Optional[str] = None, name: Optional[str] = None, epi_derived: bool = False):
        if x.algebra is not y.algebra:
            raise ModuleError("pair sides live over different algebras")
        if constructor is not None and constructor not in CONSTRUCTORS:
            raise ValueError(f"unknown constructor {constructor!r}")
        self.x = x
        self.y = y
        self.epi = epi
        self.constructor = constructor
        self.name = name or f"({x.name}, {y.name})"
        self.epi_derived = epi_derived

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.x.algebra

    def describe(self) -> str:
        via = f" via {self.constructor} {self.epi.name}" if self.constructor else ''
        return f"{self.name}: X = {self.x.describe()}, Y = {self.y.describe()}{via}"


def pair_from_epi_left(epi: RingEpiPresentation, name: Optional[str] = None) -> OrthogonalPair:
    """(S-Mod, {Hom(S,-) = 0 = Ext¹(S,-)})."""
    return OrthogonalPair(ImageOfEpi(epi), HomExtPerp(epi), epi, 'from-epi-left', name, epi_derived=True)


def pair_from_epi_right(epi: RingEpiPresentation, name: Optional[str] = None) -> OrthogonalPair:
    """({S⊗- = 0 = Tor₁(S,-)}, S-Mod)."""
    return OrthogonalPair(TorPerp(epi), ImageOfEpi(epi), epi, 'from-epi-right', name, epi_derived=True)


def serre_pair(a: AlgebraPresentation, vertices: Sequence, name: Optional[str] = None) -> OrthogonalPair:
    """(Serre subcategory on ``vertices``, its Hom/Ext¹-perpendicular), built through A -> A/AeA."""
    x = SerreBySimples(a, vertices)
    return OrthogonalPair(x, ExtPerpOfSimples(x), x.quotient_epi(), 'from-epi-left', name, epi_derived=True)


def swapped_pair(pair: OrthogonalPair, name: Optional[str] = None) -> OrthogonalPair:
    """(𝒴, 𝒳) for a Serre pair, constructed with the epimorphism for the Serre subcategory on 𝒴's vertices."""
    if not isinstance(pair.x, SerreBySimples):
        return OrthogonalPair(pair.y, pair.x, name=name or f"swap{pair.name}")
    a = pair.algebra
    x = SerreBySimples(a, pair.x.killed)
    y = SerreBySimples(a, pair.x.vertices)
    return OrthogonalPair(x, y, x.quotient_epi(), 'from-epi-left', name or f"swap{pair.name}")


# ---------------------------------------------------------------------------
# Five-term sequences
# ---------------------------------------------------------------------------

@dataclass
class FiveTerm:
    """0 -> Y_M -> X_M -> M -> Y^M -> X^M -> 0."""
    y_lower: FdModule
    x_lower: FdModule
    module: FdModule
    y_upper: FdModule
    x_upper: FdModule
    eps_m2: ModuleMap
    eps_m1: ModuleMap
    eps_0: ModuleMap
    eps_1: ModuleMap
    constructor: str = ''
    witnesses: Dict = dataclass_field(default_factory=dict)

    @property
    def objects(self) -> List[FdModule]:
        return [self.y_lower, self.x_lower, self.module, self.y_upper, self.x_upper]

    @property
    def maps(self) -> List[ModuleMap]:
        return [self.eps_m2, self.eps_m1, self.eps_0, self.eps_1]

    def verify_exactness(self):
        for f in self.maps:
            try:
                f.verify()
            except ModuleError as exc:
                raise FiveTermError(f"five-term map is not a module map: {exc}") from exc
        if not self.eps_m2.is_injective():
            raise FiveTermError("Y_M -> X_M is not injective")
        if not self.eps_1.is_surjective():
            raise FiveTermError("Y^M -> X^M is not surjective")
        for position, (f, g) in enumerate(zip(self.maps, self.maps[1:]), start=1):
            middle = f.target
            if not (g.matrix @ f.matrix).is_zero():
                raise FiveTermError(f"composite at position {position} is not zero")
            if f.rank() != middle.dim - g.rank():
                raise FiveTermError(f"sequence is not exact at position {position} ({middle.label()})")

    def verify_membership(self, pair: OrthogonalPair):
        checks = [('Y_M', pair.y, self.y_lower), ('X_M', pair.x, self.x_lower),
                  ('Y^M', pair.y, self.y_upper), ('X^M', pair.x, self.x_upper)]
        for label, spec, obj in checks:
            result = spec.contains(obj)
            self.witnesses[label] = result
            if not result.holds:
                raise FiveTermError(f"{label} = {obj.label()} (dim {obj.dim}) is not in {spec.name}: {result.witness}")

    def dimensions(self) -> List[int]:
        return [m.dim for m in self.objects]


def _reps(cd: Cohomology, ambient: int, field) -> Matrix:
    if cd.module.dim == 0:
        return Matrix.zeros(field, ambient, 0)
    return cd.subquotient.representatives


def _project(cd: Cohomology, vectors: Matrix) -> Matrix:
    if cd.module.dim == 0:
        return Matrix.zeros(vectors.field, 0, vectors.ncols)
    return cd.subquotient.project(vectors)


def _named(cd: Cohomology, name: str) -> FdModule:
    if cd.module.dim:
        cd.module.name = name
    return cd.module


def five_term_from_coresolution(m: FdModule, epi: RingEpiPresentation, coresolution: BoundedComplex,
                                coaugmentation: ModuleMap) -> FiveTerm:
    """Cohomology of the cone of Hom_R(S, I•) -> I• for a coresolution I• in degrees 0..2."""
    b = epi.bimodule
    field = m.field
    r = epi.source
    homs = {k: hom_module(b, coresolution.term(k)) for k in range(0, 3)}
    h_terms = {k: homs[k].module for k in homs}
    h_diffs = {k: hom_map(coresolution.differential(k), homs[k], homs[k + 1]) for k in (0, 1)}
    hom_complex = BoundedComplex(r, h_terms, h_diffs, name=f"Hom(S,I({m.label()}))")
    ev = ChainMap(hom_complex, coresolution,
                  {k: evaluation_map(b, homs[k], coresolution.term(k)) for k in homs})
    tri = cone(ev)
    c = tri.c
    y_low = cohomology_data(c, -1)
    x_low = cohomology_data(hom_complex, 0)
    y_up = cohomology_data(c, 0)
    x_up = cohomology_data(hom_complex, 1)
    label = m.label()
    y_lower, x_lower = _named(y_low, f"Y_{label}"), _named(x_low, f"X_{label}")
    y_upper, x_upper = _named(y_up, f"Y^{label}"), _named(x_up, f"X^{label}")

    offset_m1 = coresolution.term(-1).dim
    reps = _reps(y_low, c.term(-1).dim, field)
    eps_m2 = _project(x_low, reps.select_rows(range(offset_m1, offset_m1 + h_terms[0].dim)))

    reps = _reps(x_low, h_terms[0].dim, field)
    values = ev.component(0).matrix @ reps
    eps_m1 = solve(coaugmentation.matrix, values)
    if eps_m1 is None:
        raise FiveTermError("evaluation does not land in the image of M")

    lifted = vstack(coaugmentation.matrix, Matrix.zeros(field, h_terms[1].dim, m.dim))
    eps_0 = _project(y_up, lifted)

    offset_0 = coresolution.term(0).dim
    reps = _reps(y_up, c.term(0).dim, field)
    eps_1 = _project(x_up, reps.select_rows(range(offset_0, offset_0 + h_terms[1].dim)))

    return FiveTerm(y_lower, x_lower, m, y_upper, x_upper,
                    ModuleMap(y_lower, x_lower, eps_m2), ModuleMap(x_lower, m, eps_m1),
                    ModuleMap(m, y_upper, eps_0), ModuleMap(y_upper, x_upper, eps_1),
                    constructor='from-epi-left')


def five_term_from_resolution(m: FdModule, epi: RingEpiPresentation, resolution: BoundedComplex,
                              augmentation: ModuleMap) -> FiveTerm:
    """Cohomology of the cone of the unit P• -> S ⊗_R P• for a resolution P• in degrees -2..0."""
    b = epi.bimodule
    field = m.field
    r = epi.source
    tensors = {k: tensor_module(b, resolution.term(k)) for k in (-2, -1, 0)}
    t_terms = {k: tensors[k].module for k in tensors}
    t_diffs = {k: tensor_map(resolution.differential(k), tensors[k], tensors[k + 1]) for k in (-2, -1)}
    tensor_complex = BoundedComplex(r, t_terms, t_diffs, name=f"S(x)P({m.label()})")
    unit = ChainMap(resolution, tensor_complex,
                    {k: tensor_unit_map(b, resolution.term(k), tensors[k]) for k in tensors})
    tri = cone(unit)
    c = tri.c
    y_low = cohomology_data(tensor_complex, -1)
    x_low = cohomology_data(c, -1)
    y_up = cohomology_data(tensor_complex, 0)
    x_up = cohomology_data(c, 0)
    label = m.label()
    y_lower, x_lower = _named(y_low, f"Y_{label}"), _named(x_low, f"X_{label}")
    y_upper, x_upper = _named(y_up, f"Y^{label}"), _named(x_up, f"X^{label}")

    reps = _reps(y_low, t_terms[-1].dim, field)
    embedded = vstack(reps, Matrix.zeros(field, resolution.term(0).dim, reps.ncols))
    eps_m2 = _project(x_low, embedded)

    offset = t_terms[-1].dim
    reps = _reps(x_low, c.term(-1).dim, field)
    eps_m1 = augmentation.matrix @ reps.select_rows(range(offset, offset + resolution.term(0).dim))

    lifts = solve(augmentation.matrix, Matrix.identity(field, m.dim))
    if lifts is None:
        raise FiveTermError("augmentation is not surjective")
    eps_0 = _project(y_up, unit.component(0).matrix @ lifts)

    reps = _reps(y_up, t_terms[0].dim, field)
    embedded = vstack(reps, Matrix.zeros(field, resolution.term(1).dim, reps.ncols))
    eps_1 = _project(x_up, embedded)

    return FiveTerm(y_lower, x_lower, m, y_upper, x_upper,
                    ModuleMap(y_lower, x_lower, eps_m2), ModuleMap(x_lower, m, eps_m1),
                    ModuleMap(m, y_upper, eps_0), ModuleMap(y_upper, x_upper, eps_1),
                    constructor='from-epi-right')


def raw_five_term(m: FdModule, pair: OrthogonalPair) -> FiveTerm:
    """The constructor's sequence, exactness verified, memberships not yet checked."""
    if pair.constructor is None:
        raise FiveTermError(f"pair {pair.name} has no five-term constructor")
    if m.algebra is not pair.algebra:
        raise ModuleError(f"{m.label()} is not over {pair.algebra.name}")
    if pair.constructor == 'from-epi-left':
        res = minimal_resolution(m, 'injective', 2)
        eps = five_term_from_coresolution(m, pair.epi, resolution_complex(res, 2), res.augmentation)
    else:
        res = minimal_resolution(m, 'projective', 2)
        eps = five_term_from_resolution(m, pair.epi, resolution_complex(res, 2), res.augmentation)
    eps.verify_exactness()
    return eps


def criterion_for(pair: OrthogonalPair, depth_cap: Optional[int] = None) -> Verdict:
    if pair.constructor == 'from-epi-left':
        return check_pd_criterion(pair.epi, depth_cap)
    if pair.constructor == 'from-epi-right':
        return check_flat_criterion(pair.epi, depth_cap)
    return Verdict(UNKNOWN, ['pair has no constructor'], complete=False)


def build_five_term(m: FdModule, pair: OrthogonalPair, depth_cap: Optional[int] = None,
                    hypothesis: Optional[Verdict] = None) -> FiveTerm:
    """ε_M for the pair, after its epimorphism criterion has been confirmed."""
    hypothesis = hypothesis or criterion_for(pair, depth_cap)
    if not hypothesis.holds:
        raise HypothesisError(f"{pair.name}: {'; '.join(hypothesis.reasons)}")
    eps = raw_five_term(m, pair)
    eps.verify_membership(pair)
    logger.debug(f"five-term for {m.label()} in {pair.name}: dims {eps.dimensions()}")
    return eps


# ---------------------------------------------------------------------------
# Ladders
# ---------------------------------------------------------------------------

class Ladder(NamedTuple):
    y_lower: ModuleMap
    x_lower: ModuleMap
    y_upper: ModuleMap
    x_upper: ModuleMap


def _solve_ladder(eps_m: FiveTerm, eps_n: FiveTerm, middle: Matrix) -> Ladder:
    """Unique (Y_f, X_f, Y^f, X^f) making the ladder over ``middle``: M -> N commute."""
    field = eps_m.module.field
    bases = [hom_space(eps_m.y_lower, eps_n.y_lower), hom_space(eps_m.x_lower, eps_n.x_lower),
             hom_space(eps_m.y_upper, eps_n.y_upper), hom_space(eps_m.x_upper, eps_n.x_upper)]
    # equations, as (rows, cols) of each square, unknown contributions and constant terms
    shapes = [(eps_n.x_lower.dim, eps_m.y_lower.dim), (eps_n.module.dim, eps_m.x_lower.dim),
              (eps_n.y_upper.dim, eps_m.module.dim), (eps_n.x_upper.dim, eps_m.y_upper.dim)]

    def contributions(unknown: int, phi: Matrix) -> List[Matrix]:
        blocks = [Matrix.zeros(field, r, c) for r, c in shapes]
        if unknown == 0:      # ε_N^{-2} Y_f
            blocks[0] = eps_n.eps_m2.matrix @ phi
        elif unknown == 1:    # -X_f ε_M^{-2} ; ε_N^{-1} X_f
            blocks[0] = -(phi @ eps_m.eps_m2.matrix)
            blocks[1] = eps_n.eps_m1.matrix @ phi
        elif unknown == 2:    # -Y^f ε_M^0 ; ε_N^1 Y^f
            blocks[2] = -(phi @ eps_m.eps_0.matrix)
            blocks[3] = eps_n.eps_1.matrix @ phi
        else:                 # -X^f ε_M^1
            blocks[3] = -(phi @ eps_m.eps_1.matrix)
        return blocks

    def flatten(blocks: List[Matrix]) -> Matrix:
        pieces = [b.flatten() for b in blocks if b.nrows * b.ncols]
        return vstack(*pieces) if pieces else Matrix.zeros(field, 0, 1)

    columns = []
    for unknown, basis in enumerate(bases):
        for phi in basis.maps:
            columns.append(flatten(contributions(unknown, phi.matrix)))
    constants = [Matrix.zeros(field, r, c) for r, c in shapes]
    constants[1] = middle @ eps_m.eps_m1.matrix
    constants[2] = -(eps_n.eps_0.matrix @ middle)
    rhs = flatten(constants)
    system = hstack(*columns) if columns else Matrix.zeros(field, rhs.nrows, 0)
    if system.ncols == 0:
        if not rhs.is_zero():
            raise FiveTermError("no ladder: the induced maps cannot be completed")
        coefficients = Matrix.zeros(field, 0, 1)
    else:
        coefficients = solve(system, rhs)
        if coefficients is None:
            raise FiveTermError("no ladder: the induced maps cannot be completed")
        if kernel_basis(system).ncols:
            raise FiveTermError(f"ladder is not unique: {kernel_basis(system).ncols}-dimensional ambiguity")
    maps = []
    offset = 0
    for basis in bases:
        maps.append(basis.combine(coefficients.select_rows(range(offset, offset + basis.dim))))
        offset += basis.dim
    return Ladder(*maps)


def extend_morphism_five_term(f: ModuleMap, eps_m: FiveTerm, eps_n: FiveTerm) -> Ladder:
    """The four maps induced by f: M -> N between five-term sequences (unique when they exist)."""
    if f.source.dim != eps_m.module.dim or f.target.dim != eps_n.module.dim:
        raise FiveTermError("map does not connect the middle objects of the sequences")
    return _solve_ladder(eps_m, eps_n, f.matrix)


class FiveTermComparison(NamedTuple):
    isomorphic: bool
    ladder: Optional[Ladder]
    failure: Optional[str]


def check_five_term_unique(eps_1: FiveTerm, eps_2: FiveTerm) -> FiveTermComparison:
    """An isomorphism of sequences restricting to the identity on M, or the first position where none exists."""
    for label, eps in (('first', eps_1), ('second', eps_2)):
        try:
            eps.verify_exactness()
        except FiveTermError as exc:
            return FiveTermComparison(False, None, f"invariant: {label} sequence: {exc}")
    if eps_1.module.dim != eps_2.module.dim:
        return FiveTermComparison(False, None, 'middle objects differ')
    try:
        ladder = _solve_ladder(eps_1, eps_2, Matrix.identity(eps_1.module.field, eps_1.module.dim))
    except FiveTermError as exc:
        return FiveTermComparison(False, None, str(exc))
    for position, g in zip(('Y_M', 'X_M', 'Y^M', 'X^M'), ladder):
        if not g.is_isomorphism():
            return FiveTermComparison(False, ladder, position)
    return FiveTermComparison(True, ladder, None)


class Adjoint(NamedTuple):
    module: FdModule
    map: ModuleMap


def r_of(m: FdModule, pair: OrthogonalPair, depth_cap: Optional[int] = None) -> Adjoint:
    """r(M) = X_M with counit ε^{-1}: X_M -> M."""
    eps = build_five_term(m, pair, depth_cap)
    return Adjoint(eps.x_lower, eps.eps_m1)


def l_of(m: FdModule, pair: OrthogonalPair, depth_cap: Optional[int] = None) -> Adjoint:
    """ℓ(M) = Y^M with unit ε^0: M -> Y^M."""
    eps = build_five_term(m, pair, depth_cap)
    return Adjoint(eps.y_upper, eps.eps_0)


# ---------------------------------------------------------------------------
# Condition checker
# ---------------------------------------------------------------------------

def with_structural_objects(a: AlgebraPresentation, inventory: Sequence[FdModule]) -> List[FdModule]:
    """Inventory plus all simples, indecomposable projectives and injectives (no repeats by identity)."""
    result, seen = [], set()
    extra = []
    for v in range(a.vertex_count):
        extra += [simple_module(a, v), indecomposable_projective(a, v), indecomposable_injective(a, v)]
    for m in list(inventory) + extra:
        if id(m) not in seen:
            seen.add(id(m))
            result.append(m)
    return result


@dataclass
class PairReport:
    pair: str
    conditions: Dict[str, Verdict]
    status: str
    inventory_size: int
    r_adapted: int
    l_adapted: int
    sampled: bool
    note: str = 'certified at the bounded level only'

    def to_dict(self) -> Dict:
        return {'pair': self.pair, 'status': self.status, 'sampled': self.sampled,
                'inventory_size': self.inventory_size, 'r_adapted': self.r_adapted,
                'l_adapted': self.l_adapted, 'note': self.note,
                'conditions': {k: v.to_dict() for k, v in self.conditions.items()}}


def _ext_orthogonality(pair: OrthogonalPair, xs: List[FdModule], ys: List[FdModule], depth_cap: int) -> Verdict:
    for x in xs:
        res = minimal_resolution(x, 'projective', depth_cap + 1)
        for y in ys:
            dims = ext_dimensions(x, y, list(range(depth_cap + 1)), resolution=res)
            for n, d in dims.items():
                if d:
                    return Verdict(FAILS, [f"Ext^{n}({x.label()}, {y.label()}) = {d} ≠ 0"],
                                   {'x': x.label(), 'y': y.label(), 'degree': n, 'dimension': d})
    complete = pair.epi_derived and pair.x.complete and pair.y.complete
    tier = 'complete' if complete else 'sampled'
    return Verdict(HOLDS, [f"Ext^n(X, Y) = 0 for {len(xs)} x {len(ys)} inventory pairs, n <= {depth_cap} ({tier})"],
                   {'x_count': len(xs), 'y_count': len(ys)}, complete)


def check_theorem_conditions(pair: OrthogonalPair, inventory: Sequence[FdModule],
                             depth_cap: Optional[int] = None) -> PairReport:
    """Conditions (a), (b), (c') and (d') on the inventory, extended by the structural modules."""
    cap = config.CHECK_WINDOWS['ext_anchor_degrees'] if depth_cap is None else depth_cap
    a = pair.algebra
    modules = with_structural_objects(a, inventory)
    xs = [m for m in modules if m.dim and pair.x.contains(m).holds]
    ys = [m for m in modules if m.dim and pair.y.contains(m).holds]
    conditions = {'a': _ext_orthogonality(pair, xs, ys, cap)}

    r_adapted = l_adapted = 0
    if pair.constructor is None:
        for key in ('b', 'c_prime', 'd_prime'):
            conditions[key] = Verdict(UNKNOWN, ['no five-term constructor for this pair'], complete=False)
    else:
        hypothesis = criterion_for(pair, depth_cap)
        failures = []
        if not hypothesis.holds:
            conditions['b'] = Verdict(hypothesis.status, ['constructor hypothesis: ' + r for r in hypothesis.reasons],
                                      hypothesis.witness, hypothesis.complete)
        else:
            for m in modules:
                try:
                    eps = build_five_term(m, pair, depth_cap, hypothesis)
                except FiveTermError as exc:
                    failures.append((m, str(exc)))
                    continue
                r_adapted += eps.x_upper.dim == 0
                l_adapted += eps.y_lower.dim == 0
            if failures:
                m, reason = failures[0]
                conditions['b'] = Verdict(FAILS, [f"no valid five-term sequence for {m.label()}: {reason}"],
                                          {'module': m.label(), 'failures': len(failures)})
            else:
                conditions['b'] = Verdict(HOLDS, [f"five-term sequences verified for {len(modules)} modules"],
                                          {'modules': len(modules)}, complete=False)
        conditions['c_prime'] = _outer_vanishing(pair, [indecomposable_injective(a, v) for v in range(a.vertex_count)],
                                                 'x_upper', 'X^I')
        conditions['d_prime'] = _outer_vanishing(pair, [indecomposable_projective(a, v) for v in range(a.vertex_count)],
                                                 'y_lower', 'Y_P')
    status = combine_status([v.status for v in conditions.values()])
    sampled = not all(v.complete for v in conditions.values())
    logger.info(f"pair {pair.name}: {status}")
    return PairReport(pair.name, conditions, status, len(modules), r_adapted, l_adapted, sampled)


def _outer_vanishing(pair: OrthogonalPair, modules: List[FdModule], attribute: str, label: str) -> Verdict:
    nonzero = {}
    for m in modules:
        try:
            eps = raw_five_term(m, pair)
        except (FiveTermError, HypothesisError) as exc:
            return Verdict(UNKNOWN, [f"sequence for {m.label()} unavailable: {exc}"], complete=False)
        dim = getattr(eps, attribute).dim
        if dim:
            nonzero[m.label()] = dim
    if nonzero:
        return Verdict(FAILS, [f"{label} ≠ 0 for {', '.join(nonzero)}"], {'nonzero': nonzero})
    return Verdict(HOLDS, [f"{label} = 0 for all {len(modules)} indecomposables"], {'checked': len(modules)})


# ---------------------------------------------------------------------------
# Fully faithful criteria
# ---------------------------------------------------------------------------

def check_fully_faithful_criteria(pair: OrthogonalPair, inventory: Sequence[FdModule] = (),
                                  depth_cap: Optional[int] = None, report: Optional[PairReport] = None) -> Verdict:
    """Projectives of 𝒴 are ℓ(P) and Ext-projective in 𝒴; injectives of 𝒳 are r(I) and Ext-injective in 𝒳.

    Cross-validated against (c') and (d'); the route holds only for a valid pair.
    """
    a = pair.algebra
    cap = config.CHECK_WINDOWS['fully_faithful_degrees']
    report = report or check_theorem_conditions(pair, inventory, depth_cap)
    if pair.constructor is None:
        return Verdict(UNKNOWN, ['no five-term constructor for this pair'], complete=False)
    valid = combine_status([report.conditions['a'].status, report.conditions['b'].status])
    if valid != HOLDS:
        return Verdict(valid, ['not a complete Ext-orthogonal pair: (a)/(b) do not hold'],
                       {'a': report.conditions['a'].status, 'b': report.conditions['b'].status})
    modules = with_structural_objects(a, inventory)
    ys = [m for m in modules if m.dim and pair.y.contains(m).holds]
    xs = [m for m in modules if m.dim and pair.x.contains(m).holds]
    problems = []
    for v in range(a.vertex_count):
        p = indecomposable_projective(a, v)
        y_p = raw_five_term(p, pair).y_upper
        if y_p.dim == 0:
            continue
        if not pair.y.contains(y_p).holds:
            problems.append(f"l({p.label()}) not in Y")
            continue
        res = minimal_resolution(y_p, 'projective', cap + 1)
        for y in ys:
            dims = ext_dimensions(y_p, y, list(range(1, cap + 1)), resolution=res)
            if any(dims.values()):
                problems.append(f"Ext^n(l({p.label()}), {y.label()}) ≠ 0")
    for v in range(a.vertex_count):
        i = indecomposable_injective(a, v)
        x_i = raw_five_term(i, pair).x_lower
        if x_i.dim == 0:
            continue
        if not pair.x.contains(x_i).holds:
            problems.append(f"r({i.label()}) not in X")
            continue
        for x in xs:
            res = minimal_resolution(x, 'projective', cap + 1)
            dims = ext_dimensions(x, x_i, list(range(1, cap + 1)), resolution=res)
            if any(dims.values()):
                problems.append(f"Ext^n({x.label()}, r({i.label()})) ≠ 0")
    projective_route = FAILS if problems else HOLDS
    vanishing_route = combine_status([report.conditions['c_prime'].status, report.conditions['d_prime'].status])
    witness = {'projective_injective_route': projective_route, 'vanishing_route': vanishing_route,
               'agreement': projective_route == vanishing_route, 'problems': problems}
    if projective_route != vanishing_route:
        return Verdict(FAILS, ['criteria disagree'] + problems, witness, complete=False)
    reasons = problems or ['ℓ(P) projective in Y and r(I) injective in X; matches (c′)/(d′)']
    return Verdict(projective_route, reasons, witness, complete=False)


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

class Decomposition(NamedTuple):
    triangle: Triangle
    complex: BoundedComplex        # the r-adapted complex that was decomposed
    replaced: bool
    x_membership: object
    y_membership: object


def decompose_complex(x: BoundedComplex, pair: OrthogonalPair, depth_cap: Optional[int] = None) -> Decomposition:
    """Triangle X_x -> x -> C -> X_x[1] with H^n(X_x) in 𝒳 and H^n(C) in 𝒴."""
    hypothesis = criterion_for(pair, depth_cap)
    if not hypothesis.holds:
        raise HypothesisError(f"{pair.name}: {'; '.join(hypothesis.reasons)}")
    working, replaced = x, False
    sequences = {i: build_five_term(m, pair, depth_cap, hypothesis) for i, m in x.terms.items()}
    if any(eps.x_upper.dim for eps in sequences.values()):
        working = injective_replacement(x).complex
        replaced = True
        sequences = {i: build_five_term(m, pair, depth_cap, hypothesis) for i, m in working.terms.items()}
        bad = [i for i, eps in sequences.items() if eps.x_upper.dim]
        if bad:
            raise FiveTermError(f"no r-adapted replacement: X^M ≠ 0 in degrees {bad}")
    a = pair.algebra
    left_terms = {i: eps.x_lower for i, eps in sequences.items()}
    left_diffs = {}
    for i in working.terms:
        if i + 1 in working.terms:
            ladder = extend_morphism_five_term(working.differential(i), sequences[i], sequences[i + 1])
            left_diffs[i] = ladder.x_lower
    left = BoundedComplex(a, left_terms, left_diffs, name=f"X_({working.label()})")
    counit = ChainMap(left, working, {i: sequences[i].eps_m1 for i in sequences})
    tri = cone(counit)
    x_side = membership_in_dbx(left, pair.x)
    y_side = membership_in_dbx(tri.c, pair.y)
    if not x_side.holds or not y_side.holds:
        raise FiveTermError(f"decomposition memberships fail: X-degrees {x_side.failing_degrees}, "
                            f"Y-degrees {y_side.failing_degrees}")
    return Decomposition(tri, working, replaced, x_side, y_side)


def derived_orthogonality(decomposition: Decomposition, window=None) -> Dict[int, int]:
    """dim Hom(X-piece, Y-piece[n]) over a window of degrees."""
    lo, hi = window or config.CHECK_WINDOWS['derived_orthogonality']
    tri = decomposition.triangle
    return {n: derived_hom(tri.a, tri.c, n) for n in range(lo, hi + 1)}
