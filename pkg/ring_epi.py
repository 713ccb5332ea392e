"""Ring epimorphisms between finite-dimensional algebras.

A ring epimorphism λ: R -> S is kept as an (R, R)-bimodule structure on S
(restriction of scalars on both sides). Ker λ and Coker λ are stored once as
bimodules and read as left or right modules where needed.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence

import config
from algebra import AlgebraPresentation, quotient_algebra, two_sided_ideal
from complexes import BoundedComplex, cohomology_data
from linalg import Matrix, block_matrix, column_space, kernel_basis, rref, solve
from modules import (
    Bimodule, FdModule, ModuleMap, direct_sum, evaluation_map, hom_map, hom_module, hom_space,
    indecomposable_injective, quotient_bimodule, regular_bimodule, regular_module, restrict_module,
    sub_bimodule, tensor_map, tensor_module, tensor_space, tensor_unit_map,
)
from resolutions import minimal_resolution, projective_dimension, tor_group

logger = logging.getLogger(__name__)

HOLDS = config.VERDICTS['holds']
FAILS = config.VERDICTS['fails']
UNKNOWN = config.VERDICTS['unknown']


class HypothesisError(ValueError):
    """A construction was requested for an epimorphism that does not satisfy its criterion."""


@dataclass
class Verdict:
    """Three-valued answer with human reasons and a machine-readable witness."""
    status: str
    reasons: List[str] = dataclass_field(default_factory=list)
    witness: Dict = dataclass_field(default_factory=dict)
    complete: bool = True

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> Dict:
        return {'status': self.status, 'complete': self.complete, 'reasons': list(self.reasons),
                'witness': self.witness}


def combine_status(statuses: Sequence[str]) -> str:
    """fails dominates unknown, unknown dominates holds."""
    if FAILS in statuses:
        return FAILS
    if UNKNOWN in statuses:
        return UNKNOWN
    return HOLDS


class RingEpiPresentation:
    """λ: R -> S given by the matrix of λ on the basis of R (dim S x dim R)."""

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation, matrix: Matrix,
                 name: Optional[str] = None, check: bool = True):
        if matrix.shape != (target.dim, source.dim):
            raise HypothesisError(f"λ matrix {matrix.shape} does not fit {source.dim} -> {target.dim}")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name or f"{source.name}->{target.name}"
        if check:
            self.verify_homomorphism()
        s_regular = regular_module(target)
        left = restrict_module(s_regular, source, matrix, name=target.name)
        rights = [target.right_matrix(matrix.column(i)) for i in range(source.dim)]
        self.bimodule = Bimodule(left, source, rights, unit=target.unit, name=target.name)
        self._kernel = None
        self._cokernel = None

    def verify_homomorphism(self):
        r, s = self.source, self.target
        if self.matrix @ r.unit != s.unit:
            raise HypothesisError(f"{self.name}: λ(1) ≠ 1")
        for i in range(r.dim):
            for j in range(r.dim):
                lhs = self.matrix @ r.left_mult[i].column(j)
                rhs = s.multiply(self.matrix.column(i), self.matrix.column(j))
                if lhs != rhs:
                    raise HypothesisError(f"{self.name}: λ({r.labels[i]}·{r.labels[j]}) ≠ λ({r.labels[i]})·λ({r.labels[j]})")

    @property
    def left_target(self) -> FdModule:
        """_R S."""
        return self.bimodule.left

    @property
    def right_target(self) -> FdModule:
        """S_R as a left R^op-module."""
        return self.bimodule.right_module

    @property
    def kernel(self) -> Bimodule:
        if self._kernel is None:
            self._kernel = sub_bimodule(regular_bimodule(self.source), kernel_basis(self.matrix),
                                        name=f"Ker({self.name})")
        return self._kernel

    @property
    def cokernel(self) -> Bimodule:
        if self._cokernel is None:
            self._cokernel = quotient_bimodule(self.bimodule, column_space(self.matrix),
                                               name=f"Coker({self.name})")
        return self._cokernel

    def is_surjective(self) -> bool:
        return rref(self.matrix).rank == self.target.dim

    def multiplication_certificate(self) -> Verdict:
        """S ⊗_R S -> S is an isomorphism."""
        s = self.target
        space = tensor_space(self.right_target, self.left_target)
        field = s.field
        columns = [s.left_mult[i].column(j) for i in range(s.dim) for j in range(s.dim)]
        multiplication = Matrix.from_columns(field, columns, s.dim)
        image_rank = rref(multiplication @ space.subquotient.representatives).rank if space.dim else 0
        witness = {'dim_tensor': space.dim, 'dim_target': s.dim, 'image_rank': image_rank}
        if space.dim == s.dim and image_rank == s.dim:
            return Verdict(HOLDS, ['S⊗_R S -> S is an isomorphism'], witness)
        return Verdict(FAILS, [f"S⊗_R S has dimension {space.dim}, multiplication has rank {image_rank}, "
                               f"dim S = {s.dim}"], witness)

    def __repr__(self):
        return f"RingEpiPresentation({self.name!r})"


def identity_epi(a: AlgebraPresentation) -> RingEpiPresentation:
    return RingEpiPresentation(a, a, Matrix.identity(a.field, a.dim), name=f"id({a.name})")


def quotient_epi(a: AlgebraPresentation, vertices: Sequence, name: Optional[str] = None) -> RingEpiPresentation:
    """A -> A/AeA with e the sum of the idempotents at ``vertices``."""
    e = a.idempotent_sum(vertices)
    ideal = two_sided_ideal(a, e)
    killed = ','.join(str(v) for v in vertices)
    q = quotient_algebra(a, ideal, name=f"{a.name}/<{killed}>")
    return RingEpiPresentation(a, q.algebra, q.projection, name=name or f"{a.name}->{q.algebra.name}")


def rebase_target(epi: RingEpiPresentation, change: Matrix) -> RingEpiPresentation:
    """The same epimorphism after the change of basis b'_i = Σ change[j, i] b_j of S."""
    s = epi.target
    inverse = solve(change, Matrix.identity(s.field, s.dim))
    if inverse is None:
        raise HypothesisError("basis change is not invertible")
    left_mult = []
    for i in range(s.dim):
        combined = s.left_matrix(change.column(i))
        left_mult.append(inverse @ combined @ change)
    rebased = AlgebraPresentation(s.field, [f"{l}'" for l in s.labels], left_mult, inverse @ s.unit,
                                  name=f"{s.name}'", check=False)
    return RingEpiPresentation(epi.source, rebased, inverse @ epi.matrix, name=f"{epi.name}'")


class TwoTermComplexQ:
    """Q•: 0 -> R -λ-> S -> 0 with R in degree -1, as a complex of left R-modules."""

    def __init__(self, epi: RingEpiPresentation):
        self.epi = epi
        r = regular_module(epi.source)
        self.differential = ModuleMap(r, epi.left_target, epi.matrix)
        self.complex = BoundedComplex(epi.source, {-1: r, 0: epi.left_target}, {-1: self.differential},
                                      name=f"Q({epi.name})")

    def verify(self):
        self.differential.verify()
        if self.differential.matrix != self.epi.matrix:
            raise HypothesisError("differential of Q• differs from λ")


# ---------------------------------------------------------------------------
# Homological epimorphisms and the two criteria
# ---------------------------------------------------------------------------

def is_homological_epi(epi: RingEpiPresentation, depth_cap: Optional[int] = None) -> Verdict:
    """Multiplication isomorphism and Tor_n^R(S, S) = 0 for n >= 1."""
    cap = config.DEPTH_CAP if depth_cap is None else depth_cap
    certificate = epi.multiplication_certificate()
    if not certificate.holds:
        return Verdict(FAILS, ['not a ring epimorphism: ' + certificate.reasons[0]], certificate.witness)
    key = ('pd_left_target', epi.name, cap)
    pd = epi.source.cached(key, lambda: projective_dimension(epi.left_target, cap))
    bound = pd.value if pd.status == 'finite' else cap
    resolution = pd.resolution
    for n in range(1, bound + 1):
        tor = tor_group(n, epi.right_target, epi.left_target, resolution=resolution)
        if tor.dimension:
            logger.info(f"{epi.name}: Tor_{n}(S, S) has dimension {tor.dimension}")
            return Verdict(FAILS, [f"Tor_{n}^R(S,S) ≠ 0 (dimension {tor.dimension})"],
                           {'tor_degree': n, 'tor_dimension': tor.dimension, 'pd': pd.describe()})
    if pd.status == 'finite':
        return Verdict(HOLDS, [f"Tor_n^R(S,S) = 0 for 1 <= n <= pd = {pd.value}"], {'pd': pd.value})
    return Verdict(UNKNOWN, [f"Tor_n^R(S,S) = 0 for n <= {cap}, pd(_R S) {pd.describe()}"],
                   {'pd': pd.describe(), 'cap': cap}, complete=False)


def _precondition(epi: RingEpiPresentation, depth_cap: Optional[int]) -> Optional[Verdict]:
    homological = is_homological_epi(epi, depth_cap)
    if homological.holds:
        return None
    return Verdict(homological.status, ['precondition: ' + r for r in homological.reasons],
                   homological.witness, homological.complete)


def check_pd_criterion(epi: RingEpiPresentation, depth_cap: Optional[int] = None) -> Verdict:
    """pd(_R S) <= 1 and Hom_R(Coker λ, Ker λ) = 0."""
    blocked = _precondition(epi, depth_cap)
    if blocked is not None:
        return blocked
    pd = projective_dimension(epi.left_target, depth_cap)
    reasons, witness, statuses = [], {}, []
    witness['pd'] = pd.describe()
    if pd.status == 'finite' and pd.value <= 1:
        reasons.append(f"pd(_R S) = {pd.value}")
        statuses.append(HOLDS)
    elif pd.status == 'finite' or pd.status == 'infinite':
        reasons.append(f"pd={pd.describe()}")
        witness['resolution_terms'] = [p.dim for p in pd.resolution.terms]
        statuses.append(FAILS)
    else:
        reasons.append('pd(_R S) unknown at cap')
        statuses.append(UNKNOWN)
    coker, ker = epi.cokernel.left, epi.kernel.left
    hom = hom_space(coker, ker)
    witness['hom_coker_ker'] = hom.dim
    witness['hom_coker_r'] = hom_space(coker, regular_module(epi.source)).dim
    if hom.dim == 0:
        reasons.append('Hom_R(Coker λ, Ker λ) = 0')
        statuses.append(HOLDS)
    else:
        reasons.append(f"Hom_R(Coker λ, Ker λ) has dimension {hom.dim}")
        statuses.append(FAILS)
    return Verdict(combine_status(statuses), reasons, witness, UNKNOWN not in statuses)


def check_flat_criterion(epi: RingEpiPresentation, depth_cap: Optional[int] = None) -> Verdict:
    """fld(S_R) <= 1 and Coker λ ⊗_R I = 0 for every indecomposable injective I."""
    blocked = _precondition(epi, depth_cap)
    if blocked is not None:
        return blocked
    fld = projective_dimension(epi.right_target, depth_cap)
    reasons, witness, statuses = [], {'fld': fld.describe()}, []
    if fld.status == 'finite' and fld.value <= 1:
        reasons.append(f"fld(S_R) = {fld.value}")
        statuses.append(HOLDS)
    elif fld.status in ('finite', 'infinite'):
        reasons.append(f"fld={fld.describe()}")
        witness['resolution_terms'] = [p.dim for p in fld.resolution.terms]
        statuses.append(FAILS)
    else:
        reasons.append('fld(S_R) unknown at cap')
        statuses.append(UNKNOWN)
    r = epi.source
    nonzero = {}
    for v in range(r.vertex_count):
        dim = tensor_space(epi.cokernel.right_module, indecomposable_injective(r, v)).dim
        if dim:
            nonzero[r.vertex_labels[v]] = dim
    witness['coker_tensor_injective'] = nonzero
    if not nonzero:
        reasons.append('Coker λ ⊗_R I = 0 for all indecomposable injectives')
        statuses.append(HOLDS)
    else:
        labels = ', '.join(f"I{k}" for k in nonzero)
        reasons.append(f"Coker λ ⊗_R I ≠ 0 for {labels}")
        statuses.append(FAILS)
    return Verdict(combine_status(statuses), reasons, witness, UNKNOWN not in statuses)


# ---------------------------------------------------------------------------
# ℓ and r through Q•
# ---------------------------------------------------------------------------

def _require(verdict: Verdict, what: str):
    if not verdict.holds:
        raise HypothesisError(f"{what} not verified: {'; '.join(verdict.reasons)}")


def l_functor(epi: RingEpiPresentation, m: FdModule, depth_cap: Optional[int] = None,
              checked: bool = False) -> FdModule:
    """ℓ(M) = H⁰ of the total complex Hom_R(Q•[-1], I•) for the minimal injective coresolution I•.

    Degree k of the total complex is I^k ⊕ Hom_R(S, I^{k+1}) with
    D(a, ψ) = (d a + (-1)^k ψ(1), d∘ψ).
    """
    if not checked:
        _require(check_pd_criterion(epi, depth_cap), 'pd criterion')
    res = minimal_resolution(m, 'injective', 2)
    b = epi.bimodule
    field = m.field
    homs = {k: hom_module(b, res.term(k)) for k in range(0, 3)}
    terms, sums = {}, {}
    for k in (-1, 0, 1):
        parts = ([res.term(k)] if k >= 0 else []) + [homs[k + 1].module]
        sums[k] = direct_sum(parts, algebra=epi.source)
        terms[k] = sums[k].module
    diffs = {}
    for k in (-1, 0):
        ev = evaluation_map(b, homs[k + 1], res.term(k + 1)).matrix
        post = hom_map(res.differential(k + 1), homs[k + 1], homs[k + 2]).matrix
        sign = field(-1 if k % 2 else 1)
        if k == -1:
            matrix = block_matrix(field, [[ev.scale(sign)], [post]])
        else:
            d = res.differential(k).matrix
            zero = Matrix.zeros(field, homs[k + 2].module.dim, res.term(k).dim)
            matrix = block_matrix(field, [[d, ev.scale(sign)], [zero, post]])
        diffs[k] = ModuleMap(terms[k], terms[k + 1], matrix)
    total = BoundedComplex(epi.source, terms, diffs, name=f"G({m.label()})")
    module = cohomology_data(total, 0).module
    module.name = f"l({m.label()})"
    return module


def r_functor(epi: RingEpiPresentation, m: FdModule, depth_cap: Optional[int] = None,
              checked: bool = False) -> FdModule:
    """r(M) = H⁰ of Q•[-1] ⊗_R P• for the minimal projective resolution P• (P^{-k} = P_k).

    Degree k of the total complex is P^k ⊕ S ⊗ P^{k-1} with
    D(p, t) = (d p, u(p) - (1⊗d) t), u the unit p ↦ 1 ⊗ p.
    """
    if not checked:
        _require(check_flat_criterion(epi, depth_cap), 'flat criterion')
    res = minimal_resolution(m, 'projective', 2)
    b = epi.bimodule
    field = m.field

    def p(k):
        return res.term(-k)

    def dp(k):
        return res.differential(-k)   # P^k -> P^{k+1}

    tensors = {k: tensor_module(b, p(k)) for k in (-2, -1, 0)}
    units = {k: tensor_unit_map(b, p(k), tensors[k]) for k in (-2, -1, 0)}
    terms, sums = {}, {}
    for k in (-1, 0, 1):
        parts = ([p(k)] if k <= 0 else []) + [tensors[k - 1].module]
        sums[k] = direct_sum(parts, algebra=epi.source)
        terms[k] = sums[k].module
    diffs = {}
    for k in (-1, 0):
        one_d = tensor_map(dp(k - 1), tensors[k - 1], tensors[k]).matrix
        u = units[k].matrix
        if k == 0:
            matrix = block_matrix(field, [[u, -one_d]])
        else:
            zero = Matrix.zeros(field, p(k + 1).dim, tensors[k - 1].module.dim)
            matrix = block_matrix(field, [[dp(k).matrix, zero], [u, -one_d]])
        diffs[k] = ModuleMap(terms[k], terms[k + 1], matrix)
    total = BoundedComplex(epi.source, terms, diffs, name=f"F({m.label()})")
    module = cohomology_data(total, 0).module
    module.name = f"r({m.label()})"
    return module