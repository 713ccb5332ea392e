"""Minimal resolutions and the derived functors Ext and Tor.

Projective resolutions are built from projective covers of successive
syzygies; injective coresolutions are the k-duals of projective resolutions
over the opposite algebra. A resolution that does not terminate within the
cap is checked for a repeated syzygy, which certifies infinite dimension.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import config
from algebra import AlgebraError, AlgebraPresentation
from complexes import BoundedComplex
from linalg import Matrix, Subquotient, hstack, kernel_basis, rref, solve
from modules import (
    FdModule, HomBasis, ModuleError, ModuleMap, dual_module, find_isomorphism, hom_space,
    indecomposable_projective, kernel, projective_cover, radical_submodule, simple_module, socle, tensor_space,
    tensor_space_map, tensor_space_map_right, zero_map, zero_module,
)

logger = logging.getLogger(__name__)


class ResolutionError(ValueError):
    """A resolution is too short for the requested degree or violates its invariants."""


def _inside(span: Matrix, vectors: Matrix) -> bool:
    if span.ncols == 0:
        return vectors.is_zero()
    return solve(span, vectors) is not None


class Resolution:
    """A minimal projective resolution P_k -> ... -> P_0 -> M or coresolution M -> I^0 -> ... -> I^k.

    For the projective direction ``differentials[k-1]`` is d_k: P_k -> P_{k-1};
    for the injective direction ``differentials[k]`` is d^k: I^k -> I^{k+1}.
    ``terminated`` means the next (co)syzygy is zero, so the resolution is complete.
    ``period`` is (j, k) when the k-th (co)syzygy is isomorphic to the j-th.
    """

    def __init__(self, direction: str, module: FdModule, terms: List[FdModule], differentials: List[ModuleMap],
                 augmentation: ModuleMap, syzygies: List[FdModule], summands: List[List[int]],
                 terminated: bool, period: Optional[Tuple[int, int]] = None, minimal: bool = True):
        self.direction = direction
        self.module = module
        self.terms = terms
        self.differentials = differentials
        self.augmentation = augmentation
        self.syzygies = syzygies
        self.summands = summands
        self.terminated = terminated
        self.period = period
        self.minimal = minimal

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.module.algebra

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term(self, k: int) -> FdModule:
        if 0 <= k < len(self.terms):
            return self.terms[k]
        if k < 0 or self.terminated:
            return zero_module(self.algebra)
        raise ResolutionError(f"resolution of {self.module.label()} computed only to length {self.length}")

    def differential(self, k: int) -> ModuleMap:
        if self.direction == 'projective':
            if 1 <= k <= len(self.differentials):
                return self.differentials[k - 1]
            return zero_map(self.term(k), self.term(k - 1))
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return zero_map(self.term(k), self.term(k + 1))

    def summand_labels(self) -> List[List[str]]:
        labels = self.algebra.vertex_labels
        return [[labels[v] for v in s] for s in self.summands]

    def verify(self):
        """Composites vanish, the augmented complex is exact, terms split as expected, minimality."""
        for f in [self.augmentation] + self.differentials:
            f.verify()
        if self.direction == 'projective':
            self._verify_projective()
        else:
            self._verify_injective()

    def _verify_projective(self):
        aug = self.augmentation
        if aug.rank() != self.module.dim:
            raise ResolutionError("augmentation is not surjective")
        previous_rank = aug.rank()
        for k in range(len(self.terms)):
            term = self.terms[k]
            outgoing = aug if k == 0 else self.differential(k)
            incoming = self.differential(k + 1) if k + 1 < len(self.terms) or self.terminated else None
            if incoming is not None:
                if not (outgoing.matrix @ incoming.matrix).is_zero():
                    raise ResolutionError(f"d∘d ≠ 0 at P_{k}")
                if incoming.rank() != term.dim - previous_rank:
                    raise ResolutionError(f"resolution not exact at P_{k}")
                if self.minimal and incoming.matrix.ncols:
                    rad = radical_submodule(term)
                    if not _inside(rad, incoming.matrix):
                        raise ResolutionError(f"differential into P_{k} leaves the radical")
                previous_rank = incoming.rank()
            expected = sum(indecomposable_projective(self.algebra, v).dim for v in self.summands[k])
            if expected != term.dim:
                raise ResolutionError(f"P_{k} is not the sum of its projective summands")

    def _verify_injective(self):
        coaug = self.augmentation
        if coaug.rank() != self.module.dim:
            raise ResolutionError("coaugmentation is not injective")
        previous_rank = coaug.rank()
        for k in range(len(self.terms)):
            term = self.terms[k]
            incoming = coaug if k == 0 else self.differential(k - 1)
            outgoing = self.differential(k) if k + 1 < len(self.terms) or self.terminated else None
            if outgoing is not None:
                if not (outgoing.matrix @ incoming.matrix).is_zero():
                    raise ResolutionError(f"d∘d ≠ 0 at I^{k}")
                if term.dim - outgoing.rank() != previous_rank:
                    raise ResolutionError(f"coresolution not exact at I^{k}")
                if self.minimal and not (outgoing.matrix @ socle(term)).is_zero():
                    raise ResolutionError(f"differential out of I^{k} does not kill the socle")
                previous_rank = outgoing.rank()

    def __repr__(self):
        return (f"Resolution({self.direction}, {self.module.label()}, length={self.length}, "
                f"terminated={self.terminated}, period={self.period})")


def _find_period(candidates: Sequence[FdModule], syzygy: FdModule) -> Optional[int]:
    for j, earlier in enumerate(candidates):
        if earlier.dim and earlier.signature() == syzygy.signature() and find_isomorphism(earlier, syzygy) is not None:
            return j
    return None


def minimal_resolution(m: FdModule, direction: str = 'projective', length: int = 2,
                       detect_period: bool = False) -> Resolution:
    """Minimal resolution of M up to term ``length`` (stops early when complete or periodic)."""
    if length < 0:
        raise ResolutionError("resolution length must be non-negative")
    if direction == 'injective':
        return _injective_from_dual(m, length, detect_period)
    if direction != 'projective':
        raise ResolutionError(f"unknown resolution direction {direction!r}")

    terms, differentials, syzygies, summands = [], [], [], []
    augmentation = None
    previous_inclusion = None
    current = m
    terminated = False
    period = None
    for k in range(length + 1):
        cover = projective_cover(current)
        terms.append(cover.module)
        summands.append(cover.summands)
        if k == 0:
            augmentation = cover.map
        else:
            differentials.append(ModuleMap(cover.module, terms[k - 1], previous_inclusion.matrix @ cover.map.matrix))
        syzygy, inclusion = kernel(cover.map)
        if syzygy.dim:
            syzygy.name = f"Omega^{k + 1}({m.label()})"
        syzygies.append(syzygy)
        if syzygy.dim == 0:
            terminated = True
            break
        if detect_period:
            j = _find_period([m] + syzygies[:-1], syzygy)
            if j is not None:
                period = (j, k + 1)
                logger.info(f"resolution of {m.label()} is periodic: Omega^{j} ≅ Omega^{k + 1}")
                break
        previous_inclusion = inclusion
        current = syzygy
    logger.debug(f"projective resolution of {m.label()}: {len(terms)} terms, terminated={terminated}")
    return Resolution('projective', m, terms, differentials, augmentation, syzygies, summands,
                      terminated, period)


def _injective_from_dual(m: FdModule, length: int, detect_period: bool) -> Resolution:
    dual = minimal_resolution(dual_module(m), 'projective', length, detect_period)
    labels = m.algebra.vertex_labels
    terms = [dual_module(P, name='+'.join(f"I{labels[v]}" for v in s) or '0') if P.dim else zero_module(m.algebra)
             for P, s in zip(dual.terms, dual.summands)]
    differentials = [ModuleMap(terms[k], terms[k + 1], d.matrix.T) for k, d in enumerate(dual.differentials)]
    coaugmentation = ModuleMap(m, terms[0], dual.augmentation.matrix.T)
    cosyzygies = [dual_module(s) if s.dim else zero_module(m.algebra) for s in dual.syzygies]
    return Resolution('injective', m, terms, differentials, coaugmentation, cosyzygies, dual.summands,
                      dual.terminated, dual.period)


class DimensionVerdict(NamedTuple):
    status: str                      # 'finite' | 'infinite' | 'unknown-at-cap'
    value: Optional[int]
    period: Optional[Tuple[int, int]]
    resolution: Optional[Resolution]

    def at_most(self, bound: int) -> Optional[bool]:
        """True/False when decided, None when unknown."""
        if self.status == 'finite':
            return self.value <= bound
        if self.status == 'infinite':
            return False
        return None

    def describe(self) -> str:
        if self.status == 'finite':
            return str(self.value)
        if self.status == 'infinite':
            return f"infinite (syzygies {self.period[0]} and {self.period[1]} isomorphic)"
        return 'unknown at cap'


def projective_dimension(m: FdModule, depth_cap: Optional[int] = None) -> DimensionVerdict:
    cap = config.DEPTH_CAP if depth_cap is None else depth_cap
    res = minimal_resolution(m, 'projective', cap, detect_period=True)
    if res.terminated:
        return DimensionVerdict('finite', res.length, None, res)
    if res.period is not None:
        return DimensionVerdict('infinite', None, res.period, res)
    logger.warning(f"pd({m.label()}) undecided at cap {cap}")
    return DimensionVerdict(config.VERDICTS['unknown'], None, None, res)


def injective_dimension(m: FdModule, depth_cap: Optional[int] = None) -> DimensionVerdict:
    cap = config.DEPTH_CAP if depth_cap is None else depth_cap
    res = minimal_resolution(m, 'injective', cap, detect_period=True)
    if res.terminated:
        return DimensionVerdict('finite', res.length, None, res)
    if res.period is not None:
        return DimensionVerdict('infinite', None, res.period, res)
    return DimensionVerdict(config.VERDICTS['unknown'], None, None, res)


def global_dimension(a: AlgebraPresentation, depth_cap: Optional[int] = None) -> DimensionVerdict:
    """Maximum projective dimension over the simple modules."""
    verdicts = [projective_dimension(simple_module(a, v), depth_cap) for v in range(a.vertex_count)]
    for v in verdicts:
        if v.status == 'infinite':
            return v
    for v in verdicts:
        if v.status != 'finite':
            return v
    return DimensionVerdict('finite', max((v.value for v in verdicts), default=0), None, None)


# ---------------------------------------------------------------------------
# Ext and Tor
# ---------------------------------------------------------------------------

class ExtGroup(NamedTuple):
    degree: int
    dimension: int
    witnesses: List[ModuleMap]   # cocycles P_k -> N representing a basis


def _ensure_resolution(m: FdModule, resolution: Optional[Resolution], needed: int) -> Resolution:
    if resolution is not None and (resolution.terminated or resolution.length >= needed):
        return resolution
    return minimal_resolution(m, 'projective', needed)


def _precompose_matrix(source: HomBasis, target: HomBasis, d: ModuleMap) -> Matrix:
    """Matrix of φ ↦ φ∘d from Hom(P, N) to Hom(P', N) for d: P' -> P."""
    field = d.source.field
    if source.dim == 0 or target.dim == 0:
        return Matrix.zeros(field, target.dim, source.dim)
    return hstack(*[target.coordinates(phi.matrix @ d.matrix) for phi in source.maps])


def ext_group(k: int, m: FdModule, n: FdModule, resolution: Optional[Resolution] = None) -> ExtGroup:
    """Ext^k(M, N) as cocycles modulo coboundaries of Hom(P•, N)."""
    if k < 0:
        raise ValueError("Ext degree must be non-negative")
    if m.algebra is not n.algebra:
        raise ModuleError("algebra mismatch in Ext")
    res = _ensure_resolution(m, resolution, k + 1)
    field = m.field
    hom_k = hom_space(res.term(k), n)
    if hom_k.dim == 0:
        return ExtGroup(k, 0, [])
    hom_next = hom_space(res.term(k + 1), n)
    delta = _precompose_matrix(hom_k, hom_next, res.differential(k + 1))
    cocycles = kernel_basis(delta) if hom_next.dim else Matrix.identity(field, hom_k.dim)
    if k >= 1:
        hom_prev = hom_space(res.term(k - 1), n)
        coboundaries = _precompose_matrix(hom_prev, hom_k, res.differential(k))
    else:
        coboundaries = Matrix.zeros(field, hom_k.dim, 0)
    quotient = Subquotient(cocycles, coboundaries)
    witnesses = [hom_k.combine(quotient.representatives.column(j)) for j in range(quotient.dim)]
    return ExtGroup(k, quotient.dim, witnesses)


def ext_dimensions(m: FdModule, n: FdModule, degrees: Sequence[int],
                   resolution: Optional[Resolution] = None) -> Dict[int, int]:
    """dim Ext^k(M, N) for several degrees from one resolution."""
    top_degree = max(degrees) if degrees else 0
    res = _ensure_resolution(m, resolution, top_degree + 1)
    return {k: ext_group(k, m, n, resolution=res).dimension for k in degrees}


def euler_form(a: AlgebraPresentation, d: Sequence[int], e: Sequence[int]) -> int:
    """<d, e> = sum_i d_i e_i - sum over arrows i -> j of d_i e_j.

    On a hereditary path algebra this is dim Hom(M, N) - dim Ext^1(M, N).
    """
    if a.paths is None:
        raise AlgebraError(f"{a.name} has no quiver")
    form = sum(x * y for x, y in zip(d, e))
    for p in a.paths:
        if p.length == 1:
            form -= d[p.source - 1] * e[p.target - 1]
    return form


class TorGroup(NamedTuple):
    degree: int
    dimension: int


def _homology_dimension(incoming: Matrix, outgoing: Matrix, dim: int) -> int:
    out_rank = rref(outgoing).rank if outgoing.nrows and outgoing.ncols else 0
    in_rank = rref(incoming).rank if incoming.nrows and incoming.ncols else 0
    return dim - out_rank - in_rank


def tor_group(k: int, right: FdModule, left: FdModule, resolve: str = 'left',
              resolution: Optional[Resolution] = None) -> TorGroup:
    """Tor_k(right, left); resolve the left argument (default) or the right one."""
    if k < 0:
        raise ValueError("Tor degree must be non-negative")
    if right.algebra is not left.algebra.opposite():
        raise ModuleError(f"algebra mismatch in Tor: {right.algebra.name} vs {left.algebra.name}^op")
    if resolve == 'left':
        res = _ensure_resolution(left, resolution, k + 1)
        spaces = {j: tensor_space(right, res.term(j)) for j in (k - 1, k, k + 1) if j >= 0}

        def boundary(j):
            return tensor_space_map(res.differential(j), spaces[j], spaces[j - 1])
    elif resolve == 'right':
        res = _ensure_resolution(right, resolution, k + 1)
        spaces = {j: tensor_space(res.term(j), left) for j in (k - 1, k, k + 1) if j >= 0}

        def boundary(j):
            return tensor_space_map_right(res.differential(j), spaces[j], spaces[j - 1])
    else:
        raise ValueError(f"unknown side {resolve!r}")
    dim = spaces[k].dim
    outgoing = boundary(k) if k >= 1 else Matrix.zeros(left.field, 0, dim)
    incoming = boundary(k + 1)
    return TorGroup(k, _homology_dimension(incoming, outgoing, dim))


def resolution_complex(res: Resolution, length: int = 2) -> BoundedComplex:
    """The (co)resolution without the module: P^{-k} = P_k, or I^k, for k <= length."""
    terms, diffs = {}, {}
    available = range((length if res.terminated else min(length, res.length)) + 1)
    if res.direction == 'projective':
        for k in available:
            terms[-k] = res.term(k)
            if k >= 1:
                diffs[-k] = res.differential(k)
        return BoundedComplex(res.algebra, terms, diffs, name=f"P({res.module.label()})", check=False)
    for k in available:
        terms[k] = res.term(k)
        if k >= 1:
            diffs[k - 1] = res.differential(k - 1)
    return BoundedComplex(res.algebra, terms, diffs, name=f"I({res.module.label()})", check=False)
