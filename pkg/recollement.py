"""Recollement identities for ring epimorphisms and localizing Serre subcategories.

The 𝒴 ≃ 𝒵 round trip uses the Q•-functors of ring_epi.  The Serre checks
work with an idempotent e: the quotient 𝒜/𝒳 is realised as eAe-Mod with
q(M) = eM and section s(N) = Hom_{eAe}(eA, N).
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import AlgebraError, AlgebraPresentation, CornerAlgebra, corner_algebra, is_idempotent
from linalg import Matrix, column_space, hstack, solve
from modules import (
    Bimodule, FdModule, ModuleMap, are_isomorphic, hom_map, hom_module, hom_space, image,
    indecomposable_injective, kernel, projective_cover, simple_module, zero_module,
)
from orthogonal import (
    ExtPerpOfSimples, HomExtPerp, SerreBySimples, TorPerp, with_structural_objects,
)
from resolutions import ext_group, minimal_resolution
from ring_epi import (
    FAILS, HOLDS, UNKNOWN, RingEpiPresentation, Verdict, check_flat_criterion, check_pd_criterion,
    combine_status, l_functor, quotient_epi, r_functor,
)

logger = logging.getLogger(__name__)


def check_yz_equivalence(epi: RingEpiPresentation, inventory: Sequence[FdModule] = (),
                         depth_cap: Optional[int] = None) -> Verdict:
    """r: 𝒴 -> 𝒵 and ℓ: 𝒵 -> 𝒴 are mutually inverse on the inventory."""
    pd = check_pd_criterion(epi, depth_cap)
    flat = check_flat_criterion(epi, depth_cap)
    status = combine_status([pd.status, flat.status])
    if status != HOLDS:
        return Verdict(UNKNOWN,
                       ['both criteria are required: pd ' + pd.status + ', flat ' + flat.status],
                       {'pd_criterion': pd.status, 'flat_criterion': flat.status}, complete=False)
    y_spec, z_spec = HomExtPerp(epi), TorPerp(epi)
    modules = with_structural_objects(epi.source, inventory)
    failures: List[Dict] = []
    trips = {'y_to_z': 0, 'z_to_y': 0}
    for m in modules:
        if m.dim == 0:
            continue
        if y_spec.contains(m).holds:
            z = r_functor(epi, m, depth_cap, checked=True)
            trips['y_to_z'] += 1
            if not z_spec.contains(z).holds:
                failures.append({'module': m.label(), 'step': 'r(Y) not in Z', 'dim': z.dim})
            elif not are_isomorphic(l_functor(epi, z, depth_cap, checked=True), m):
                failures.append({'module': m.label(), 'step': 'l(r(Y)) not isomorphic to Y'})
        if z_spec.contains(m).holds:
            y = l_functor(epi, m, depth_cap, checked=True)
            trips['z_to_y'] += 1
            if not y_spec.contains(y).holds:
                failures.append({'module': m.label(), 'step': 'l(Z) not in Y', 'dim': y.dim})
            elif not are_isomorphic(r_functor(epi, y, depth_cap, checked=True), m):
                failures.append({'module': m.label(), 'step': 'r(l(Z)) not isomorphic to Z'})
    witness = {'round_trips': trips, 'failures': failures, 'inventory_size': len(modules)}
    if failures:
        first = failures[0]
        return Verdict(FAILS, [f"{first['module']}: {first['step']}"], witness, complete=False)
    logger.info(f"{epi.name}: Y/Z round trips closed ({trips['y_to_z']} + {trips['z_to_y']})")
    return Verdict(HOLDS, [f"{trips['y_to_z']} Y->Z->Y and {trips['z_to_y']} Z->Y->Z round trips close"],
                   witness, complete=False)


# ---------------------------------------------------------------------------
# Quotient and section functors for an idempotent
# ---------------------------------------------------------------------------

class CornerData:
    """eAe, the bimodule eA and the two functors between A-Mod and eAe-Mod."""

    def __init__(self, a: AlgebraPresentation, e: Matrix):
        if not is_idempotent(a, e):
            raise AlgebraError(f"{a.name}: element is not idempotent")
        if a.vertex_count == 0:
            raise AlgebraError(f"{a.name}: no vertices")
        self.algebra = a
        self.idempotent = e
        self.corner: CornerAlgebra = corner_algebra(a, e)
        self.bimodule = self._corner_bimodule()

    @property
    def target(self) -> AlgebraPresentation:
        return self.corner.algebra

    def _corner_bimodule(self) -> Bimodule:
        a, e = self.algebra, self.idempotent
        basis = column_space(a.left_matrix(e))
        inclusion = self.corner.inclusion
        actions = [solve(basis, a.left_matrix(inclusion.column(i)) @ basis) for i in range(inclusion.ncols)]
        left = FdModule(self.target, actions, name=f"e{a.name}", dim=basis.ncols)
        rights = [solve(basis, a.right_matrix(a.basis_vector(j)) @ basis) for j in range(a.dim)]
        self.ea_basis = basis
        return Bimodule(left, a, rights, unit=solve(basis, e), name=f"e{a.name}")

    def quotient(self, m: FdModule) -> Tuple[FdModule, Matrix]:
        """q(M) = eM with the inclusion of its basis into M."""
        basis = column_space(m.act(self.idempotent))
        if basis.ncols == 0:
            return zero_module(self.target), basis
        inclusion = self.corner.inclusion
        actions = [solve(basis, m.act(inclusion.column(i)) @ basis) for i in range(inclusion.ncols)]
        return FdModule(self.target, actions, name=f"e{m.label()}"), basis

    def section(self, n: FdModule):
        """s(N) = Hom_{eAe}(eA, N) as an A-module."""
        return hom_module(self.bimodule, n, name=f"s({n.label()})")

    def unit(self, m: FdModule) -> ModuleMap:
        """M -> s(q(M)), x ↦ (y ↦ y·x)."""
        qm, basis = self.quotient(m)
        hm = self.section(qm)
        field = m.field
        if hm.basis.dim == 0:
            return ModuleMap(m, hm.module, Matrix.zeros(field, hm.module.dim, m.dim))
        columns = []
        for j in range(m.dim):
            x = Matrix.unit_vector(field, m.dim, j)
            images = [m.act(self.ea_basis.column(i)) @ x for i in range(self.ea_basis.ncols)]
            phi = solve(basis, hstack(*images))
            columns.append(hm.basis.coordinates(phi))
        return ModuleMap(m, hm.module, hstack(*columns))


@dataclass
class LocalizingReport:
    kept: List[str]
    killed: List[str]
    corner_dim: int
    section_exact: Verdict
    perpendicular: Verdict
    status: str
    details: Dict = dataclass_field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'kept': self.kept, 'killed': self.killed, 'corner_dim': self.corner_dim,
                'status': self.status, 'section_exact': self.section_exact.to_dict(),
                'perpendicular': self.perpendicular.to_dict(), 'details': self.details}


def _section_exactness(data: CornerData, modules: Sequence[FdModule]) -> Verdict:
    """s applied to 0 -> ΩN -> P(N) -> N -> 0 for N = q(M) and the simples of eAe."""
    targets = []
    for m in modules:
        qm, _ = data.quotient(m)
        if qm.dim:
            targets.append(qm)
    b = data.target
    targets += [simple_module(b, v) for v in range(b.vertex_count)]
    checked = 0
    for n in targets:
        cover = projective_cover(n)
        syzygy, inclusion = kernel(cover.map)
        s_k, s_p, s_n = data.section(syzygy), data.section(cover.module), data.section(n)
        onto = hom_map(cover.map, s_p, s_n)
        into = hom_map(inclusion, s_k, s_p)
        checked += 1
        if onto.rank() != s_n.module.dim or into.rank() != s_k.module.dim \
                or s_p.module.dim != s_k.module.dim + s_n.module.dim:
            return Verdict(FAILS, [f"section functor is not exact on the cover of {n.label()}"],
                           {'module': n.label(), 'dims': [s_k.module.dim, s_p.module.dim, s_n.module.dim],
                            'rank_onto': onto.rank()})
    return Verdict(HOLDS, [f"section functor exact on {checked} sampled short exact sequences"],
                   {'sequences': checked}, complete=False)


def check_serre_localizing(a: AlgebraPresentation, kept: Sequence, inventory: Sequence[FdModule] = (),
                           idempotent: Optional[Matrix] = None) -> LocalizingReport:
    """𝒳 = {M : eM = 0} for e the idempotent at ``kept`` (or the one given)."""
    labels = a.vertex_labels
    kept = [labels[a.vertex_index(v)] for v in kept]
    killed = [v for v in labels if v not in kept]
    e = idempotent if idempotent is not None else a.idempotent_sum(kept)
    if not is_idempotent(a, e):
        raise AlgebraError(f"{a.name}: element is not idempotent")
    if e.is_zero():
        trivial = Verdict(HOLDS, ['e = 0: X is everything, the quotient is zero'], {})
        return LocalizingReport(kept, killed, 0, trivial, trivial, HOLDS)
    data = CornerData(a, e)
    modules = with_structural_objects(a, inventory)
    section = _section_exactness(data, modules)

    serre = SerreBySimples(a, killed)
    perp = ExtPerpOfSimples(serre)
    hom_ext = HomExtPerp(quotient_epi(a, kept)) if killed else None
    disagreements = []
    members = 0
    for m in modules:
        if m.dim == 0:
            continue
        answers = {'ext_perp': perp.contains(m).holds,
                   'injective_terms': perp.injective_terms_test(m) if killed else True,
                   'unit_iso': data.unit(m).is_isomorphism()}
        if hom_ext is not None:
            answers['hom_ext_perp'] = hom_ext.contains(m).holds
        members += answers['ext_perp']
        if len(set(answers.values())) > 1:
            disagreements.append({'module': m.label(), **answers})
    if disagreements:
        perpendicular = Verdict(FAILS, [f"descriptions of Y disagree on {disagreements[0]['module']}"],
                                {'disagreements': disagreements}, complete=False)
    else:
        perpendicular = Verdict(HOLDS, [f"Y = X^perp01 = closed modules on {len(modules)} modules "
                                        f"({members} in Y)"], {'modules': len(modules), 'members': members},
                                complete=False)
    status = combine_status([section.status, perpendicular.status])
    logger.info(f"{a.name}: Serre subcategory on {killed} localizing check: {status}")
    return LocalizingReport(kept, killed, data.target.dim, section, perpendicular, status,
                            {'corner': data.target.name, 'ea_dim': data.bimodule.dim})


def check_ext2_expansion(a: AlgebraPresentation, x_vertices: Sequence) -> Verdict:
    """Ext²(X, M) = 0 for the simples X of 𝒳 and all simples M (enough by induction on length)."""
    if not x_vertices:
        return Verdict(HOLDS, ['X = 0: vacuous'], {})
    nonzero = {}
    for label in x_vertices:
        x = simple_module(a, a.vertex_index(label))
        res = minimal_resolution(x, 'projective', 3)
        for v in range(a.vertex_count):
            d = ext_group(2, x, simple_module(a, v), resolution=res).dimension
            if d:
                nonzero[f"Ext^2({x.label()}, S{a.vertex_labels[v]})"] = d
    if nonzero:
        key = next(iter(nonzero))
        return Verdict(FAILS, [f"{key} = {nonzero[key]}"], {'nonzero': nonzero})
    return Verdict(HOLDS, ['Ext^2(X, M) = 0 for all simples: derived decomposition exists'],
                   {'simples': list(x_vertices)})


def check_injective_image_condition(a: AlgebraPresentation, x_vertices: Sequence,
                                    inventory: Sequence[FdModule] = (),
                                    localizing: Optional[LocalizingReport] = None) -> Verdict:
    """Images of morphisms I -> Y, I indecomposable injective and Y in the 𝒴-corpus, stay in 𝒴."""
    kept = [v for v in a.vertex_labels if v not in [a.vertex_labels[a.vertex_index(x)] for x in x_vertices]]
    localizing = localizing or check_serre_localizing(a, kept, inventory)
    if localizing.status != HOLDS:
        return Verdict(UNKNOWN, [f"X is not certified localizing ({localizing.status})"], {}, complete=False)
    perp = ExtPerpOfSimples(SerreBySimples(a, x_vertices))
    ys = [m for m in with_structural_objects(a, inventory) if m.dim and perp.contains(m).holds]
    checked = 0
    for v in range(a.vertex_count):
        i = indecomposable_injective(a, v)
        for y in ys:
            for phi in hom_space(i, y).maps:
                checked += 1
                img = image(phi).module
                if img.dim and not perp.contains(img).holds:
                    return Verdict(FAILS, [f"image of a map {i.label()} -> {y.label()} is not in Y"],
                                   {'injective': i.label(), 'target': y.label(), 'image_dim': img.dim},
                                   complete=False)
    return Verdict(HOLDS, [f"{checked} morphisms from indecomposable injectives checked"],
                   {'morphisms': checked, 'y_corpus': len(ys)}, complete=False)
