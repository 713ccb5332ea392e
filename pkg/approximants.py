"""
Finite approximants for the Z engine.

Every source atom A is a direct limit of cyclic groups A_1 -> A_2 -> ...
with transition maps "multiply by t_k".  Hom(A, B) is then the inverse limit
of the tower Hom(A_k, B), and the Milnor sequence

    0 -> lim^1 Hom(A_k, B) -> Ext^1(A, B) -> lim Ext^1(A_k, B) -> 0

reduces Ext^1 to stage-wise data.  Everything here is integer arithmetic on
orders and indices, independent of the lookup table in pid_spec.
"""

import logging
import math
from typing import Dict, List, NamedTuple, Optional, Tuple

from sympy import factorint, multiplicity

import config
from pid_spec import Atom, PrimeSet, SymbolicModule, table_representatives, VANISHING_TABLE

logger = logging.getLogger(__name__)

INFINITE = None   # order of an infinite group


class Stage(NamedTuple):
    """A_k is Z when ``order`` is 0, otherwise Z/order; ``transition`` maps A_k -> A_{k+1}."""
    order: int
    transition: int


def direct_system(atom: Atom, stages: int) -> List[Stage]:
    """Stages 1..stages of a direct system whose colimit is the atom."""
    if atom.kind == 'free':
        return [Stage(0, 1)] * stages
    if atom.kind == 'cyc':
        return [Stage(atom.prime ** atom.exponent, 1)] * stages
    if atom.kind == 'loc':
        if atom.primes.cofinite:
            raise ValueError('only finitely generated localizations have a single-prime-product system')
        return [Stage(0, math.prod(atom.primes.primes))] * stages
    if atom.kind == 'rat':
        return [Stage(0, k + 1) for k in range(1, stages + 1)]
    if atom.kind == 'pruefer':
        return [Stage(atom.prime ** k, atom.prime) for k in range(1, stages + 1)]
    raise ValueError(f"no direct system for {atom.kind}")


def localization_cokernel_system(primes: PrimeSet, stages: int) -> List[Stage]:
    """Stage k of coker(Z -> Z[T^-1]) is Z/t^k with transition t, t the product of T."""
    t = math.prod(primes.primes)
    return [Stage(t ** k, t) for k in range(1, stages + 1)]


def primary_orders(system: List[Stage]) -> Dict[int, int]:
    """p-adic valuation of the last stage order, per prime."""
    last = system[-1].order
    return {p: v for p, v in factorint(last).items()} if last > 1 else {}


# ---------------------------------------------------------------------------
# Target invariants
# ---------------------------------------------------------------------------

def _valuation(n: int, p: int) -> int:
    return multiplicity(p, n) if n else 0


def index_of_multiple(b: Atom, n: int) -> int:
    """[B : nB]."""
    if b.kind == 'free':
        return n
    if b.kind == 'loc':
        return math.prod(p ** k for p, k in factorint(n).items() if not b.primes.contains_prime(p))
    if b.kind == 'cyc':
        return b.prime ** min(b.exponent, _valuation(n, b.prime))
    return 1


def torsion_order(b: Atom, n: int) -> int:
    """|B[n]|, the n-torsion of B."""
    if b.kind == 'cyc':
        return b.prime ** min(b.exponent, _valuation(n, b.prime))
    if b.kind == 'pruefer':
        return b.prime ** _valuation(n, b.prime)
    return 1


class StageGroup(NamedTuple):
    """Hom(A_k, B): all of B or the finite torsion subgroup B[n]."""
    whole: bool
    order: int


def hom_stage(stage: Stage, b: Atom) -> StageGroup:
    if stage.order == 0:
        return StageGroup(True, 0)
    return StageGroup(False, torsion_order(b, stage.order))


def image_size(source: StageGroup, multiplier: int, b: Atom) -> Optional[int]:
    """Order of multiplier·H for H = Hom(A_{k+m}, B); None when the image is infinite."""
    if not source.whole:
        if source.order == 1:
            return 1
        p = b.prime
        return p ** max(_valuation(source.order, p) - _valuation(multiplier, p), 0)
    if b.kind == 'cyc':
        return b.prime ** max(b.exponent - _valuation(multiplier, b.prime), 0)
    return INFINITE


def _image_key(source: StageGroup, multiplier: int, b: Atom):
    """Comparable measure of the image of H_{k+m} -> H_k inside H_k."""
    size = image_size(source, multiplier, b)
    if size is not INFINITE:
        return ('finite', size)
    if b.kind in ('free', 'loc', 'rat'):
        return ('index', index_of_multiple(b, multiplier))
    return ('infinite', 0)


class TowerAnalysis(NamedTuple):
    stable: bool
    lim_nonzero: bool
    unstable_levels: Tuple[int, ...]


def analyse_tower(a: Atom, b: Atom, params: Optional[Dict] = None) -> TowerAnalysis:
    """Mittag-Leffler test on Hom(A_k, B) with transitions multiplication by t_k.

    Level k is stable when the image of H_{k+m} stops shrinking over the last
    ``stable_run`` values of m.
    """
    params = params or config.APPROXIMANT_PARAMS
    max_stage, run = params['max_stage'], params['stable_run']
    window = params['torsion_window']
    system = direct_system(a, max_stage + window + 1)
    unstable = []
    lim_nonzero = False
    for k in range(window):
        keys = []
        multiplier = 1
        for m in range(1, max_stage + 1):
            multiplier *= system[k + m - 1].transition
            keys.append(_image_key(hom_stage(system[k + m], b), multiplier, b))
        tail = keys[-run:]
        if any(key != tail[0] for key in tail):
            unstable.append(k + 1)
            continue
        kind, value = tail[0]
        if kind == 'finite':
            lim_nonzero = lim_nonzero or value > 1
        else:
            lim_nonzero = True
    return TowerAnalysis(not unstable, lim_nonzero, tuple(unstable))


def lim_ext_nonzero(a: Atom, b: Atom, params: Optional[Dict] = None) -> bool:
    """lim Ext^1(A_k, B): Ext^1(Z, B) = 0 and Ext^1(Z/n, B) = B/nB; the tower is surjective."""
    params = params or config.APPROXIMANT_PARAMS
    for stage in direct_system(a, params['max_stage']):
        if stage.order and index_of_multiple(b, stage.order) > 1:
            return True
    return False


class OracleVerdict(NamedTuple):
    hom_vanishes: bool
    ext1_vanishes: bool
    lim1_nonzero: bool
    lim_ext_nonzero: bool


def approximate(a: Atom, b: Atom, params: Optional[Dict] = None) -> OracleVerdict:
    tower = analyse_tower(a, b, params)
    lim_ext = lim_ext_nonzero(a, b, params)
    lim1 = not tower.stable
    verdict = OracleVerdict(not tower.lim_nonzero, not (lim1 or lim_ext), lim1, lim_ext)
    logger.debug(f"approximants {a.to_text()} -> {b.to_text()}: {verdict}")
    return verdict


class TableCheck(NamedTuple):
    key: Tuple[str, str, str]
    source: str
    target: str
    table: Tuple[bool, bool]
    oracle: Tuple[bool, bool]

    @property
    def agrees(self) -> bool:
        return self.table == self.oracle


def check_table(params: Optional[Dict] = None) -> List[TableCheck]:
    """Recompute every vanishing entry from representatives."""
    checks = []
    for key, (a, b) in sorted(table_representatives().items()):
        verdict = approximate(a, b, params)
        checks.append(TableCheck(key, a.to_text(), b.to_text(), VANISHING_TABLE[key],
                                 (verdict.hom_vanishes, verdict.ext1_vanishes)))
    missing = set(VANISHING_TABLE) - {c.key for c in checks}
    if missing:
        logger.warning(f"table entries without representatives: {sorted(missing)}")
    return checks


def pruefer_sum_matches_cokernel(primes: PrimeSet, params: Optional[Dict] = None) -> bool:
    """The p-primary parts of coker(Z -> Z[T^-1]) grow exactly at the primes of T."""
    params = params or config.APPROXIMANT_PARAMS
    system = localization_cokernel_system(primes, params['max_stage'])
    expected = SymbolicModule.of(*(Atom('pruefer', prime=p) for p in primes.primes))
    orders = primary_orders(system)
    grows = sorted(p for p, v in orders.items() if v >= params['max_stage'])
    return grows == [a.prime for a in expected.atoms]
