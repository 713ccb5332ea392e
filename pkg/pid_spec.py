"""
Symbolic modules over Z: prime sets, support, five-term sequences and stratification.

Modules are direct sums of atoms

    free(n)        Z^n
    cyc(p,k)       Z/p^k
    loc{T}         Z[T^-1]            (T a finite or cofinite set of primes)
    rat            Q
    pruefer(p)     Z(p^inf)
    pruefersum{P}  sum of Z(p^inf) over p in P

and every construction stays inside this class.  Hom/Ext vanishing between
atoms is a table lookup keyed by (kind, kind, prime relation); approximants.py
re-derives every entry from finite approximations.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from sympy import factorint, isprime, nextprime, primerange

import config
from orthogonal import FiveTermError

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """An operation of the Z engine was called outside its hypotheses."""


class PrimePoint(NamedTuple):
    """A point of Spec(Z): the generic point (0) when ``prime`` is None."""
    prime: Optional[int] = None

    @property
    def generic(self) -> bool:
        return self.prime is None

    def __str__(self):
        return '(0)' if self.generic else f"({self.prime})"


def prime_point(p: Optional[int] = None) -> PrimePoint:
    if p is not None and (p < 2 or not isprime(p)):
        raise PreconditionError(f"{p} is not a prime")
    return PrimePoint(p)


def _check_primes(primes) -> Tuple[int, ...]:
    values = tuple(sorted(set(int(p) for p in primes)))
    for p in values:
        if p < 2 or not isprime(p):
            raise PreconditionError(f"{p} is not a prime")
    return values


@dataclass(frozen=True)
class PrimeSet:
    """A subset of Spec(Z): optionally the generic point, plus a finite or cofinite set of primes.

    With ``cofinite`` set, ``primes`` lists the excluded primes.
    """
    generic: bool = False
    primes: Tuple[int, ...] = ()
    cofinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'primes', _check_primes(self.primes))

    # -- constructors -------------------------------------------------------

    @classmethod
    def of(cls, *primes: int, generic: bool = False) -> 'PrimeSet':
        return cls(generic, tuple(primes), False)

    @classmethod
    def all_primes(cls, excluding: Sequence[int] = ()) -> 'PrimeSet':
        return cls(False, tuple(excluding), True)

    @classmethod
    def spec(cls) -> 'PrimeSet':
        return cls(True, (), True)

    @classmethod
    def minimal(cls) -> 'PrimeSet':
        return cls(True, (), False)

    @classmethod
    def empty(cls) -> 'PrimeSet':
        return cls()

    # -- queries ------------------------------------------------------------

    def contains_prime(self, p: int) -> bool:
        return (p in self.primes) != self.cofinite

    def contains(self, point: PrimePoint) -> bool:
        return self.generic if point.generic else self.contains_prime(point.prime)

    def is_empty(self) -> bool:
        return not self.generic and not self.cofinite and not self.primes

    def is_spec(self) -> bool:
        return self.generic and self.cofinite and not self.primes

    def has_no_primes(self) -> bool:
        return not self.cofinite and not self.primes

    def has_all_primes(self) -> bool:
        return self.cofinite and not self.primes

    def maximal_part(self) -> 'PrimeSet':
        return PrimeSet(False, self.primes, self.cofinite)

    def sort_key(self):
        return (self.generic, self.cofinite, self.primes)

    def sample_primes(self, relevant: Sequence[int] = ()) -> List[int]:
        """The primes of the set among ``relevant``, plus one other member when the set is cofinite."""
        chosen = [p for p in sorted(set(relevant)) if self.contains_prime(p)]
        if not self.cofinite:
            return sorted(set(chosen) | set(self.primes))
        other = 2
        while other in relevant or other in self.primes:
            other = nextprime(other)
        return chosen + [other]

    def enumerate(self, limit: int) -> List[int]:
        return [p for p in primerange(2, limit + 1) if self.contains_prime(p)]

    # -- set algebra --------------------------------------------------------

    def complement(self) -> 'PrimeSet':
        return PrimeSet(not self.generic, self.primes, not self.cofinite)

    def union(self, other: 'PrimeSet') -> 'PrimeSet':
        a, b = set(self.primes), set(other.primes)
        if not self.cofinite and not other.cofinite:
            primes, cofinite = a | b, False
        elif self.cofinite and other.cofinite:
            primes, cofinite = a & b, True
        else:
            finite, excluded = (a, b) if other.cofinite else (b, a)
            primes, cofinite = excluded - finite, True
        return PrimeSet(self.generic or other.generic, tuple(primes), cofinite)

    def intersection(self, other: 'PrimeSet') -> 'PrimeSet':
        return self.complement().union(other.complement()).complement()

    def difference(self, other: 'PrimeSet') -> 'PrimeSet':
        return self.intersection(other.complement())

    def issubset(self, other: 'PrimeSet') -> bool:
        return self.difference(other).is_empty()

    # -- text ---------------------------------------------------------------

    def to_text(self) -> str:
        body = ('co' if self.cofinite else '') + '{' + ','.join(str(p) for p in self.primes) + '}'
        return ('gen+' if self.generic else '') + body

    @classmethod
    def parse(cls, text: str) -> 'PrimeSet':
        aliases = {'spec': cls.spec(), 'max': cls.all_primes(), 'min': cls.minimal(), 'empty': cls.empty()}
        text = text.strip()
        if text in aliases:
            return aliases[text]
        generic = text.startswith('gen+')
        if generic:
            text = text[4:]
        cofinite = text.startswith('co')
        if cofinite:
            text = text[2:]
        if not (text.startswith('{') and text.endswith('}')):
            raise PreconditionError(f"malformed prime set {text!r}")
        inner = text[1:-1].strip()
        try:
            primes = tuple(int(x) for x in inner.split(',')) if inner else ()
        except ValueError as exc:
            raise PreconditionError(f"malformed prime set {text!r}") from exc
        return cls(generic, primes, cofinite)

    def __str__(self):
        return self.to_text()


# ---------------------------------------------------------------------------
# Atoms and symbolic modules
# ---------------------------------------------------------------------------

KIND_ORDER = {'free': 0, 'cyc': 1, 'loc': 2, 'rat': 3, 'pruefer': 4, 'pruefersum': 5}


class Atom(NamedTuple):
    kind: str
    prime: int = 0
    exponent: int = 0          # rank for free, k for cyc
    primes: Optional[PrimeSet] = None

    def sort_key(self):
        return (KIND_ORDER[self.kind], self.prime, self.exponent,
                self.primes.sort_key() if self.primes is not None else ())

    def to_text(self) -> str:
        if self.kind == 'free':
            return f"free({self.exponent})"
        if self.kind == 'cyc':
            return f"cyc({self.prime},{self.exponent})"
        if self.kind == 'rat':
            return 'rat'
        if self.kind == 'pruefer':
            return f"pruefer({self.prime})"
        prefix = 'loc' if self.kind == 'loc' else 'pruefersum'
        return prefix + ('-co' if self.primes.cofinite else '') + '{' + ','.join(map(str, self.primes.primes)) + '}'

    def describe(self) -> str:
        if self.kind == 'free':
            return 'Z' if self.exponent == 1 else f"Z^{self.exponent}"
        if self.kind == 'cyc':
            return f"Z/{self.prime}" if self.exponent == 1 else f"Z/{self.prime}^{self.exponent}"
        if self.kind == 'rat':
            return 'Q'
        if self.kind == 'pruefer':
            return f"Z({self.prime}^inf)"
        t = self.primes
        if self.kind == 'loc':
            if t.cofinite:
                return f"Z[1/p : p not in {{{','.join(map(str, t.primes))}}}]"
            n = 1
            for p in t.primes:
                n *= p
            return f"Z[1/{n}]"
        if t.has_all_primes():
            return 'Q/Z'
        return f"(+) Z(p^inf), p not in {{{','.join(map(str, t.primes))}}}"


def free(rank: int = 1) -> Atom:
    return Atom('free', exponent=rank)


def cyc(p: int, k: int = 1) -> Atom:
    prime_point(p)
    if k < 1:
        raise PreconditionError(f"cyc({p},{k}): exponent must be positive")
    return Atom('cyc', prime=p, exponent=k)


def loc(primes: PrimeSet) -> Atom:
    return Atom('loc', primes=primes.maximal_part())


def rat() -> Atom:
    return Atom('rat')


def pruefer(p: int) -> Atom:
    prime_point(p)
    return Atom('pruefer', prime=p)


def pruefer_sum(primes: PrimeSet) -> Atom:
    return Atom('pruefersum', primes=primes.maximal_part())


def _expand(atom: Atom) -> List[Atom]:
    if atom.kind == 'free':
        return [atom] if atom.exponent else []
    if atom.kind == 'loc':
        if atom.primes.has_no_primes():
            return [free(1)]
        if atom.primes.has_all_primes():
            return [rat()]
        return [atom]
    if atom.kind == 'pruefersum':
        if not atom.primes.cofinite:
            return [pruefer(p) for p in atom.primes.primes]
        return [atom]
    return [atom]


def canonical_atoms(atoms: Sequence[Atom]) -> Tuple[Atom, ...]:
    expanded = [a for atom in atoms for a in _expand(atom)]
    rank = sum(a.exponent for a in expanded if a.kind == 'free')
    rest = [a for a in expanded if a.kind != 'free']
    sums = [a for a in rest if a.kind == 'pruefersum']
    others = [a for a in rest if a.kind != 'pruefersum']
    kept = []
    for a in others:
        if a.kind == 'pruefer':
            for i, s in enumerate(sums):
                if a.prime in s.primes.primes:
                    sums[i] = pruefer_sum(s.primes.union(PrimeSet.of(a.prime)))
                    break
            else:
                kept.append(a)
        else:
            kept.append(a)
    result = ([free(rank)] if rank else []) + kept + sums
    return tuple(sorted(result, key=Atom.sort_key))


@dataclass(frozen=True)
class SymbolicModule:
    atoms: Tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'atoms', canonical_atoms(self.atoms))

    @classmethod
    def of(cls, *atoms: Atom) -> 'SymbolicModule':
        return cls(tuple(atoms))

    @classmethod
    def zero(cls) -> 'SymbolicModule':
        return cls(())

    @classmethod
    def from_order(cls, n: int) -> 'SymbolicModule':
        """Z/n by primary decomposition."""
        if n < 1:
            raise PreconditionError(f"order {n} must be positive")
        return cls(tuple(cyc(p, k) for p, k in sorted(factorint(n).items())))

    def __add__(self, other: 'SymbolicModule') -> 'SymbolicModule':
        return SymbolicModule(self.atoms + other.atoms)

    def is_zero(self) -> bool:
        return not self.atoms

    def to_text(self) -> str:
        return ' + '.join(a.to_text() for a in self.atoms) if self.atoms else '0'

    def describe(self) -> str:
        return ' (+) '.join(a.describe() for a in self.atoms) if self.atoms else '0'

    @classmethod
    def parse(cls, text: str) -> 'SymbolicModule':
        text = text.strip()
        if text == '0':
            return cls.zero()
        return cls(tuple(parse_atom(part) for part in text.split('+') if part.strip()))

    def __str__(self):
        return self.describe()


def parse_atom(text: str) -> Atom:
    """One tagged term: free(2), cyc(2,3), loc{2,3}, loc-co{5}, rat, pruefer(7), pruefersum-co{}."""
    text = text.strip()
    try:
        if text == 'rat':
            return rat()
        for tag, build in (('loc', loc), ('pruefersum', pruefer_sum)):
            if text.startswith(tag + '{') or text.startswith(tag + '-co{'):
                body = text[len(tag):]
                return build(PrimeSet.parse(body[1:] if body.startswith('-') else body))
        if text.endswith(')') and '(' in text:
            tag, args = text[:-1].split('(', 1)
            values = [int(x) for x in args.split(',')]
            if tag == 'free' and len(values) == 1:
                return free(values[0])
            if tag == 'cyc' and len(values) == 2:
                return cyc(values[0], values[1])
            if tag == 'pruefer' and len(values) == 1:
                return pruefer(values[0])
    except ValueError as exc:
        raise PreconditionError(f"malformed atom {text!r}: {exc}") from exc
    raise PreconditionError(f"unknown atom {text!r}")


# ---------------------------------------------------------------------------
# Support and associated primes
# ---------------------------------------------------------------------------

def _atom_supp(a: Atom) -> PrimeSet:
    if a.kind == 'free':
        return PrimeSet.spec()
    if a.kind in ('cyc', 'pruefer'):
        return PrimeSet.of(a.prime)
    if a.kind == 'loc':
        return PrimeSet.minimal().union(a.primes.complement().maximal_part())
    if a.kind == 'rat':
        return PrimeSet.minimal()
    return a.primes


def _atom_ass(a: Atom) -> PrimeSet:
    if a.kind in ('free', 'loc', 'rat'):
        return PrimeSet.minimal()
    return _atom_supp(a)


def supp(m: SymbolicModule) -> PrimeSet:
    result = PrimeSet.empty()
    for a in m.atoms:
        result = result.union(_atom_supp(a))
    return result


def ass(m: SymbolicModule) -> PrimeSet:
    result = PrimeSet.empty()
    for a in m.atoms:
        result = result.union(_atom_ass(a))
    return result


def is_specialization_closed(phi: PrimeSet) -> bool:
    """Over Z: Φ misses the generic point, or Φ is all of Spec(Z)."""
    return not phi.generic or phi.is_spec()


class Coherence(NamedTuple):
    holds: bool
    reason: str


def is_coherent(phi: PrimeSet) -> Coherence:
    return Coherence(True, 'every subset of Spec(Z) is coherent (Krull dimension 1)')


def is_module_over_localization(m: SymbolicModule, primes: PrimeSet) -> bool:
    """Every prime of ``primes`` acts invertibly on M."""
    t = primes.maximal_part()
    for a in m.atoms:
        if a.kind == 'free' and not t.has_no_primes():
            return False
        if a.kind in ('cyc', 'pruefer') and t.contains_prime(a.prime):
            return False
        if a.kind == 'loc' and not t.issubset(a.primes):
            return False
        if a.kind == 'pruefersum' and not a.primes.intersection(t).is_empty():
            return False
    return True


# ---------------------------------------------------------------------------
# Five-term sequences
# ---------------------------------------------------------------------------

class Route(NamedTuple):
    """Where one atom of M goes: into X_M, into Y^M, or through its localization sequence."""
    atom: Atom
    shape: str                      # 'x-iso' | 'y-iso' | 'localization'
    x_lower: SymbolicModule
    y_upper: SymbolicModule
    x_upper: SymbolicModule


@dataclass
class SymbolicFiveTerm:
    y_lower: SymbolicModule
    x_lower: SymbolicModule
    module: SymbolicModule
    y_upper: SymbolicModule
    x_upper: SymbolicModule
    phi: PrimeSet
    routes: List[Route] = dataclass_field(default_factory=list)

    def objects(self) -> List[SymbolicModule]:
        return [self.y_lower, self.x_lower, self.module, self.y_upper, self.x_upper]

    def verify(self):
        """Each atom follows a canonical local sequence and the outer terms have the right support."""
        total = SymbolicModule.zero()
        for r in self.routes:
            if r.shape == 'x-iso' and not (r.x_lower == SymbolicModule.of(r.atom) and r.y_upper.is_zero()):
                raise FiveTermError(f"route for {r.atom.to_text()} is not X_M = M")
            if r.shape == 'y-iso' and not (r.y_upper == SymbolicModule.of(r.atom) and r.x_lower.is_zero()):
                raise FiveTermError(f"route for {r.atom.to_text()} is not Y^M = M")
            total = total + SymbolicModule.of(r.atom)
        if total != self.module:
            raise FiveTermError('routes do not cover the module')
        for label, m, allowed in (('Y_M', self.y_lower, self.phi.complement()), ('X_M', self.x_lower, self.phi),
                                  ('Y^M', self.y_upper, self.phi.complement()), ('X^M', self.x_upper, self.phi)):
            if not supp(m).issubset(allowed):
                raise FiveTermError(f"{label} = {m.describe()} has support {supp(m)} outside {allowed}")

    def describe(self) -> str:
        return ' -> '.join(['0'] + [m.describe() for m in self.objects()] + ['0'])

    def to_dict(self) -> Dict:
        return {'phi': self.phi.to_text(), 'sequence': [m.to_text() for m in self.objects()],
                'shape': self.describe(), 'routes': [(r.atom.to_text(), r.shape) for r in self.routes]}


def _route(a: Atom, t: PrimeSet) -> Route:
    zero = SymbolicModule.zero()
    if a.kind in ('cyc', 'pruefer'):
        if t.contains_prime(a.prime):
            return Route(a, 'x-iso', SymbolicModule.of(a), zero, zero)
        return Route(a, 'y-iso', zero, SymbolicModule.of(a), zero)
    if a.kind == 'rat':
        return Route(a, 'y-iso', zero, SymbolicModule.of(a), zero)
    if a.kind == 'pruefersum':
        inside = pruefer_sum(a.primes.intersection(t))
        outside = pruefer_sum(a.primes.difference(t))
        return Route(a, 'split', SymbolicModule.of(inside), SymbolicModule.of(outside), zero)
    if a.kind == 'free':
        return Route(a, 'localization', zero, SymbolicModule.of(*[loc(t)] * a.exponent),
                     SymbolicModule.of(*[pruefer_sum(t)] * a.exponent))
    return Route(a, 'localization', zero, SymbolicModule.of(loc(a.primes.union(t))),
                 SymbolicModule.of(pruefer_sum(t.difference(a.primes))))


def five_term_pid(m: SymbolicModule, phi: PrimeSet) -> SymbolicFiveTerm:
    """ε_M for (Supp⁻¹(Φ), Supp⁻¹(Φᶜ)), atom by atom."""
    if not is_specialization_closed(phi):
        raise PreconditionError(f"{phi} is not specialization closed")
    zero = SymbolicModule.zero()
    if phi.is_spec():
        routes = [Route(a, 'x-iso', SymbolicModule.of(a), zero, zero) for a in m.atoms]
        return SymbolicFiveTerm(zero, m, m, zero, zero, phi, routes)
    t = phi.maximal_part()
    routes = [_route(a, t) for a in m.atoms]
    x_lower = sum((r.x_lower for r in routes), zero)
    y_upper = sum((r.y_upper for r in routes), zero)
    x_upper = sum((r.x_upper for r in routes), zero)
    eps = SymbolicFiveTerm(zero, x_lower, m, y_upper, x_upper, phi, routes)
    eps.verify()
    logger.debug(f"five-term over Z for {m.to_text()} at {phi}: {eps.describe()}")
    return eps


def localize_decomposition(m: SymbolicModule, generators: PrimeSet) -> SymbolicFiveTerm:
    """ε_M for (Supp⁻¹(T), Z[T⁻¹]-Mod) with Σ generated by the primes T."""
    t = generators.maximal_part()
    eps = five_term_pid(m, t)
    if not is_module_over_localization(eps.y_upper, t):
        raise FiveTermError(f"Y^M = {eps.y_upper.describe()} is not a Z[T^-1]-module")
    return eps


# ---------------------------------------------------------------------------
# Stratification
# ---------------------------------------------------------------------------

@dataclass
class StratumNode:
    name: str
    support: PrimeSet
    description: str
    abelian_simple: bool = False
    reason: str = ''
    children: List['StratumNode'] = dataclass_field(default_factory=list)
    lazy_children: bool = False

    def prime_leaves(self) -> Iterator['StratumNode']:
        """Per-prime factors Supp⁻¹({p}), generated on demand."""
        p = 2
        while True:
            yield _prime_leaf(p)
            p = nextprime(p)

    def to_dict(self, prime_limit: Optional[int] = None) -> Dict:
        limit = prime_limit or config.PID_PARAMS['stratify_prime_limit']
        children = list(self.children)
        if self.lazy_children:
            children = [_prime_leaf(p) for p in primerange(2, limit + 1)]
        return {'name': self.name, 'support': self.support.to_text(), 'description': self.description,
                'abelian_simple': self.abelian_simple, 'reason': self.reason,
                'children': [c.to_dict(limit) for c in children],
                'truncated_at': limit if self.lazy_children else None}


def _prime_leaf(p: int) -> StratumNode:
    return StratumNode(f"Supp^-1({{{p}}})", PrimeSet.of(p), f"{p}-primary torsion modules",
                       True, 'a single closed point admits no proper specialization-closed refinement')


def stratify() -> StratumNode:
    """(Supp⁻¹(Max), Supp⁻¹(Min)) with the Max side split over the primes."""
    max_side = StratumNode('Supp^-1(Max)', PrimeSet.all_primes(), 'torsion modules', lazy_children=True)
    min_side = StratumNode('Supp^-1(Min)', PrimeSet.minimal(), 'Q-Mod = Z_(0)-Mod', True,
                           'modules over the field Q')
    return StratumNode('Z-Mod', PrimeSet.spec(), 'derived decomposition (Max, Min)', children=[max_side, min_side])


def render_tree(node: StratumNode, prime_limit: Optional[int] = None, indent: int = 0) -> List[str]:
    tree = node.to_dict(prime_limit)
    return _render(tree, indent)


def _render(tree: Dict, indent: int) -> List[str]:
    mark = '  [abelian simple]' if tree['abelian_simple'] else ''
    lines = [f"{'  ' * indent}{tree['name']}: {tree['description']}{mark}"]
    for child in tree['children']:
        lines += _render(child, indent + 1)
    if tree['truncated_at']:
        lines.append(f"{'  ' * (indent + 1)}... (primes above {tree['truncated_at']})")
    return lines


def product_split(m: SymbolicModule) -> Dict[int, SymbolicModule]:
    """M ≅ ⊕_p M_p for M supported at maximal ideals."""
    if supp(m).generic:
        raise PreconditionError(f"{m.describe()} has the generic point in its support")
    parts: Dict[int, List[Atom]] = {}
    for a in m.atoms:
        if a.kind == 'pruefersum':
            if a.primes.cofinite:
                raise PreconditionError('an infinite Pruefer sum has no finite product split')
            for p in a.primes.primes:
                parts.setdefault(p, []).append(pruefer(p))
        else:
            parts.setdefault(a.prime, []).append(a)
    return {p: SymbolicModule(tuple(atoms)) for p, atoms in sorted(parts.items())}


def reassemble(parts: Dict[int, SymbolicModule]) -> SymbolicModule:
    return sum(parts.values(), SymbolicModule.zero())


# ---------------------------------------------------------------------------
# Hom / Ext¹ vanishing
# ---------------------------------------------------------------------------

# (kind of A, kind of B, relation) -> (Hom(A, B) = 0, Ext¹(A, B) = 0)
VANISHING_TABLE: Dict[Tuple[str, str, str], Tuple[bool, bool]] = {
    ('free', 'free', 'generic'): (False, True),
    ('free', 'cyc', 'generic'): (False, True),
    ('free', 'loc', 'generic'): (False, True),
    ('free', 'rat', 'generic'): (False, True),
    ('free', 'pruefer', 'generic'): (False, True),
    ('cyc', 'free', 'generic'): (True, False),
    ('cyc', 'cyc', 'same'): (False, False),
    ('cyc', 'cyc', 'different'): (True, True),
    ('cyc', 'loc', 'inverted'): (True, True),
    ('cyc', 'loc', 'not-inverted'): (True, False),
    ('cyc', 'rat', 'generic'): (True, True),
    ('cyc', 'pruefer', 'same'): (False, True),
    ('cyc', 'pruefer', 'different'): (True, True),
    ('loc', 'free', 'generic'): (True, False),
    ('loc', 'cyc', 'inverted'): (True, True),
    ('loc', 'cyc', 'not-inverted'): (False, True),
    ('loc', 'loc', 'contained'): (False, True),
    ('loc', 'loc', 'not-contained'): (True, False),
    ('loc', 'rat', 'generic'): (False, True),
    ('loc', 'pruefer', 'inverted'): (False, True),
    ('loc', 'pruefer', 'not-inverted'): (False, True),
    ('rat', 'free', 'generic'): (True, False),
    ('rat', 'cyc', 'generic'): (True, True),
    ('rat', 'loc', 'generic'): (True, False),
    ('rat', 'rat', 'generic'): (False, True),
    ('rat', 'pruefer', 'generic'): (False, True),
    ('pruefer', 'free', 'generic'): (True, False),
    ('pruefer', 'cyc', 'same'): (True, False),
    ('pruefer', 'cyc', 'different'): (True, True),
    ('pruefer', 'loc', 'inverted'): (True, True),
    ('pruefer', 'loc', 'not-inverted'): (True, False),
    ('pruefer', 'rat', 'generic'): (True, True),
    ('pruefer', 'pruefer', 'same'): (False, True),
    ('pruefer', 'pruefer', 'different'): (True, True),
}


def relation(a: Atom, b: Atom) -> str:
    primed = ('cyc', 'pruefer')
    if a.kind in primed and b.kind in primed:
        return 'same' if a.prime == b.prime else 'different'
    if a.kind in primed and b.kind == 'loc':
        return 'inverted' if b.primes.contains_prime(a.prime) else 'not-inverted'
    if a.kind == 'loc' and b.kind in primed:
        return 'inverted' if a.primes.contains_prime(b.prime) else 'not-inverted'
    if a.kind == 'loc' and b.kind == 'loc':
        return 'contained' if a.primes.issubset(b.primes) else 'not-contained'
    return 'generic'


def _mentioned_primes(a: Atom) -> List[int]:
    if a.kind in ('cyc', 'pruefer'):
        return [a.prime]
    if a.primes is not None:
        return list(a.primes.primes)
    return []


def _summands(a: Atom, other: Atom) -> List[Atom]:
    """Pruefer sums and free modules of higher rank reduce to representative summands."""
    if a.kind == 'pruefersum':
        return [pruefer(p) for p in a.primes.sample_primes(_mentioned_primes(other))]
    if a.kind == 'free':
        return [free(1)] if a.exponent else []
    if a.kind == 'loc':
        return _expand(a)
    return [a]


def _lookup(a: Atom, b: Atom) -> Tuple[bool, bool]:
    hom, ext = True, True
    for x in _summands(a, b):
        for y in _summands(b, x):
            h, e = VANISHING_TABLE[(x.kind, y.kind, relation(x, y))]
            hom, ext = hom and h, ext and e
    return hom, ext


def hom_vanishes(a: Atom, b: Atom) -> bool:
    return _lookup(a, b)[0]


def ext1_vanishes(a: Atom, b: Atom) -> bool:
    return _lookup(a, b)[1]


def table_representatives() -> Dict[Tuple[str, str, str], Tuple[Atom, Atom]]:
    """One pair of atoms per table entry, built from the representative primes p, q and T = {p}."""
    p, q = config.PID_PARAMS['representative_primes']
    samples = {
        'free': [free(1)], 'rat': [rat()],
        'cyc': [cyc(p, 2), cyc(q, 1)], 'pruefer': [pruefer(p), pruefer(q)],
        'loc': [loc(PrimeSet.of(p)), loc(PrimeSet.of(q)), loc(PrimeSet.of(p, q))],
    }
    found = {}
    for ka, xs in samples.items():
        for kb, ys in samples.items():
            for x in xs:
                for y in ys:
                    found.setdefault((ka, kb, relation(x, y)), (x, y))
    return found
