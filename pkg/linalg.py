"""Exact linear algebra over Q and prime fields.

Scalars are sympy domain elements (``QQ`` or ``GF(p)``); matrices are
immutable dense grids of those elements. Products and row reduction are
delegated to sympy's ``DomainMatrix``; everything else is plain bookkeeping.

Conventions that downstream constructions rely on:
- ``rref`` returns pivot columns in increasing order.
- ``kernel_basis`` puts a 1 in each free column and reads the pivot entries
  off the reduced form.
- ``solve`` returns the particular solution with zeros in non-pivot
  coordinates.
"""

import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit together."""


class Field:
    """An exact ground field: the rationals or integers modulo a prime."""

    def __init__(self, spec: str = 'q'):
        spec = str(spec).strip().lower()
        if spec in ('q', 'qq', 'rationals'):
            self.name = 'q'
            self.characteristic = 0
            self.domain = QQ
        elif spec.startswith('fp:'):
            try:
                p = int(spec[3:])
            except ValueError:
                raise ValueError(f"unknown field spec: {spec!r}")
            if p < 2 or not sympy.isprime(p):
                raise ValueError(f"field characteristic must be prime, got {p}")
            self.name = f'fp:{p}'
            self.characteristic = p
            self.domain = GF(p, symmetric=False)
        else:
            raise ValueError(f"unknown field spec: {spec!r}")
        self.zero = self.domain.zero
        self.one = self.domain.one

    def __call__(self, value):
        """Convert an int, a rational string like '-3/4', or a sympy number."""
        if isinstance(value, str):
            value = sympy.Rational(value.strip())
        if isinstance(value, int):
            return self.domain.convert(value)
        if isinstance(value, sympy.Basic):
            r = sympy.Rational(value)
            return self.domain.convert(int(r.p)) / self.domain.convert(int(r.q))
        # already a domain element
        return self.domain.convert(value)

    def to_sympy(self, x):
        return self.domain.to_sympy(x)

    def to_text(self, x) -> str:
        return str(self.domain.to_sympy(x))

    def is_zero(self, x) -> bool:
        return x == self.zero

    def random_element(self, rng, bound: int = 3):
        return self.domain.convert(int(rng.integers(-bound, bound + 1)))

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(('field', self.name))

    def __repr__(self):
        return f"Field({self.name!r})"


class Matrix:
    """Immutable dense matrix over a Field. Zero row/column counts are allowed."""

    __slots__ = ('field', 'nrows', 'ncols', 'rows', '_hash')

    def __init__(self, field: Field, rows: Sequence[Sequence], nrows: Optional[int] = None,
                 ncols: Optional[int] = None):
        rows = tuple(tuple(r) for r in rows)
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionError(f"ragged matrix data for shape {nrows}x{ncols}")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_values(cls, field: Field, values: Sequence[Sequence], ncols: Optional[int] = None):
        rows = [[field(v) for v in row] for row in values]
        return cls(field, rows, len(rows), ncols if ncols is not None else (len(rows[0]) if rows else 0))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence['Matrix'], nrows: int):
        for c in columns:
            if c.nrows != nrows or c.ncols != 1:
                raise DimensionError(f"column of shape {c.shape} does not fit {nrows} rows")
        rows = [[c.rows[i][0] for c in columns] for i in range(nrows)]
        return cls(field, rows, nrows, len(columns))

    @classmethod
    def column_vector(cls, field: Field, entries: Sequence):
        return cls(field, [[e] for e in entries], len(entries), 1)

    @classmethod
    def unit_vector(cls, field: Field, n: int, i: int):
        entries = [field.zero] * n
        entries[i] = field.one
        return cls.column_vector(field, entries)

    # -- basic access -------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> 'Matrix':
        return Matrix(self.field, [[r[j]] for r in self.rows], self.nrows, 1)

    def columns(self) -> List['Matrix']:
        return [self.column(j) for j in range(self.ncols)]

    def column_entries(self, j: int) -> List:
        return [r[j] for r in self.rows]

    def select_columns(self, idx: Iterable[int]) -> 'Matrix':
        idx = list(idx)
        return Matrix(self.field, [[r[j] for j in idx] for r in self.rows], self.nrows, len(idx))

    def select_rows(self, idx: Iterable[int]) -> 'Matrix':
        idx = list(idx)
        return Matrix(self.field, [self.rows[i] for i in idx], len(idx), self.ncols)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def trace(self):
        total = self.field.zero
        for i in range(min(self.nrows, self.ncols)):
            total = total + self.rows[i][i]
        return total

    def flatten(self) -> 'Matrix':
        """Row-major vectorisation as a column."""
        return Matrix.column_vector(self.field, [x for r in self.rows for x in r])

    @classmethod
    def unflatten(cls, vector: 'Matrix', nrows: int, ncols: int) -> 'Matrix':
        entries = vector.column_entries(0)
        if len(entries) != nrows * ncols:
            raise DimensionError(f"cannot reshape {len(entries)} entries into {nrows}x{ncols}")
        return cls(vector.field, [entries[i * ncols:(i + 1) * ncols] for i in range(nrows)], nrows, ncols)

    # -- arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: 'Matrix'):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: 'Matrix') -> 'Matrix':
        self._check_same_shape(other)
        return Matrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols)

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        self._check_same_shape(other)
        return Matrix(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols)

    def __neg__(self) -> 'Matrix':
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def scale(self, c) -> 'Matrix':
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], self.nrows, self.ncols)

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        product = self.to_domain_matrix() * other.to_domain_matrix()
        return Matrix(self.field, product.to_list(), self.nrows, other.ncols)

    @property
    def T(self) -> 'Matrix':
        if self.nrows == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.ncols, self.nrows)
        return Matrix(self.field, [list(c) for c in zip(*self.rows)], self.ncols, self.nrows)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([list(r) for r in self.rows], (self.nrows, self.ncols), self.field.domain)

    def rank(self) -> int:
        return rref(self).rank

    def power(self, k: int) -> 'Matrix':
        result = Matrix.identity(self.field, self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.field == other.field and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.name, self.shape, self.rows))
        return self._hash

    def to_text(self) -> str:
        return '[' + ','.join('[' + ','.join(self.field.to_text(x) for x in r) + ']' for r in self.rows) + ']'

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.to_text()})"


class RrefResult(NamedTuple):
    reduced: Matrix
    pivots: Tuple[int, ...]
    rank: int


def rref(m: Matrix) -> RrefResult:
    """Reduced row-echelon form, pivot columns in increasing order and rank."""
    if m.nrows == 0 or m.ncols == 0:
        return RrefResult(m, (), 0)
    reduced, pivots = m.to_domain_matrix().rref()
    pivots = tuple(sorted(int(p) for p in pivots))
    return RrefResult(Matrix(m.field, reduced.to_list(), m.nrows, m.ncols), pivots, len(pivots))


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the null space of ``m``; one column per free variable."""
    reduced, pivots, _ = rref(m)
    field = m.field
    free = [j for j in range(m.ncols) if j not in pivots]
    columns = []
    for f in free:
        entries = [field.zero] * m.ncols
        entries[f] = field.one
        for i, p in enumerate(pivots):
            entries[p] = -reduced.rows[i][f]
        columns.append(Matrix.column_vector(field, entries))
    return Matrix.from_columns(field, columns, m.ncols)


def solve(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve m·x = b for every column of b; None when any column is inconsistent."""
    if m.nrows != b.nrows:
        raise DimensionError(f"solve: {m.nrows} rows in the system but {b.nrows} on the right")
    field = m.field
    if b.ncols == 0:
        return Matrix.zeros(field, m.ncols, 0)
    augmented = hstack(m, b)
    reduced, pivots, _ = rref(augmented)
    if any(p >= m.ncols for p in pivots):
        return None
    rows = [[field.zero] * b.ncols for _ in range(m.ncols)]
    for i, p in enumerate(pivots):
        for j in range(b.ncols):
            rows[p][j] = reduced.rows[i][m.ncols + j]
    return Matrix(field, rows, m.ncols, b.ncols)


def hstack(*ms: Matrix) -> Matrix:
    if not ms:
        raise DimensionError("hstack needs at least one matrix")
    nrows = ms[0].nrows
    for x in ms:
        if x.nrows != nrows:
            raise DimensionError(f"hstack row mismatch {x.nrows} vs {nrows}")
    rows = [sum((list(x.rows[i]) for x in ms), []) for i in range(nrows)]
    return Matrix(ms[0].field, rows, nrows, sum(x.ncols for x in ms))


def vstack(*ms: Matrix) -> Matrix:
    if not ms:
        raise DimensionError("vstack needs at least one matrix")
    ncols = ms[0].ncols
    for x in ms:
        if x.ncols != ncols:
            raise DimensionError(f"vstack column mismatch {x.ncols} vs {ncols}")
    rows = [r for x in ms for r in x.rows]
    return Matrix(ms[0].field, rows, sum(x.nrows for x in ms), ncols)


def block_diagonal(field: Field, ms: Sequence[Matrix]) -> Matrix:
    nrows = sum(x.nrows for x in ms)
    ncols = sum(x.ncols for x in ms)
    rows = [[field.zero] * ncols for _ in range(nrows)]
    r0 = c0 = 0
    for x in ms:
        for i in range(x.nrows):
            for j in range(x.ncols):
                rows[r0 + i][c0 + j] = x.rows[i][j]
        r0 += x.nrows
        c0 += x.ncols
    return Matrix(field, rows, nrows, ncols)


def block_matrix(field: Field, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a matrix from a grid of blocks with consistent shapes."""
    return vstack(*[hstack(*row) for row in blocks]) if blocks else Matrix.zeros(field, 0, 0)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; index (i1, i2) is flattened as i1 * b.nrows + i2."""
    field = a.field
    rows = []
    for i1 in range(a.nrows):
        for i2 in range(b.nrows):
            row = []
            for j1 in range(a.ncols):
                x = a.rows[i1][j1]
                for j2 in range(b.ncols):
                    row.append(x * b.rows[i2][j2])
            rows.append(row)
    return Matrix(field, rows, a.nrows * b.nrows, a.ncols * b.ncols)


def column_space(m: Matrix) -> Matrix:
    """The pivot columns of m: an independent spanning set of its image."""
    return m.select_columns(rref(m).pivots)


def complement(subspace: Matrix, ambient_dim: int) -> Matrix:
    """Standard basis vectors completing the columns of ``subspace`` to a basis."""
    field = subspace.field
    identity = Matrix.identity(field, ambient_dim)
    basis = column_space(subspace)
    k = basis.ncols
    pivots = rref(hstack(basis, identity) if k else identity).pivots
    return identity.select_columns([p - k for p in pivots if p >= k])


def is_in_span(basis: Matrix, vectors: Matrix) -> bool:
    return solve(basis, vectors) is not None


def same_span(a: Matrix, b: Matrix) -> bool:
    return is_in_span(a, b) and is_in_span(b, a)


def intersection_basis(a: Matrix, b: Matrix) -> Matrix:
    """Basis of span(a) ∩ span(b) as columns in the ambient space."""
    field = a.field
    if a.ncols == 0 or b.ncols == 0:
        return Matrix.zeros(field, a.nrows, 0)
    ker = kernel_basis(hstack(a, -b))
    return column_space(a @ ker.select_rows(range(a.ncols)))


class Subquotient:
    """The space span(top) / span(bottom), assuming span(bottom) ⊆ span(top).

    ``representatives`` are columns of ``top`` whose classes form a basis;
    ``project`` sends a vector of span(top) to its coordinates in that basis.
    """

    def __init__(self, top: Matrix, bottom: Matrix):
        field = top.field
        if top.nrows != bottom.nrows:
            raise DimensionError("subquotient ambient mismatch")
        self.ambient_dim = top.nrows
        self.bottom = column_space(bottom) if bottom.ncols else Matrix.zeros(field, top.nrows, 0)
        k = self.bottom.ncols
        if top.ncols:
            combined = hstack(self.bottom, top) if k else top
            pivots = rref(combined).pivots
            self.representatives = top.select_columns([p - k for p in pivots if p >= k])
        else:
            self.representatives = Matrix.zeros(field, top.nrows, 0)
        self.frame = hstack(self.bottom, self.representatives)
        self.dim = self.representatives.ncols
        self.field = field

    def project(self, vectors: Matrix) -> Matrix:
        coords = solve(self.frame, vectors)
        if coords is None:
            raise DimensionError("vector lies outside the numerator of the subquotient")
        k = self.bottom.ncols
        return coords.select_rows(range(k, k + self.dim))

    def contains(self, vectors: Matrix) -> bool:
        return solve(self.frame, vectors) is not None

    def lift(self, coords: Matrix) -> Matrix:
        return self.representatives @ coords
