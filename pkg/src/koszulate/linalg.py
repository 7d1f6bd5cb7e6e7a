"""Exact sparse linear algebra over QQ and F_p.

Matrices are stored row-major as ``{row: {col: value}}`` with no stored zeros.
Rank uses structured elimination: the matrix is first split into the
connected components of its row/column incidence graph, then each block is
eliminated with a Markowitz-style pivot rule (sparsest column, then shortest
row, ties broken by index). Over F_p the update is plain modular arithmetic;
over QQ rows are cleared to integers and eliminated fraction-free, each
updated row divided by its content.

All routines are deterministic: identical input yields identical output.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from sympy import nextprime

from .fields import FieldConfig
from .rng import SplitMix64


class DimensionMismatch(ValueError):
    pass


class SparseMatrix:
    """Immutable sparse matrix over a :class:`FieldConfig`."""

    __slots__ = ("nrows", "ncols", "field", "_rows", "_cols")

    def __init__(self, nrows: int, ncols: int, field: FieldConfig,
                 rows: Mapping[int, Mapping[int, object]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        clean: dict[int, dict[int, object]] = {}
        for i, row in (rows or {}).items():
            if not 0 <= i < nrows:
                raise IndexError(f"row index {i} out of range")
            r = {}
            for j, v in row.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column index {j} out of range")
                v = field(v)
                if v:
                    r[j] = v
            if r:
                clean[i] = r
        self._rows = clean
        self._cols = None

    @classmethod
    def _trusted(cls, nrows, ncols, field, rows):
        # Internal constructor: rows already reduced, zero-free and in range.
        m = object.__new__(cls)
        m.nrows, m.ncols, m.field = nrows, ncols, field
        m._rows = {i: r for i, r in rows.items() if r}
        m._cols = None
        return m

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable[tuple[int, int, object]],
                     field: FieldConfig) -> SparseMatrix:
        rows: dict[int, dict[int, object]] = defaultdict(dict)
        for i, j, v in entries:
            if j in rows[i]:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            rows[i][j] = v
        return cls(nrows, ncols, field, rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], field: FieldConfig,
                   ncols: int | None = None) -> SparseMatrix:
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = {}
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionMismatch("ragged dense matrix")
            rows[i] = {j: v for j, v in enumerate(row) if v}
        return cls(len(data), ncols, field, rows)

    @classmethod
    def identity(cls, n: int, field: FieldConfig) -> SparseMatrix:
        return cls._trusted(n, n, field, {i: {i: field.one} for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: FieldConfig) -> SparseMatrix:
        return cls._trusted(nrows, ncols, field, {})

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def entries(self) -> list[tuple[int, int, object]]:
        return [(i, j, v) for i in sorted(self._rows)
                for j, v in sorted(self._rows[i].items())]

    def row(self, i: int) -> dict[int, object]:
        return dict(self._rows.get(i, {}))

    def row_items(self):
        """Iterate ``(i, row_dict)`` over nonzero rows; do not mutate the dicts."""
        return ((i, self._rows[i]) for i in sorted(self._rows))

    def columns(self) -> dict[int, dict[int, object]]:
        if self._cols is None:
            cols: dict[int, dict[int, object]] = defaultdict(dict)
            for i, r in self._rows.items():
                for j, v in r.items():
                    cols[j][i] = v
            self._cols = dict(cols)
        return self._cols

    def column(self, j: int) -> dict[int, object]:
        return dict(self.columns().get(j, {}))

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, self.field.zero)

    def transpose(self) -> SparseMatrix:
        return SparseMatrix._trusted(self.ncols, self.nrows, self.field,
                                     {j: dict(c) for j, c in self.columns().items()})

    @property
    def T(self) -> SparseMatrix:
        return self.transpose()

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.field != other.field:
            raise DimensionMismatch("field mismatch")
        f = self.field
        out = {}
        orows = other._rows
        for i, r in self._rows.items():
            acc: dict[int, object] = {}
            for k, a in r.items():
                for j, b in orows.get(k, {}).items():
                    acc[j] = f.add(acc.get(j, f.zero), f.mul(a, b))
            out[i] = {j: v for j, v in acc.items() if v}
        return SparseMatrix._trusted(self.nrows, other.ncols, f, out)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.shape, self.field, tuple(self.entries())))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.field.label})"

    def to_dense(self) -> list[list[object]]:
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def with_field(self, field: FieldConfig) -> SparseMatrix:
        """Reduce a rational matrix into ``field`` (entrywise coercion)."""
        return SparseMatrix(self.nrows, self.ncols, field, self._rows)

    def vstack(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.ncols or self.field != other.field:
            raise DimensionMismatch("vstack needs equal column counts and fields")
        rows = dict(self._rows)
        rows.update({i + self.nrows: r for i, r in other._rows.items()})
        return SparseMatrix._trusted(self.nrows + other.nrows, self.ncols, self.field, rows)

    def select_rows(self, idx: Sequence[int]) -> SparseMatrix:
        return SparseMatrix._trusted(len(idx), self.ncols, self.field,
                                     {k: dict(self._rows.get(i, {})) for k, i in enumerate(idx)})


def row_vector(values: Sequence[object], field: FieldConfig) -> SparseMatrix:
    return SparseMatrix.from_dense([list(values)], field)


# -- rank -------------------------------------------------------------------

def _components(rows: list[dict[int, object]]) -> list[list[dict[int, object]]]:
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for r in rows:
        it = iter(r)
        first = next(it)
        parent.setdefault(first, first)
        a = find(first)
        for c in it:
            parent.setdefault(c, c)
            b = find(c)
            if a != b:
                if b < a:
                    a, b = b, a
                parent[b] = a
    groups: dict[int, list] = defaultdict(list)
    for r in rows:
        groups[find(next(iter(r)))].append(r)
    return [groups[k] for k in sorted(groups)]


def _markowitz_rank(rows: list[dict[int, int]], p: int | None) -> int:
    """Destructive elimination of integer rows; ``p=None`` means over QQ."""
    active = {i: r for i, r in enumerate(rows)}
    col_rows: dict[int, set[int]] = defaultdict(set)
    for i, r in active.items():
        for c in r:
            col_rows[c].add(i)
    heap = [(len(s), c) for c, s in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        s = col_rows.get(c)
        if not s or len(s) != cnt:
            continue
        piv = min(s, key=lambda i: (len(active[i]), i))
        prow = active.pop(piv)
        for cc in prow:
            col_rows[cc].discard(piv)
        a = prow[c]
        if p is not None:
            a_inv = pow(a, -1, p)
        for i in sorted(col_rows[c]):
            r = active[i]
            if p is not None:
                f = r[c] * a_inv % p
                for cc, v in prow.items():
                    old = r.get(cc)
                    nv = (-f * v if old is None else old - f * v) % p
                    if nv:
                        if old is None:
                            col_rows[cc].add(i)
                        r[cc] = nv
                    else:
                        del r[cc]
                        col_rows[cc].discard(i)
            else:
                b = r[c]
                g = gcd(a, b)
                sa, sb = a // g, b // g
                if sa != 1:
                    for cc in r:
                        r[cc] *= sa
                for cc, v in prow.items():
                    old = r.get(cc)
                    nv = -sb * v if old is None else old - sb * v
                    if nv:
                        if old is None:
                            col_rows[cc].add(i)
                        r[cc] = nv
                    else:
                        del r[cc]
                        col_rows[cc].discard(i)
                if r:
                    content = gcd(*r.values())
                    if content != 1:
                        for cc in r:
                            r[cc] //= content
            if not r:
                del active[i]
        rank += 1
        del col_rows[c]
        for cc in prow:
            if cc != c and col_rows[cc]:
                heapq.heappush(heap, (len(col_rows[cc]), cc))
    return rank


def _integer_rows(M: SparseMatrix) -> list[dict[int, int]]:
    out = []
    for _, r in M.row_items():
        if M.field.is_prime:
            out.append(dict(r))
        else:
            den = lcm(*(v.denominator for v in r.values()))
            out.append({j: int(v * den) for j, v in r.items()})
    return out


def rank(M: SparseMatrix) -> int:
    """Exact rank of ``M`` over its field."""
    rows = _integer_rows(M)
    if not rows:
        return 0
    p = M.field.p if M.field.is_prime else None
    return sum(_markowitz_rank(block, p) for block in _components(rows))


@dataclass(frozen=True)
class RankCertificate:
    """Multi-prime rank of a rational matrix.

    ``rank`` is the maximum over the sampled primes. It is a lower bound on
    the rank over QQ and equals it for all but finitely many primes;
    ``agree`` reports whether every prime returned the same value.
    """

    rank: int
    ranks: tuple[int, ...]
    primes: tuple[int, ...]
    agree: bool


def sample_primes(k: int, seed: int = 0) -> list[int]:
    """``k`` distinct primes in (2^60, 2^62), reproducible from ``seed``."""
    rng = SplitMix64(seed)
    primes: list[int] = []
    while len(primes) < k:
        p = nextprime(2**60 + rng.below(2**62 - 2**60 - 2**20))
        if p < 2**62 and p not in primes:
            primes.append(int(p))
    return primes


def certified_rank(M: SparseMatrix, k: int = 3, seed: int = 0) -> RankCertificate:
    """Rank of a rational matrix from ``k`` independent random primes."""
    if M.field.is_prime:
        raise ValueError("certified_rank expects a rational matrix")
    ranks, primes = [], []
    attempt = 0
    while len(primes) < k:
        for p in sample_primes(k, seed + attempt):
            if len(primes) == k or p in primes:
                continue
            try:
                Mp = M.with_field(FieldConfig.prime(p))
            except ZeroDivisionError:
                continue
            primes.append(p)
            ranks.append(rank(Mp))
        attempt += 1
    return RankCertificate(max(ranks), tuple(ranks), tuple(primes), len(set(ranks)) == 1)


# -- reduced echelon form, kernels, subspaces --------------------------------

def rref_rows(M: SparseMatrix) -> dict[int, dict[int, object]]:
    """Reduced row echelon form as ``{pivot_col: row}`` with unit pivots."""
    f = M.field
    piv: dict[int, dict[int, object]] = {}
    for _, src in M.row_items():
        r = dict(src)
        for c in sorted(set(r) & piv.keys()):
            coef = r.get(c)
            if not coef:
                continue
            for cc, v in piv[c].items():
                nv = f.sub(r.get(cc, f.zero), f.mul(coef, v))
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        # pivots never appear in other pivot rows, so one pass suffices
        if not r:
            continue
        c0 = min(r)
        s = f.inv(r[c0])
        r = {cc: f.mul(s, v) for cc, v in r.items()}
        for pc, prow in piv.items():
            coef = prow.get(c0)
            if coef:
                for cc, v in r.items():
                    nv = f.sub(prow.get(cc, f.zero), f.mul(coef, v))
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        piv[c0] = r
    return dict(sorted(piv.items()))


def row_space_basis(M: SparseMatrix) -> SparseMatrix:
    """Canonical basis (reduced echelon rows) of the row space of ``M``."""
    piv = rref_rows(M)
    return SparseMatrix._trusted(len(piv), M.ncols, M.field,
                                 {k: r for k, r in enumerate(piv.values())})


def kernel_basis(M: SparseMatrix) -> SparseMatrix:
    """Right kernel of ``M``; the columns of the result form a basis."""
    f = M.field
    piv = rref_rows(M)
    free = [j for j in range(M.ncols) if j not in piv]
    cols = {}
    for k, j in enumerate(free):
        vec = {j: f.one}
        for pc, prow in piv.items():
            v = prow.get(j)
            if v:
                vec[pc] = f.neg(v)
        cols[k] = vec
    return SparseMatrix._trusted(len(free), M.ncols, f, cols).transpose() \
        if free else SparseMatrix.zeros(M.ncols, 0, f)


def _check_compatible(A: SparseMatrix, B: SparseMatrix):
    if A.field != B.field:
        raise DimensionMismatch("field mismatch")
    if A.ncols != B.ncols:
        raise DimensionMismatch(f"ambient dimensions differ: {A.ncols} vs {B.ncols}")


def intersect(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    """Basis (as rows) of rowspace(A) ∩ rowspace(B)."""
    _check_compatible(A, B)
    A, B = row_space_basis(A), row_space_basis(B)
    f = A.field
    # columns of S are the rows of A and of -B; (x, y) in ker S gives x.A = y.B
    stacked = {}
    for j, r in A.row_items():
        stacked[j] = dict(r)
    for j, r in B.row_items():
        stacked[A.nrows + j] = {c: f.neg(v) for c, v in r.items()}
    S = SparseMatrix._trusted(A.nrows + B.nrows, A.ncols, f, stacked).transpose()
    ker = kernel_basis(S)
    x = SparseMatrix._trusted(ker.ncols, A.nrows, f,
                              {k: {i: v for i, v in col.items() if i < A.nrows}
                               for k, col in ker.columns().items()})
    return row_space_basis(x @ A)


def contains(A: SparseMatrix, v: SparseMatrix | Sequence[object]) -> bool:
    """Whether the vector ``v`` lies in the row space of ``A``."""
    if not isinstance(v, SparseMatrix):
        v = row_vector(v, A.field)
    _check_compatible(A, v)
    return rank(A.vstack(v)) == rank(A)
