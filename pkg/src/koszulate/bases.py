"""Ordered bases of Sym^d V and ∧^p V, and the Koszul differentials δ_{p,q}.

Conventions (frozen; the KFile format depends on them):

* A monomial is its exponent vector. ``sym_basis(n, d)`` lists degree-d
  monomials in graded-lex order with x_0 > x_1 > ... > x_{n-1}, e.g.
  ``sym_basis(2, 2) == [(2, 0), (1, 1), (0, 2)]``.
* An exterior index is a strictly increasing tuple; ``wedge_basis(n, p)`` is
  in lexicographic order, so pairs run (0,1), (0,2), ..., (n-2, n-1).
* A tensor basis ∧^p V ⊗ Sym^q V is ordered lexicographically on
  (exterior index, monomial): flat index = ext_index * sym_dim(n, q) + mon_index.

The differential follows

    δ_p(v_1 ∧ ... ∧ v_p ⊗ f) = Σ_j (-1)^(j-1) v_1 ∧ .. v̂_j .. ∧ v_p ⊗ v_j f,

so with three variables δ_2(e_0 ∧ e_2 ⊗ 1) = e_2 ⊗ x_0 - e_0 ⊗ x_2 and
δ_3(e_0 ∧ e_1 ∧ e_2 ⊗ 1) = e_1∧e_2 ⊗ x_0 - e_0∧e_2 ⊗ x_1 + e_0∧e_1 ⊗ x_2.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb

from .fields import FieldConfig
from .linalg import SparseMatrix

Monomial = tuple[int, ...]
ExteriorIndex = tuple[int, ...]

MAX_WEDGE = 3

# sign of the j-th term, indexed by j mod 2
_SIGNS = (1, -1)


def sym_dim(n: int, d: int) -> int:
    if d < 0:
        return 0
    return comb(n + d - 1, d)


def wedge_dim(n: int, p: int) -> int:
    return comb(n, p)


@lru_cache(maxsize=None)
def sym_basis(n: int, d: int) -> tuple[Monomial, ...]:
    if n < 1:
        raise ValueError("need n >= 1")
    if d < 0:
        return ()
    out = []
    for idx in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in idx:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def sym_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: k for k, m in enumerate(sym_basis(n, d))}


@lru_cache(maxsize=None)
def wedge_basis(n: int, p: int) -> tuple[ExteriorIndex, ...]:
    if p > MAX_WEDGE or p < 0:
        raise ValueError(f"exterior power {p} unsupported (0 <= p <= {MAX_WEDGE})")
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def wedge_index(n: int, p: int) -> dict[ExteriorIndex, int]:
    return {t: k for k, t in enumerate(wedge_basis(n, p))}


def pair_index(n: int, i: int, j: int) -> int:
    """Flat index of e_i ∧ e_j (i < j) in the lex pair order."""
    return wedge_index(n, 2)[(i, j)]


def times_var(mon: Monomial, i: int) -> Monomial:
    return mon[:i] + (mon[i] + 1,) + mon[i + 1:]


@lru_cache(maxsize=64)
def _delta_columns(p: int, q: int, n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    # integer-signed columns; shared by every field
    src_w = wedge_basis(n, p)
    dst_w = wedge_index(n, p - 1)
    src_m = sym_basis(n, q)
    dst_m = sym_index(n, q + 1)
    dm = sym_dim(n, q + 1)
    cols = []
    for t in src_w:
        for f in src_m:
            col = []
            for j, v in enumerate(t):
                rest = t[:j] + t[j + 1:]
                col.append((dst_w[rest] * dm + dst_m[times_var(f, v)], _SIGNS[j % 2]))
            cols.append(tuple(col))
    return tuple(cols)


def delta_matrix(p: int, q: int, n: int, field: FieldConfig) -> SparseMatrix:
    """Matrix of δ_{p,q}: ∧^p V ⊗ Sym^q V → ∧^{p-1} V ⊗ Sym^{q+1} V.

    Rows index the codomain, columns the domain. Each column has exactly
    ``p`` entries, all ±1.
    """
    if not 1 <= p <= MAX_WEDGE:
        raise ValueError(f"unsupported exterior degree p={p}")
    if q < 0:
        raise ValueError("q must be >= 0")
    one, mone = field(1), field(-1)
    cols = {k: {r: (one if s > 0 else mone) for r, s in col}
            for k, col in enumerate(_delta_columns(p, q, n))}
    rows = wedge_dim(n, p - 1) * sym_dim(n, q + 1)
    return SparseMatrix._trusted(len(cols), rows, field, cols).transpose()


def delta_columns(p: int, q: int, n: int):
    """Signed integer columns of δ_{p,q} as ``((row, ±1), ...)`` tuples."""
    if not 1 <= p <= MAX_WEDGE:
        raise ValueError(f"unsupported exterior degree p={p}")
    return _delta_columns(p, q, n)
