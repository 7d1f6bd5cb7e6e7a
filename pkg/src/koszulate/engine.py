"""Graded pieces of Koszul modules W(V, K), resonance and isotropy tests."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .bases import delta_columns, delta_matrix, sym_dim, wedge_basis, wedge_dim
from .fields import FieldConfig
from .linalg import (SparseMatrix, certified_rank, contains, intersect, rank,
                     rref_rows)
from .subspace import Subspace2, wedge


class FieldMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


#: Largest projective point count ``resonance_points_count`` enumerates by default.
POINT_BUDGET = 10**7


@dataclass(frozen=True)
class WqReport:
    q: int
    dim: int
    ranks: dict
    route: str


def _check_field(K: Subspace2, field: FieldConfig | None):
    if field is not None and field != K.field:
        raise FieldMismatch(f"K is over {K.field.label}, computation requested over {field.label}")


def restricted_delta_transposed(K: Subspace2, q: int) -> SparseMatrix:
    """Transpose of δ_{2,q} ∘ (ι_K ⊗ id): one row per basis element k_l ⊗ f."""
    n, f = K.n, K.field
    cols = delta_columns(2, q, n)
    dq = sym_dim(n, q)
    rows = {}
    for l, krow in K.basis.row_items():
        for t in range(dq):
            acc: dict[int, object] = {}
            for pair, c in krow.items():
                for r, s in cols[pair * dq + t]:
                    acc[r] = f.add(acc.get(r, f.zero), c if s > 0 else f.neg(c))
            rows[l * dq + t] = {r: v for r, v in acc.items() if v}
    return SparseMatrix._trusted(K.m * dq, n * sym_dim(n, q + 1), f, rows)


def restricted_delta(K: Subspace2, q: int) -> SparseMatrix:
    """Matrix of δ_{2,q} restricted to K ⊗ Sym^q V (rows: V ⊗ Sym^{q+1} V)."""
    return restricted_delta_transposed(K, q).transpose()


def _rank(M: SparseMatrix, modular: int) -> int:
    if modular and not M.field.is_prime:
        return certified_rank(M, k=modular).rank
    return rank(M)


def wq_report(K: Subspace2, q: int, *, paranoid: bool = False, modular: int = 0,
              field: FieldConfig | None = None) -> WqReport:
    """dim W_q(V, K) as middle cohomology of K⊗Sym^q → V⊗Sym^{q+1} → Sym^{q+2}.

    ``modular=k`` replaces the exact rational rank by the maximum over ``k``
    random 61-bit primes (a lower bound, exact for all but finitely many
    primes). ``paranoid`` recomputes rank δ_{1,q+1} instead of using its
    surjectivity.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    _check_field(K, field)
    n = K.n
    middle = n * sym_dim(n, q + 1)
    target = sym_dim(n, q + 2)
    ranks = {"delta1": target}
    if paranoid:
        ranks["delta1"] = rank(delta_matrix(1, q + 1, n, K.field))
    ranks["delta2_K"] = _rank(restricted_delta_transposed(K, q), modular) if K.m else 0
    dim = middle - ranks["delta1"] - ranks["delta2_K"]
    return WqReport(q, dim, ranks, "complex")


def wq_dimension(K: Subspace2, q: int, **kw) -> int:
    return wq_report(K, q, **kw).dim


def _quotient_projection(K: Subspace2) -> tuple[int, dict[int, dict[int, object]]]:
    """Coordinates on ∧²V/K: images of each e_i∧e_j in a fixed complement basis."""
    f = K.field
    piv = rref_rows(K.basis)
    free = [c for c in range(K.ambient) if c not in piv]
    qidx = {c: k for k, c in enumerate(free)}
    proj: dict[int, dict[int, object]] = {c: {qidx[c]: f.one} for c in free}
    for pc, prow in piv.items():
        proj[pc] = {qidx[c]: f.neg(v) for c, v in prow.items() if c != pc}
    return len(free), proj


def wq_presentation_report(K: Subspace2, q: int, *, modular: int = 0,
                           field: FieldConfig | None = None) -> WqReport:
    """dim W_q as the cokernel of ∧³V ⊗ Sym^{q-1} V → (∧²V/K) ⊗ Sym^q V."""
    if q < 0:
        raise ValueError("q must be >= 0")
    _check_field(K, field)
    n, f = K.n, K.field
    qdim, proj = _quotient_projection(K)
    dq = sym_dim(n, q)
    codomain = qdim * dq
    if q == 0 or n < 3 or qdim == 0:
        return WqReport(q, codomain, {"delta3_proj": 0}, "presentation")
    rows = {}
    for k, col in enumerate(delta_columns(3, q - 1, n)):
        acc: dict[int, object] = {}
        for r, s in col:
            pair, t = divmod(r, dq)
            for qc, v in proj[pair].items():
                key = qc * dq + t
                acc[key] = f.add(acc.get(key, f.zero), v if s > 0 else f.neg(v))
        rows[k] = {c: v for c, v in acc.items() if v}
    M = SparseMatrix._trusted(comb(n, 3) * sym_dim(n, q - 1), codomain, f, rows)
    r = _rank(M, modular)
    return WqReport(q, codomain - r, {"delta3_proj": r}, "presentation")


def wq_dimension_presentation(K: Subspace2, q: int, **kw) -> int:
    return wq_presentation_report(K, q, **kw).dim


def hilbert_prefix(K: Subspace2, qmax: int, **kw) -> list[int]:
    if qmax < 0:
        raise ValueError("qmax must be >= 0")
    return [wq_dimension(K, q, **kw) for q in range(qmax + 1)]


def resonance_threshold(n: int) -> int:
    """Degree whose vanishing decides resonance: max(n - 3, 0)."""
    return max(n - 3, 0)


def resonance_trivial(K: Subspace2, **kw) -> bool:
    # W(V, K) is generated in degree 0, so vanishing at the threshold suffices.
    return wq_dimension(K, resonance_threshold(K.n), **kw) == 0


def fiber_matrix(K: Subspace2, a) -> SparseMatrix:
    """The m × n matrix of b ↦ (⟨k_l, a∧b⟩)_l."""
    f, n = K.field, K.n
    a = [f(x) for x in a]
    if len(a) != n:
        raise ValueError(f"vector has length {len(a)}, expected {n}")
    pairs = wedge_basis(n, 2)
    rows = {}
    for l, krow in K.basis.row_items():
        acc: dict[int, object] = {}
        for pidx, c in krow.items():
            i, j = pairs[pidx]
            if a[i]:
                acc[j] = f.add(acc.get(j, f.zero), f.mul(c, a[i]))
            if a[j]:
                acc[i] = f.sub(acc.get(i, f.zero), f.mul(c, a[j]))
        rows[l] = {c: v for c, v in acc.items() if v}
    return SparseMatrix._trusted(K.m, n, f, rows)


def fiber_dimension(K: Subspace2, a) -> int:
    """dim F(a), where F(a) = {b : a∧b ∈ K^⊥}."""
    return K.n - rank(fiber_matrix(K, a))


def projective_point_count(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def _projective_points(n: int, p: int, chunk: int):
    """Yield arrays of normalized representatives (first nonzero entry 1)."""
    for lead in range(n):
        free = n - lead - 1
        total = p**free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            pts = np.zeros((len(idx), n), dtype=np.int64)
            pts[:, lead] = 1
            for c in range(n - 1, lead, -1):
                pts[:, c] = idx % p
                idx = idx // p
            yield pts


def _inverse_mod(x: np.ndarray, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def batched_rank_mod(X: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of small matrices, shape (B, rows, cols)."""
    X = X % p
    B, m, n = X.shape
    ranks = np.zeros(B, dtype=np.int64)
    used = np.zeros((B, m), dtype=bool)
    for c in range(n):
        cand = (X[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        pr = cand[b].argmax(axis=1)
        prow = X[b, pr, :]
        prow = prow * _inverse_mod(prow[:, c], p)[:, None] % p
        factors = X[b, :, c]
        X[b] = (X[b] - factors[:, :, None] * prow[:, None, :]) % p
        X[b, pr] = prow
        used[b, pr] = True
        ranks[b] += 1
    return ranks


def _fiber_tensor(K: Subspace2) -> np.ndarray:
    """A with M_a = Σ_i a_i A[i] for every a (entries reduced mod p)."""
    n, p = K.n, K.field.p
    A = np.zeros((n, K.m, n), dtype=np.int64)
    pairs = wedge_basis(n, 2)
    for l, krow in K.basis.row_items():
        for pidx, c in krow.items():
            i, j = pairs[pidx]
            A[i, l, j] = (A[i, l, j] + c) % p
            A[j, l, i] = (A[j, l, i] - c) % p
    return A


def resonance_points_count(K: Subspace2, budget: int = POINT_BUDGET,
                           chunk: int = 1 << 15) -> int:
    """Number of F_p-points [a] of P(V^∨) with dim F(a) >= 2."""
    if not K.field.is_prime:
        raise ValueError("resonance point enumeration needs a prime field")
    n, p = K.n, K.field.p
    total = projective_point_count(n, p)
    if total > budget:
        raise BudgetExceeded(f"{total} projective points exceed the budget {budget}")
    if K.m == 0:
        return total if n >= 2 else 0
    if n * p * p >= 2**62:
        pts = (pt for block in _projective_points(n, p, chunk) for pt in block.tolist())
        return sum(1 for a in pts if fiber_dimension(K, a) >= 2)
    A = _fiber_tensor(K)
    count = 0
    for pts in _projective_points(n, p, chunk):
        M = np.einsum("bi,ilc->blc", pts, A) % p
        count += int((batched_rank_mod(M, p) <= n - 2).sum())
    return count


# -- isotropy ----------------------------------------------------------------

def _vbar_rows(K: Subspace2, Vbar) -> list[list[object]]:
    if isinstance(Vbar, SparseMatrix):
        if Vbar.field != K.field:
            raise FieldMismatch("subspace and K live over different fields")
        rows = Vbar.to_dense()
    else:
        rows = [[K.field(x) for x in r] for r in Vbar]
    if any(len(r) != K.n for r in rows):
        raise ValueError(f"subspace vectors must have length {K.n}")
    if rows and rank(SparseMatrix.from_dense(rows, K.field)) != len(rows):
        raise ValueError("subspace basis is not of full row rank")
    return rows


def _pairing_vanishes(K: Subspace2, w: list[object]) -> bool:
    f = K.field
    for _, krow in K.basis.row_items():
        s = f.zero
        for c, v in krow.items():
            if w[c]:
                s = f.add(s, f.mul(v, w[c]))
        if s:
            return False
    return True


def is_isotropic(K: Subspace2, Vbar) -> bool:
    """∧² of the subspace lies in K^⊥."""
    rows = _vbar_rows(K, Vbar)
    return all(_pairing_vanishes(K, wedge(rows[i], rows[j], K.field))
               for i in range(len(rows)) for j in range(i + 1, len(rows)))


def is_separable(K: Subspace2, Vbar) -> bool:
    """K^⊥ ∩ (V̄^∨ ∧ V^∨) ⊆ ∧²V̄^∨, checked in exterior degree 2."""
    f, n = K.field, K.n
    rows = _vbar_rows(K, Vbar)
    if not rows:
        return True
    N = comb(n, 2)
    units = [[f.one if c == d else f.zero for c in range(n)] for d in range(n)]
    ideal = SparseMatrix.from_dense([wedge(a, e, f) for a in rows for e in units], f, ncols=N)
    perp = K.perp()
    if perp.nrows == 0:
        return True
    meet = intersect(perp, ideal)
    inner = [wedge(rows[i], rows[j], f) for i in range(len(rows)) for j in range(i + 1, len(rows))]
    inner_m = SparseMatrix.from_dense(inner, f, ncols=N) if inner else SparseMatrix.zeros(0, N, f)
    return all(contains(inner_m, meet.select_rows([i])) for i in range(meet.nrows))


def is_strongly_isotropic(K: Subspace2, Vbar) -> bool:
    return is_isotropic(K, Vbar) and is_separable(K, Vbar)


@dataclass(frozen=True)
class MultiplicityReport:
    resonant: bool
    q: int
    dim_wq: int
    passes: bool


def multiplicity_lower_bound_check(K: Subspace2, **kw) -> MultiplicityReport:
    """Resonant K must have dim W_{n-3} >= n-2."""
    q = resonance_threshold(K.n)
    d = wq_dimension(K, q, **kw)
    resonant = d != 0
    return MultiplicityReport(resonant, q, d, (not resonant) or d >= q + 1)
