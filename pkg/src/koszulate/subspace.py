"""Subspaces K of ∧²V and the pairing with ∧²V^∨."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .bases import wedge_basis
from .fields import FieldConfig
from .linalg import SparseMatrix, kernel_basis, rank, row_space_basis


class RankDeficient(ValueError):
    pass


@dataclass(frozen=True)
class Subspace2:
    """K ⊆ ∧²V given by a full-row-rank basis in lex pair coordinates.

    K^⊥ is never stored; it is the kernel of ``basis`` under the pairing
    ⟨e_i∧e_j, a∧b⟩ = a_i b_j - a_j b_i, which in pair coordinates is the
    ordinary dot product with the Plücker vector of a∧b.
    """

    n: int
    basis: SparseMatrix
    field: FieldConfig = dc_field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.basis.ncols != comb(self.n, 2):
            raise ValueError(f"basis rows need {comb(self.n, 2)} coordinates, "
                             f"got {self.basis.ncols}")
        object.__setattr__(self, "field", self.basis.field)
        if rank(self.basis) != self.basis.nrows:
            raise RankDeficient("basis rows are linearly dependent")

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence[object]], field: FieldConfig) -> Subspace2:
        return cls(n, SparseMatrix.from_dense(list(rows), field, ncols=comb(n, 2)))

    @classmethod
    def from_pairs(cls, n: int, rows: Sequence[dict[tuple[int, int], object]],
                   field: FieldConfig) -> Subspace2:
        """Build from rows given as ``{(i, j): coeff}`` with i < j."""
        idx = {t: k for k, t in enumerate(wedge_basis(n, 2))}
        mat = {k: {idx[t]: v for t, v in r.items()} for k, r in enumerate(rows)}
        return cls(n, SparseMatrix(len(rows), comb(n, 2), field, mat))

    @property
    def m(self) -> int:
        return self.basis.nrows

    @property
    def ambient(self) -> int:
        return comb(self.n, 2)

    def perp(self) -> SparseMatrix:
        """Basis of K^⊥ ⊆ ∧²V^∨ as rows (Plücker coordinates)."""
        return kernel_basis(self.basis).transpose()

    def row_space(self) -> SparseMatrix:
        return row_space_basis(self.basis)

    def same_space(self, other: Subspace2) -> bool:
        return (self.n == other.n and self.field == other.field
                and self.row_space() == other.row_space())

    def is_contained_in(self, other: Subspace2) -> bool:
        return rank(other.basis.vstack(self.basis)) == other.m

    def reduce(self, field: FieldConfig) -> Subspace2:
        """Same K with coefficients coerced into ``field`` (e.g. QQ → F_p)."""
        return Subspace2(self.n, self.basis.with_field(field))


def wedge(a: Sequence[object], b: Sequence[object], field: FieldConfig) -> list[object]:
    """Plücker coordinates of a ∧ b in the lex pair order."""
    a = [field(x) for x in a]
    b = [field(x) for x in b]
    return [field.sub(field.mul(a[i], b[j]), field.mul(a[j], b[i]))
            for i, j in wedge_basis(len(a), 2)]
