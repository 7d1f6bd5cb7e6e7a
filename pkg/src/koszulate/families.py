"""Named subspaces K ⊆ ∧²V.

The binary-form families identify V^∨ with a space of sections and take K to
be the row space of a bilinear alternating map out of ∧²V^∨; then K^⊥ is
exactly that map's kernel.
"""

from __future__ import annotations

from math import comb

from .bases import wedge_basis
from .fields import FieldConfig
from .linalg import SparseMatrix, rank
from .rng import SplitMix64
from .subspace import Subspace2

MAX_ATTEMPTS = 100

FAMILIES = ("random", "codim-one", "weyman", "gaussian-rnc", "split-p1",
            "resonant-perturbation")


class SamplingFailed(RuntimeError):
    pass


def _random_entry(rng: SplitMix64, field: FieldConfig):
    if field.is_prime:
        return rng.below(field.p)
    return rng.integer(-10, 10)


def _sample_full_rank(n: int, m: int, field: FieldConfig, seed: int,
                      allowed: list[int]) -> Subspace2:
    rng = SplitMix64(seed)
    N = comb(n, 2)
    for _ in range(MAX_ATTEMPTS):
        rows = {l: {c: _random_entry(rng, field) for c in allowed} for l in range(m)}
        M = SparseMatrix(m, N, field, rows)
        if rank(M) == m:
            return Subspace2(n, M)
    raise SamplingFailed(f"no full-rank sample after {MAX_ATTEMPTS} attempts")


def random_subspace(n: int, m: int, field: FieldConfig, seed: int = 0) -> Subspace2:
    """Random m-dimensional K; entries uniform in F_p, or in [-10, 10] over QQ."""
    N = comb(n, 2)
    if not 0 <= m <= N:
        raise ValueError(f"need 0 <= m <= {N}")
    return _sample_full_rank(n, m, field, seed, list(range(N)))


def codim_one(n: int, field: FieldConfig | None = None) -> Subspace2:
    """Span of every e_i∧e_j except e_0∧e_1; K^⊥ = span(e_0^∨∧e_1^∨)."""
    if n < 2:
        raise ValueError("need n >= 2")
    field = field or FieldConfig.rational()
    N = comb(n, 2)
    return Subspace2(n, SparseMatrix(N - 1, N, field, {k: {k + 1: 1} for k in range(N - 1)}))


def _binary_form_map(n: int, field: FieldConfig) -> Subspace2:
    # f∧g ↦ f g' - g f' on t^i ∧ t^j is (j - i) t^{i+j-1}; one row per output degree.
    rows: dict[int, dict[int, int]] = {}
    for k, (i, j) in enumerate(wedge_basis(n, 2)):
        rows.setdefault(i + j - 1, {})[k] = j - i
    return Subspace2(n, SparseMatrix(2 * n - 3, comb(n, 2), field, rows))


def weyman(n: int, field: FieldConfig | None = None) -> Subspace2:
    """K = Sym^{2n-4}U inside ∧²Sym^{n-1}U via the first transvectant.

    With e_i = x^i y^{n-1-i}, f_x g_y - f_y g_x sends e_i∧e_j to
    (n-1)(i-j) x^{i+j-1} y^{2n-3-i-j}; K is the row space of that matrix.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    field = field or FieldConfig.rational()
    a = n - 1
    rows: dict[int, dict[int, int]] = {}
    for k, (i, j) in enumerate(wedge_basis(n, 2)):
        # coefficient of x^{i+j-1}: i(a-j) - (a-i)j
        rows.setdefault(i + j - 1, {})[k] = i * (a - j) - (a - i) * j
    return Subspace2(n, SparseMatrix(2 * n - 3, comb(n, 2), field, rows))


def gaussian_rnc(n: int, field: FieldConfig | None = None) -> Subspace2:
    """Gaussian map of O(n-1) on P^1 in the affine coordinate t."""
    if n < 3:
        raise ValueError("need n >= 3")
    return _binary_form_map(n, field or FieldConfig.rational())


def split_bundle_p1(a: int, b: int, field: FieldConfig | None = None) -> Subspace2:
    """Determinant-map K for E = O(a) ⊕ O(b) on P^1.

    Sections: (t^i, 0) for i <= a, then (0, t^j) for j <= b. The determinant
    of two sections only pairs the summands: (t^i, 0) ∧ (0, t^j) ↦ t^{i+j}.
    """
    if a < 0 or b < 0:
        raise ValueError("need a, b >= 0")
    field = field or FieldConfig.rational()
    n = a + b + 2
    idx = {t: k for k, t in enumerate(wedge_basis(n, 2))}
    rows: dict[int, dict[int, int]] = {}
    for i in range(a + 1):
        for j in range(b + 1):
            rows.setdefault(i + j, {})[idx[(i, a + 1 + j)]] = 1
    return Subspace2(n, SparseMatrix(a + b + 1, comb(n, 2), field, rows))


def resonant_perturbation(n: int, seed: int = 0, field: FieldConfig | None = None) -> Subspace2:
    """Random (2n-3)-dimensional K inside codim_one(n), hence e_0^∨∧e_1^∨ ∈ K^⊥."""
    if n < 4:
        raise ValueError("need n >= 4")
    field = field or FieldConfig.rational()
    return _sample_full_rank(n, 2 * n - 3, field, seed, list(range(1, comb(n, 2))))


def build(name: str, *, n: int | None = None, m: int | None = None, seed: int = 0,
          a: int | None = None, b: int | None = None,
          field: FieldConfig | None = None) -> Subspace2:
    """Dispatch by family name (the CLI's ``family`` command)."""
    field = field or FieldConfig.rational()

    def need(value, label):
        if value is None:
            raise ValueError(f"family {name!r} needs --{label}")
        return value

    if name == "random":
        return random_subspace(need(n, "n"), need(m, "m"), field, seed)
    if name == "codim-one":
        return codim_one(need(n, "n"), field)
    if name == "weyman":
        return weyman(need(n, "n"), field)
    if name == "gaussian-rnc":
        return gaussian_rnc(need(n, "n"), field)
    if name == "split-p1":
        return split_bundle_p1(need(a, "a"), need(b, "b"), field)
    if name == "resonant-perturbation":
        return resonant_perturbation(need(n, "n"), seed, field)
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
