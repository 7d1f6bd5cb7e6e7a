"""Self-verification suite: every acceptance criterion as an exact check.

``run(level)`` returns one :class:`CheckResult` per criterion. ``"full"``
uses the complete parameter ranges; ``"fast"`` shrinks the expensive ones
and keeps the cheap ones whole.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable

from sympy import groebner, symbols

from . import bases
from .engine import (hilbert_prefix, resonance_points_count, resonance_trivial,
                     wq_dimension, wq_dimension_presentation)
from .families import (codim_one, gaussian_rnc, random_subspace,
                       resonant_perturbation, split_bundle_p1, weyman)
from .fields import DEFAULT_PRIME, FieldConfig
from .formulas import (C1E, C1F, HHAT, LAMBDA, PHI, PSI_SUM, FormalClass,
                       MukaiVector, canonical_pencil_class, degree_identity,
                       h1_sym_dim, mukai_pairing, resonance_class,
                       resonance_class_from_proof, sym_mukai, voisin_class_derived,
                       voisin_coefficient, wq_bound)
from .linalg import row_space_basis
from .rng import SplitMix64
from .subspace import Subspace2

QQ = FieldConfig.rational()
BIG = FieldConfig.prime(DEFAULT_PRIME)


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    failures: list[str] = dc_field(default_factory=list)
    checked: int = 0
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.id:2d}: {self.name} ({self.checked} checks)"
        if self.failures:
            text += " -- " + "; ".join(self.failures[:3])
        return text


class _Recorder:
    def __init__(self):
        self.failures: list[str] = []
        self.checked = 0

    def expect(self, ok: bool, message: str):
        self.checked += 1
        if not ok:
            self.failures.append(message)


# -- helpers shared with the tests --------------------------------------------

def plucker_resonance_free(K: Subspace2) -> bool:
    """Whether P(K^⊥) misses Gr_2(V^∨) over the algebraic closure.

    Independent of both the Koszul-module route and point enumeration:
    restrict the Plücker quadrics to K^⊥ and test whether the homogeneous
    ideal they generate is zero-dimensional (only the origin survives).
    """
    perp = K.perp()
    k = perp.nrows
    if k == 0:
        return True
    n = K.n
    idx = {t: c for c, t in enumerate(bases.wedge_basis(n, 2))}
    ys = symbols(f"y0:{k}")
    dense = perp.to_dense()
    w = {t: sum(int(dense[r][c]) * ys[r] for r in range(k)) for t, c in idx.items()}
    quadrics = []
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(j + 1, n):
                for b in range(a + 1, n):
                    quadrics.append((w[(i, j)] * w[(a, b)] - w[(i, a)] * w[(j, b)]
                                     + w[(i, b)] * w[(j, a)]).expand())
    quadrics = [q for q in quadrics if q != 0]
    if not quadrics:
        return False
    kw = {"modulus": K.field.p} if K.field.is_prime else {}
    G = groebner(quadrics, *ys, order="grevlex", **kw)
    return G.is_zero_dimensional


def extend_subspace(K: Subspace2, extra: int, seed: int) -> Subspace2:
    """A random K' ⊇ K with up to ``extra`` more dimensions."""
    add = random_subspace(K.n, min(extra, K.ambient), K.field, seed)
    return Subspace2(K.n, row_space_basis(K.basis.vstack(add.basis)))


# -- criteria --------------------------------------------------------------

def _c1_vanishing(level, rec):
    top = 7 if level == "full" else 6
    for n in range(4, top + 1):
        for fam in (weyman, gaussian_rnc):
            fields = [BIG] + ([QQ] if n <= 5 else [])
            for fld in fields:
                K = fam(n, fld)
                for q in (n - 3, n - 2):
                    d = wq_dimension(K, q)
                    rec.expect(d == 0, f"{fam.__name__}({n}) over {fld.label}: dim W_{q} = {d}")


def _c2_bound_equality(level, rec):
    want = 10 if level == "full" else 3
    for n in range(4, 7):
        found, seed = 0, 0
        while found < want:
            K = random_subspace(n, 2 * n - 3, BIG, seed)
            seed += 1
            if not resonance_trivial(K):
                continue
            found += 1
            for q in range(n - 3):
                d = wq_dimension(K, q)
                rec.expect(d == wq_bound(n, q),
                           f"n={n} seed={seed - 1} q={q}: {d} != {wq_bound(n, q)}")


def _c3_codim_one(level, rec):
    for n in range(4, 7):
        got = hilbert_prefix(codim_one(n), n)
        rec.expect(got == list(range(1, n + 2)), f"codim_one({n}): {got}")


def _c4_multiplicity(level, rec):
    seeds = 10 if level == "full" else 3
    for n in (4, 5):
        for seed in range(seeds):
            K = resonant_perturbation(n, seed, QQ)
            d = wq_dimension(K, n - 3)
            rec.expect(d >= n - 2, f"n={n} seed={seed}: dim W_{n - 3} = {d} < {n - 2}")


def _c5_oracle(level, rec):
    want = 10 if level == "full" else 3
    for n in (4, 5):
        for p in (3, 5, 7):
            F = FieldConfig.prime(p)
            samples = [resonant_perturbation(n, s, F) for s in range(want)]
            clean, seed = [], 0
            while len(clean) < want:
                K = random_subspace(n, 2 * n - 3, F, seed)
                seed += 1
                if plucker_resonance_free(K):
                    clean.append(K)
            for K in samples + clean:
                rt = resonance_trivial(K)
                count = resonance_points_count(K)
                rec.expect(rt == (count == 0),
                           f"n={n} p={p}: resonance_trivial={rt} but {count} resonant points")
            rec.expect(all(not resonance_trivial(K) for K in samples),
                       f"n={n} p={p}: a constructed resonant sample looks resonance-free")


def _c6_quadric(level, rec):
    for p in (3, 5, 7):
        c = resonance_points_count(split_bundle_p1(1, 1, FieldConfig.prime(p)))
        rec.expect(c == (p + 1) ** 2, f"p={p}: {c} != {(p + 1) ** 2}")


def _c7_degrees(level, rec):
    for n in range(3, 61):
        rec.expect(degree_identity(n), f"degree identity fails at n={n}")


def _c8_resonance_class(level, rec):
    E, F = FormalClass.symbol(C1E), FormalClass.symbol(C1F)
    for e in range(4, 41):
        rec.expect(resonance_class_from_proof(e, E, F) == resonance_class(e, E, F),
                   f"e={e}: proof expansion disagrees")


def _c9_canonical_pencil(level, rec):
    lam, psi = FormalClass.symbol(LAMBDA), FormalClass.symbol(PSI_SUM)
    for g in range(3, 31):
        rec.expect(canonical_pencil_class(g) == resonance_class(g, lam, psi * 3),
                   f"g={g}: canonical pencil class mismatch")


def _c10_voisin(level, rec):
    for r in range(2, 31):
        cls = voisin_class_derived(r)
        rec.expect(cls.coeff(PHI) == 0, f"r={r}: phi coefficient {cls.coeff(PHI)}")
        rec.expect(cls.coeff(HHAT) == voisin_coefficient(r) and set(cls.symbols) <= {HHAT},
                   f"r={r}: got {cls!r}")


def _c11_h1_bridge(level, rec):
    for r in range(2, 21):
        for b in range(2, r + 4):
            rec.expect(h1_sym_dim(r, b) == wq_bound(r + 2, b - 2),
                       f"r={r} b={b}: {h1_sym_dim(r, b)} != {wq_bound(r + 2, b - 2)}")


def _c12_mukai(level, rec):
    for r in range(2, 21):
        v = MukaiVector(r, 1, 2, 2 * r)
        rec.expect(mukai_pairing(v, v) == -2, f"r={r}: v^2 = {mukai_pairing(v, v)}")
    for r in range(1, 7):
        for s in range(1, 7):
            for g in sorted({r * s, 2, 2 * r, r + s + 3}):
                rec.expect(sym_mukai(r, s, g, 1) == MukaiVector(r, 1, s, g),
                           f"Sym^1 not identity at r={r} s={s} g={g}")
            for b in range(1, 7):
                rec.expect(sym_mukai(r, s, r * s, b) == sym_mukai(r, s, r * s, b, spherical=True),
                           f"general vs spherical at r={r} s={s} b={b}")


def _c13_structure(level, rec):
    qmax = 4
    for n in range(1, 7):
        for q in range(qmax + 1):
            d1 = bases.delta_matrix(1, q + 1, n, QQ)
            d2 = bases.delta_matrix(2, q, n, QQ)
            d2b = bases.delta_matrix(2, q + 1, n, QQ)
            d3 = bases.delta_matrix(3, q, n, QQ)
            ok = (d1 @ d2).nnz == 0 and (d2b @ d3).nnz == 0
            rec.expect(ok, f"complex property violated at n={n} q={q}")
    instances = 50 if level == "full" else 15
    rng = SplitMix64(2024)
    for k in range(instances):
        n = rng.integer(3, 5)
        m = rng.integer(0, comb(n, 2))
        q = rng.integer(0, 3)
        fld = QQ if k % 2 == 0 else BIG
        K = random_subspace(n, m, fld, seed=k)
        a, b = wq_dimension(K, q), wq_dimension_presentation(K, q)
        rec.expect(a == b, f"dual route n={n} m={m} q={q} {fld.label}: {a} vs {b}")
        rec.expect(wq_dimension(K, 0) == comb(n, 2) - m, f"W_0 formula n={n} m={m}")
    pairs = 20 if level == "full" else 6
    for k in range(pairs):
        n = rng.integer(3, 5)
        m = rng.integer(1, comb(n, 2) - 1)
        K = random_subspace(n, m, BIG, seed=100 + k)
        K2 = extend_subspace(K, rng.integer(1, 3), seed=200 + k)
        for q in range(4):
            a, b = wq_dimension(K, q), wq_dimension(K2, q)
            rec.expect(a >= b, f"monotonicity n={n} m={m}->{K2.m} q={q}: {a} < {b}")


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "vanishing W_q = 0 for q >= n-3 (transvectant and Gaussian K)", _c1_vanishing),
    (2, "Hilbert bound attained when dim K = 2n-3", _c2_bound_equality),
    (3, "Hilbert series of the codimension-one K'", _c3_codim_one),
    (4, "multiplicity dim W_{n-3} >= n-2 for resonant K", _c4_multiplicity),
    (5, "finite-field resonance oracle equivalence", _c5_oracle),
    (6, "O(1)+O(1) resonance is a smooth quadric", _c6_quadric),
    (7, "Koszul degree = (n-2) * Catalan", _c7_degrees),
    (8, "resonance class: proof expansion = closed form", _c8_resonance_class),
    (9, "canonical pencil class from the resonance class", _c9_canonical_pencil),
    (10, "Voisin curve class from the resonance class", _c10_voisin),
    (11, "h^1(Sym^b E) = Hilbert bound", _c11_h1_bridge),
    (12, "Mukai vector arithmetic", _c12_mukai),
    (13, "structural invariants of the Koszul complex", _c13_structure),
]


def run_criterion(cid: int, level: str = "full") -> CheckResult:
    for i, name, fn in CRITERIA:
        if i == cid:
            rec = _Recorder()
            t0 = time.perf_counter()
            fn(level, rec)
            return CheckResult(i, name, not rec.failures, rec.failures, rec.checked,
                               time.perf_counter() - t0)
    raise KeyError(cid)


def run(level: str = "fast") -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    return [run_criterion(i, level) for i, _, _ in CRITERIA]
