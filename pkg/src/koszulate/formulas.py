"""Closed-form degrees, divisor classes and Mukai-vector arithmetic, all exact."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

# Symbol names used in FormalClass
LAMBDA = "lambda"
PSI_SUM = "psi_sum"
PHI = "phi"
PSI = "psi"
HHAT = "hhat"
C1E = "c1E"
C1F = "c1F"


class FormalClass:
    """Exact rational linear combination of named divisor symbols."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, object] | None = None):
        self._coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def symbol(cls, name: str) -> FormalClass:
        return cls({name: 1})

    def coeff(self, name: str) -> Fraction:
        return self._coeffs.get(name, Fraction(0))

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted(self._coeffs))

    def __add__(self, other: FormalClass) -> FormalClass:
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return FormalClass(out)

    def __neg__(self) -> FormalClass:
        return FormalClass({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: FormalClass) -> FormalClass:
        return self + (-other)

    def __mul__(self, scalar) -> FormalClass:
        s = Fraction(scalar)
        return FormalClass({k: s * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> FormalClass:
        return self * (1 / Fraction(scalar))

    def __eq__(self, other):
        if not isinstance(other, FormalClass):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(sorted(self._coeffs.items())))

    def substitute(self, name: str, value: FormalClass) -> FormalClass:
        """Replace the symbol ``name`` by the class ``value``."""
        rest = FormalClass({k: v for k, v in self._coeffs.items() if k != name})
        return rest + value * self.coeff(name)

    def to_json(self) -> dict[str, str]:
        return {k: str(v) for k, v in sorted(self._coeffs.items())}

    def __repr__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self._coeffs.items()))


# -- Grassmannian degrees ----------------------------------------------------

def koszul_divisor_degree(n: int) -> int:
    """Degree of the Koszul divisor: dim Sym^{n-3} V = binomial(2n-4, n-1)."""
    if n < 3:
        raise ValueError("need n >= 3")
    return comb(2 * n - 4, n - 1)


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def chow_degree(n: int) -> int:
    """Degree of the Chow form of Gr_2 in its Plücker embedding: C_{n-2}."""
    if n < 3:
        raise ValueError("need n >= 3")
    num = comb(2 * n - 4, n - 2)
    assert num % (n - 1) == 0
    return num // (n - 1)


def degree_identity(n: int) -> bool:
    return koszul_divisor_degree(n) == (n - 2) * chow_degree(n)


def wq_bound(n: int, q: int) -> Fraction:
    """Upper bound for dim W_q of a resonance-free K (sharp when dim K = 2n-3).

    Past the vanishing range (q >= n-3) the bound is 0; the raw product would
    turn negative there.
    """
    if n < 3 or q < 0:
        raise ValueError("need n >= 3 and q >= 0")
    if q >= n - 3:
        return Fraction(0)
    return Fraction(comb(n + q - 1, q) * (n - 2) * (n - q - 3), q + 2)


# -- divisor classes ---------------------------------------------------------

def _central_coefficient(e: int) -> Fraction:
    # (2e-4)! / ((e-2)! (e-1)!)
    return Fraction(factorial(2 * e - 4), factorial(e - 2) * factorial(e - 1))


def resonance_class(e: int, c1E: FormalClass, c1F: FormalClass) -> FormalClass:
    """Class of the resonance divisor of φ: ∧²E → F with rk E = e, rk F = 2e-3."""
    if e < 3:
        raise ValueError("need e >= 3")
    return (c1F - c1E * Fraction(4 * e - 6, e)) * _central_coefficient(e)


def resonance_class_from_proof(e: int, c1E: FormalClass, c1F: FormalClass) -> FormalClass:
    """Same class, assembled term by term from the degeneracy locus of

        E ⊗ Sym^{e-2}E / Sym^{e-1}E → F ⊗ Sym^{e-3}E

    using c1(Sym^k E) = binomial(e+k-1, e) c1(E), then divided by e-2.
    """
    if e < 4:
        raise ValueError("need e >= 4")
    f_part = c1F * comb(2 * e - 4, e - 3)
    e_coeff = ((2 * e - 3) * comb(2 * e - 4, e - 4)
               - comb(2 * e - 3, e - 2)
               - e * comb(2 * e - 3, e - 3)
               + comb(2 * e - 2, e - 2))
    return (f_part + c1E * e_coeff) / (e - 2)


def canonical_pencil_class(g: int) -> FormalClass:
    """Divisor of (2g-3)-pointed genus-g curves whose points ramify a canonical pencil."""
    if g < 3:
        raise ValueError("need g >= 3")
    lam = FormalClass.symbol(LAMBDA) * Fraction(-2 * (2 * g - 3), g)
    return (lam + FormalClass.symbol(PSI_SUM) * 3) * _central_coefficient(g)


def voisin_coefficient(r: int) -> Fraction:
    """(2r+1)! / (r! (r+2)!), possibly non-integral."""
    if r < 1:
        raise ValueError("need r >= 1")
    return Fraction(factorial(2 * r + 1), factorial(r) * factorial(r + 2))


def voisin_class(r: int) -> FormalClass:
    return FormalClass.symbol(HHAT) * voisin_coefficient(r)


def voisin_inputs(r: int) -> tuple[FormalClass, FormalClass]:
    """(c1(E), c1(F)) on the Fourier-Mukai partner, in the classes φ and ψ."""
    phi, psi = FormalClass.symbol(PHI), FormalClass.symbol(PSI)
    c1E = phi * Fraction(3 * r + 2, 2) - psi * Fraction(1, 2)
    c1F = phi * (2 * r + 1)
    return c1E, c1F


def rewrite_in_hhat(cls: FormalClass, r: int) -> FormalClass:
    """Change basis {φ, ψ} → {φ, ĥ} with ĥ = ψ - 2rφ, i.e. ψ = ĥ + 2rφ."""
    psi_value = FormalClass.symbol(HHAT) + FormalClass.symbol(PHI) * (2 * r)
    return cls.substitute(PSI, psi_value)


def voisin_class_derived(r: int) -> FormalClass:
    """Resonance class at e = r+2 with the partner's Chern data, written in ĥ."""
    c1E, c1F = voisin_inputs(r)
    return rewrite_in_hhat(resonance_class(r + 2, c1E, c1F), r)


# -- Mukai vectors -----------------------------------------------------------

class GenusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MukaiVector:
    """(rank, c·L, Euler part) on a K3 surface with L² = 2g - 2."""

    r: Fraction
    c: Fraction
    s: Fraction
    g: int

    def __post_init__(self):
        for name in ("r", "c", "s"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.r < 0:
            raise ValueError("rank must be >= 0")

    @property
    def L2(self) -> int:
        return 2 * self.g - 2

    def to_json(self) -> dict[str, str]:
        return {"rank": str(self.r), "L": str(self.c), "s": str(self.s), "g": str(self.g)}


def mukai_pairing(v: MukaiVector, w: MukaiVector) -> Fraction:
    """v·w = v_1 w_1 - v_2 w_0 - v_0 w_2."""
    if v.g != w.g:
        raise GenusMismatch(f"genus {v.g} vs {w.g}")
    return v.c * w.c * v.L2 - v.s * w.r - v.r * w.s


def sym_mukai(r: int, s, g: int, b: int, spherical: bool = False) -> MukaiVector:
    """Mukai vector of Sym^b E for v(E) = (r, L, s)."""
    if r < 1 or b < 0:
        raise ValueError("need r >= 1 and b >= 0")
    s = Fraction(s)
    rank_ = comb(r + b - 1, b)
    if spherical:
        if g != r * s:
            raise ValueError(f"spherical formula needs g = r*s, got g={g}, r*s={r * s}")
        third = rank_ * (b * b * s - (b - 1) * (b + r)) / Fraction(r)
    else:
        third = rank_ * (b * b * (g - r + s - 1) - b * (r * r + g - s * r - 1) + r * (r + 1)) \
            / Fraction(r * (r + 1))
    return MukaiVector(rank_, comb(r + b - 1, r), third, g)


def h1_sym_dim(r: int, b: int) -> int:
    """h^1(Sym^b E) for the rigid bundle with v(E) = (r, L, 2), g = 2r."""
    if r < 2 or b < 1:
        raise ValueError("need r >= 2 and b >= 1")
    if b >= r + 1:
        return 0
    value = Fraction(comb(r + b - 1, r + 1) * r * (r - b + 1), b)
    assert value.denominator == 1
    return int(value)
