"""Exact ground fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

RATIONAL = "rational"
PRIME = "prime"

#: Default modulus for ``--prime auto``: the Mersenne prime 2^61 - 1.
DEFAULT_PRIME = 2**61 - 1


@dataclass(frozen=True)
class FieldConfig:
    """Selects the exact arithmetic used by every matrix.

    Elements of the rational field are :class:`fractions.Fraction`; elements
    of ``F_p`` are plain ints in ``[0, p)``.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == PRIME:
            if not isinstance(self.p, int) or not 2 < self.p < 2**62:
                raise ValueError(f"modulus must satisfy 2 < p < 2^62, got {self.p!r}")
            if not isprime(self.p):
                raise ValueError(f"modulus {self.p} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> FieldConfig:
        return cls(RATIONAL)

    @classmethod
    def prime(cls, p: int) -> FieldConfig:
        return cls(PRIME, int(p))

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.is_prime else "QQ"

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if not self.is_prime:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, x, y):
        return (x + y) % self.p if self.is_prime else x + y

    def sub(self, x, y):
        return (x - y) % self.p if self.is_prime else x - y

    def mul(self, x, y):
        return x * y % self.p if self.is_prime else x * y

    def neg(self, x):
        return -x % self.p if self.is_prime else -x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p) if self.is_prime else 1 / x

    def format(self, x) -> str:
        """Lossless decimal or ``a/b`` string for an element."""
        return str(x)

    def to_json(self) -> dict:
        if self.is_prime:
            return {"kind": PRIME, "p": str(self.p)}
        return {"kind": RATIONAL}

    @classmethod
    def from_json(cls, doc) -> FieldConfig:
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ValueError("field must be an object with a 'kind' key")
        if doc["kind"] == RATIONAL:
            return cls.rational()
        if doc["kind"] == PRIME:
            p = doc.get("p")
            if not isinstance(p, (str, int)) or not str(p).isdigit():
                raise ValueError("prime field needs 'p' as a decimal string")
            return cls.prime(int(p))
        raise ValueError(f"unknown field kind {doc['kind']!r}")
