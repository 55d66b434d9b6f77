"""Coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """A principal ideal ring of coefficients.

    ``kind`` is one of ``"Z"``, ``"Q"`` or ``"Zp"``; ``p`` is the modulus of a
    prime field. Elements are plain Python ints (``Z``, ``Zp``, reduced into
    ``range(p)``) or exact rationals (``Q``; ``gmpy2.mpq`` when available,
    otherwise :class:`fractions.Fraction`).
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"prime field needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only prime fields carry a modulus")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return _rational(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return _rational(1) if self.kind == "Q" else 1

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction or ``"p/q"`` string) into the ring."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "Q":
            if isinstance(x, Fraction):
                return _rational(x.numerator, x.denominator)
            return _rational(x)
        if isinstance(x, _rational) or isinstance(x, Fraction):
            if self.kind == "Z":
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x)
            return int(x.numerator * pow(int(x.denominator), -1, self.p)) % self.p
        if isinstance(x, bool):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        try:
            x = operator.index(x)
        except TypeError:
            raise TypeError(f"cannot coerce {x!r} into {self}") from None
        return x % self.p if self.kind == "Zp" else x

    def reduce(self, x):
        return x % self.p if self.kind == "Zp" else x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inverse(self, x):
        if self.kind == "Z":
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit in Z")
            return x
        if self.kind == "Q":
            return 1 / x
        return pow(x, -1, self.p)

    def norm(self, x) -> int:
        """Euclidean size used for pivoting; 0 only for zero."""
        if self.kind == "Z":
            return abs(x)
        return 0 if x == 0 else 1

    def quo(self, a, b):
        """Euclidean quotient: ``a - quo(a, b) * b`` has smaller norm than ``b``."""
        if self.kind == "Z":
            q = a // b
            # round to nearest so remainders stay small in absolute value
            r = a - q * b
            if 2 * abs(r) > abs(b):
                q += 1 if (r > 0) == (b > 0) else -1
            return q
        if self.kind == "Q":
            return a / b
        return (a * pow(b, -1, self.p)) % self.p

    def divides(self, b, a) -> bool:
        """True when ``b`` divides ``a``."""
        if b == 0:
            return a == 0
        if self.kind == "Z":
            return a % b == 0
        return True

    def normalize_unit(self, x):
        """Unit ``u`` such that ``u * x`` is the canonical associate of ``x``."""
        if x == 0:
            return self.one
        if self.kind == "Z":
            return -1 if x < 0 else 1
        return self.inverse(x)

    def to_json(self):
        if self.kind == "Zp":
            return {"Zp": self.p}
        return self.kind

    @classmethod
    def from_json(cls, spec) -> "Ring":
        if spec in ("Z", "Q"):
            return cls(spec)
        if isinstance(spec, dict) and set(spec) == {"Zp"}:
            return cls("Zp", int(spec["Zp"]))
        raise ValueError(f"bad ring spec {spec!r}")

    def __str__(self):
        return f"Z/{self.p}" if self.kind == "Zp" else self.kind


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Zp", p)
