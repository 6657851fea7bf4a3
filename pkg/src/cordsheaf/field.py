"""Exact scalar arithmetic over prime fields F_p and over the rationals.

Every other module computes with these scalars, so canonical forms matter:
prime-field elements are stored as residues in ``0..p-1`` and rationals as
``fractions.Fraction`` (always in lowest terms with positive denominator).
Equal scalars therefore compare equal bit-for-bit, which the subspace and
moduli code relies on for deduplication.

The wire format is the decimal residue for prime fields and ``num/den``
for rationals; ``FieldSpec.from_str`` parses it back.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Union


class MixedFieldError(ValueError):
    """Raised when an operation combines scalars from different fields."""


class NotEnumerableError(ValueError):
    """Raised when asked to enumerate an infinite field."""


def is_prime(p: int) -> bool:
    """Trial-division primality check; fields here are tiny by design."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FieldSpec:
    """A ground field: either F_p for a prime p, or the rationals."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "prime":
            if p is None or not is_prime(p):
                raise ValueError(f"characteristic must be prime, got {p!r}")
            self.p = p
        elif kind == "rationals":
            if p is not None:
                raise ValueError("rationals take no characteristic")
            self.p = None
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.p))

    def __repr__(self) -> str:
        return f"F{self.p}" if self.is_prime_field else "QQ"

    # -- element constructors -------------------------------------------------

    def scalar(self, value: Union[int, Fraction, "Scalar"]) -> "Scalar":
        """Coerce an int/Fraction (or Scalar of this field) to a Scalar."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise MixedFieldError(f"scalar of {value.field} used in {self}")
            return value
        if self.is_prime_field:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                value = value.numerator * pow(value.denominator, -1, self.p)
            return Scalar(self, value % self.p)
        return Scalar(self, Fraction(value))

    def zero(self) -> "Scalar":
        return self.scalar(0)

    def one(self) -> "Scalar":
        return self.scalar(1)

    def from_str(self, text: str) -> "Scalar":
        """Parse the wire format: decimal residue, or num/den for rationals."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.scalar(Fraction(int(num), int(den)))
        return self.scalar(int(text))

    def elements(self, nonzero: bool = False) -> Iterator["Scalar"]:
        """All field elements in residue order (prime fields only)."""
        if not self.is_prime_field:
            raise NotEnumerableError("the rationals are not enumerable")
        for v in range(1 if nonzero else 0, self.p):
            yield Scalar(self, v)

    def to_json(self) -> dict:
        if self.is_prime_field:
            return {"kind": "prime", "p": self.p}
        return {"kind": "rationals"}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        return cls(data["kind"], data.get("p"))


def enumerate_scalars(spec: FieldSpec, nonzero: bool = False) -> list["Scalar"]:
    """Materialized version of FieldSpec.elements, in residue order."""
    return list(spec.elements(nonzero=nonzero))


class Scalar:
    """An element of a FieldSpec, stored in canonical form.

    Immutable; arithmetic returns new scalars and raises MixedFieldError on
    operands from different fields.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        # Callers outside this module should go through FieldSpec.scalar,
        # which canonicalizes; here we trust value is already reduced.
        self.field = field
        self.value = value

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.field != self.field:
            raise MixedFieldError(f"cannot mix {self.field} and {other.field}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value + other.value
        if self.field.is_prime_field:
            v %= self.field.p
        return Scalar(self.field, v)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value - other.value
        if self.field.is_prime_field:
            v %= self.field.p
        return Scalar(self.field, v)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value * other.value
        if self.field.is_prime_field:
            v %= self.field.p
        return Scalar(self.field, v)

    def __neg__(self) -> "Scalar":
        v = -self.value
        if self.field.is_prime_field:
            v %= self.field.p
        return Scalar(self.field, v)

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.is_prime_field:
            return Scalar(self.field, pow(self.value, -1, self.field.p))
        return Scalar(self.field, 1 / self.value)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return self * other.inv()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Scalar)
            and self.field == other.field
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        # Wire format: residue, or num/den with the /1 suppressed.
        if self.field.is_prime_field:
            return str(self.value)
        return str(self.value)
