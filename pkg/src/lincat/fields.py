"""Exact scalar arithmetic: the rationals, prime fields, and dual numbers.

Scalars are plain Python values (``Fraction`` for Q, ``int`` residues in
[0, p) for F_p, ``(a, b)`` pairs meaning a + b*eps for dual numbers); all
arithmetic goes through a ring object so that category validation, functor
checks and tensor algebra can run over any of the three without caring
which one it is.  Only the two field rings support general linear solving.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .errors import BadParams, ParseError

Scalar = Any


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Base field: kind "Q" (rationals) or "Fp" (prime field of order p)."""

    kind: str
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "Q":
            if self.p is not None:
                raise BadParams("rationals take no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise BadParams(f"modulus must be prime, got {self.p!r}")
            if self.p >= 1 << 31:
                raise BadParams("modulus too large for the int64 kernels")
        else:
            raise BadParams(f"unknown field kind {self.kind!r}")

    # ring interface -------------------------------------------------------
    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.kind == "Q" else pow(a, self.p - 2, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    def eq(self, a: Scalar, b: Scalar) -> bool:
        return a == b

    def from_int(self, n: int) -> Scalar:
        return Fraction(n) if self.kind == "Q" else n % self.p

    # parsing / formatting -------------------------------------------------
    def parse(self, text: Any) -> Scalar:
        """Accept an int, or a string "n" / "a/b" (fractions only over Q)."""
        if isinstance(text, bool):
            raise ParseError(f"not a scalar: {text!r}")
        if isinstance(text, int):
            return self.from_int(text)
        if not isinstance(text, str):
            raise ParseError(f"not a scalar: {text!r}")
        try:
            if self.kind == "Q":
                return Fraction(text.strip())
            body = text.strip()
            if "/" in body:
                num, den = body.split("/", 1)
                return self.div(self.from_int(int(num)), self.from_int(int(den)))
            return self.from_int(int(body))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r}: {exc}") from None

    def fmt(self, a: Scalar) -> str:
        return str(a)

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"kind": "Q"}
        return {"kind": "Fp", "p": self.p}

    @staticmethod
    def from_json(doc: Any) -> "FieldSpec":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ParseError(f"bad field spec: {doc!r}")
        if doc["kind"] == "Q":
            return FieldSpec("Q")
        if doc["kind"] == "Fp":
            if "p" not in doc or not isinstance(doc["p"], int):
                raise ParseError("field of kind Fp needs an integer p")
            return FieldSpec("Fp", doc["p"])
        raise ParseError(f"unknown field kind {doc['kind']!r}")


QQ = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


@dataclass(frozen=True)
class DualNumbers:
    """The ring k[eps]/(eps^2) over a base field k.

    Elements are pairs (a, b) standing for a + b*eps.  This is a local ring,
    not a field: (a, b) is invertible iff a != 0, with inverse
    (a^-1, -a^-1 b a^-1).
    """

    base: FieldSpec

    @property
    def zero(self) -> Scalar:
        return (self.base.zero, self.base.zero)

    @property
    def one(self) -> Scalar:
        return (self.base.one, self.base.zero)

    def eps(self) -> Scalar:
        return (self.base.zero, self.base.one)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        k = self.base
        return (k.add(a[0], b[0]), k.add(a[1], b[1]))

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        k = self.base
        return (k.sub(a[0], b[0]), k.sub(a[1], b[1]))

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        k = self.base
        return (k.mul(a[0], b[0]), k.add(k.mul(a[0], b[1]), k.mul(a[1], b[0])))

    def neg(self, a: Scalar) -> Scalar:
        k = self.base
        return (k.neg(a[0]), k.neg(a[1]))

    def inv(self, a: Scalar) -> Scalar:
        k = self.base
        u = k.inv(a[0])
        return (u, k.neg(k.mul(u, k.mul(a[1], u))))

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def eq(self, a: Scalar, b: Scalar) -> bool:
        return self.base.eq(a[0], b[0]) and self.base.eq(a[1], b[1])

    def from_int(self, n: int) -> Scalar:
        return (self.base.from_int(n), self.base.zero)

    def lift(self, a: Scalar) -> Scalar:
        """Embed a base-field scalar as a + 0*eps."""
        return (a, self.base.zero)

    def reduce(self, a: Scalar) -> Scalar:
        """The image at eps = 0."""
        return a[0]

    def eps_part(self, a: Scalar) -> Scalar:
        return a[1]

    def parse(self, text: Any) -> Scalar:
        if isinstance(text, (list, tuple)) and len(text) == 2:
            return (self.base.parse(text[0]), self.base.parse(text[1]))
        return self.lift(self.base.parse(text))

    def fmt(self, a: Scalar) -> str:
        return f"{self.base.fmt(a[0])}+{self.base.fmt(a[1])}e"


Ring = Any  # FieldSpec or DualNumbers; everything with the op interface above
