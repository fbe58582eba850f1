"""Graded strongly commutative base rings.

Every shipped ring has at most one monomial per degree: F_p and Z in degree 0,
F_p[e]/(e^2) with deg e = 1, and F_p[u]/(u^top) with deg u = 2. A homogeneous
element is therefore an integer coefficient together with its degree, which is
how matrix entries are stored throughout the package.
"""

import logging
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .exceptions import DescriptorMismatch
from .report import ValidationReport

logger = logging.getLogger(__name__)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class RingKind(str, Enum):
    PRIME_FIELD = "prime_field"
    INTEGERS = "integers"
    ODD_EXTERIOR = "odd_exterior"
    EVEN_TRUNCATED = "even_truncated"


class RingDescriptor(BaseModel):
    """
    Describes one of the shipped graded base rings.

    Attributes:
        kind (RingKind): Which ring family.
        p (Optional[int]): Characteristic, required and prime for every kind except integers.
        top (Optional[int]): Truncation exponent of u for even_truncated, at least 2.

    Example:
        ring = RingDescriptor(kind='odd_exterior', p=7)
        ring = RingDescriptor.parse('even_truncated:7:3')
    """

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    kind: RingKind
    p: Optional[int] = None
    top: Optional[int] = None

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: Optional[int]) -> Optional[int]:
        """Ensure the characteristic is prime."""
        if v is not None and not _is_prime(v):
            raise ValueError(f"p must be prime, got {v}")
        return v

    @model_validator(mode="after")
    def validate_kind_fields(self) -> "RingDescriptor":
        """Ensure p and top are present exactly where the kind needs them."""
        if self.kind == RingKind.INTEGERS:
            if self.p is not None or self.top is not None:
                raise ValueError("integers takes neither p nor top")
            return self
        if self.p is None:
            raise ValueError(f"{self.kind.value} requires a prime p")
        if self.kind == RingKind.EVEN_TRUNCATED:
            if self.top is None or self.top < 2:
                raise ValueError("even_truncated requires top >= 2")
        elif self.top is not None:
            raise ValueError(f"{self.kind.value} does not take top")
        return self

    @classmethod
    def parse(cls, text: str) -> "RingDescriptor":
        """Parse the command-line form ``kind[:p[:top]]``, e.g. ``prime_field:7``."""
        parts = text.strip().split(":")
        kind = RingKind(parts[0])
        values = [int(x) for x in parts[1:]]
        p = values[0] if len(values) > 0 else None
        top = values[1] if len(values) > 1 else None
        return cls(kind=kind, p=p, top=top)

    def label(self) -> str:
        return ":".join([self.kind.value] + [str(x) for x in (self.p, self.top) if x is not None])

    @property
    def modulus(self) -> Optional[int]:
        return self.p

    def degrees(self) -> List[int]:
        """Degrees carrying a (single) monomial."""
        if self.kind == RingKind.ODD_EXTERIOR:
            return [0, 1]
        if self.kind == RingKind.EVEN_TRUNCATED:
            return [2 * k for k in range(self.top)]
        return [0]

    def realizable(self, degree: int) -> bool:
        if self.kind == RingKind.ODD_EXTERIOR:
            return degree in (0, 1)
        if self.kind == RingKind.EVEN_TRUNCATED:
            return degree >= 0 and degree % 2 == 0 and degree // 2 < self.top
        return degree == 0

    def reduce(self, c: int) -> int:
        return c % self.p if self.p is not None else c

    def mul(self, c1: int, d1: int, c2: int, d2: int) -> int:
        """Coefficient of the product of the monomials ``c1 x^d1`` and ``c2 x^d2``."""
        if not self.realizable(d1 + d2):
            return 0
        return self.reduce(c1 * c2)

    def inverse(self, c: int) -> Optional[int]:
        """Inverse of a degree-0 coefficient, None when it is not a unit."""
        if self.p is None:
            return c if c in (1, -1) else None
        c = c % self.p
        return pow(c, -1, self.p) if c else None


class RingElement(BaseModel):
    """
    A finitely supported element of a graded base ring.

    Attributes:
        descriptor (RingDescriptor): The ring the element lives in.
        terms (Dict[int, int]): Degree mapped to the coefficient of the monomial in that degree.

    Example:
        eps = RingElement(descriptor=RingDescriptor.parse('odd_exterior:7'), terms={1: 1})
    """

    model_config = ConfigDict(frozen=True)

    descriptor: RingDescriptor
    terms: Dict[int, int] = {}

    @model_validator(mode="before")
    @classmethod
    def normalize_terms(cls, data):
        """Reduce coefficients and prune zero terms."""
        if not isinstance(data, dict):
            return data
        descriptor = data.get("descriptor")
        if isinstance(descriptor, dict):
            descriptor = RingDescriptor.model_validate(descriptor)
        raw = data.get("terms") or {}
        pairs = raw.items() if isinstance(raw, dict) else raw
        summed: Dict[int, int] = {}
        for degree, coef in pairs:
            degree = int(degree)
            summed[degree] = summed.get(degree, 0) + int(coef)
        terms = {}
        for degree, coef in summed.items():
            coef = descriptor.reduce(coef) if descriptor is not None else coef
            if coef == 0:
                continue
            if descriptor is not None and not descriptor.realizable(degree):
                raise ValueError(f"degree {degree} is not realizable in {descriptor.label()}")
            terms[degree] = coef
        return {**data, "descriptor": descriptor, "terms": terms}

    @classmethod
    def monomial(cls, descriptor: RingDescriptor, degree: int, coef: int = 1) -> "RingElement":
        return cls(descriptor=descriptor, terms={degree: coef})

    @classmethod
    def zero(cls, descriptor: RingDescriptor) -> "RingElement":
        return cls(descriptor=descriptor, terms={})

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len(self.terms) <= 1

    def degree(self) -> Optional[int]:
        """Degree of a nonzero homogeneous element, None otherwise."""
        return next(iter(self.terms)) if len(self.terms) == 1 else None

    def to_pairs(self) -> List[List[int]]:
        return [[d, c] for d, c in sorted(self.terms.items())]


def _same_ring(a: RingElement, b: RingElement) -> RingDescriptor:
    if a.descriptor != b.descriptor:
        raise DescriptorMismatch(f"cannot combine {a.descriptor.label()} with {b.descriptor.label()}")
    return a.descriptor


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    d = _same_ring(a, b)
    terms = dict(a.terms)
    for degree, coef in b.terms.items():
        terms[degree] = terms.get(degree, 0) + coef
    return RingElement(descriptor=d, terms=terms)


def ring_neg(a: RingElement) -> RingElement:
    return RingElement(descriptor=a.descriptor, terms={k: -c for k, c in a.terms.items()})


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    """Graded product. Odd monomials square to zero, so no commutation sign survives."""
    d = _same_ring(a, b)
    terms: Dict[int, int] = {}
    for d1, c1 in a.terms.items():
        for d2, c2 in b.terms.items():
            c = d.mul(c1, d1, c2, d2)
            if c:
                terms[d1 + d2] = terms.get(d1 + d2, 0) + c
    return RingElement(descriptor=d, terms=terms)


def check_strong_commutativity(descriptor: RingDescriptor) -> ValidationReport:
    """Check ba = (-1)^{|a||b|} ab and c^2 = 0 for odd c over all monomial pairs.

    Args:
        descriptor: The ring to check.

    Returns:
        ValidationReport: Passing, or carrying the first counterexample pair of degrees.
    """
    report = ValidationReport(subject=f"ring {descriptor.label()}")
    monomials = [RingElement.monomial(descriptor, d) for d in descriptor.degrees()]
    for a in monomials:
        for b in monomials:
            da, db = a.degree(), b.degree()
            ab = ring_mul(a, b)
            ba = ring_mul(b, a)
            expected = ab if (da * db) % 2 == 0 else ring_neg(ab)
            report.require("graded_commutativity", ba == expected, [da, db])
        if a.degree() % 2 == 1:
            report.require("odd_square_zero", ring_mul(a, a).is_zero(), [a.degree()])
    return report.log_outcome()
