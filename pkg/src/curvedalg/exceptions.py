"""Exception hierarchy for curvedalg.

All errors raised by the library derive from :class:`CurvedAlgError`. Axiom
failures are not exceptions: validators return a
:class:`~curvedalg.report.ValidationReport` instead.
"""

from typing import Any, Dict, Optional, Sequence, Tuple


class CurvedAlgError(Exception):
    """Base class for all curvedalg errors."""

    def __init__(self, msg: str = ""):
        self.msg = msg
        super().__init__(msg)

    def __str__(self) -> str:
        return self.msg


class DescriptorMismatch(CurvedAlgError):
    """Ring elements over different ring descriptors were combined."""


class RingMismatch(CurvedAlgError):
    """Modules or maps over different base rings were combined."""


class ShapeMismatch(CurvedAlgError):
    """Domain, codomain or degree of a map does not fit the operation."""


class PositionOutOfRange(CurvedAlgError):
    """Operator positions are not strictly increasing inside the word."""


class CapOverflow(CurvedAlgError):
    """A computation produced words longer than the truncation cap.

    Attributes:
        terms (Dict[Tuple[int, int], int]): Overflowing (input word length, output word length) pairs
            mapped to the number of dropped nonzero terms.
    """

    def __init__(self, msg: str, terms: Optional[Dict[Tuple[int, int], int]] = None):
        super().__init__(msg)
        self.terms = dict(terms or {})


class NonzeroArityZero(CurvedAlgError):
    """A coalgebra hom was requested from components with f_0 != 0."""


class NotConilpotentUpToCap(CurvedAlgError):
    """Iterated reduced coproducts did not vanish before the search cap."""

    def __init__(self, msg: str, cap: int):
        super().__init__(msg)
        self.cap = cap


class NotConilpotent(CurvedAlgError):
    """The adjunction needs a conilpotent coalgebra but none was certified."""


class EmptySolutionSpace(CurvedAlgError):
    """A generator's linear system has no usable solution."""


class CapTooSmall(CurvedAlgError):
    """The requested truncation cap is below what the construction needs."""

    def __init__(self, msg: str, required: int):
        super().__init__(msg)
        self.required = required


class TwistingCochainViolation(CurvedAlgError):
    """A map claimed to be a twisting cochain violates one of its equations."""

    def __init__(self, msg: str, equation: str, witness: Optional[Sequence[Any]] = None):
        super().__init__(msg)
        self.equation = equation
        self.witness = witness


class InvariantViolation(CurvedAlgError):
    """An identity that holds by construction failed."""


class ParseError(CurvedAlgError):
    """Serialized input does not describe a known structure."""
