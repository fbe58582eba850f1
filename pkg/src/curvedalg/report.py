"""Validation reports returned by every axiom checker."""

import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence

logger = logging.getLogger(__name__)


class ValidationReport:
    """Result object containing axiom validation details.

    Attributes:
        is_valid (bool): Whether every checked equation held.
        errors (List[str]): Human readable failure messages.
        warnings (List[str]): Non-fatal notes (vacuous checks, truncated windows).
        checked (List[str]): Names of the equations checked, in order.
        violated_eq (Optional[str]): Name of the first violated equation.
        witness (Optional[List[Any]]): Basis witness of the first violation, usually
            ``[row_index, column_index]`` or a decoded word.
        counts (Dict[str, int]): Named counters kept alongside the checks, summed by merge.
    """

    def __init__(self, subject: str = ""):
        self.subject = subject
        self.is_valid: bool = True
        self.errors: List[str] = []
        self.warnings: List[str] = []
        self.checked: List[str] = []
        self.violated_eq: Optional[str] = None
        self.witness: Optional[List[Any]] = None
        self.counts: Dict[str, int] = {}

    def add_error(self, message: str, equation: Optional[str] = None, witness: Optional[Sequence[Any]] = None):
        """Add an error message and mark validation as failed."""
        self.errors.append(message)
        self.is_valid = False
        if self.violated_eq is None and equation is not None:
            self.violated_eq = equation
            self.witness = list(witness) if witness is not None else None

    def add_warning(self, message: str):
        """Add a warning message."""
        self.warnings.append(message)

    def check(self, equation: str, lhs, rhs, rows: Optional[Iterable[int]] = None) -> bool:
        """Compare two graded maps row by row and record the outcome.

        Args:
            equation: Name under which the comparison is reported.
            lhs: Left-hand side map.
            rhs: Right-hand side map.
            rows: Domain rows to compare; all rows when omitted.

        Returns:
            True when both sides agree on every requested row.
        """
        from .gmod import maps_equal

        self.checked.append(equation)
        diff = maps_equal(lhs, rhs, rows)
        if diff is None:
            return True
        row, col = diff
        self.add_error(f"{equation}: sides differ at row {row}, column {col}", equation, [row, col])
        return False

    def require(self, equation: str, ok: bool, witness: Optional[Sequence[Any]] = None, detail: str = "") -> bool:
        """Record a boolean condition under an equation name."""
        self.checked.append(equation)
        if not ok:
            self.add_error(f"{equation}: {detail or 'does not hold'}", equation, witness)
        return ok

    def tally(self, name: str, n: int = 1):
        """Add n to the counter ``name``."""
        self.counts[name] = self.counts.get(name, 0) + n

    def merge(self, other: "ValidationReport", prefix: str = "") -> "ValidationReport":
        """Fold another report into this one, prefixing its equation names and summing its counters."""
        self.checked.extend(f"{prefix}{name}" for name in other.checked)
        for name, n in other.counts.items():
            self.tally(name, n)
        self.warnings.extend(other.warnings)
        for message in other.errors:
            self.errors.append(f"{prefix}{message}")
        if not other.is_valid:
            self.is_valid = False
            if self.violated_eq is None:
                self.violated_eq = f"{prefix}{other.violated_eq}" if other.violated_eq else None
                self.witness = other.witness
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Return the structured JSON form ``{pass, violated_eq, witness_word, errors, checked}``."""
        return {
            "pass": self.is_valid,
            "violated_eq": self.violated_eq,
            "witness_word": self.witness,
            "errors": list(self.errors),
            "checked": list(self.checked),
        }

    def log_outcome(self) -> "ValidationReport":
        if self.is_valid:
            logger.info(f"Validation passed for {self.subject or 'structure'} ({len(self.checked)} checks)")
        else:
            logger.warning(
                f"Validation failed for {self.subject or 'structure'} with {len(self.errors)} errors, "
                f"first: {self.violated_eq}"
            )
        return self

    def __str__(self) -> str:
        """Return a formatted string representation of the validation result."""
        lines = [f"Validation: {'PASSED' if self.is_valid else 'FAILED'}"]

        if self.errors:
            lines.append(f"\nErrors ({len(self.errors)}):")
            for error in self.errors:
                lines.append(f"  - {error}")

        if self.warnings:
            lines.append(f"\nWarnings ({len(self.warnings)}):")
            for warning in self.warnings:
                lines.append(f"  - {warning}")

        return "\n".join(lines)
