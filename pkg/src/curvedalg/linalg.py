"""Exact dense linear algebra over F_p and Q.

Used by the instance generators to sample differentials and curvatures from the
solution spaces of the structure equations. Over the integers the systems are
solved over Q with :class:`fractions.Fraction` and the caller clears denominators.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exceptions import EmptySolutionSpace

logger = logging.getLogger(__name__)

Matrix = List[List[object]]


def _normalize(x, p: Optional[int]):
    return x % p if p is not None else Fraction(x)


def _inv(x, p: Optional[int]):
    return pow(x, -1, p) if p is not None else 1 / x


def rref(mat: Sequence[Sequence[int]], n_cols: int, p: Optional[int]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form.

    Args:
        mat: Equations as rows of length ``n_cols``.
        n_cols: Number of unknowns (columns).
        p: Field characteristic, or None for Q.

    Returns:
        The nonzero reduced rows and the list of pivot columns.
    """
    rows = [[_normalize(x, p) for x in row] for row in mat]
    pivots: List[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        factor = _inv(rows[r][col], p)
        rows[r] = [_normalize(x * factor, p) if p is not None else x * factor for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col] != 0:
                f = rows[k][col]
                if p is not None:
                    rows[k] = [(x - f * y) % p for x, y in zip(rows[k], rows[r])]
                else:
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(mat: Sequence[Sequence[int]], n_cols: int, p: Optional[int]) -> Matrix:
    """Basis of the solution space of ``mat . x = 0``, one vector per free column."""
    rows, pivots = rref(mat, n_cols, p)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    zero = 0 if p is not None else Fraction(0)
    for fc in free:
        vec = [zero] * n_cols
        vec[fc] = 1 if p is not None else Fraction(1)
        for row, pc in zip(rows, pivots):
            vec[pc] = (-row[fc]) % p if p is not None else -row[fc]
        basis.append(vec)
    logger.debug(f"nullspace: {n_cols} unknowns, rank {len(pivots)}, dimension {len(basis)}")
    return basis


def solve(mat: Sequence[Sequence[int]], rhs: Sequence[int], n_cols: int, p: Optional[int]) -> List[object]:
    """One particular solution of ``mat . x = rhs`` (free unknowns set to zero).

    Raises:
        EmptySolutionSpace: If the system is inconsistent.
    """
    augmented = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows, pivots = rref(augmented, n_cols + 1, p)
    if n_cols in pivots:
        raise EmptySolutionSpace("inconsistent linear system")
    zero = 0 if p is not None else Fraction(0)
    x = [zero] * n_cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[n_cols]
    return x


def clear_denominators(vec: Sequence[Fraction]) -> Tuple[List[int], int]:
    """Scale a rational vector to integers; returns the integer vector and the common denominator."""
    den = 1
    for x in vec:
        den = math.lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in vec], den
