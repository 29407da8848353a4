"""Exact Gauss-Jordan elimination over the rationals."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from utils.exceptions import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearSystem:
    unknowns: Tuple[str, ...]
    rows: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        if len(set(self.unknowns)) != len(self.unknowns):
            raise PreconditionError("Unknown identifiers must be unique", details={"unknowns": list(self.unknowns)})
        for i, (coefficients, _) in enumerate(self.rows):
            if len(coefficients) != len(self.unknowns):
                raise PreconditionError(
                    "Row width does not match the number of unknowns",
                    details={"row": i, "width": len(coefficients), "unknowns": len(self.unknowns)}
                )

    @classmethod
    def from_equations(
        cls,
        unknowns: Sequence[str],
        equations: Iterable[Tuple[Mapping[str, Union[int, Fraction]], Union[int, Fraction]]],
    ) -> "LinearSystem":
        """Build from sparse rows ``({unknown: coefficient}, rhs)``."""
        position = {name: i for i, name in enumerate(unknowns)}
        rows = []
        for coefficients, rhs in equations:
            row = [Fraction(0)] * len(unknowns)
            for name, value in coefficients.items():
                if name not in position:
                    raise PreconditionError(f"Equation uses undeclared unknown {name}", details={"unknown": name})
                row[position[name]] += Fraction(value)
            rows.append((tuple(row), Fraction(rhs)))
        return cls(tuple(unknowns), tuple(rows))


@dataclass(frozen=True)
class Unique:
    values: Dict[str, Fraction]


@dataclass(frozen=True)
class Underdetermined:
    rank: int
    free: Tuple[str, ...]
    particular: Dict[str, Fraction]
    directions: Tuple[Dict[str, Fraction], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class Inconsistent:
    rank: int
    augmented_rank: int


Solution = Union[Unique, Underdetermined, Inconsistent]


def _as_matrix(rows: Sequence[Sequence[Union[int, Fraction]]], width: int) -> np.ndarray:
    matrix = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j in range(width):
            matrix[i, j] = Fraction(row[j])
    return matrix


def row_reduce(matrix: np.ndarray, columns: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form using pivots among the first ``columns`` columns.

    Args:
        matrix: object array of Fractions; not modified
        columns: number of leading columns eligible as pivots

    Returns:
        (reduced copy, list of pivot columns)
    """
    X = matrix.copy()
    pivots: List[int] = []
    row = 0
    for col in range(columns):
        if row >= X.shape[0]:
            break
        nonzero = [r for r in range(row, X.shape[0]) if X[r, col] != 0]
        if not nonzero:
            continue
        r = nonzero[0]
        if r != row:
            X[[row, r]] = X[[r, row]]
        X[row, :] = X[row, :] / X[row, col]
        for other in range(X.shape[0]):
            if other != row and X[other, col] != 0:
                X[other, :] = X[other, :] - X[other, col] * X[row, :]
        pivots.append(col)
        row += 1
    return X, pivots


def solve_exact(system: LinearSystem) -> Solution:
    n = len(system.unknowns)
    augmented = _as_matrix([list(c) + [rhs] for c, rhs in system.rows], n + 1)
    logger.debug("solving %d equations in %d unknowns", augmented.shape[0], n)
    reduced, pivots = row_reduce(augmented, n)
    rank = len(pivots)
    for r in range(rank, reduced.shape[0]):
        if reduced[r, n] != 0:
            return Inconsistent(rank=rank, augmented_rank=rank + 1)
    particular = {name: Fraction(0) for name in system.unknowns}
    for r, col in enumerate(pivots):
        particular[system.unknowns[col]] = reduced[r, n]
    if rank == n:
        return Unique(values=particular)
    free_cols = [j for j in range(n) if j not in pivots]
    directions = []
    for f in free_cols:
        direction = {name: Fraction(0) for name in system.unknowns}
        direction[system.unknowns[f]] = Fraction(1)
        for r, col in enumerate(pivots):
            direction[system.unknowns[col]] = -reduced[r, f]
        directions.append(direction)
    return Underdetermined(
        rank=rank,
        free=tuple(system.unknowns[j] for j in free_cols),
        particular=particular,
        directions=tuple(directions),
    )


def nullspace(rows: Sequence[Sequence[Union[int, Fraction]]], width: int) -> List[List[Fraction]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(width)] for j in range(width)]
    reduced, pivots = row_reduce(_as_matrix(rows, width), width)
    basis = []
    for f in (j for j in range(width) if j not in pivots):
        vector = [Fraction(0)] * width
        vector[f] = Fraction(1)
        for r, col in enumerate(pivots):
            vector[col] = -reduced[r, f]
        basis.append(vector)
    return basis


def rank(rows: Sequence[Sequence[Union[int, Fraction]]], width: int) -> int:
    if not rows:
        return 0
    return len(row_reduce(_as_matrix(rows, width), width)[1])
