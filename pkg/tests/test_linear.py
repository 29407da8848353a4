from fractions import Fraction

import numpy as np
import pytest
import sympy

from utils.exceptions import PreconditionError
from utils.linear import (
    Inconsistent,
    LinearSystem,
    Underdetermined,
    Unique,
    nullspace,
    rank,
    solve_exact,
)


def test_unique_solution():
    """Square nonsingular systems have one rational solution"""
    system = LinearSystem.from_equations(["x", "y"], [({"x": 1, "y": 1}, 3), ({"x": 3, "y": -1}, Fraction(1, 2))])
    solution = solve_exact(system)
    assert isinstance(solution, Unique)
    assert solution.values == {"x": Fraction(7, 8), "y": Fraction(17, 8)}


def test_underdetermined_reports_free_unknowns():
    """Missing equations leave named free unknowns and a direction basis"""
    system = LinearSystem.from_equations(["x", "y", "z"], [({"x": 1, "y": 1}, 2), ({"z": 2}, 4)])
    solution = solve_exact(system)
    assert isinstance(solution, Underdetermined)
    assert solution.rank == 2
    assert solution.free == ("y",)
    assert solution.particular == {"x": 2, "y": 0, "z": 2}
    assert solution.directions == ({"x": -1, "y": 1, "z": 0},)


def test_inconsistent_system():
    """Contradictory rows are detected rather than solved"""
    system = LinearSystem.from_equations(["x", "y"], [({"x": 1, "y": 1}, 1), ({"x": 2, "y": 2}, 3)])
    solution = solve_exact(system)
    assert isinstance(solution, Inconsistent)
    assert solution.rank == 1
    assert solution.augmented_rank == 2


def test_redundant_rows_are_harmless():
    """Repeated equations do not change a unique answer"""
    equations = [({"x": 1}, 5), ({"x": 2}, 10), ({"x": -1}, -5)]
    assert solve_exact(LinearSystem.from_equations(["x"], equations)) == Unique(values={"x": Fraction(5)})


def test_invalid_systems():
    """Undeclared unknowns and ragged rows are refused"""
    with pytest.raises(PreconditionError):
        LinearSystem.from_equations(["x"], [({"y": 1}, 0)])
    with pytest.raises(PreconditionError):
        LinearSystem(("x", "y"), (((Fraction(1),), Fraction(0)),))
    with pytest.raises(PreconditionError):
        LinearSystem(("x", "x"), ())


def test_rank_and_nullspace_against_sympy():
    """Exact rank and kernel agree with sympy on random integer matrices"""
    rng = np.random.default_rng(5)
    for _ in range(15):
        height, width = int(rng.integers(1, 5)), int(rng.integers(2, 6))
        rows = [[int(x) for x in rng.integers(-3, 4, size=width)] for _ in range(height)]
        if rng.random() < 0.5:
            rows.append([a + b for a, b in zip(rows[0], rows[-1])])
        expected = sympy.Matrix(rows).rank()
        assert rank(rows, width) == expected
        kernel = nullspace(rows, width)
        assert len(kernel) == width - expected
        for vector in kernel:
            for row in rows:
                assert sum(Fraction(a) * b for a, b in zip(row, vector)) == 0


def test_nullspace_without_rows():
    """No constraints: the kernel is the whole space"""
    assert nullspace([], 2) == [[1, 0], [0, 1]]
    assert rank([], 3) == 0
