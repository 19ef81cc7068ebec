import itertools
import random
from fractions import Fraction

import pytest

from src.exceptions import DimensionError, LatticeError
from src.models.lattice import F2AffineSystem, IntMatrix, LatticeIndexKind
from src.services.exact_math import (
    coordinates,
    determinant,
    f2_solution_count,
    integer_coordinates,
    lattice_index,
    lattice_intersection,
    orthogonal_lattice,
    rank,
    saturation,
    solve_rational,
)


def permutation_determinant(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = (-1) ** inversions
        for i in range(n):
            term *= m[i][perm[i]]
        total += term
    return total


def spans_same_lattice(basis, expected):
    return lattice_index(basis, expected) == 1 and lattice_index(expected, basis) == 1


def test_determinant_examples():
    assert determinant([[1, 0], [0, 1]]) == 1
    assert determinant([[1, 0, 0], [0, 1, 0], [1, 1, 2]]) == 2
    assert determinant(IntMatrix(entries=((2, 0), (0, 2)))) == 4
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([]) == 1


def test_determinant_rejects_non_square():
    with pytest.raises(DimensionError):
        determinant([[1, 2, 3], [4, 5, 6]])


def test_determinant_matches_permutation_expansion():
    rng = random.Random(11)
    for _ in range(40):
        m = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        assert determinant(m) == permutation_determinant(m)


def test_rank_and_solve():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0]]) == 0
    assert solve_rational([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert solve_rational([[1, 1], [1, 1]], [1, 2]) is None
    assert solve_rational([[2]], [1]) == [Fraction(1, 2)]


def test_coordinates_in_basis():
    assert coordinates([(1, 1), (0, 1)], (2, 5)) == [2, 3]
    assert coordinates([(1, 0, 0)], (0, 1, 0)) is None
    assert integer_coordinates([(1, 1), (0, 2)], (1, 3)) == (1, 1)
    with pytest.raises(LatticeError):
        integer_coordinates([(2, 0), (0, 1)], (1, 0))


def test_lattice_index_examples():
    identity = [(1, 0), (0, 1)]
    assert lattice_index(identity, [(2, 0), (0, 2)]) == 4
    assert lattice_index(identity, [(1, 1), (1, -1)]) == 2
    assert lattice_index(identity, [(1, 0)]) == LatticeIndexKind.INFINITE


def test_lattice_index_rejects_outside_generators():
    with pytest.raises(LatticeError):
        lattice_index([(2, 0), (0, 2)], [(1, 0), (0, 2)])


def test_lattice_index_ignores_generating_set_and_ambient_basis():
    identity = [(1, 0), (0, 1)]
    assert lattice_index(identity, [(1, 1), (1, -1), (2, 0)]) == 2
    assert lattice_index([(1, 1), (0, 1)], [(1, 1), (1, -1)]) == 2


def test_saturation_examples():
    assert spans_same_lattice(saturation([(2, 0)]), [(1, 0)])
    assert spans_same_lattice(saturation([(1, 0), (0, 1)]), [(1, 0), (0, 1)])
    assert spans_same_lattice(saturation([(2, 2), (0, 4)]), [(1, 1), (0, 1)])
    assert saturation([(0, 0)], 2) == []


def test_saturation_contains_input_with_finite_index():
    sat = saturation([(2, 2, 0), (0, 3, 3)])
    assert len(sat) == 2
    index = lattice_index(sat, [(2, 2, 0), (0, 3, 3)])
    assert index == 6


def test_orthogonal_lattice_examples():
    assert spans_same_lattice(orthogonal_lattice([(1, 0)], 2), [(0, 1)])
    assert spans_same_lattice(orthogonal_lattice([(1, 1)], 2), [(1, -1)])
    assert orthogonal_lattice([(1, 0), (0, 1)], 2) == []


def test_orthogonal_lattice_is_orthogonal_and_saturated():
    gens = [(1, 2, 3, 4), (0, 2, 0, 6)]
    perp = orthogonal_lattice(gens, 4)
    assert len(perp) == 2
    for m in perp:
        for g in gens:
            assert sum(a * b for a, b in zip(m, g)) == 0
    assert spans_same_lattice(saturation(perp, 4), perp)


def test_index_equality_for_saturated_pairs():
    rng = random.Random(5)
    checked = 0
    while checked < 100:
        n = rng.randint(2, 5)
        r1 = rng.randint(1, n - 1)
        r2 = rng.randint(n - r1, n)
        g1 = saturation([[rng.randint(-3, 3) for _ in range(n)] for _ in range(r1)], n)
        g2 = saturation([[rng.randint(-3, 3) for _ in range(n)] for _ in range(r2)], n)
        if not g1 or not g2 or rank(list(g1) + list(g2)) != n:
            continue
        identity = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        left = lattice_index(identity, list(g1) + list(g2))
        meet = lattice_intersection(g1, g2, n)
        right = lattice_index(
            orthogonal_lattice(meet, n),
            orthogonal_lattice(g1, n) + orthogonal_lattice(g2, n),
        )
        assert left == right
        checked += 1


def test_f2_solution_count_examples():
    assert f2_solution_count(F2AffineSystem(coefficients=((1, 0, 0),), rhs=(0,), n=3)) == 4
    assert (
        f2_solution_count(F2AffineSystem(coefficients=((1, 0), (1, 0)), rhs=(0, 1), n=2))
        == 0
    )
    assert (
        f2_solution_count(
            F2AffineSystem(coefficients=((1, 1, 0), (0, 1, 1)), rhs=(1, 0), n=3)
        )
        == 2
    )
    assert f2_solution_count(F2AffineSystem(coefficients=(), rhs=(), n=3)) == 8


def test_f2_solution_count_matches_enumeration():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 5)
        rows = tuple(
            tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(rng.randint(1, 4))
        )
        rhs = tuple(rng.randint(0, 1) for _ in rows)
        brute = sum(
            all(sum(a * e for a, e in zip(row, eps)) % 2 == b for row, b in zip(rows, rhs))
            for eps in itertools.product((0, 1), repeat=n)
        )
        assert f2_solution_count(F2AffineSystem(coefficients=rows, rhs=rhs, n=n)) == brute


def test_solve_sets_free_variables_to_zero():
    assert solve_rational([[1, 1]], [2]) == [2, 0]
    assert solve_rational([[0, 1, 1], [0, 0, 1]], [3, 1]) == [0, 2, 1]
    assert solve_rational([[Fraction(1, 2), 1]], [Fraction(3, 2)]) == [3, 0]


def test_rank_over_the_rationals():
    assert rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2
    assert rank([]) == 0


def test_determinant_is_multiplicative_on_large_entries():
    rng = random.Random(29)
    for _ in range(5):
        a = [[rng.randint(-10**12, 10**12) for _ in range(6)] for _ in range(6)]
        b = [[rng.randint(-10**12, 10**12) for _ in range(6)] for _ in range(6)]
        product = [
            [sum(a[i][k] * b[k][j] for k in range(6)) for j in range(6)] for i in range(6)
        ]
        assert determinant(product) == determinant(a) * determinant(b)
        assert isinstance(determinant(a), int)
