import random
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pytest

from src.models.tropical import TropicalPolynomial, TropicalSystem
from src.services.cayley import is_nondegenerate_system
from src.services.polytope import convex_hull, dilate, find_primitive_lift, lattice_points
from src.services.tropical import build_polynomial, is_nondegenerate

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "systems"

SIMPLEX_2 = [(0, 0), (1, 0), (0, 1)]
SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
RECTANGLE = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
CUBE = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
SIMPLEX_3 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


def simplex_points(d: int, n: int = 2) -> List[Tuple[int, ...]]:
    """dΔ_n の格子点"""
    base = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return lattice_points(dilate(convex_hull([tuple([0] * n)] + base), d))


def system_of(*polynomials: TropicalPolynomial) -> TropicalSystem:
    return TropicalSystem(
        ambient_dim=polynomials[0].ambient_dim, polynomials=tuple(polynomials)
    )


def random_signs(rng: random.Random, count: int) -> List[int]:
    return [rng.choice((1, -1)) for _ in range(count)]


def random_nonsingular(
    points: Sequence[Sequence[int]],
    rng: random.Random,
    signs: Optional[Sequence[int]] = None,
    attempts: int = 200,
) -> TropicalPolynomial:
    """強凸な二次関数に整数ノイズを加えた持ち上げを、原始的になるまで引き直す"""
    for _ in range(attempts):
        lifts = [
            10 * (sum(x * x for x in p) + sum(p) ** 2) + rng.randint(-4, 4)
            for p in points
        ]
        f = build_polynomial(points, lifts, signs)
        if is_nondegenerate(f):
            return f
    raise AssertionError("no nonsingular lift found")


def random_nondegenerate_pair(
    first: Sequence[Sequence[int]],
    second: Sequence[Sequence[int]],
    rng: random.Random,
    real: bool = True,
    attempts: int = 200,
) -> TropicalSystem:
    """Cayley 細分が原始的になるまで二つの多項式の持ち上げを引き直す"""
    for _ in range(attempts):
        polys = [
            build_polynomial(
                pts,
                [rng.randint(-30, 30) for _ in pts],
                random_signs(rng, len(pts)) if real else None,
            )
            for pts in (first, second)
        ]
        system = system_of(*polys)
        if is_nondegenerate_system(system):
            return system
    raise AssertionError("no nondegenerate system found")


def primitive_polynomial(
    points: Sequence[Sequence[int]], rng: random.Random, seed: int = 0
) -> TropicalPolynomial:
    """原始的な三角形分割を与える持ち上げに乱数の符号をつけた多項式"""
    return build_polynomial(
        points, find_primitive_lift(points, seed=seed), random_signs(rng, len(points))
    )


def random_polygon(rng: random.Random, size: int, box: int = 4) -> List[Tuple[int, ...]]:
    """格子点をちょうど size 個もつ多角形の格子点"""
    for _ in range(1000):
        corners = {(rng.randint(0, box), rng.randint(0, box)) for _ in range(4)}
        hull = convex_hull(sorted(corners))
        if hull.dim == 2 and len(lattice_points(hull)) == size:
            return sorted(lattice_points(hull))
    raise AssertionError(f"no polygon with {size} lattice points found")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def line():
    return build_polynomial(SIMPLEX_2, [0, 0, 0], [1, 1, 1])


@pytest.fixture
def two_lines():
    return system_of(
        build_polynomial(SIMPLEX_2, [0, 0, 0], [1, 1, 1]),
        build_polynomial(SIMPLEX_2, [0, 1, 2], [1, 1, 1]),
    )


@pytest.fixture
def identical_lines():
    return system_of(
        build_polynomial(SIMPLEX_2, [0, 0, 0], [1, 1, 1]),
        build_polynomial(SIMPLEX_2, [0, 0, 0], [1, 1, 1]),
    )


@pytest.fixture
def line_conic():
    return system_of(
        build_polynomial(SIMPLEX_2, [0, 0, 1], [1, 1, -1]),
        build_polynomial(
            [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)],
            [0, 2, 2, 8, 6, 8],
            [1, -1, 1, 1, -1, 1],
        ),
    )


@pytest.fixture
def square_conic():
    return build_polynomial(SQUARE, [0, 0, 0, 1], [1, 1, -1, 1])
