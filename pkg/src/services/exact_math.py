"""整数・有理数の厳密線形代数と F₂ 上のアフィン系ソルバー"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix, Rational, eye
from sympy.matrices.normalforms import hermite_normal_form

from src.exceptions import DimensionError, LatticeError
from src.models.lattice import F2AffineSystem, IntMatrix, LatticeIndexKind

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
IndexValue = Union[int, LatticeIndexKind]


def _as_rows(m: Union[IntMatrix, Sequence[Sequence[int]]]) -> List[List[int]]:
    if isinstance(m, IntMatrix):
        return [list(row) for row in m.entries]
    return [list(row) for row in m]


def _fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def determinant(m: Union[IntMatrix, Sequence[Sequence[int]]]) -> int:
    """正方整数行列の行列式（分数なしの Bareiss 消去）

    Raises:
        DimensionError: 正方行列でない場合
    """
    a = _as_rows(m)
    size = len(a)
    if any(len(row) != size for row in a):
        raise DimensionError("determinant requires a square matrix")
    if size == 0:
        return 1
    return int(Matrix(a).det(method="bareiss"))


def rank(rows: Sequence[Sequence]) -> int:
    """有理数上の階数"""
    rows = [row for row in rows if any(x != 0 for x in row)]
    if not rows:
        return 0
    return Matrix(rows).rank()


def solve_rational(
    matrix: Sequence[Sequence], rhs: Sequence
) -> Optional[List[Fraction]]:
    """A·x = b の解を一つ返す（自由変数は 0）。解がなければ None"""
    if not matrix or not matrix[0]:
        width = len(matrix[0]) if matrix else 0
        return [Fraction(0)] * width if all(b == 0 for b in rhs) else None
    try:
        solution, params = Matrix(matrix).gauss_jordan_solve(Matrix(list(rhs)))
    except ValueError:
        return None
    solution = solution.xreplace({p: 0 for p in params})
    return [_fraction(x) for x in solution]


def coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> Optional[List[Fraction]]:
    """v を basis の一次結合として表した係数（span 外なら None）"""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    columns = [[basis[j][i] for j in range(len(basis))] for i in range(len(v))]
    return solve_rational(columns, list(v))


def integer_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """格子基底に関する整数座標

    Raises:
        LatticeError: v が basis の張る格子に属さない場合
    """
    coords = coordinates(basis, v)
    if coords is None or any(c.denominator != 1 for c in coords):
        raise LatticeError(f"vector {tuple(v)} lies outside the lattice")
    return tuple(int(c) for c in coords)


def hermite_basis(gens: Sequence[Sequence[int]]) -> List[Vector]:
    """生成元の張る格子の基底（列型 Hermite 標準形）"""
    nonzero = [list(g) for g in gens if any(x != 0 for x in g)]
    if not nonzero:
        return []
    hnf = hermite_normal_form(Matrix(nonzero).T)
    return [tuple(int(x) for x in hnf.col(j)) for j in range(hnf.shape[1])]


@lru_cache(maxsize=4096)
def _kernel_basis(rows: Tuple[Vector, ...], n: int) -> Tuple[Vector, ...]:
    if not rows:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    stacked = Matrix.vstack(eye(n), Matrix([list(r) for r in rows]))
    hnf = hermite_normal_form(stacked)
    basis = []
    for j in range(hnf.shape[1]):
        column = [int(x) for x in hnf.col(j)]
        if all(x == 0 for x in column[n:]):
            basis.append(tuple(column[:n]))
    return tuple(basis)


def orthogonal_lattice(gens: Sequence[Sequence[int]], ambient_rank: int) -> List[Vector]:
    """{m : m·g = 0 (g ∈ gens)} の基底（飽和格子）"""
    rows = tuple(tuple(int(x) for x in g) for g in gens if any(x != 0 for x in g))
    for g in rows:
        if len(g) != ambient_rank:
            raise DimensionError("generator length differs from the ambient rank")
    return list(_kernel_basis(rows, ambient_rank))


def saturation(
    gens: Sequence[Sequence[int]], ambient_rank: Optional[int] = None
) -> List[Vector]:
    """span_Q(gens) ∩ Z^n の基底"""
    if ambient_rank is None:
        if not gens:
            return []
        ambient_rank = len(gens[0])
    if not any(any(x != 0 for x in g) for g in gens):
        return []
    return orthogonal_lattice(orthogonal_lattice(gens, ambient_rank), ambient_rank)


def lattice_index(
    ambient_basis: Sequence[Sequence[int]], sub_generators: Sequence[Sequence[int]]
) -> IndexValue:
    """部分格子 γ の格子 Λ における指数 [Λ:γ]

    Args:
        ambient_basis: Λ の基底
        sub_generators: γ の生成元

    Returns:
        指数（階数が異なるときは LatticeIndexKind.INFINITE）

    Raises:
        LatticeError: 生成元が Λ に属さない場合
    """
    coords = [integer_coordinates(ambient_basis, g) for g in sub_generators]
    if not ambient_basis:
        return 1
    basis = hermite_basis(coords)
    if len(basis) < len(ambient_basis):
        return LatticeIndexKind.INFINITE
    return abs(determinant(basis))


def lattice_intersection(
    basis1: Sequence[Sequence[int]], basis2: Sequence[Sequence[int]], ambient_rank: int
) -> List[Vector]:
    """飽和格子どうしの共通部分 (γ₁^⊥ + γ₂^⊥)^⊥ の基底"""
    perp = orthogonal_lattice(basis1, ambient_rank) + orthogonal_lattice(
        basis2, ambient_rank
    )
    return orthogonal_lattice(perp, ambient_rank)


def _gf2_rank(matrix: np.ndarray) -> int:
    mat = (np.array(matrix, dtype=np.uint8) % 2).copy()
    if mat.size == 0:
        return 0
    m, n = mat.shape
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if mat[i, col] == 1), None)
        if pivot is None:
            continue
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        for i in range(m):
            if i != r and mat[i, col] == 1:
                mat[i, :] ^= mat[r, :]
        r += 1
        if r == m:
            break
    return r


def f2_solution_count(system: F2AffineSystem) -> int:
    """F₂ 上のアフィン系の解の個数（矛盾なら 0、そうでなければ 2^(n−rank)）"""
    if not system.coefficients:
        return 2**system.n
    a = np.array(system.coefficients, dtype=np.uint8).reshape(
        len(system.coefficients), system.n
    )
    b = np.array(system.rhs, dtype=np.uint8).reshape(-1, 1)
    rank_a = _gf2_rank(a)
    if _gf2_rank(np.concatenate([a, b], axis=1)) != rank_a:
        return 0
    return 2 ** (system.n - rank_a)
