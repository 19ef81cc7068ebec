"""組合せ的貼り合わせ: 符号の拡張、混合符号コピーの数え上げ、実熱帯対象のセル数とオイラー標数"""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

from src.config.defaults import DEFAULT_COMPUTATION_CONFIG
from src.config.settings import ComputationConfig
from src.exceptions import (
    DegenerateInputError,
    DimensionError,
    InternalConsistencyError,
    ValidationError,
)
from src.models.lattice import F2AffineSystem
from src.models.patchwork import (
    OrthantCopy,
    PatchworkCell,
    PatchworkComplex,
    SignDistribution,
)
from src.models.polytope import LatticePolytope, RegularSubdivision
from src.models.tropical import TropicalPolynomial, TropicalSystem
from src.services.cayley import (
    face_decompositions,
    face_system,
    is_nondegenerate_system,
    mixed_subdivision,
)
from src.services.exact_math import f2_solution_count
from src.services.polytope import convex_hull, on_boundary, regular_subdivision
from src.services.tropical import is_nondegenerate

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def sign_in_copy(sign: int, w: Sequence[int], copy: OrthantCopy) -> int:
    """コピー ε における符号 δ(w)·(−1)^{ε·w}"""
    parity = sum(e * x for e, x in zip(copy, w)) % 2
    return -sign if parity else sign


def sign_distribution(system: TropicalSystem) -> SignDistribution:
    """系の符号分布

    Raises:
        ValidationError: 符号のない項がある場合
    """
    if not system.is_real:
        raise ValidationError("every term needs a sign for patchworking")
    return SignDistribution(
        signs=tuple(tuple(t.sign for t in f.terms) for f in system.polynomials)
    )


def _is_mixed(points: Sequence[Vector], signs: Sequence[int], copy: OrthantCopy) -> bool:
    return len({sign_in_copy(s, w, copy) for w, s in zip(points, signs)}) == 2


def _count_brute_force(simplices, signs, n: int) -> int:
    return sum(
        all(_is_mixed(pts, sg, copy) for pts, sg in zip(simplices, signs))
        for copy in itertools.product((0, 1), repeat=n)
    )


def _count_inclusion_exclusion(simplices, signs, n: int) -> int:
    total = 0
    for size in range(len(simplices) + 1):
        for subset in itertools.combinations(range(len(simplices)), size):
            rows, rhs = [], []
            for j in subset:
                pts, sg = simplices[j], signs[j]
                for w, s in zip(pts[1:], sg[1:]):
                    rows.append(tuple((a - b) % 2 for a, b in zip(w, pts[0])))
                    rhs.append(int(s != sg[0]))
            solutions = f2_solution_count(
                F2AffineSystem(coefficients=tuple(rows), rhs=tuple(rhs), n=n)
            )
            total += (-1) ** size * solutions
    return total


def count_mixed_copies(
    simplices: Sequence[Sequence[Sequence[int]]],
    signs: Sequence[Sequence[int]],
    n: int,
    config: Optional[ComputationConfig] = None,
) -> int:
    """全ての単体が両方の符号を持つコピー ε ∈ {0,1}^n の個数

    F₂ 上の包除原理で数え、n が小さければ総当たりとも照合する。

    Raises:
        ValidationError: 頂点が 2 個未満の単体がある場合
        InternalConsistencyError: 二つの数え方が一致しない場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    simplices = [[tuple(w) for w in pts] for pts in simplices]
    if len(simplices) != len(signs):
        raise ValidationError("one sign list per simplex is required")
    for pts, sg in zip(simplices, signs):
        if len(pts) < 2:
            raise ValidationError("each simplex needs at least two vertices")
        if len(pts) != len(sg):
            raise ValidationError("one sign per vertex is required")
    count = _count_inclusion_exclusion(simplices, signs, n)
    if n <= config.brute_force_max_dim:
        brute = _count_brute_force(simplices, signs, n)
        if brute != count:
            raise InternalConsistencyError(
                f"copy counts disagree: brute force {brute}, inclusion-exclusion {count}"
            )
    return count


def _mixed_copies(simplices, signs, n: int) -> List[OrthantCopy]:
    return [
        copy
        for copy in itertools.product((0, 1), repeat=n)
        if all(_is_mixed(pts, sg, copy) for pts, sg in zip(simplices, signs))
    ]


def _complex(n: int, entries, with_cells: bool, config) -> PatchworkComplex:
    """entries: (cell dim, components, simplices, signs) の列"""
    counts = [0] * max(n, 1)
    cells = []
    for dim, components, simplices, signs in entries:
        copies = count_mixed_copies(simplices, signs, n, config)
        counts[dim] += copies
        if with_cells and copies:
            cells.extend(
                PatchworkCell(components=components, copy=copy, dim=dim)
                for copy in _mixed_copies(simplices, signs, n)
            )
    return PatchworkComplex(
        n=n, counts=tuple(counts), cells=tuple(cells) if with_cells else None
    )


def hypersurface_complex(
    f: TropicalPolynomial,
    with_cells: bool = False,
    config: Optional[ComputationConfig] = None,
) -> PatchworkComplex:
    """実熱帯超曲面の開セル

    ∂Δ に含まれない k 単体ごとに、混合符号のコピー数だけ (k−1) セルを数える。

    Raises:
        ValidationError: 符号がない場合
        DimensionError: Newton 多面体が全次元でない場合
        DegenerateInputError: 双対細分が原始的な三角形分割でない場合
    """
    if not f.is_real:
        raise ValidationError("every term needs a sign for patchworking")
    n = f.ambient_dim
    delta = convex_hull(f.exponents)
    if not delta.is_full_dimensional:
        raise DimensionError("Newton polytope must be full-dimensional")
    if not is_nondegenerate(f):
        raise DegenerateInputError("dual subdivision is not a primitive triangulation")
    sub = regular_subdivision(f.exponents, f.lifts)
    signs = [t.sign for t in f.terms]
    entries = []
    for face in sub.faces:
        if face.dim == 0:
            continue
        pts = [f.exponents[i] for i in face.points]
        if on_boundary(delta, pts):
            continue
        entries.append(
            (face.dim - 1, (face.points,), [pts], [[signs[i] for i in face.points]])
        )
    result = _complex(n, entries, with_cells, config)
    logger.debug("hypersurface complex counts %s", result.counts)
    return result


def _boundary_argmins(system: TropicalSystem, delta: LatticePolytope):
    """Δ の各ファセット法線 u について Γ_i ⊆ argmin_{A_i} u となる項番号集合"""
    result = []
    for facet in delta.facets:
        parts = []
        for f in system.polynomials:
            values = [sum(a * b for a, b in zip(facet.normal, w)) for w in f.exponents]
            low = min(values)
            parts.append({j for j, v in enumerate(values) if v == low})
        result.append(parts)
    return result


def ci_complex(
    system: TropicalSystem,
    with_cells: bool = False,
    config: Optional[ComputationConfig] = None,
) -> PatchworkComplex:
    """実熱帯完全交叉の開セル

    ∂Δ に含まれず全ての dim Γ_i ≥ 1 である混合セル Γ ごとに、
    全ての Γ_i が混合符号となるコピー数だけ (dim Γ − k) セルを数える。

    Raises:
        ValidationError: 符号がない場合
        DimensionError: Δ が全次元でない場合
        DegenerateInputError: 系が非退化でない場合
    """
    signs = sign_distribution(system).signs
    n, k = system.ambient_dim, system.k
    delta = convex_hull(
        [
            tuple(map(sum, zip(*combo)))
            for combo in itertools.product(
                *(convex_hull(f.exponents).vertices for f in system.polynomials)
            )
        ]
    )
    if not delta.is_full_dimensional:
        raise DimensionError("Minkowski sum of Newton polytopes must be full-dimensional")
    if not is_nondegenerate_system(system):
        raise DegenerateInputError("Cayley subdivision is not a primitive triangulation")
    ms = mixed_subdivision(system)
    boundary = _boundary_argmins(system, delta)
    entries = []
    for cell in ms.cells:
        if not cell.is_intersection or cell.dim < k:
            continue
        if any(
            all(set(comp) <= part for comp, part in zip(cell.components, parts))
            for parts in boundary
        ):
            continue
        entries.append(
            (
                cell.dim - k,
                cell.components,
                [ms.component_points(cell, i) for i in range(k)],
                [[signs[i][j] for j in comp] for i, comp in enumerate(cell.components)],
            )
        )
    result = _complex(n, entries, with_cells, config)
    logger.debug("complete intersection complex counts %s", result.counts)
    return result


def euler_torus(complex_: PatchworkComplex) -> int:
    return complex_.euler


def euler_compactified(
    system: TropicalSystem, config: Optional[ComputationConfig] = None
) -> int:
    """トーリック多様体での実部のオイラー標数

    Δ の全ての面 Γ = ΣΓ_i についてトーラス軌道ごとの値を足し合わせる。
    ある Γ_i が 1 点の面は寄与しない。
    """
    total = 0
    for dim, adm in face_decompositions(system):
        if any(len(face) == 1 for face in adm.faces) or dim < system.k:
            continue
        sub = face_system(system, adm)
        total += euler_torus(ci_complex(sub, config=config))
    logger.debug("compactified Euler characteristic %d", total)
    return total


def nb_k_direct(sub: RegularSubdivision, delta: LatticePolytope) -> List[int]:
    """∂Δ に含まれない k 単体の個数 nb_0, …, nb_n"""
    counts = [0] * (sub.dim + 1)
    for face in sub.faces:
        if not on_boundary(delta, [sub.points[i] for i in face.points]):
            counts[face.dim] += 1
    return counts
