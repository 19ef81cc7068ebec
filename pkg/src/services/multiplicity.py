"""交わりの重み（横断的・一般・摂動による定義）と熱帯 Bernstein 数"""

import logging
import random
from fractions import Fraction
from math import prod
from typing import Iterator, List, Optional, Sequence, Tuple

from src.config.defaults import DEFAULT_COMPUTATION_CONFIG
from src.config.settings import ComputationConfig
from src.exceptions import (
    DimensionError,
    InternalConsistencyError,
    PerturbationError,
    ValidationError,
)
from src.models.cayley import MixedCell, MixedSubdivision
from src.models.lattice import LatticeIndexKind
from src.models.tropical import TropicalPolynomial, TropicalSystem, TropicalTerm
from src.models.weights import IntersectionCell, WeightMethod, WeightRecord
from src.services.cayley import (
    admissible_collections,
    face_system,
    mixed_subdivision,
    purity_flags,
)
from src.services.exact_math import lattice_index, rank, saturation
from src.services.polytope import convex_hull, mixed_volume, normalized_volume

logger = logging.getLogger(__name__)


def build_intersection_cell(
    ambient_dim: int, components: Sequence[Sequence[Sequence[int]]]
) -> IntersectionCell:
    """成分の格子点から次元つきの交わりのセルを構成"""
    components = tuple(tuple(tuple(p) for p in comp) for comp in components)
    edges = [
        [tuple(a - b for a, b in zip(p, comp[0])) for p in comp[1:]] for comp in components
    ]
    return IntersectionCell(
        ambient_dim=ambient_dim,
        components=components,
        dim=rank([e for part in edges for e in part]),
        component_dims=tuple(rank(part) for part in edges),
    )


def intersection_cell(ms: MixedSubdivision, cell: MixedCell) -> IntersectionCell:
    """混合細分のセルを成分の格子点で表した交わりのセルに変換"""
    return build_intersection_cell(
        ms.n, [ms.component_points(cell, i) for i in range(ms.k)]
    )


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """t_1 + ⋯ + t_parts = total（全て t_i ≥ 1）の列挙"""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def weight_transversal(cell: IntersectionCell) -> WeightRecord:
    """横断的な重み (Π vol(σ_i))·[M(σ) : M(σ_1)+⋯+M(σ_k)]

    Raises:
        ValidationError: 横断的でない、またはある dim σ_i = 0 の場合
    """
    dims = cell.component_dims
    if not cell.is_intersection:
        raise ValidationError(f"cell has a zero-dimensional component: {dims}")
    if not cell.is_transversal:
        raise ValidationError(
            f"cell of dim {cell.dim} is not transversal (component dims {dims})"
        )
    n = cell.ambient_dim
    volumes = tuple(normalized_volume(convex_hull(comp)) for comp in cell.components)
    summands = [g for i in range(cell.k) for g in saturation(cell.edges(i), n)]
    index = lattice_index(saturation(cell.edges(), n), summands)
    if index == LatticeIndexKind.INFINITE:
        raise InternalConsistencyError("transversal cell with a rank-deficient sum")
    return WeightRecord(
        method=WeightMethod.TRANSVERSAL,
        weight=prod(volumes) * index,
        terms=((dims, prod(volumes) * index),),
        volumes=volumes,
        lattice_index=index,
    )


def weight_general(cell: IntersectionCell) -> WeightRecord:
    """w(ξ) = Σ_t MV_d(σ_1, …, σ_k; t)（t_i ≥ 1, Σt_i = d）

    ある dim σ_i = 0 のセル、および d < k のセルは重み 0。

    Raises:
        InternalConsistencyError: 混合体積が整数でない場合
    """
    if not cell.is_intersection:
        return WeightRecord(
            method=WeightMethod.GENERAL, weight=0, note="zero-dimensional component"
        )
    d = cell.dim
    if d < cell.k:
        return WeightRecord(
            method=WeightMethod.GENERAL, weight=0, note="no composition with positive parts"
        )
    basis = saturation(cell.edges(), cell.ambient_dim)
    hulls = [convex_hull(comp) for comp in cell.components]
    terms = []
    for t in compositions(d, cell.k):
        mv = mixed_volume(hulls, t, reference_basis=basis)
        if mv.denominator != 1:
            raise InternalConsistencyError(f"non-integral mixed volume {mv} for t={t}")
        terms.append((t, int(mv)))
    return WeightRecord(
        method=WeightMethod.GENERAL,
        weight=sum(mv for _, mv in terms),
        terms=tuple(terms),
    )


def _perturbed_system(
    cell: IntersectionCell, rng: random.Random
) -> TropicalSystem:
    polynomials = []
    for comp in cell.components:
        direction = [rng.randint(-997, 997) for _ in range(cell.ambient_dim)]
        terms = tuple(
            TropicalTerm(
                exponent=p, lift=Fraction(sum(a * b for a, b in zip(direction, p)))
            )
            for p in comp
        )
        polynomials.append(TropicalPolynomial(ambient_dim=cell.ambient_dim, terms=terms))
    return TropicalSystem(ambient_dim=cell.ambient_dim, polynomials=tuple(polynomials))


def weight_by_perturbation(
    cell: IntersectionCell,
    seed: Optional[int] = None,
    config: Optional[ComputationConfig] = None,
) -> WeightRecord:
    """各超曲面を一般的なベクトル v_i だけ平行移動して重みを求める

    セル上では ℓ_i は共通の線形部分をもつアフィン関数なので Cayley 配置の下側包を
    変えず、摂動 ℓ_i + ε·v_i の細分は v_i だけの持ち上げで決まる。v_i は seed から
    決まる整数ベクトル（各成分は −997..997）で、同じ seed なら結果は同一。
    混合細分が純になるまで v_i を引き直し、現れる横断的な交わりの重みを合計する。

    Args:
        cell: 重みを求める交わりのセル
        seed: 乱数の種（省略時は config.perturbation_seed）
        config: 再試行回数などの設定

    Raises:
        PerturbationError: 再試行回数内に純な細分が得られない場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    seed = config.perturbation_seed if seed is None else seed
    if not cell.is_intersection:
        return WeightRecord(
            method=WeightMethod.PERTURBATION, weight=0, note="zero-dimensional component"
        )
    for attempt in range(config.perturbation_retries):
        rng = random.Random(seed * 1000003 + attempt)
        ms = mixed_subdivision(_perturbed_system(cell, rng))
        pure, _ = purity_flags(ms)
        if not pure:
            logger.debug("perturbation attempt %d not pure, retrying", attempt + 1)
            continue
        total = 0
        terms = []
        for refined in ms.maximal_cells:
            if not all(d >= 1 for d in refined.component_dims):
                continue
            record = weight_transversal(intersection_cell(ms, refined))
            total += record.weight
            terms.append((refined.component_dims, record.weight))
        return WeightRecord(
            method=WeightMethod.PERTURBATION,
            weight=total,
            terms=tuple(terms),
            note=f"attempt {attempt + 1}",
        )
    raise PerturbationError(
        f"no pure refinement within {config.perturbation_retries} perturbations"
    )


def stable_intersection_total(system: TropicalSystem) -> int:
    """n 個の熱帯超曲面の安定交点数（重みつき）

    MV_n(Δ_1, …, Δ_n) と一致することを内部で確認する。

    Raises:
        DimensionError: k ≠ n の場合
        InternalConsistencyError: 混合体積と一致しない場合
    """
    n = system.ambient_dim
    if system.k != n:
        raise DimensionError(f"{system.k} polynomials in dimension {n}")
    ms = mixed_subdivision(system)
    total = 0
    for cell in ms.maximal_cells:
        if cell.dim == n:
            total += weight_general(intersection_cell(ms, cell)).weight
    identity = [tuple(int(r == c) for c in range(n)) for r in range(n)]
    expected = mixed_volume(
        [convex_hull(f.exponents) for f in system.polynomials],
        [1] * n,
        reference_basis=identity,
    )
    if expected != total:
        raise InternalConsistencyError(
            f"weighted intersection count {total} differs from mixed volume {expected}"
        )
    logger.info("stable intersection total: %d", total)
    return total


def cayley_cell_volume(cell: IntersectionCell) -> int:
    """セルの Cayley 多面体 C(σ_1, …, σ_k) の正規化体積"""
    points = [
        tuple(p) + tuple(int(j == i) for j in range(cell.k))
        for i, comp in enumerate(cell.components)
        for p in comp
    ]
    return normalized_volume(convex_hull(points))


def multiplicity_report(system: TropicalSystem) -> List[Tuple[Tuple[int, ...], IntersectionCell, WeightRecord]]:
    """全ての許容的な族の交わりセルとその一般公式による重み"""
    records = []
    for adm in admissible_collections(system):
        sub = face_system(system, adm)
        ms = mixed_subdivision(sub)
        for mixed in ms.cells:
            if not mixed.is_intersection:
                continue
            cell = intersection_cell(ms, mixed)
            records.append((adm.indices, cell, weight_general(cell)))
    return records


def verify_multiplicity_one(system: TropicalSystem) -> bool:
    """全ての許容的な族で交わりが横断的かつ重み 1 であるか

    各セルで Cayley 多面体の体積が横断的な重みと一致することも確認する。
    """
    for adm in admissible_collections(system):
        sub = face_system(system, adm)
        ms = mixed_subdivision(sub)
        for mixed in ms.cells:
            if not mixed.is_intersection:
                continue
            cell = intersection_cell(ms, mixed)
            if not cell.is_transversal:
                logger.info("non-transversal cell for I=%s", adm.indices)
                return False
            weight = weight_transversal(cell).weight
            if weight != 1:
                logger.info("cell of weight %d for I=%s", weight, adm.indices)
                return False
            if cayley_cell_volume(cell) != weight:
                return False
    return True
