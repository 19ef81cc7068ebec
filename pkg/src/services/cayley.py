"""Cayley 配置、組合せ的 Cayley トリック、混合細分と許容的な面の族"""

import itertools
import logging
from collections import defaultdict
from math import lcm
from typing import List, Sequence, Tuple

from src.exceptions import InternalConsistencyError, ValidationError
from src.models.cayley import (
    AdmissibleCollection,
    CayleyConfiguration,
    MixedCell,
    MixedSubdivision,
)
from src.models.tropical import TropicalPolynomial, TropicalSystem, TropicalTerm
from src.services.exact_math import integer_coordinates, rank, saturation
from src.services.polytope import (
    convex_hull,
    is_primitive_triangulation,
    minkowski_face_decompositions,
    points_on_face,
    regular_subdivision,
)

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    """点集合のアフィン次元"""
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def cayley_configuration(system: TropicalSystem) -> CayleyConfiguration:
    """Cayley 多項式 Σ y_i f_i(x) の台と持ち上げ"""
    n, k = system.ambient_dim, system.k
    points, lifts, markers, term_indices = [], [], [], []
    for i, f in enumerate(system.polynomials):
        unit = tuple(int(j == i) for j in range(k))
        for j, term in enumerate(f.terms):
            points.append(tuple(term.exponent) + unit)
            lifts.append(term.lift)
            markers.append(i)
            term_indices.append(j)
    return CayleyConfiguration(
        n=n,
        k=k,
        points=tuple(points),
        lifts=tuple(lifts),
        markers=tuple(markers),
        term_indices=tuple(term_indices),
        dim=affine_dim(points),
    )


def _supports(conf: CayleyConfiguration) -> Tuple[Tuple[Vector, ...], ...]:
    supports = [dict() for _ in range(conf.k)]
    for p, i, j in zip(conf.points, conf.markers, conf.term_indices):
        supports[i][j] = tuple(p[: conf.n])
    return tuple(tuple(s[j] for j in sorted(s)) for s in supports)


def _mixed_cell(
    supports, components: Sequence[Sequence[int]], cayley_points=(), maximal=False
) -> MixedCell:
    comps = tuple(tuple(sorted(c)) for c in components)
    component_dims = tuple(
        affine_dim([supports[i][j] for j in c]) for i, c in enumerate(comps)
    )
    diffs = []
    for i, c in enumerate(comps):
        base = supports[i][c[0]]
        diffs.extend(
            [a - b for a, b in zip(supports[i][j], base)] for j in c[1:]
        )
    return MixedCell(
        cayley_points=tuple(cayley_points),
        components=comps,
        dim=rank(diffs),
        component_dims=component_dims,
        is_maximal=maximal,
    )


def cayley_trick(conf: CayleyConfiguration) -> MixedSubdivision:
    """Cayley 配置の正則細分を混合細分へ変換

    Cayley 細分の面で全ての印 e_i を含むものが混合セルに対応し、
    Γ_i は印 e_i を持つ点の射影となる。

    Raises:
        InternalConsistencyError: 極大セルがある印を欠く場合
    """
    sub = regular_subdivision(conf.points, conf.lifts)
    supports = _supports(conf)
    maximal = set(sub.cells)
    cells = []
    for face in sub.faces:
        groups = defaultdict(list)
        for idx in face.points:
            groups[conf.markers[idx]].append(conf.term_indices[idx])
        if len(groups) < conf.k:
            if face.points in maximal:
                raise InternalConsistencyError(
                    f"maximal Cayley cell {face.points} misses a polynomial"
                )
            continue
        cells.append(
            _mixed_cell(
                supports,
                [groups[i] for i in range(conf.k)],
                face.points,
                face.points in maximal,
            )
        )
    delta_dim = conf.dim - conf.k + 1
    logger.debug("mixed subdivision: %d cells (dim %d)", len(cells), delta_dim)
    return MixedSubdivision(
        n=conf.n, k=conf.k, dim=delta_dim, supports=supports, cells=tuple(cells)
    )


def mixed_subdivision(system: TropicalSystem) -> MixedSubdivision:
    return cayley_trick(cayley_configuration(system))


def mixed_subdivision_direct(system: TropicalSystem) -> MixedSubdivision:
    """持ち上げた Minkowski 和 ĥΔ_1 + ⋯ + ĥΔ_k の下側包から極大混合セルを求める

    下側ファセットの支持汎関数 (c, h, t) ごとに
    Γ_i = argmin_{A_i} h·ω + t·ℓ_i(ω) とする。
    """
    summed = {}
    for combo in itertools.product(*(f.terms for f in system.polynomials)):
        point = tuple(map(sum, zip(*(t.exponent for t in combo))))
        lift = sum(t.lift for t in combo)
        if point not in summed or lift < summed[point]:
            summed[point] = lift
    points = sorted(summed)
    sub = regular_subdivision(points, [summed[p] for p in points])
    supports = tuple(f.exponents for f in system.polynomials)
    full = len(sub.lattice_basis) == system.ambient_dim
    scale = 1
    for x in sub.lifts:
        scale = lcm(scale, x.denominator)

    cells = []
    for functional in sub.functionals:
        if sub.dim == 0:
            cells.append(
                _mixed_cell(supports, [range(len(s)) for s in supports], maximal=True)
            )
            continue
        h, t = functional[1:-1], functional[-1]
        components = []
        for f in system.polynomials:
            base = f.exponents[0]
            values = []
            for term in f.terms:
                diff = tuple(a - b for a, b in zip(term.exponent, base))
                y = diff if full else integer_coordinates(sub.lattice_basis, diff)
                values.append(
                    sum(a * b for a, b in zip(h, y)) + t * scale * term.lift
                )
            low = min(values)
            components.append([j for j, v in enumerate(values) if v == low])
        cells.append(_mixed_cell(supports, components, maximal=True))
    cells.sort(key=lambda c: c.components)
    logger.debug("direct mixed subdivision: %d maximal cells", len(cells))
    return MixedSubdivision(
        n=system.ambient_dim,
        k=system.k,
        dim=sub.dim,
        supports=supports,
        cells=tuple(cells),
    )


def purity_flags(ms: MixedSubdivision) -> Tuple[bool, bool]:
    """(is_pure, is_tight) を返す

    純: 全ての極大セルで dim Γ = Σ dim Γ_i。
    タイト: さらに各 Γ_i が単体（点数 dim Γ_i + 1）。
    """
    tight = True
    for cell in ms.maximal_cells:
        if cell.dim != sum(cell.component_dims):
            return False, False
        for comp, d in zip(cell.components, cell.component_dims):
            if len(comp) != d + 1:
                tight = False
    return True, tight


def is_nondegenerate_system(system: TropicalSystem) -> bool:
    """Cayley 配置の正則細分が原始的な三角形分割であるか"""
    conf = cayley_configuration(system)
    return is_primitive_triangulation(regular_subdivision(conf.points, conf.lifts))


def admissible_collections(system: TropicalSystem) -> List[AdmissibleCollection]:
    """Cayley 多面体の面から許容的な面の族を列挙"""
    conf = cayley_configuration(system)
    hull = convex_hull(conf.points)
    collections = []
    for face in hull.faces:
        groups = defaultdict(list)
        for idx in points_on_face(hull, face.vertices, conf.points):
            groups[conf.markers[idx]].append(conf.term_indices[idx])
        indices = tuple(sorted(groups))
        collections.append(
            AdmissibleCollection(
                indices=indices,
                faces=tuple(tuple(sorted(groups[i])) for i in indices),
            )
        )
    collections.sort(key=lambda c: (len(c.indices), c.indices, c.faces))
    logger.debug("%d admissible collections", len(collections))
    return collections


def is_admissible(system: TropicalSystem, adm: AdmissibleCollection) -> bool:
    """Σ_{i∈I} Γ_i が Σ_{i∈I} Δ_i の面であるか（一意な Minkowski 分解で判定）"""
    if any(i < 0 or i >= system.k for i in adm.indices):
        return False
    if list(adm.indices) != sorted(set(adm.indices)):
        return False
    decompositions = minkowski_face_decompositions(
        [system.polynomials[i].exponents for i in adm.indices]
    )
    faces = tuple(tuple(sorted(f)) for f in adm.faces)
    return any(parts == faces for _, parts in decompositions)


def _restricted_polynomial(
    f: TropicalPolynomial,
    indices: Sequence[int],
    basis: Sequence[Vector],
    full: bool,
) -> TropicalPolynomial:
    base = f.terms[indices[0]].exponent
    terms = []
    for j in indices:
        term = f.terms[j]
        if full:
            exponent = term.exponent
        else:
            diff = tuple(a - b for a, b in zip(term.exponent, base))
            exponent = integer_coordinates(basis, diff)
        terms.append(TropicalTerm(exponent=exponent, lift=term.lift, sign=term.sign))
    return TropicalPolynomial(ambient_dim=len(basis), terms=tuple(terms))


def face_system(system: TropicalSystem, adm: AdmissibleCollection) -> TropicalSystem:
    """許容的な族 (Γ_i)_{i∈I} への切り詰め系を格子 M(ΣΓ_i) で表す

    ΣΓ_i が全次元なら元の座標をそのまま使う。

    Raises:
        ValidationError: 族が許容的でない場合
    """
    if not is_admissible(system, adm):
        raise ValidationError(f"collection {adm.to_dict()} is not admissible")
    diffs = []
    for i, face in zip(adm.indices, adm.faces):
        exps = system.polynomials[i].exponents
        base = exps[face[0]]
        diffs.extend(tuple(a - b for a, b in zip(exps[j], base)) for j in face[1:])
    n = system.ambient_dim
    basis = saturation(diffs, n) if diffs else []
    full = len(basis) == n
    if full:
        basis = [tuple(int(r == c) for c in range(n)) for r in range(n)]
    polynomials = tuple(
        _restricted_polynomial(system.polynomials[i], face, basis, full)
        for i, face in zip(adm.indices, adm.faces)
    )
    return TropicalSystem(ambient_dim=len(basis), polynomials=polynomials)


def face_decompositions(system: TropicalSystem) -> List[Tuple[int, AdmissibleCollection]]:
    """Δ = ΣΔ_i の各面 Γ について (dim Γ, (Γ_i)_{i=1..k})"""
    decompositions = minkowski_face_decompositions(
        [f.exponents for f in system.polynomials]
    )
    indices = tuple(range(system.k))
    return [
        (dim, AdmissibleCollection(indices=indices, faces=parts))
        for dim, parts in decompositions
    ]
