"""熱帯多項式: 熱帯化、双対細分、切断、非特異性、2 次元での幾何的実現"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from src.exceptions import DegenerateInputError, DimensionError, ValidationError
from src.models.polytope import LatticePolytope
from src.models.tropical import (
    DualCell,
    PuiseuxLeadingTerm,
    TropicalHypersurfaceData,
    TropicalPolynomial,
    TropicalTerm,
)
from src.services.exact_math import rank, solve_rational
from src.services.polytope import (
    affine_frame,
    convex_hull,
    is_primitive_triangulation,
    on_boundary,
    points_on_face,
    regular_subdivision,
)

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def tropicalize(
    poly: Sequence[Tuple[Sequence[int], PuiseuxLeadingTerm]],
) -> TropicalPolynomial:
    """先頭項データから熱帯多項式を作る（持ち上げ ℓ(ω) = val(c_ω)）

    Raises:
        ValidationError: 項が空、または指数が重複している場合
    """
    if not poly:
        raise ValidationError("cannot tropicalize the zero polynomial")
    exponents = [tuple(int(x) for x in e) for e, _ in poly]
    if len(set(exponents)) != len(exponents):
        raise ValidationError("duplicate exponents in polynomial")
    terms = tuple(
        TropicalTerm(exponent=e, lift=lead.valuation, sign=lead.sign)
        for e, (_, lead) in zip(exponents, poly)
    )
    return TropicalPolynomial(ambient_dim=len(exponents[0]), terms=terms)


def build_polynomial(
    exponents: Sequence[Sequence[int]],
    lifts: Sequence,
    signs: Optional[Sequence[int]] = None,
) -> TropicalPolynomial:
    """指数・持ち上げ・符号の列から熱帯多項式を組み立てる"""
    if len(exponents) != len(lifts) or (signs is not None and len(signs) != len(lifts)):
        raise ValidationError("exponents, lifts and signs must have equal lengths")
    terms = tuple(
        TropicalTerm(
            exponent=tuple(int(x) for x in e),
            lift=Fraction(h),
            sign=None if signs is None else signs[i],
        )
        for i, (e, h) in enumerate(zip(exponents, lifts))
    )
    return TropicalPolynomial(ambient_dim=len(terms[0].exponent), terms=terms)


def newton_polytope(f: TropicalPolynomial) -> LatticePolytope:
    return convex_hull(f.exponents)


def evaluate(f: TropicalPolynomial, x: Sequence) -> Fraction:
    """max_ω (x·ω − ℓ(ω)) の値"""
    return max(
        sum(Fraction(a) * b for a, b in zip(x, t.exponent)) - t.lift for t in f.terms
    )


def dual_subdivision(f: TropicalPolynomial) -> TropicalHypersurfaceData:
    """双対細分（持ち上げの下側包）と双対性のメタデータ"""
    dual = regular_subdivision(f.exponents, f.lifts)
    delta = newton_polytope(f)
    n = f.ambient_dim
    cells = []
    for face in dual.faces:
        boundary = on_boundary(delta, [f.exponents[i] for i in face.points])
        cells.append(
            DualCell(
                points=face.points,
                dim_sigma=face.dim,
                dim_xi=n - face.dim,
                on_boundary=boundary,
                bounded=delta.is_full_dimensional and not boundary,
            )
        )
    logger.debug("dual subdivision with %d cells", len(cells))
    return TropicalHypersurfaceData(polynomial=f, dual=dual, cells=tuple(cells))


def truncation_indices(f: TropicalPolynomial, face: LatticePolytope) -> List[int]:
    """面 Γ 上にある項の番号

    Raises:
        ValidationError: Γ が Newton 多面体の面でない場合
    """
    delta = newton_polytope(f)
    position = {v: i for i, v in enumerate(delta.vertices)}
    if any(v not in position for v in face.vertices):
        raise ValidationError("the given polytope is not a face of the Newton polytope")
    ids = tuple(sorted(position[v] for v in face.vertices))
    if ids not in {fc.vertices for fc in delta.faces}:
        raise ValidationError("the given polytope is not a face of the Newton polytope")
    return points_on_face(delta, ids, f.exponents)


def truncation(f: TropicalPolynomial, face: LatticePolytope) -> TropicalPolynomial:
    """Γ 上の単項式のみを残し、格子 M(Γ) の座標で表した多項式"""
    kept = [f.terms[i] for i in truncation_indices(f, face)]
    _, _, coords = affine_frame([t.exponent for t in kept])
    return TropicalPolynomial(
        ambient_dim=len(coords[0]),
        terms=tuple(
            TropicalTerm(exponent=tuple(y), lift=t.lift, sign=t.sign)
            for y, t in zip(coords, kept)
        ),
    )


def is_nonsingular(f: TropicalPolynomial) -> bool:
    """双対細分が原始的三角形分割であるか"""
    return is_primitive_triangulation(regular_subdivision(f.exponents, f.lifts))


def is_nondegenerate(f: TropicalPolynomial) -> bool:
    return is_nonsingular(f)


def vertex_coordinates(
    data: TropicalHypersurfaceData, cell: Union[DualCell, Sequence[int]]
) -> Tuple[Fraction, ...]:
    """全次元セル σ に双対な頂点 x（x·ω − ℓ(ω) が σ 上で一定）

    Raises:
        DimensionError: σ が全次元でない場合
        DegenerateInputError: 連立方程式が一意に解けない場合
    """
    f = data.polynomial
    points = cell.points if isinstance(cell, DualCell) else tuple(cell)
    n = f.ambient_dim
    rows = [list(f.terms[i].exponent) + [-1] for i in points]
    if rank(rows) != n + 1:
        if len(points) < n + 1:
            raise DimensionError("vertex coordinates need a full-dimensional cell")
        raise DegenerateInputError("singular system for the dual vertex")
    solution = solve_rational(rows, [f.terms[i].lift for i in points])
    if solution is None:
        raise DegenerateInputError("points of the cell are not on a common plane")
    return tuple(solution[:n])
