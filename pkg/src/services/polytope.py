"""格子多面体: 凸包、面束、体積、混合体積、正則細分、Ehrhart 多項式"""

import itertools
import logging
import random
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import cdd
from sympy import QQ, Poly, Symbol, interpolate

from src.config.defaults import DEFAULT_COMPUTATION_CONFIG
from src.config.settings import ComputationConfig
from src.exceptions import (
    DimensionError,
    InternalConsistencyError,
    PerturbationError,
    ValidationError,
)
from src.models.polytope import (
    EhrhartPolynomial,
    Face,
    Facet,
    LatticePolytope,
    RegularSubdivision,
    SubdivisionCell,
)
from src.services.exact_math import (
    coordinates,
    determinant,
    integer_coordinates,
    saturation,
)

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def _sub(p: Sequence[int], q: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(p, q))


def _dot(p: Sequence, q: Sequence):
    return sum(a * b for a, b in zip(p, q))


def _identity(n: int) -> List[Vector]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def _integral_primitive(vector: Sequence[Fraction]) -> Vector:
    scale = 1
    for x in vector:
        scale = lcm(scale, Fraction(x).denominator)
    ints = [int(Fraction(x) * scale) for x in vector]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def affine_frame(
    points: Sequence[Sequence[int]],
) -> Tuple[Vector, List[Vector], List[Vector]]:
    """点配置の (基点, 飽和格子基底, 内在座標) を返す

    全次元の場合は基点を零ベクトル、基底を標準基底とする。
    """
    n = len(points[0])
    base = tuple(points[0])
    diffs = [_sub(p, base) for p in points[1:]]
    basis = saturation(diffs, n) if diffs else []
    if len(basis) == n:
        return tuple([0] * n), _identity(n), [tuple(p) for p in points]
    coords = [integer_coordinates(basis, _sub(p, base)) for p in points]
    return base, basis, coords


def _facet_inequalities(generators: List[Vector]) -> List[Tuple[Vector, int]]:
    """{a : a·g ≥ 0 (g ∈ generators)} の端線（ファセット不等式）を cdd の分数演算で求める

    generators は cdd の V 表現（先頭成分 1 が点、0 が方向）で R^D を張ること。
    戻り値は (端線, 零集合のビットマスク)。端線 (b, a) は b + a·x ≥ 0 を表す。

    Raises:
        InternalConsistencyError: 生成元が全次元の錐を張らない場合
    """
    mat = cdd.Matrix([list(g) for g in generators], number_type="fraction")
    mat.rep_type = cdd.RepType.GENERATOR
    inequalities = cdd.Polyhedron(mat).get_inequalities()
    inequalities.canonicalize()
    if inequalities.lin_set:
        raise InternalConsistencyError("generators do not span the ambient space")
    result = []
    for row in range(inequalities.row_size):
        ray = _integral_primitive([Fraction(x) for x in inequalities[row]])
        mask = 0
        for idx, g in enumerate(generators):
            if _dot(g, ray) == 0:
                mask |= 1 << idx
        result.append((ray, mask))
    logger.debug("cdd: %d generators, %d inequalities", len(generators), len(result))
    return result


def _face_lattice(
    dim: int, vertex_count: int, facet_sets: List[frozenset]
) -> Dict[frozenset, int]:
    """ファセットの頂点集合から面束（頂点集合 → 次元）を構成"""
    whole = frozenset(range(vertex_count))
    faces = {whole: dim}
    frontier = {whole}
    for current in range(dim, 0, -1):
        lower = set()
        for face in frontier:
            candidates = {face & f for f in facet_sets if not face <= f}
            candidates.discard(frozenset())
            for c in candidates:
                if not any(c < other for other in candidates):
                    lower.add(c)
        for face in lower:
            faces[face] = current - 1
        frontier = lower
    return faces


def convex_hull(
    points: Sequence[Sequence[int]], config: Optional[ComputationConfig] = None
) -> LatticePolytope:
    """格子点の凸包を頂点・ファセット・面束つきで構成

    Raises:
        ValidationError: 点が空、または長さが揃っていない場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    if not points:
        raise ValidationError("convex hull of an empty point set")
    unique = sorted({tuple(int(x) for x in p) for p in points})
    n = len(unique[0])
    if any(len(p) != n for p in unique):
        raise DimensionError("points of different lengths")
    if len(unique) > config.hull_max_points:
        raise ValidationError(
            f"{len(unique)} points exceed the hull limit {config.hull_max_points}"
        )
    return _convex_hull_cached(tuple(unique))


@lru_cache(maxsize=2048)
def _convex_hull_cached(unique: Tuple[Vector, ...]) -> LatticePolytope:
    n = len(unique[0])
    origin, basis, coords = affine_frame(unique)
    dim = len(basis)
    if dim == 0:
        return LatticePolytope(
            ambient_dim=n,
            vertices=unique[:1],
            dim=0,
            origin=origin,
            lattice_basis=(),
            vertex_coords=((),),
            faces=(Face(dim=0, vertices=(0,)),),
        )

    generators = [(1,) + tuple(y) for y in coords]
    rays = _facet_inequalities(generators)
    tight = [
        frozenset(i for i in range(len(unique)) if mask >> i & 1) for _, mask in rays
    ]
    vertex_ids = []
    for i in range(len(unique)):
        containing = [t for t in tight if i in t]
        if not containing:
            continue
        common = frozenset.intersection(*containing)
        if common == {i}:
            vertex_ids.append(i)
    position = {old: new for new, old in enumerate(vertex_ids)}

    facets = []
    for (ray, _), points_on in zip(rays, tight):
        facets.append(
            Facet(
                normal=tuple(ray[1:]),
                offset=ray[0],
                vertices=tuple(sorted(position[i] for i in points_on if i in position)),
            )
        )
    facets.sort(key=lambda f: f.vertices)
    lattice = _face_lattice(
        dim, len(vertex_ids), [frozenset(f.vertices) for f in facets]
    )
    faces = sorted(
        (Face(dim=d, vertices=tuple(sorted(s))) for s, d in lattice.items()),
        key=lambda f: (f.dim, f.vertices),
    )
    logger.debug(
        "hull: %d points, %d vertices, %d facets",
        len(unique),
        len(vertex_ids),
        len(facets),
    )
    return LatticePolytope(
        ambient_dim=n,
        vertices=tuple(unique[i] for i in vertex_ids),
        dim=dim,
        origin=origin,
        lattice_basis=tuple(basis),
        vertex_coords=tuple(tuple(coords[i]) for i in vertex_ids),
        facets=tuple(facets),
        faces=tuple(faces),
    )


def intrinsic_coordinates(polytope: LatticePolytope, point: Sequence[int]) -> Vector:
    """M(P) の基底に関する点の整数座標"""
    if polytope.is_full_dimensional:
        return tuple(point)
    return integer_coordinates(polytope.lattice_basis, _sub(point, polytope.origin))


def contains(polytope: LatticePolytope, point: Sequence[int]) -> bool:
    """点が多面体に属するか"""
    if polytope.dim == 0:
        return tuple(point) == polytope.vertices[0]
    if not polytope.is_full_dimensional:
        coords = coordinates(polytope.lattice_basis, _sub(point, polytope.origin))
        if coords is None:
            return False
        y = coords
    else:
        y = point
    return all(_dot(f.normal, y) + f.offset >= 0 for f in polytope.facets)


def points_on_face(
    polytope: LatticePolytope, face_vertices: Sequence[int], points: Sequence[Sequence[int]]
) -> List[int]:
    """与えた点のうち面（頂点番号集合）上にある点の番号"""
    face = set(face_vertices)
    containing = [f for f in polytope.facets if face <= set(f.vertices)]
    result = []
    for idx, p in enumerate(points):
        if not contains(polytope, p):
            continue
        if polytope.dim == 0:
            result.append(idx)
            continue
        y = intrinsic_coordinates(polytope, p)
        if all(_dot(f.normal, y) + f.offset == 0 for f in containing):
            result.append(idx)
    return result


def on_boundary(polytope: LatticePolytope, points: Sequence[Sequence[int]]) -> bool:
    """全ての点がある一つのファセットに含まれるか（σ ⊂ ∂Δ の判定）"""
    if polytope.dim == 0:
        return False
    coords = [intrinsic_coordinates(polytope, p) for p in points]
    return any(
        all(_dot(f.normal, y) + f.offset == 0 for y in coords) for f in polytope.facets
    )


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """Minkowski 和 conv{p+q}

    Raises:
        DimensionError: 周囲次元が異なる場合
    """
    if p.ambient_dim != q.ambient_dim:
        raise DimensionError("Minkowski sum of polytopes in different lattices")
    return convex_hull(
        [tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices]
    )


def dilate(polytope: LatticePolytope, factor: int) -> LatticePolytope:
    return convex_hull([tuple(factor * x for x in v) for v in polytope.vertices])


def _pulling_simplices(polytope: LatticePolytope) -> List[Tuple[int, ...]]:
    by_dim: Dict[int, List[frozenset]] = defaultdict(list)
    for face in polytope.faces:
        by_dim[face.dim].append(frozenset(face.vertices))

    def triangulate(face: frozenset, dim: int) -> List[Tuple[int, ...]]:
        if len(face) == dim + 1:
            return [tuple(sorted(face))]
        apex = min(face)
        simplices = []
        for sub in by_dim[dim - 1]:
            if sub <= face and apex not in sub:
                simplices.extend((apex,) + s for s in triangulate(sub, dim - 1))
        return simplices

    return triangulate(frozenset(range(len(polytope.vertices))), polytope.dim)


def normalized_volume(
    polytope: LatticePolytope, basis: Optional[Sequence[Sequence[int]]] = None
) -> int:
    """正規化体積 vol_k = k!·Vol_k（格子 M(P) または与えた基底で測る）"""
    if basis is not None and len(basis) != polytope.dim:
        return 0
    if polytope.dim == 0:
        return 1
    if basis is None:
        coords = polytope.vertex_coords
    else:
        base = polytope.vertices[0]
        coords = tuple(integer_coordinates(basis, _sub(v, base)) for v in polytope.vertices)
    total = 0
    for simplex in _pulling_simplices(polytope):
        apex = coords[simplex[0]]
        total += abs(determinant([_sub(coords[i], apex) for i in simplex[1:]]))
    return total


def _edge_vectors(polytopes: Sequence[LatticePolytope]) -> List[Vector]:
    return [_sub(v, p.vertices[0]) for p in polytopes for v in p.vertices[1:]]


def mixed_volume(
    polytopes: Sequence[LatticePolytope],
    multiplicities: Sequence[int],
    reference_basis: Optional[Sequence[Sequence[int]]] = None,
) -> Fraction:
    """混合体積 MV_ℓ(P_1, …, P_m; t)

    Vol_ℓ(λ_1P_1+⋯+λ_mP_m) の λ^t の係数に t_1!⋯t_m! を掛けた値を、
    整数格子点上の差分 Σ_s (−1)^{|t|−|s|} Π C(t_i, s_i) Vol(Σ s_i P_i) で求める。

    Raises:
        ValidationError: Σt_i が基準格子の階数と一致しない場合
    """
    if len(polytopes) != len(multiplicities):
        raise ValidationError("one multiplicity per polytope is required")
    if any(t < 0 for t in multiplicities):
        raise ValidationError("multiplicities must be nonnegative")
    if reference_basis is None:
        reference_basis = saturation(_edge_vectors(polytopes), polytopes[0].ambient_dim)
    ell = len(reference_basis)
    if sum(multiplicities) != ell:
        raise ValidationError(
            f"multiplicities sum to {sum(multiplicities)}, lattice rank is {ell}"
        )
    if ell == 0:
        return Fraction(1)
    active = [(p, t) for p, t in zip(polytopes, multiplicities) if t > 0]
    if any(p.dim == 0 for p, _ in active):
        return Fraction(0)

    total = Fraction(0)
    for scales in itertools.product(*(range(t + 1) for _, t in active)):
        if not any(scales):
            continue
        summand = None
        for (p, _), s in zip(active, scales):
            if s == 0:
                continue
            scaled = dilate(p, s)
            summand = scaled if summand is None else minkowski_sum(summand, scaled)
        if summand.dim != ell:
            continue
        sign = (-1) ** (ell - sum(scales))
        weight = 1
        for (_, t), s in zip(active, scales):
            weight *= comb(t, s)
        total += sign * weight * normalized_volume(summand, reference_basis)
    return total / factorial(ell)


def intrinsic_polytope(polytope: LatticePolytope) -> LatticePolytope:
    """M(P) に制限した全次元の多面体"""
    if polytope.is_full_dimensional:
        return polytope
    return convex_hull(polytope.vertex_coords) if polytope.dim else convex_hull([()])


def _box_points(polytope: LatticePolytope, factor: int, strict: bool) -> List[Vector]:
    lows = [factor * min(v[i] for v in polytope.vertices) for i in range(polytope.dim)]
    highs = [factor * max(v[i] for v in polytope.vertices) for i in range(polytope.dim)]
    found = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lows, highs))):
        values = [_dot(f.normal, p) + factor * f.offset for f in polytope.facets]
        if all(v > 0 for v in values) if strict else all(v >= 0 for v in values):
            found.append(p)
    return found


def lattice_points(polytope: LatticePolytope) -> List[Vector]:
    """多面体に含まれる格子点（バウンディングボックスとファセット不等式）"""
    if polytope.dim == 0:
        return [polytope.vertices[0]]
    full = intrinsic_polytope(polytope)
    points = _box_points(full, 1, strict=False)
    if polytope.is_full_dimensional:
        return points
    return [
        tuple(
            o + sum(y[j] * polytope.lattice_basis[j][i] for j in range(polytope.dim))
            for i, o in enumerate(polytope.origin)
        )
        for y in points
    ]


def count_dilate(polytope: LatticePolytope, factor: int, interior: bool = False) -> int:
    """λP の格子点の個数（interior=True なら相対内部の点のみ）"""
    if factor < 0:
        raise ValidationError("dilation factor must be nonnegative")
    if factor == 0:
        return 0 if interior and polytope.dim > 0 else 1
    if polytope.dim == 0:
        return 1
    return len(_box_points(intrinsic_polytope(polytope), factor, strict=interior))


def ehrhart(polytope: LatticePolytope) -> EhrhartPolynomial:
    """Ehrhart 多項式を λ = 0..n の格子点数から補間で求める（係数は QQ 上で厳密）

    Raises:
        DimensionError: 全次元でない場合
    """
    n = polytope.ambient_dim
    if not polytope.is_full_dimensional:
        raise DimensionError(
            f"Ehrhart polynomial needs a full-dimensional polytope (dim {polytope.dim} < {n})"
        )
    counts = [count_dilate(polytope, lam) for lam in range(n + 1)]
    lam = Symbol("lam")
    poly = Poly(interpolate(list(zip(range(n + 1), counts)), lam), lam, domain=QQ)
    coefficients = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    coefficients += [Fraction(0)] * (n + 1 - len(coefficients))
    return EhrhartPolynomial(coefficients=tuple(coefficients))


def psi_from_ehrhart(coefficients: Sequence[Fraction], n: int) -> List[int]:
    """ψ_i = Σ_l Σ_{p≤i} (−1)^{i−p} C(n+1, i−p) p^l a_l（i = 0..n）"""
    psi = []
    for i in range(n + 1):
        value = Fraction(0)
        for l, a in enumerate(coefficients):
            inner = sum(
                (-1) ** (i - p) * comb(n + 1, i - p) * p**l for p in range(i + 1)
            )
            value += inner * a
        if value.denominator != 1:
            raise InternalConsistencyError(f"psi_{i} = {value} is not an integer")
        psi.append(int(value))
    return psi


def psi_coefficients(polytope: LatticePolytope) -> List[int]:
    """錐の級数 S(C,t) の係数 ψ_0..ψ_n"""
    return psi_from_ehrhart(ehrhart(polytope).coefficients, polytope.ambient_dim)


def cone_series_check(polytope: LatticePolytope, depth: int) -> bool:
    """S(C,t) と総当たりの錐点列、および S(C,t) = t^{n+1} T(C,1/t) を照合

    Raises:
        ValidationError: depth < n+1 の場合
    """
    n = polytope.ambient_dim
    if depth < n + 1:
        raise ValidationError(f"depth must be at least {n + 1}")
    psi = psi_coefficients(polytope) + [0] * (depth + 1)
    closed = [count_dilate(polytope, lam) for lam in range(depth + 1)]
    interior = [count_dilate(polytope, lam, interior=True) for lam in range(depth + 1)]

    def times_one_minus_t(series: List[int], j: int) -> int:
        return sum(
            (-1) ** i * comb(n + 1, i) * series[j - i] for i in range(min(j, n + 1) + 1)
        )

    for j in range(depth + 1):
        if times_one_minus_t(closed, j) != psi[j]:
            logger.debug("cone series mismatch at degree %d", j)
            return False
        dual = psi[n + 1 - j] if j <= n + 1 else 0
        if times_one_minus_t(interior, j) != dual:
            logger.debug("reciprocity mismatch at degree %d", j)
            return False
    return True


def _cell_faces(
    cell: Tuple[int, ...], coords: Sequence[Vector], dim: int
) -> Dict[frozenset, int]:
    if len(cell) == dim + 1:
        faces = {}
        for size in range(1, len(cell) + 1):
            for subset in itertools.combinations(cell, size):
                faces[frozenset(subset)] = size - 1
        return faces
    hull = convex_hull([coords[i] for i in cell])
    members = [coords[i] for i in cell]
    faces = {}
    for face in hull.faces:
        on = points_on_face(hull, face.vertices, members)
        faces[frozenset(cell[i] for i in on)] = face.dim
    return faces


def regular_subdivision(
    points: Sequence[Sequence[int]], lifts: Sequence
) -> RegularSubdivision:
    """持ち上げた点配置の下側包から正則細分を構成

    Raises:
        ValidationError: 点の重複、または持ち上げの個数が合わない場合
    """
    points = [tuple(int(x) for x in p) for p in points]
    lifts = [Fraction(x) for x in lifts]
    if not points:
        raise ValidationError("empty point configuration")
    if len(points) != len(lifts):
        raise ValidationError("one lift per point is required")
    if len(set(points)) != len(points):
        raise ValidationError("points of a configuration must be distinct")
    if any(len(p) != len(points[0]) for p in points):
        raise DimensionError("points of different lengths")

    origin, basis, coords = affine_frame(points)
    dim = len(basis)
    if dim == 0:
        return RegularSubdivision(
            points=tuple(points),
            lifts=tuple(lifts),
            dim=0,
            origin=origin,
            lattice_basis=(),
            coords=((),),
            cells=((0,),),
            functionals=((0,),),
            faces=(SubdivisionCell(points=(0,), dim=0),),
        )

    scale = 1
    for x in lifts:
        scale = lcm(scale, x.denominator)
    generators = [
        (1,) + tuple(y) + (int(h * scale),) for y, h in zip(coords, lifts)
    ]
    generators.append(tuple([0] * (dim + 1)) + (1,))

    cells = []
    functionals = []
    for ray, mask in _facet_inequalities(generators):
        if ray[-1] <= 0:
            continue
        cell = tuple(i for i in range(len(points)) if mask >> i & 1)
        cells.append(cell)
        functionals.append(ray)
    order = sorted(range(len(cells)), key=lambda j: cells[j])
    cells = [cells[j] for j in order]
    functionals = [functionals[j] for j in order]
    closure: Dict[frozenset, int] = {}
    for cell in cells:
        closure.update(_cell_faces(cell, coords, dim))
    faces = sorted(
        (SubdivisionCell(points=tuple(sorted(s)), dim=d) for s, d in closure.items()),
        key=lambda c: (c.dim, c.points),
    )
    logger.debug(
        "subdivision: %d points, %d cells, %d faces",
        len(points),
        len(cells),
        len(faces),
    )
    return RegularSubdivision(
        points=tuple(points),
        lifts=tuple(lifts),
        dim=dim,
        origin=origin,
        lattice_basis=tuple(basis),
        coords=tuple(tuple(y) for y in coords),
        cells=tuple(cells),
        functionals=tuple(functionals),
        faces=tuple(faces),
    )


def cell_volume(sub: RegularSubdivision, cell: Sequence[int]) -> int:
    """細分のセルの正規化体積（配置の格子で測る）"""
    hull = convex_hull([sub.coords[i] for i in cell])
    return normalized_volume(hull)


def is_primitive_triangulation(sub: RegularSubdivision) -> bool:
    """全ての極大セルが正規化体積 1 の単体であるか"""
    for cell in sub.cells:
        if len(cell) != sub.dim + 1:
            return False
        apex = sub.coords[cell[0]]
        edges = [_sub(sub.coords[i], apex) for i in cell[1:]]
        if abs(determinant(edges)) != 1:
            return False
    return True


def find_primitive_lift(
    points: Sequence[Sequence[int]],
    seed: int = 0,
    config: Optional[ComputationConfig] = None,
) -> List[Fraction]:
    """原始的な三角形分割を与える持ち上げをシード付きで探索

    狭義凸な二次関数 Σx_i² + (Σx_i)² を大きく拡大したものに小さな整数ノイズを
    加え、is_primitive_triangulation で確認する。

    Raises:
        PerturbationError: 試行回数内に見つからない場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    _, _, coords = affine_frame(points)
    baseline = [sum(x * x for x in y) + sum(y) ** 2 for y in coords]
    for attempt in range(config.primitive_search_attempts):
        rng = random.Random(seed * 7919 + attempt)
        lifts = [
            Fraction(config.primitive_search_scale * b + rng.randint(-5, 5))
            for b in baseline
        ]
        sub = regular_subdivision(points, lifts)
        if is_primitive_triangulation(sub):
            logger.debug("primitive lift found after %d attempts", attempt + 1)
            return lifts
    raise PerturbationError(
        f"no primitive triangulation found in {config.primitive_search_attempts} attempts"
    )


def minkowski_face_decompositions(
    point_sets: Sequence[Sequence[Sequence[int]]],
) -> List[Tuple[int, Tuple[Tuple[int, ...], ...]]]:
    """Σ conv(A_i) の各面 Γ とその一意な分解 Γ = ΣΓ_i

    面を含むファセットの内法線の和 u を取り、Γ_i = argmin_{A_i} u を点番号で返す。
    戻り値は (面の次元, 各 i の点番号) のリスト（Δ 自身は u = 0）。
    """
    hulls = [convex_hull(ps) for ps in point_sets]
    summed = convex_hull(
        [
            tuple(map(sum, zip(*combo)))
            for combo in itertools.product(*(h.vertices for h in hulls))
        ]
    )
    bases = [tuple(ps[0]) for ps in point_sets]

    def linear(u: Sequence[int], p: Sequence[int], base: Sequence[int]) -> int:
        if summed.is_full_dimensional:
            return _dot(u, _sub(p, base))
        return _dot(u, integer_coordinates(summed.lattice_basis, _sub(p, base)))

    decompositions = []
    for face in summed.faces:
        vertex_set = set(face.vertices)
        u = [0] * summed.dim
        for facet in summed.facets:
            if vertex_set <= set(facet.vertices):
                u = [a + b for a, b in zip(u, facet.normal)]
        parts = []
        for ps, base in zip(point_sets, bases):
            values = [linear(u, p, base) for p in ps]
            low = min(values)
            parts.append(tuple(i for i, v in enumerate(values) if v == low))
        decompositions.append((face.dim, tuple(parts)))
    return decompositions
