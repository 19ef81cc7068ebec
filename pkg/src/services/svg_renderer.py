"""平面熱帯曲線の SVG 描画（線分・クリップした半直線・交点・双対細分）"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from lxml import etree

from src.config.constants import SVG_CONSTANTS
from src.config.defaults import DEFAULT_COMPUTATION_CONFIG, DEFAULT_SVG_STYLE
from src.config.settings import ComputationConfig
from src.exceptions import DimensionError, ValidationError
from src.models.tropical import TropicalPolynomial, TropicalSystem
from src.services.cayley import mixed_subdivision
from src.services.exact_math import solve_rational
from src.services.tropical import dual_subdivision, vertex_coordinates

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]
BBox = Tuple[Fraction, Fraction, Fraction, Fraction]


def parse_bbox(text: str) -> BBox:
    """"x0,y0,x1,y1" 形式のクリップ枠

    Raises:
        ValidationError: 形式が不正、または x0 ≥ x1 か y0 ≥ y1 の場合
    """
    try:
        x0, y0, x1, y1 = (Fraction(part.strip()) for part in text.split(","))
    except ValueError as e:
        raise ValidationError(f"invalid bounding box {text!r}") from e
    if x0 >= x1 or y0 >= y1:
        raise ValidationError(f"empty bounding box {text!r}")
    return x0, y0, x1, y1


def _ends(points: Sequence[int], exponents) -> Tuple[int, int]:
    """線分セルの両端の項番号"""
    ordered = sorted(points, key=lambda i: exponents[i])
    return ordered[0], ordered[-1]


class CurveGeometry:
    """一つの熱帯曲線の頂点・有界な辺・半直線・直線"""

    def __init__(self, f: TropicalPolynomial):
        self.f = f
        self.vertices: List[Point] = []
        self.segments: List[Tuple[Point, Point]] = []
        self.rays: List[Tuple[Point, Point]] = []  # (始点, 方向)
        self.lines: List[Tuple[Point, Point]] = []  # (通る点, 方向)
        self._build()

    def _build(self) -> None:
        data = dual_subdivision(self.f)
        exps = self.f.exponents
        if data.dual.dim == 1:
            self._build_lines(data)
            return
        if data.dual.dim == 0:
            return
        top = [c for c in data.cells if c.dim_sigma == 2]
        vertex_of = {c.points: vertex_coordinates(data, c) for c in top}
        self.vertices = sorted(set(vertex_of.values()))
        for edge in (c for c in data.cells if c.dim_sigma == 1):
            a, b = _ends(edge.points, exps)
            adjacent = [c for c in top if a in c.points and b in c.points]
            if len(adjacent) == 2:
                self.segments.append(
                    (vertex_of[adjacent[0].points], vertex_of[adjacent[1].points])
                )
                continue
            cell = adjacent[0]
            u = (exps[b][0] - exps[a][0], exps[b][1] - exps[a][1])
            direction = (-u[1], u[0])
            third = next(
                exps[i]
                for i in cell.points
                if (exps[i][0] - exps[a][0]) * u[1] != (exps[i][1] - exps[a][1]) * u[0]
            )
            if direction[0] * (third[0] - exps[a][0]) + direction[1] * (third[1] - exps[a][1]) > 0:
                direction = (-direction[0], -direction[1])
            self.rays.append((vertex_of[cell.points], tuple(map(Fraction, direction))))

    def _build_lines(self, data) -> None:
        exps, lifts = self.f.exponents, self.f.lifts
        for edge in (c for c in data.cells if c.dim_sigma == 1):
            a, b = _ends(edge.points, exps)
            u = (exps[b][0] - exps[a][0], exps[b][1] - exps[a][1])
            c = lifts[b] - lifts[a]
            norm = u[0] * u[0] + u[1] * u[1]
            anchor = (Fraction(c * u[0], norm), Fraction(c * u[1], norm))
            self.lines.append((anchor, (Fraction(-u[1]), Fraction(u[0]))))


def transversal_points(system: TropicalSystem) -> List[Point]:
    """二曲線ずつの横断的な交点（d_1 = d_2 = 1 の極大混合セル）"""
    points = set()
    for i, j in itertools.combinations(range(system.k), 2):
        pair = TropicalSystem(
            ambient_dim=2, polynomials=(system.polynomials[i], system.polynomials[j])
        )
        ms = mixed_subdivision(pair)
        for cell in ms.maximal_cells:
            if cell.component_dims != (1, 1) or cell.dim != 2:
                continue
            rows, rhs = [], []
            for f, comp in zip(pair.polynomials, cell.components):
                a, b = comp[0], comp[-1]
                rows.append(
                    [f.terms[b].exponent[m] - f.terms[a].exponent[m] for m in range(2)]
                )
                rhs.append(f.terms[b].lift - f.terms[a].lift)
            solution = solve_rational(rows, rhs)
            if solution is not None:
                points.add(tuple(solution))
    return sorted(points)


def _clip(origin: Point, direction: Point, bbox: BBox, ray: bool) -> Optional[Tuple[Point, Point]]:
    x0, y0, x1, y1 = bbox
    low, high = (Fraction(0) if ray else None), None
    for p, d, lo, hi in ((origin[0], direction[0], x0, x1), (origin[1], direction[1], y0, y1)):
        if d == 0:
            if not lo <= p <= hi:
                return None
            continue
        t1, t2 = sorted(((lo - p) / d, (hi - p) / d))
        low = t1 if low is None else max(low, t1)
        high = t2 if high is None else min(high, t2)
    if low is None or high is None or low > high:
        return None
    start = (origin[0] + low * direction[0], origin[1] + low * direction[1])
    end = (origin[0] + high * direction[0], origin[1] + high * direction[1])
    return start, end


def _default_bbox(curves: Sequence[CurveGeometry], markers: Sequence[Point], padding: int) -> BBox:
    points = [v for c in curves for v in c.vertices] + list(markers)
    points += [anchor for c in curves for anchor, _ in c.lines]
    if not points:
        points = [(Fraction(0), Fraction(0))]
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs) - padding, min(ys) - padding, max(xs) + padding, max(ys) + padding


def _tag(name: str) -> str:
    return f"{{{SVG_CONSTANTS['namespace']}}}{name}"


def render_svg(
    system: TropicalSystem,
    bbox: Optional[BBox] = None,
    dual: bool = False,
    config: Optional[ComputationConfig] = None,
) -> str:
    """平面の熱帯系を決定的な SVG 1.1 文書に変換

    Raises:
        DimensionError: n ≠ 2 の場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    if system.ambient_dim != 2:
        raise DimensionError("SVG output is available for n = 2 only")
    curves = [CurveGeometry(f) for f in system.polynomials]
    markers = transversal_points(system)
    bbox = bbox or _default_bbox(curves, markers, config.svg_padding)
    x0, y0, x1, y1 = bbox
    scale = config.svg_scale
    fmt = SVG_CONSTANTS["float_format"].format

    def sx(p: Point) -> str:
        return fmt(float((p[0] - x0) * scale))

    def sy(p: Point) -> str:
        return fmt(float((y1 - p[1]) * scale))

    root = etree.Element(
        _tag("svg"),
        {
            "version": SVG_CONSTANTS["version"],
            "width": fmt(float((x1 - x0) * scale)),
            "height": fmt(float((y1 - y0) * scale)),
            "font-family": DEFAULT_SVG_STYLE["font_family"],
        },
        nsmap={None: SVG_CONSTANTS["namespace"]},
    )

    def line(parent: etree._Element, a: Point, b: Point, attrs: Dict[str, str]) -> None:
        etree.SubElement(
            parent, _tag("line"), {"x1": sx(a), "y1": sy(a), "x2": sx(b), "y2": sy(b), **attrs}
        )

    if dual:
        group = etree.SubElement(
            root,
            _tag("g"),
            {
                "class": "dual",
                "stroke": config.svg_colors["dual"],
                "stroke-width": str(DEFAULT_SVG_STYLE["dual_width"]),
                "stroke-dasharray": "4 2",
            },
        )
        for f in system.polynomials:
            data = dual_subdivision(f)
            for edge in (c for c in data.cells if c.dim_sigma == 1):
                a, b = (
                    tuple(map(Fraction, f.exponents[i]))
                    for i in _ends(edge.points, f.exponents)
                )
                line(group, a, b, {})

    for idx, curve in enumerate(curves):
        group = etree.SubElement(
            root,
            _tag("g"),
            {
                "class": f"curve curve-{idx}",
                "stroke": config.svg_colors["curve"],
                "stroke-width": str(DEFAULT_SVG_STYLE["curve_width"]),
            },
        )
        for a, b in curve.segments:
            line(group, a, b, {})
        for origin, direction in curve.rays:
            clipped = _clip(origin, direction, bbox, ray=True)
            if clipped:
                line(group, *clipped, {"class": "ray"})
        for anchor, direction in curve.lines:
            clipped = _clip(anchor, direction, bbox, ray=False)
            if clipped:
                line(group, *clipped, {"class": "line"})

    if markers:
        group = etree.SubElement(
            root, _tag("g"), {"class": "intersections", "fill": config.svg_colors["marker"]}
        )
        for p in markers:
            etree.SubElement(
                group,
                _tag("circle"),
                {"cx": sx(p), "cy": sy(p), "r": str(DEFAULT_SVG_STYLE["marker_radius"])},
            )

    logger.debug(
        "svg: %d curves, %d markers, bbox %s", len(curves), len(markers), [str(v) for v in bbox]
    )
    return etree.tostring(root, encoding="unicode") + "\n"
