from fractions import Fraction

import pytest

from src.exceptions import DimensionError, ValidationError
from src.services.svg_renderer import (
    CurveGeometry,
    parse_bbox,
    render_svg,
    transversal_points,
)
from src.services.tropical import build_polynomial
from tests.conftest import SIMPLEX_3, system_of


def test_line_has_three_rays_from_one_vertex(line):
    curve = CurveGeometry(line)
    assert curve.vertices == [(0, 0)]
    assert curve.segments == []
    assert sorted(direction for _, direction in curve.rays) == [(-1, 0), (0, -1), (1, 1)]
    assert all(origin == (0, 0) for origin, _ in curve.rays)


def test_square_conic_geometry(square_conic):
    curve = CurveGeometry(square_conic)
    assert curve.vertices == [(0, 0), (1, 1)]
    assert len(curve.segments) == 1
    assert set(curve.segments[0]) == {(0, 0), (1, 1)}
    assert len(curve.rays) == 4


def test_binomial_is_a_line():
    curve = CurveGeometry(build_polynomial([(0, 0), (1, 0)], [0, 1]))
    assert curve.vertices == [] and curve.rays == []
    assert curve.lines == [((1, 0), (0, 1))]


def test_transversal_points(two_lines, line_conic, identical_lines):
    assert transversal_points(two_lines) == [(1, 1)]
    assert transversal_points(line_conic) == [(1, 2), (4, 5)]
    assert transversal_points(identical_lines) == []


def test_parse_bbox():
    assert parse_bbox("-1, 0, 2, 3/2") == (-1, 0, 2, Fraction(3, 2))
    for bad in ("1,2,3", "a,b,c,d", "0,0,0,1"):
        with pytest.raises(ValidationError):
            parse_bbox(bad)


def test_render_line(line):
    document = render_svg(system_of(line))
    assert document.startswith("<svg")
    assert document.count('class="ray"') == 3
    assert 'class="dual"' not in document
    assert "<circle" not in document


def test_render_two_lines_with_dual(two_lines):
    document = render_svg(two_lines, dual=True)
    assert 'class="dual"' in document
    assert document.count("<circle") == 1
    assert 'class="curve curve-1"' in document


def test_rays_outside_the_box_are_dropped(line):
    document = render_svg(system_of(line), bbox=(Fraction(5), Fraction(-1), Fraction(6), Fraction(1)))
    assert document.count('class="ray"') == 0


def test_rendering_is_deterministic(line_conic):
    assert render_svg(line_conic, dual=True) == render_svg(line_conic, dual=True)


def test_render_needs_the_plane():
    surface = build_polynomial(SIMPLEX_3, [0, 0, 0, 0])
    with pytest.raises(DimensionError):
        render_svg(system_of(surface))
