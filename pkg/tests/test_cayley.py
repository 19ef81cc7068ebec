import random

import pytest

from src.exceptions import ValidationError
from src.models.cayley import AdmissibleCollection
from src.services.cayley import (
    admissible_collections,
    cayley_configuration,
    cayley_trick,
    face_decompositions,
    face_system,
    is_admissible,
    is_nondegenerate_system,
    mixed_subdivision,
    mixed_subdivision_direct,
    purity_flags,
)
from src.services.polytope import convex_hull, mixed_volume
from src.services.tropical import build_polynomial, is_nondegenerate
from tests.conftest import (
    SIMPLEX_2,
    SQUARE,
    random_nondegenerate_pair,
    simplex_points,
    system_of,
)

IDENTITY_2 = [(1, 0), (0, 1)]


@pytest.fixture
def two_segments():
    segment = [(0,), (1,)]
    return system_of(build_polynomial(segment, [0, 0]), build_polynomial(segment, [0, 0]))


def _maximal_components(ms):
    return sorted(c.components for c in ms.maximal_cells)


def test_cayley_configuration_of_two_segments(two_segments):
    conf = cayley_configuration(two_segments)
    assert conf.points == ((0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1))
    assert conf.markers == (0, 0, 1, 1)
    assert conf.term_indices == (0, 1, 0, 1)
    assert conf.dim == 2


def test_cayley_configuration_dimensions(line, two_lines):
    single = cayley_configuration(system_of(line))
    assert all(p[-1] == 1 for p in single.points)
    assert single.dim == 2
    conf = cayley_configuration(two_lines)
    assert len(conf.points) == 6
    assert all(len(p) == 4 for p in conf.points)
    assert conf.dim == 3


def test_trivial_lifts_give_a_single_mixed_cell(two_segments):
    ms = mixed_subdivision(two_segments)
    assert ms.dim == 1
    (cell,) = ms.maximal_cells
    assert cell.components == ((0, 1), (0, 1))
    assert cell.dim == 1
    assert not cell.is_transversal


def test_two_lines_have_one_intersection_cell(two_lines):
    ms = mixed_subdivision(two_lines)
    assert ms.dim == 2
    assert _maximal_components(ms) == [
        ((0, 1, 2), (0,)),
        ((1, 2), (0, 1)),
        ((2,), (0, 1, 2)),
    ]
    crossing = [c for c in ms.maximal_cells if c.component_dims == (1, 1)]
    assert len(crossing) == 1
    assert crossing[0].is_intersection and crossing[0].is_transversal


def test_mixed_cells_include_lower_dimensional_faces(two_lines):
    ms = mixed_subdivision(two_lines)
    assert len(ms.cells) > len(ms.maximal_cells)
    for cell in ms.cells:
        assert all(comp for comp in cell.components)
        assert cell.dim <= ms.dim


def test_single_polynomial_mixed_subdivision_is_the_dual_subdivision(square_conic):
    ms = mixed_subdivision(system_of(square_conic))
    assert _maximal_components(ms) == [((0, 1, 2),), ((1, 2, 3),)]
    assert purity_flags(ms) == (True, True)


def test_purity_flags(two_lines, identical_lines):
    assert purity_flags(mixed_subdivision(two_lines)) == (True, True)
    assert purity_flags(mixed_subdivision(identical_lines)) == (False, False)


def test_pure_but_not_tight():
    system = system_of(
        build_polynomial(SQUARE, [0, 0, 0, 0]),
        build_polynomial([(0, 0)], [0]),
    )
    assert purity_flags(mixed_subdivision(system)) == (True, False)


def test_nondegenerate_systems(two_lines, identical_lines, line, square_conic):
    assert is_nondegenerate_system(two_lines)
    assert not is_nondegenerate_system(identical_lines)
    assert is_nondegenerate_system(system_of(line)) == is_nondegenerate(line)
    assert is_nondegenerate_system(system_of(square_conic)) == is_nondegenerate(
        square_conic
    )
    flat = build_polynomial(SQUARE, [0, 0, 0, 0])
    assert is_nondegenerate_system(system_of(flat)) == is_nondegenerate(flat)


@pytest.mark.parametrize("seed", range(6))
def test_cayley_trick_agrees_with_the_lifted_minkowski_sum(seed):
    rng = random.Random(seed)
    system = system_of(
        build_polynomial(SIMPLEX_2, [rng.randint(-5, 5) for _ in range(3)]),
        build_polynomial(simplex_points(2), [rng.randint(-5, 5) for _ in range(6)]),
    )
    via_cayley = mixed_subdivision(system)
    direct = mixed_subdivision_direct(system)
    assert _maximal_components(via_cayley) == _maximal_components(direct)
    assert via_cayley.dim == direct.dim


def test_direct_mixed_subdivision_of_degenerate_systems(identical_lines, two_segments):
    assert _maximal_components(mixed_subdivision_direct(identical_lines)) == [
        ((0, 1, 2), (0, 1, 2))
    ]
    assert _maximal_components(mixed_subdivision_direct(two_segments)) == [
        ((0, 1), (0, 1))
    ]


def test_cayley_trick_accepts_a_configuration(two_lines):
    ms = cayley_trick(cayley_configuration(two_lines))
    assert ms.k == 2 and ms.n == 2


def test_admissible_collections_of_a_triangle(line):
    collections = admissible_collections(system_of(line))
    assert len(collections) == 7
    assert all(c.indices == (0,) for c in collections)
    assert AdmissibleCollection(indices=(0,), faces=((0, 1, 2),)) in collections


def test_admissible_collections_of_two_segments(two_segments):
    collections = admissible_collections(two_segments)
    assert len(collections) == 9
    singles = [c for c in collections if len(c.indices) == 1]
    pairs = [c for c in collections if len(c.indices) == 2]
    assert len(singles) == 6
    assert sorted(c.faces for c in pairs) == [
        ((0,), (0,)),
        ((0, 1), (0, 1)),
        ((1,), (1,)),
    ]


def test_admissible_collections_pass_the_face_test(two_lines, line_conic):
    for system in (two_lines, line_conic):
        collections = admissible_collections(system)
        for indices in ((0,), (1,), (0, 1)):
            full = AdmissibleCollection(
                indices=indices,
                faces=tuple(
                    tuple(range(len(system.polynomials[i].terms))) for i in indices
                ),
            )
            assert full in collections
        assert all(is_admissible(system, c) for c in collections)


def test_is_admissible_rejects_bad_collections(two_lines):
    mismatched = AdmissibleCollection(indices=(0, 1), faces=((0,), (1,)))
    assert not is_admissible(two_lines, mismatched)
    assert not is_admissible(
        two_lines, AdmissibleCollection(indices=(2,), faces=((0,),))
    )
    assert not is_admissible(
        two_lines, AdmissibleCollection(indices=(1, 0), faces=((0,), (0,)))
    )


def test_face_system_of_the_full_collection_is_the_system(two_lines):
    full = AdmissibleCollection(indices=(0, 1), faces=((0, 1, 2), (0, 1, 2)))
    assert face_system(two_lines, full) == two_lines


def test_face_system_on_an_edge(two_lines):
    edge = AdmissibleCollection(indices=(0, 1), faces=((0, 1), (0, 1)))
    restricted = face_system(two_lines, edge)
    assert restricted.ambient_dim == 1
    assert [len(f.terms) for f in restricted.polynomials] == [2, 2]
    assert [f.lifts for f in restricted.polynomials] == [(0, 0), (0, 1)]


def test_face_system_on_a_vertex_gives_monomials(two_lines):
    vertex = AdmissibleCollection(indices=(0, 1), faces=((0,), (0,)))
    restricted = face_system(two_lines, vertex)
    assert restricted.ambient_dim == 0
    assert all(f.exponents == ((),) for f in restricted.polynomials)


def test_face_system_rejects_non_admissible_input(two_lines):
    with pytest.raises(ValidationError):
        face_system(
            two_lines, AdmissibleCollection(indices=(0, 1), faces=((0,), (1,)))
        )


def test_face_decompositions_follow_the_faces_of_the_sum(two_lines):
    decompositions = face_decompositions(two_lines)
    assert len(decompositions) == 7
    assert sorted(dim for dim, _ in decompositions) == [0, 0, 0, 1, 1, 1, 2]
    for _, adm in decompositions:
        assert adm.indices == (0, 1)
        assert is_admissible(two_lines, adm)


def test_nondegeneracy_is_inherited_by_face_systems(rng):
    system = random_nondegenerate_pair(SIMPLEX_2, simplex_points(2), rng)
    for adm in admissible_collections(system):
        assert is_nondegenerate_system(face_system(system, adm))


def test_mixed_volumes_of_cells_add_up(rng):
    for first, second, expected in (
        (SIMPLEX_2, SIMPLEX_2, 1),
        (SIMPLEX_2, simplex_points(2), 2),
        (SQUARE, SQUARE, 2),
    ):
        system = random_nondegenerate_pair(first, second, rng)
        ms = mixed_subdivision(system)
        total = sum(
            mixed_volume(
                [convex_hull(ms.component_points(cell, i)) for i in range(2)],
                [1, 1],
                IDENTITY_2,
            )
            for cell in ms.maximal_cells
        )
        assert total == expected
