import json

import pytest
from hypothesis import given, settings, strategies as st

from linkforge.simplicial import (NPath, Simplex, SimplicialComplex, TriangulatedSphere, boundary_complex,
                                  boundary_of_simplex, build_path, build_prism_sphere, connect_sum_spheres,
                                  extra_facet_count, is_D_large, is_disc_candidate, load_disc,
                                  orient_consistently, path_subrange, sphere_problems, validate_path,
                                  vsphere_upper, vsphere_upper_counts)


def test_simplex_rejects_unsorted():
    with pytest.raises(ValueError):
        Simplex((2, 1))


@pytest.mark.parametrize("n,ell", [(1, 1), (1, 5), (2, 3), (3, 4)])
def test_path_counts(n, ell):
    p = build_path(n, ell)
    assert p.complex.num_vertices() == ell + n
    assert len(p.complex.boundary_ridges()) == ell * (n - 1) + 2
    assert validate_path(p)
    assert p.complex.is_consistently_oriented()


def test_path_argument_errors():
    with pytest.raises(ValueError):
        build_path(0, 3)
    with pytest.raises(ValueError):
        build_path(2, 0)


def test_path_subrange_is_disc():
    p = build_path(2, 5)
    sub = path_subrange(p, 2, 4)
    assert len(sub) == 3 and is_disc_candidate(sub)
    with pytest.raises(ValueError):
        path_subrange(p, 3, 2)


def test_mobius_band_is_not_orientable():
    band = [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 0), (4, 0, 1)]
    assert orient_consistently(2, band) is None


def test_boundary_of_simplex_is_sphere():
    for n in (1, 2, 3):
        s = boundary_of_simplex(n)
        assert len(s.facets) == n + 2
        assert s.complex.euler_characteristic() == 1 + (-1) ** n


def test_two_squares_make_hexagon():
    sq = TriangulatedSphere(boundary_complex(build_path(2, 2).complex))
    assert len(sq.facets) == 4
    hexagon = connect_sum_spheres(sq, sq.facets[0].vertices, sq, sq.facets[0].vertices)
    assert len(hexagon.facets) == 6
    assert not sphere_problems(hexagon.complex)


def test_connect_sum_with_simplex_boundary_adds_n_facets():
    for n in (1, 2, 3):
        s = build_prism_sphere(build_path(n, 2))
        t = boundary_of_simplex(n)
        out = connect_sum_spheres(s, s.facets[0].vertices, t, t.facets[0].vertices)
        assert len(out.facets) == len(s.facets) + n
        assert out.complex.euler_characteristic() == 1 + (-1) ** n


def test_not_a_sphere():
    with pytest.raises(ValueError):
        TriangulatedSphere(build_path(2, 3).complex)


def test_vsphere_counts():
    edge = build_path(1, 1)
    assert vsphere_upper(edge, 2) == 4
    assert vsphere_upper(edge, 0) == 4
    # the filler adds L new vertices: L = 4 here
    assert vsphere_upper(edge, 5) == 4 + 4
    assert vsphere_upper_counts(5, 7, 2, 0) == 10


@pytest.mark.parametrize("n,ell,m", [(1, 1, 5), (1, 3, 0), (2, 2, 9), (2, 3, 20), (3, 2, 20)])
def test_prism_sphere_invariants(n, ell, m):
    D = build_path(n, ell)
    s = build_prism_sphere(D, m)
    assert not sphere_problems(s.complex)
    assert s.num_vertices() == vsphere_upper(D, m)
    assert extra_facet_count(s) >= m
    assert s.copies.signs == (1, -1)
    assert is_D_large(s, D.complex) is not None


def test_simplex_boundary_is_not_large_for_long_path():
    n = 2
    assert is_D_large(boundary_of_simplex(n), build_path(n, n + 3).complex) is None


def test_hexagon_is_edge_large():
    sq = TriangulatedSphere(boundary_complex(build_path(2, 2).complex))
    hexagon = connect_sum_spheres(sq, sq.facets[0].vertices, sq, sq.facets[0].vertices)
    pair = is_D_large(hexagon, build_path(1, 1).complex)
    assert pair is not None
    a, b = pair.map(0), pair.map(1)
    assert not set(a.values()) & set(b.values())


def test_json_round_trip(tmp_path):
    p = build_path(3, 4)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(p.to_json()))
    back = load_disc(str(path))
    assert isinstance(back, NPath) and back == p
    c = SimplicialComplex.from_json(build_prism_sphere(p).complex.to_json())
    assert not sphere_problems(c)


def test_relabel_preserves_orientation_consistency():
    c = build_prism_sphere(build_path(2, 3)).complex
    mapping = {v: 100 - v for v in c.vertex_set()}
    r = c.relabel(mapping)
    assert r.is_consistently_oriented() and r.euler_characteristic() == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 6), st.integers(0, 20))
def test_prism_property(n, ell, m):
    D = build_path(n, ell)
    s = build_prism_sphere(D, m)
    assert s.num_vertices() == vsphere_upper(D, m)
    assert extra_facet_count(s) >= m
