import pytest

from linkforge.pipelines.bounds import (bipartite_stage_sizes, bound_bipartite, bound_key_q, bound_keydisc,
                                        vertex_budget_check)
from linkforge.simplicial import build_path, build_prism_sphere


def test_key_bounds():
    assert bound_key_q(1, 1) == 24
    assert bound_key_q(2, 1) == 96
    assert bound_key_q(1, 2) == 36
    with pytest.raises(ValueError):
        bound_key_q(0, 1)


def test_stage_sizes():
    assert bipartite_stage_sizes(1) == [4, 1]
    assert bipartite_stage_sizes(2) == [1024, 16, 2]
    for r in range(1, 6):
        sizes = bipartite_stage_sizes(r)
        assert sizes[-1] == r
        # each stage is at least half the square root of the previous one
        assert all(4 * b * b >= a for a, b in zip(sizes, sizes[1:]))
    with pytest.raises(OverflowError):
        bipartite_stage_sizes(40)


def test_budget():
    assert vertex_budget_check(1, 1) == (True, 7)
    assert vertex_budget_check(1, 2) == (True, 9)
    assert all(vertex_budget_check(q, n)[0] for q in range(1, 101) for n in range(1, 101))


def test_keydisc_matches_construction():
    for n, ell, r in ((1, 1, 1), (2, 2, 1), (2, 3, 2)):
        D = build_path(n, ell)
        d, t = D.complex.num_vertices(), len(D.complex.boundary_ridges())
        sphere = build_prism_sphere(D, 4 * r * r)
        assert bound_keydisc(r, n, d, t) == 4 * r * r * (2 * n + 4) + sphere.num_vertices()


def test_bipartite_bound():
    assert bound_bipartite(1, 1, 2, 2) == 4 * bound_keydisc(1, 1, 2, 2) + 4 + 3
