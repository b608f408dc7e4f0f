import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvtwins import (
    NoCommonNeighbourError,
    ProblemParams,
    TemporalGraph,
    TwinWindow,
    all_windows,
    is_d_twin,
    pair_profile,
    prop1_check,
)

from .conftest import adjacent_twins_graph, fig1_graph, path_graph, temporal_graphs


def test_profile_p3():
    g = path_graph(3)
    assert pair_profile(g, 1, 3, 0) == (1, 1, 0)


def test_profile_p4():
    g = path_graph(4)
    # A = {2}, B = {2, 4}: one shared midpoint, one distinguishing neighbour.
    assert pair_profile(g, 1, 3, 0) == (2, 1, 1)


def test_profile_three_shared_one_apart():
    g = TemporalGraph(
        p=1,
        nodes=set(range(6)),
        edges_at={0: {(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (1, 5)}},
    )
    assert pair_profile(g, 0, 1, 0) == (4, 2, 2)


def test_profile_rejects_same_node():
    with pytest.raises(ValueError):
        pair_profile(path_graph(3), 2, 2, 0)


def test_is_d_twin_p3():
    assert is_d_twin(path_graph(3), 1, 3, 0, 0)


def test_is_d_twin_needs_common_neighbour():
    g = path_graph(4)
    for d in (0, 1, 5, 100):
        assert not is_d_twin(g, 1, 4, 0, d)


def test_fig1_shortcut_pairs_are_0_twins():
    g = fig1_graph()
    c, j, c2, j2 = 2, 9, 12, 13
    assert is_d_twin(g, c, c2, 0, 0)
    assert is_d_twin(g, j, j2, 0, 0)  # adjacent pair
    assert not is_d_twin(g, 0, 4, 0, 0)


def test_adjacent_twins():
    assert pair_profile(adjacent_twins_graph(), 0, 1, 0) == (2, 2, 0)
    assert is_d_twin(adjacent_twins_graph(), 0, 1, 0, 0)


def test_prop1_p3():
    assert prop1_check(path_graph(3), 1, 3, 0, 0)


def test_prop1_threshold():
    g = TemporalGraph(
        p=1,
        nodes=set(range(6)),
        edges_at={0: {(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (1, 5)}},
    )
    assert prop1_check(g, 0, 1, 0, 2)
    assert not prop1_check(g, 0, 1, 0, 1)
    # d >= k is always a twin regardless of the path count.
    assert prop1_check(g, 0, 1, 0, 4)
    assert prop1_check(g, 0, 1, 0, 99)


def test_prop1_requires_common_neighbour():
    with pytest.raises(NoCommonNeighbourError):
        prop1_check(path_graph(4), 1, 4, 0, 3)


def test_all_windows_wrap_fixture(wrap_graph):
    result = all_windows(wrap_graph, ProblemParams(3, 0))
    assert result[0] == {TwinWindow(1, 3)}
    assert result[1] == {TwinWindow(0, 3)}
    assert result[2] == set()
    assert result[3] == set()


def test_all_windows_p3(p3):
    result = all_windows(p3, ProblemParams(1, 0))
    assert result[1] == {TwinWindow(3, 0)}
    assert result[3] == {TwinWindow(1, 0)}
    assert result[2] == set()


def test_all_windows_full_period_reports_every_start():
    p = 3
    edges = {t: {(0, 2), (1, 2)} for t in range(p)}
    g = TemporalGraph(p=p, nodes={0, 1, 2}, edges_at=edges)
    result = all_windows(g, ProblemParams(p, 0))
    assert result[0] == {TwinWindow(1, t0) for t0 in range(p)}


def test_all_windows_rejects_delta_beyond_period(p3):
    with pytest.raises(ValueError):
        all_windows(p3, ProblemParams(2, 0))


@given(temporal_graphs(), st.integers(min_value=0, max_value=4))
@settings(max_examples=80)
def test_prop1_equals_set_route(g, d):
    for t in range(g.p):
        nodes = sorted(g.nodes)
        for i, u in enumerate(nodes):
            for v in nodes[i + 1 :]:
                profile = pair_profile(g, u, v, t)
                a = g.neighbours(u, t) - {u, v}
                b = g.neighbours(v, t) - {u, v}
                assert profile.difference == profile.union_size - profile.common_count
                assert profile.difference == len(a - b) + len(b - a)
                if profile.common_count >= 1:
                    assert prop1_check(g, u, v, t, d) == is_d_twin(g, u, v, t, d)


@given(temporal_graphs(), st.integers(min_value=0, max_value=3))
@settings(max_examples=60)
def test_twin_symmetry_and_monotonicity(g, d):
    nodes = sorted(g.nodes)
    for t in range(g.p):
        for i, u in enumerate(nodes):
            for v in nodes[i + 1 :]:
                assert is_d_twin(g, u, v, t, d) == is_d_twin(g, v, u, t, d)
                if is_d_twin(g, u, v, t, d):
                    assert is_d_twin(g, u, v, t, d + 1)


def _rotate(g: TemporalGraph, r: int) -> TemporalGraph:
    edges = {t: g.edges((t + r) % g.p) for t in range(g.p)}
    return TemporalGraph(p=g.p, nodes=g.nodes, edges_at=edges, n=g.n)


@given(temporal_graphs(max_n=7), st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=1))
@settings(max_examples=40)
def test_window_shift_under_rotation(g, r, d):
    delta = min(2, g.p)
    base = all_windows(g, ProblemParams(delta, d))
    rotated = all_windows(_rotate(g, r), ProblemParams(delta, d))
    for v in g.nodes:
        shifted = {TwinWindow(w.peer, (w.start - r) % g.p) for w in base[v]}
        assert rotated[v] == shifted


@given(temporal_graphs(max_n=6))
@settings(max_examples=40)
def test_all_windows_symmetric(g):
    params = ProblemParams(min(2, g.p), 1)
    result = all_windows(g, params)
    for u in g.nodes:
        for w in result[u]:
            assert TwinWindow(u, w.start) in result[w.peer]
