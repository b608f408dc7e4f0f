import pytest
from hypothesis import strategies as st

from tvtwins import TemporalGraph, generate_random, parse_tel

# Wrap fixture: pair (0, 1) shares neighbour 2 in every round but picks up an
# extra distinguishing edge at round 2, so with delta=3, d=0 the only valid
# window starts at 3 and straddles the period boundary.
WRAP_TEL = (
    "p=4 n=4\n"
    "0 0 2\n0 1 2\n"
    "1 0 2\n1 1 2\n"
    "2 0 2\n2 1 2\n2 0 3\n2 2 3\n"
    "3 0 2\n3 1 2\n"
)

P3_TEL = "p=1 n=3\n0 1 2\n0 2 3\n"


@pytest.fixture
def wrap_graph() -> TemporalGraph:
    return parse_tel(WRAP_TEL)


@pytest.fixture
def p3() -> TemporalGraph:
    return parse_tel(P3_TEL)


def path_graph(n: int) -> TemporalGraph:
    """Path 1-2-...-n as a period-1 graph."""
    edges = {0: {(i, i + 1) for i in range(1, n)}}
    return TemporalGraph(p=1, nodes=set(range(1, n + 1)), edges_at=edges)


def fig1_graph() -> TemporalGraph:
    """A 12-cycle a..l with shortcut copies c' of c and j' of j; j and j' are
    also adjacent.  Both (c, c') and (j, j') are 0-twins."""
    a, b, c, d, e, f, g, h, i, j, k, l, c2, j2 = range(14)
    cycle = [a, b, c, d, e, f, g, h, i, j, k, l]
    edges = {(cycle[x], cycle[(x + 1) % 12]) for x in range(12)}
    edges |= {(b, c2), (c2, d), (i, j2), (j2, k), (j, j2)}
    return TemporalGraph(p=1, nodes=set(range(14)), edges_at={0: edges})


def adjacent_twins_graph() -> TemporalGraph:
    """u=0 and v=1 adjacent, sharing neighbours 2 and 3, nothing else."""
    return TemporalGraph(
        p=1, nodes={0, 1, 2, 3}, edges_at={0: {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)}}
    )


@st.composite
def temporal_graphs(draw, max_n: int = 9, max_p: int = 4):
    n = draw(st.integers(min_value=2, max_value=max_n))
    p = draw(st.integers(min_value=1, max_value=max_p))
    prob = draw(st.sampled_from([0.0, 0.15, 0.35, 0.6, 1.0]))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return generate_random(n, p, prob, seed=seed)
