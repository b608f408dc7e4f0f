import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvtwins import (
    NodeState,
    Phase1Message,
    Phase2Message,
    ProblemParams,
    ProtocolError,
    RunConfig,
    Simulation,
    TwinWindow,
    all_windows,
    message_bits,
    pair_profile,
    run,
)

from .conftest import adjacent_twins_graph, path_graph, temporal_graphs


def test_send_phase1():
    state = NodeState(7, p=2, delta=1, d=0)
    assert state.send_message(0, 2) == Phase1Message(7, 2)


def test_send_phase2_forwards_verbatim():
    state = NodeState(1, p=2, delta=1, d=0)
    state.receive(Phase1Message(7, 3), 0)
    state.receive(Phase1Message(9, 1), 0)
    assert state.send_message(2, 2) == Phase2Message(((7, 3), (9, 1)))


def test_send_isolated_node_still_produces():
    state = NodeState(4, p=1, delta=1, d=0)
    assert state.send_message(0, 0) == Phase1Message(4, 0)


def test_send_after_termination():
    state = NodeState(0, p=2, delta=1, d=0)
    with pytest.raises(ProtocolError):
        state.send_message(4, 1)


def test_receive_phase1_appends():
    state = NodeState(0, p=4, delta=1, d=0)
    state.receive(Phase1Message(4, 7), 3)
    assert state.neighbour_reports[3] == [(4, 7)]


def test_receive_phase2_skips_self_entry():
    state = NodeState(1, p=1, delta=1, d=0)
    state.receive(Phase2Message(((5, 2), (1, 3))), 1)
    assert state.common_count == {5: 1}
    assert state.reported_degree == {5: 2}
    assert state.messages_this_round == 1


def test_receive_phase2_counts_forwarders():
    state = NodeState(1, p=1, delta=1, d=0)
    state.receive(Phase2Message(((5, 2),)), 1)
    state.receive(Phase2Message(((5, 2),)), 1)
    assert state.common_count == {5: 2}


def test_end_of_round_emits_window_on_p3():
    # Node 1 on the 3-path: the forwarded table names node 3 once.
    state = NodeState(1, p=1, delta=1, d=0)
    state.receive(Phase1Message(2, 2), 0)
    state.receive(Phase2Message(((3, 1), (1, 1))), 1)
    state.end_of_round(1, 1)
    assert state.twins_at[0] == {3}
    assert state.windows == {TwinWindow(3, 0)}
    assert state.realtime_log == [(TwinWindow(3, 0), 1)]
    assert state.common_count == {} and state.messages_this_round == 0


def test_end_of_round_outside_phase2():
    state = NodeState(0, p=2, delta=1, d=0)
    with pytest.raises(ProtocolError):
        state.end_of_round(0, 1)


def test_run_broken_when_candidate_unnamed():
    state = NodeState(0, p=2, delta=2, d=0)
    state.receive(Phase1Message(2, 2), 0)
    state.receive(Phase1Message(2, 2), 1)
    state.receive(Phase2Message(((5, 1),)), 2)
    state.end_of_round(2, 1)
    assert state.run_length == {5: 1}
    state.end_of_round(3, 1)  # nothing received: no common neighbour anywhere
    assert state.run_length == {}


def test_finalize_requires_all_rounds():
    state = NodeState(0, p=2, delta=1, d=0)
    with pytest.raises(ProtocolError):
        state.finalize()


def test_adjacent_twins_need_degree_correction():
    # Raw degrees would give 3 + 3 - 2*2 = 2; the corrected value is 0.
    g = adjacent_twins_graph()
    result = run(g, RunConfig(params=ProblemParams(1, 0)))
    assert TwinWindow(1, 0) in result.windows[0]
    assert TwinWindow(0, 0) in result.windows[1]


def test_finalize_recovers_wrapping_window(wrap_graph):
    params = ProblemParams(3, 0)
    sim = Simulation(wrap_graph, RunConfig(params=params))
    result = sim.run()
    assert result.windows[0] == {TwinWindow(1, 3)}
    # The wrapped start never appears in the real-time log.
    assert sim.states[0].realtime_log == []


def test_message_bits():
    assert message_bits(Phase1Message(0, 1), 5) == 10
    assert message_bits(Phase2Message(((1, 2), (3, 4), (5, 6))), 5) == 30
    with pytest.raises(TypeError):
        message_bits(object(), 5)


@given(temporal_graphs(max_n=8), st.integers(min_value=0, max_value=2))
@settings(max_examples=50, deadline=None)
def test_evaluated_values_match_reference(g, d):
    delta = min(2, g.p)
    sim = Simulation(g, RunConfig(params=ProblemParams(delta, d)), trace_values=True)
    sim.run()
    for v, state in sim.states.items():
        assert state.trace is not None
        for (t, twin_id), value in state.trace.items():
            assert value == pair_profile(g, v, twin_id, t).difference
        # Candidates evaluated at time t are exactly the nodes sharing a neighbour with v.
        for t in range(g.p):
            evaluated = {twin_id for (when, twin_id) in state.trace if when == t}
            with_common = {
                u
                for u in g.nodes
                if u != v and pair_profile(g, v, u, t).common_count >= 1
            }
            assert evaluated == with_common


@given(temporal_graphs(max_n=8))
@settings(max_examples=50, deadline=None)
def test_run_length_is_suffix_length(g):
    delta = min(2, g.p)
    sim = Simulation(g, RunConfig(params=ProblemParams(delta, 1)))
    for round_no in range(2 * g.p):
        sim.step()
        if round_no < g.p:
            continue
        t = round_no - g.p
        for state in sim.states.values():
            for twin_id, length in state.run_length.items():
                for back in range(length):
                    assert twin_id in state.twins_at[t - back]
                if t - length >= 0:
                    assert twin_id not in state.twins_at[t - length]


@given(temporal_graphs(max_n=8), st.integers(min_value=0, max_value=3))
@settings(max_examples=60, deadline=None)
def test_protocol_equals_reference(g, d):
    for delta in {1, g.p}:
        params = ProblemParams(delta, d)
        sim = Simulation(g, RunConfig(params=params))
        result = sim.run()
        assert result.windows == all_windows(g, params)
        # Real-time detections are exactly the non-wrapping subset.
        for v, state in sim.states.items():
            realtime = {w for w, _ in state.realtime_log}
            assert realtime <= result.windows[v]
            for w in result.windows[v] - realtime:
                assert w.start + delta > g.p
