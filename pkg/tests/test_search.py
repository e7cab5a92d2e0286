import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgbraid.generate import GenParams, random_sliced
from sgbraid.graph import graphs_equal_labeled
from sgbraid.layout import disjoint_cycle_pairs
from sgbraid.search import (
    ADD_KINDS,
    NEUTRAL_KINDS,
    REMOVE_KINDS,
    b_bounds,
    bounds,
    enumerate_moves,
    hook_trees,
    minimize_smoothing,
    minimize_with_hooks,
    parse_oracle,
    s_bounds,
    s_certificate_circulating,
    smoothing_floor,
)
from sgbraid.sliced import linking_number, load_sliced, validate_sliced
from sgbraid.smoothing import mu

SMALL = GenParams(max_edges=5, max_crossings=5, max_vertices=3, max_events=16)


def load(data_dir, name):
    return load_sliced(data_dir / f"{name}.sgs")


def test_move_kinds_are_partitioned():
    assert not set(REMOVE_KINDS) & set(NEUTRAL_KINDS)
    assert not set(NEUTRAL_KINDS) & set(ADD_KINDS)


def test_kinks_are_removable(data_dir):
    S = load(data_dir, "theta-kinked")
    kinds = {m.kind for m in enumerate_moves(S)}
    assert {"R1-remove", "R2-remove"} <= kinds
    for m in enumerate_moves(S, list(REMOVE_KINDS)):
        E = m.apply(S)
        assert len(E.events) < len(S.events) and validate_sliced(E).ok


def test_kind_filter(data_dir):
    S = load(data_dir, "hopf")
    assert {m.kind for m in enumerate_moves(S, ["exchange"])} == {"exchange"}
    assert enumerate_moves(S, ["R1-remove"]) == []


@pytest.mark.parametrize("name", ["hopf", "forest-cycle", "theta-kinked", "path-with-cycle"])
def test_every_move_is_an_isotopy(data_dir, name):
    S = load(data_dir, name)
    pairs = disjoint_cycle_pairs(S, limit=20)
    for m in enumerate_moves(S):
        E = m.apply(S)
        assert validate_sliced(E).ok, str(m)
        assert graphs_equal_labeled(E.graph, S.graph)
        for c1, c2 in pairs:
            assert linking_number(E, c1, c2) == linking_number(S, c1, c2), str(m)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_random_moves_are_isotopies(seed):
    rng = random.Random(seed)
    S = random_sliced(rng, SMALL)
    moves = enumerate_moves(S)
    pairs = disjoint_cycle_pairs(S, limit=10)[:4]
    for m in rng.sample(moves, min(8, len(moves))):
        E = m.apply(S)
        assert validate_sliced(E).ok, str(m)
        assert graphs_equal_labeled(E.graph, S.graph)
        assert mu(E) >= smoothing_floor(S.graph)
        for c1, c2 in pairs:
            assert linking_number(E, c1, c2) == linking_number(S, c1, c2)


def test_minimize_theta_kinked(data_dir):
    S = load(data_dir, "theta-kinked")
    res = minimize_smoothing(S, budget=5000, depth=4)
    assert res.mu == 1 and not res.exhausted
    assert res.moves and validate_sliced(res.diagram).ok
    assert mu(res.diagram) == 1


def test_minimize_is_deterministic(data_dir):
    S = load(data_dir, "path-with-cycle")
    a = minimize_smoothing(S, budget=3000, depth=4)
    b = minimize_smoothing(S, budget=3000, depth=4)
    assert (a.mu, a.visited, a.moves) == (b.mu, b.visited, b.moves)
    assert a.diagram.key() == b.diagram.key()


def test_minimize_respects_budget(data_dir):
    S = load(data_dir, "hopf")
    res = minimize_smoothing(S, budget=50, depth=6)
    assert res.visited <= 50 and res.exhausted
    assert res.mu == 2


def test_minimize_rejects_negative_budget(data_dir):
    with pytest.raises(ValueError):
        minimize_smoothing(load(data_dir, "loop"), budget=-1)


def test_zero_budget_returns_input(data_dir):
    S = load(data_dir, "theta-kinked")
    res = minimize_smoothing(S, budget=0, depth=0)
    assert res.diagram is S and res.mu == mu(S) and res.moves == ()


def test_hook_trees(data_dir):
    S = load(data_dir, "forest-cycle")
    assert mu(S) == 2
    H = hook_trees(S, [("u", "c1")])
    assert validate_sliced(H).ok
    assert graphs_equal_labeled(H.graph, S.graph)
    assert mu(H) == 1


def test_hook_trees_errors(data_dir):
    S = load(data_dir, "forest-cycle")
    with pytest.raises(ValueError, match="not a tree"):
        hook_trees(S, [("z", "f1")])
    with pytest.raises(ValueError, match="outside the tree"):
        hook_trees(S, [("u", "f1")])
    with pytest.raises(ValueError, match="unknown vertex"):
        hook_trees(S, [("q", "c1")])


def test_minimize_with_hooks(data_dir):
    S = load(data_dir, "forest-cycle")
    res = minimize_with_hooks(S, budget=2000, depth=4)
    assert res.mu == 1
    assert res.moves[0] == "hook u onto c1"


def test_parse_oracle():
    assert parse_oracle("cycle=e1,e2:bridge=3") == (["e1", "e2"], 3)
    for bad in ("cycle=e1", "loop=e1:bridge=2", "cycle=e1:bridge=x"):
        with pytest.raises(ValueError):
            parse_oracle(bad)


def test_s_bounds_non_circulating(data_dir):
    rep = s_bounds(load(data_dir, "theta-kinked"), budget=5000, depth=4)
    assert rep.s_lower == rep.s_upper == 1 and rep.s_exact


def test_s_bounds_circulating_not_exact(data_dir):
    rep = s_bounds(load(data_dir, "hopf"), budget=200, depth=2)
    assert not rep.s_exact and rep.s_lower == 1 and rep.s_upper == 2


def test_b_bounds_with_oracle(data_dir):
    S = load(data_dir, "hopf")
    # the loop a is a round unknot cycle: bridge index 1 and no sources
    rep = b_bounds(S, [(["a"], 1)])
    assert rep.b_upper == 2 and rep.b_lower == 1
    with pytest.raises(ValueError):
        b_bounds(S, [(["zz"], 2)])
    # in the theta, t1 and t2 both leave a, so the cycle has one source
    rep = b_bounds(load(data_dir, "theta"), [(["t1", "t2"], 1)])
    assert rep.b_lower == 1
    assert any("sources 1" in n for n in rep.notes)


def test_bounds_merges(data_dir):
    rep = bounds(load(data_dir, "trivial-example1"), budget=100, depth=2).as_dict()
    assert rep["b_upper"] == 4
    assert rep["s_lower"] == 1 and rep["s_upper"] >= 1
    assert any("b_upper" in n for n in rep["notes"])


def test_circulating_certificate(data_dir):
    S = load(data_dir, "hopf")
    cert = s_certificate_circulating(S, ["a"], 1)
    assert cert.holds and cert.bound == 1 and cert.mu == 2
    with pytest.raises(AssertionError):
        s_certificate_circulating(S, ["a"], 5)
    with pytest.raises(ValueError):
        s_certificate_circulating(load(data_dir, "theta"), ["t1"], 1)
