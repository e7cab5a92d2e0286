import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgbraid.generate import GenParams, random_sliced, random_word
from sgbraid.graph import (
    OrientedGraph,
    components,
    degree_profile,
    euler_characteristic,
)
from sgbraid.sliced import Cross, SlicedDiagram, load_sliced, validate_sliced
from sgbraid.smoothing import (
    UnionFind,
    complex_stats,
    cycle_reduction,
    mu,
    reduction_inequality_check,
    smooth,
    smoothing_report,
)
from sgbraid.word import GraphBraidWord, VLetter, XLetter, closure

SMALL = GenParams(max_edges=6, max_crossings=6, max_vertices=3, max_events=20)


def trefoil():
    return closure(GraphBraidWord(2, ("k", "k"), (XLetter(1, 1),) * 3, "trefoil"))


def two_vertex(n_each=2):
    a_b = tuple(f"e{i}" for i in range(1, n_each + 1))
    b_a = tuple(f"e{i}" for i in range(n_each + 1, 2 * n_each + 1))
    W = GraphBraidWord(n_each, b_a, (VLetter("a", 1, b_a, a_b), VLetter("b", 1, a_b, b_a)), "two")
    return closure(W)


def test_union_find_groups():
    uf = UnionFind(range(5))
    uf.union(0, 1)
    uf.union(3, 4)
    uf.union(1, 4)
    assert sorted(map(sorted, uf.groups())) == [[0, 1, 3, 4], [2]]


def test_crossing_free_theta(data_dir):
    st_ = complex_stats(smooth(load_sliced(str(data_dir / "theta.sgs"))))
    assert (st_.mu, st_.chi, st_.beta1) == (1, -1, 2)


def test_trefoil_two_circles():
    st_ = complex_stats(smooth(trefoil()))
    assert (st_.mu, st_.chi, st_.beta1) == (2, 0, 2)


def test_hopf_report(data_dir):
    rep = smoothing_report(load_sliced(str(data_dir / "hopf.sgs"))).as_dict()
    assert rep == {"mu": 2, "chi_graph": 0, "beta1": 2, "prop2_ok": True, "chi_preserved": True}


def test_trivial_example_report(data_dir):
    rep = smoothing_report(load_sliced(str(data_dir / "trivial-example1.sgs")))
    assert rep.mu == 1 and rep.chi_graph == -6 and rep.prop2_ok and rep.chi_preserved


def test_empty_complex():
    S = SlicedDiagram(OrientedGraph.build([], []), (), "empty")
    st_ = complex_stats(smooth(S))
    assert (st_.mu, st_.chi, st_.beta1) == (0, 0, 0)


def _link_components(S):
    prof = degree_profile(S.graph)
    assert all(prof.indeg[v] == prof.outdeg[v] == 1 for v in S.graph.vertices)
    return len(components(S.graph)) + len(S.graph.circles)


def test_reduction_of_four_edge_graph():
    S = two_vertex(2)
    R = cycle_reduction(S, ["e1", "e3"])
    assert validate_sliced(R).ok and _link_components(R) == 2


def test_reduction_of_trivial_example(data_dir):
    S = load_sliced(str(data_dir / "trivial-example1.sgs"))
    R = cycle_reduction(S, ["e1", "e5"])
    assert validate_sliced(R).ok and _link_components(R) == 4
    chk = reduction_inequality_check(S, ["e1", "e5"])
    assert (chk.mu_d, chk.mu_reduced, chk.indeg_excess, chk.chi_graph) == (1, 4, 6, -6)
    assert chk.identity_ok and chk.inequality_ok and chk.chi_form_ok


def test_reduction_of_single_cycle(data_dir):
    S = load_sliced(str(data_dir / "loop.sgs"))
    R = cycle_reduction(S, ["e"])
    assert [type(ev) for ev in R.events] == [type(ev) for ev in S.events]
    chk = reduction_inequality_check(S, ["e"])
    assert chk.mu_d == chk.mu_reduced and chk.indeg_excess == 0


def test_reduction_rejects_bad_input(data_dir):
    S = load_sliced(str(data_dir / "trivial-example1.sgs"))
    with pytest.raises(ValueError):
        cycle_reduction(S, ["e1", "e2"])
    with pytest.raises(ValueError):
        reduction_inequality_check(load_sliced(str(data_dir / "theta.sgs")), ["t1"])


@given(st.integers(0, 10**6))
def test_smoothing_invariants(seed):
    S = random_sliced(random.Random(seed), SMALL)
    st_ = complex_stats(smooth(S))
    chi = euler_characteristic(S.graph)
    assert st_.chi == chi and st_.mu >= max(1, chi)
    # over/under data plays no role
    flipped = S.with_events(Cross(ev.pos, "r" if ev.over == "l" else "l") if isinstance(ev, Cross) else ev
                            for ev in S.events)
    assert smooth(flipped) == smooth(S)


@given(st.integers(0, 10**6))
def test_closed_braid_seifert_circles(seed):
    W = random_word(random.Random(seed), max_vertices=0)
    assert mu(closure(W)) == W.strands0


@given(st.integers(0, 10**6))
def test_reduction_on_random_circulating_words(seed):
    from sgbraid.graph import find_cycles
    W = random_word(random.Random(seed), circulating=True, max_strands=4, max_vertices=3)
    S = closure(W)
    cycles = find_cycles(S.graph).oriented_cycles
    if not cycles:
        return
    R = cycle_reduction(S, cycles[0])
    assert validate_sliced(R).ok
    added = len(R.crossing_indices) - len(S.crossing_indices)
    assert len(R.events) <= len(S.events) + 4 * added + sum(max(len(v.ins), 1) - 1 for v in S.events
                                                            if hasattr(v, "vertex"))
    chk = reduction_inequality_check(S, cycles[0])
    assert chk.identity_ok and chk.inequality_ok
