import random
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from morseforest.complex import (builtin, from_maximal_faces, is_pseudomanifold, load_complex,
                                 random_complex)
from morseforest.forests import defects
from morseforest.verify import (conjecture_scan, matching_counts, random_pseudomanifolds,
                                spanning_tree_count, verify_graph_theorem,
                                verify_kirchhoff_gradients, verify_main_theorem,
                                verify_matching_adjacency)

from oracles import DATA, biggs_forest_poly, to_nx


def _graph(edges, n=None):
    faces = [list(e) for e in edges]
    if n is not None:
        faces += [[v] for v in range(n)]
    return from_maximal_faces(faces)


def test_c4_graph_theorem():
    r = verify_graph_theorem(builtin("cycle", 4))
    assert r.lhs == r.rhs == [0, 16, 20, 8, 1]
    assert r.verdict == "pass" and r.theorem == "graph"


def test_star4_coefficients():
    r = verify_graph_theorem(builtin("star", 4))
    assert r.verdict == "pass"
    # k critical edges sit at lambda^(k+1) since there is one more vertex than edges
    assert [r.lhs[k + 1] for k in range(5)] == [comb(4, k) * (5 - k) for k in range(5)]


def test_graph_theorem_rejects_higher_dimension():
    with pytest.raises(ValueError):
        verify_graph_theorem(builtin("simplex", 2))


random_graph_edges = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda e: e[0] != e[1]),
                              min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(random_graph_edges)
def test_graph_theorem_on_random_graphs(edges):
    G = _graph({tuple(sorted(e)) for e in edges})
    r = verify_graph_theorem(G)
    assert r.verdict == "pass"
    # Laplacian side also matches the spanning-forest expansion
    b = biggs_forest_poly(G)
    assert r.lhs == b[:len(r.lhs)] and not any(b[len(r.lhs):])


def test_moebius_main_theorem():
    r = verify_main_theorem(builtin("moebius"))
    assert r.verdict == "fail"
    assert [(i, d) for i, d in enumerate(r.delta) if d] == [(5, 4)]
    (w,) = r.witnesses
    assert w["root_size"] == 5 and w["epsilon"] == "4" and len(w["forests"]) == 1


def test_bipyramid_main_theorem():
    r = verify_main_theorem(builtin("bipyramid"))
    assert [(i, d) for i, d in enumerate(r.delta) if d] == [(4, 6)]
    assert len(r.witnesses[0]["forests"]) == 6


@pytest.mark.parametrize("K", [builtin("simplex_boundary", 3), builtin("simplex_boundary", 4)],
                         ids=["sphere2", "sphere3"])
def test_orientable_spheres_pass(K):
    r = verify_main_theorem(K)
    assert r.verdict == "pass" and not any(r.delta) and r.witnesses == []


def test_octahedron_passes():
    assert verify_main_theorem(load_complex(DATA / "octahedron.json")).verdict == "pass"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_deltas_are_epsilons_and_nonnegative(seed):
    rng = random.Random(seed)
    K = random_complex(rng, rng.randint(4, 6), rng.randint(2, 7), dim=2)
    r = verify_main_theorem(K)
    eps = [d.epsilon for d in defects(K)]
    assert all(x >= 0 for x in r.delta)
    assert r.delta == eps[:len(r.delta)]
    assert not any(eps[len(r.delta):])


@pytest.mark.parametrize("name,n,count,tau", [("complete", 4, 64, 16), ("cycle", 4, 16, 4),
                                               ("path", 5, 5, 1), ("wheel", 5, 225, 45)])
def test_kirchhoff(name, n, count, tau):
    G = builtin(name, n)
    r = verify_kirchhoff_gradients(G)
    assert r.verdict == "pass"
    assert r.lhs == [count, count]
    assert spanning_tree_count(G) == tau == round(nx.number_of_spanning_trees(to_nx(G)))


def test_kirchhoff_rejects_disconnected():
    with pytest.raises(ValueError, match="connected"):
        verify_kirchhoff_gradients(_graph([(0, 1), (2, 3)]))


def test_matching_adjacency_single_edge():
    r = verify_matching_adjacency(builtin("path", 2))
    # Hasse diagram of one edge is a path on three vertices
    assert r.lhs == r.rhs == [0, -2, 0, 1]
    assert r.verdict == "pass"


@pytest.mark.parametrize("name,n", [("star", 3), ("path", 4), ("path", 6), ("star", 5)])
def test_matching_adjacency_passes(name, n):
    assert verify_matching_adjacency(builtin(name, n)).verdict == "pass"


def test_matching_adjacency_isolated_vertices():
    assert verify_matching_adjacency(_graph([(0, 1), (3, 4)], n=6)).verdict == "pass"


def test_matching_adjacency_rejects_cycles():
    with pytest.raises(ValueError, match="not a forest"):
        verify_matching_adjacency(builtin("cycle", 3))


def test_matching_counts_against_networkx():
    G = builtin("path", 5)
    counts = matching_counts(G)
    assert counts == [1, 4, 3]
    H = to_nx(G)
    assert counts[2] == sum(1 for m in nx.enumerate_all_cliques(nx.complement(nx.line_graph(H)))
                            if len(m) == 2)


def test_report_json_schema():
    r = verify_main_theorem(builtin("moebius"))
    out = r.to_json()
    assert set(out) == {"complex", "theorem", "lhs", "rhs", "delta", "witnesses", "verdict", "ms"}
    assert all(isinstance(x, str) for k in ("lhs", "rhs", "delta") for x in out[k])
    assert isinstance(out["ms"], int)
    assert "ms" not in r.to_json(timing=False)


def test_conjecture_scan_builtins():
    rows = {r.complex: r for r in conjecture_scan("builtins")}
    s = rows["simplex_boundary(3)"]
    assert s.pseudomanifold and s.orientable and s.identity_holds
    rp = rows["projective_plane"]
    assert rp.pseudomanifold and rp.orientable is False and rp.identity_holds is False
    assert rp.report.delta[5] > 0
    bp = rows["bipyramid"]
    assert not bp.pseudomanifold and bp.identity_holds is False


def test_conjecture_scan_skips_over_guard():
    rows = conjecture_scan("builtins", guard=12)
    assert any(r.identity_holds is None and r.agrees is None for r in rows)


def test_conjecture_scan_random_is_seeded():
    a = [r.to_json() for r in conjecture_scan("random", count=3, seed=7)]
    b = [r.to_json() for r in conjecture_scan("random", count=3, seed=7)]
    assert a == b and len(a) == 3
    assert all(r["pseudomanifold"] for r in a)


def test_conjecture_scan_unknown_family():
    with pytest.raises(ValueError):
        conjecture_scan("tori")


def test_random_pseudomanifolds_are_pseudomanifolds():
    for K in random_pseudomanifolds(4, seed=1):
        assert is_pseudomanifold(K)[0]
