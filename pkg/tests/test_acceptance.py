"""Acceptance gate: one test per criterion, each timed against its budget.

Every criterion records a PASS/FAIL line; the lines are printed in the
terminal summary (see conftest.py) and when this file is run as a script.
"""
from __future__ import annotations

import functools
import random
import time
from math import comb

from morseforest.complex import builtin, from_maximal_faces, load_complex, random_complex
from morseforest.forests import (acyclic_fitting_orientation, count_acyclic_fitting_orientations,
                                 defect, enumerate_rooted_forests, forest_generating_polynomial,
                                 relative_homology_order)
from morseforest.linalg import betti_numbers, char_poly_shifted, laplacian
from morseforest.morse import (census_polynomial, enumerate_gradients, gradient_census,
                               realize_morse_function)
from morseforest.verify import (verify_graph_theorem, verify_kirchhoff_gradients,
                                verify_main_theorem, verify_matching_adjacency)

from oracles import DATA, connected_graphs, forest_shapes, labeled_forests

RESULTS: dict[int, str] = {}

# builtin instances: every named complex, the families over small parameters
BUILTINS = ([("cycle", n) for n in range(3, 8)] + [("path", n) for n in range(2, 8)]
            + [("star", n) for n in range(1, 7)] + [("complete", n) for n in range(2, 6)]
            + [("wheel", n) for n in range(4, 7)] + [("simplex", n) for n in range(1, 5)]
            + [("simplex_boundary", n) for n in range(2, 6)]
            + [("moebius", None), ("projective_plane", None), ("bipyramid", None)])


def criterion(number: int, title: str, budget: float | None = None):
    def wrap(fn):
        @functools.wraps(fn)
        def test():
            t0 = time.perf_counter()
            status, detail = "FAIL", ""
            try:
                fn()
                elapsed = time.perf_counter() - t0
                if budget is not None and elapsed >= budget:
                    detail = f"over budget: {elapsed:.2f}s >= {budget}s"
                    raise AssertionError(detail)
                status = "PASS"
            except AssertionError as exc:
                detail = detail or (str(exc).splitlines() or ["assertion failed"])[0]
                raise
            finally:
                elapsed = time.perf_counter() - t0
                limit = f" (budget {budget}s)" if budget is not None else ""
                line = f"[{status}] criterion {number:2d}: {title} in {elapsed:.2f}s{limit}"
                if detail and status == "FAIL":
                    line += f" -- {detail}"
                RESULTS[number] = line
                print(line)
        return test
    return wrap


@criterion(1, "cycle(4) graph identity, both sides λ^4+8λ^3+20λ^2+16λ", budget=1)
def test_c4_identity():
    r = verify_graph_theorem(builtin("cycle", 4))
    assert r.lhs == [0, 16, 20, 8, 1] and r.rhs == [0, 16, 20, 8, 1]
    assert r.verdict == "pass"


@criterion(2, "star(n) census equals C(n,k)(n+1-k), n = 2..6", budget=5)
def test_star_formula():
    for n in range(2, 7):
        counts = gradient_census(builtin("star", n)).counts
        for k in range(n + 1):
            assert counts[k] == comb(n, k) * (n + 1 - k), (n, k)


@criterion(3, "complete(4) has 64 = 16 x 4 gradients with beta_1 critical edges", budget=1)
def test_kirchhoff_k4():
    G = builtin("complete", 4)
    r = verify_kirchhoff_gradients(G)
    assert r.verdict == "pass"
    assert r.lhs == [64, 64] and r.witnesses[0]["spanning_trees"] == "16"
    assert gradient_census(G).counts[betti_numbers(G)[1]] == 64


@criterion(4, "Moebius strip: 125 vs 121 at λ^5, one defect forest of order 2", budget=10)
def test_moebius():
    K = builtin("moebius")
    lhs = char_poly_shifted(laplacian(K, 2))
    rhs = census_polynomial(gradient_census(K))
    assert list(lhs.coeffs) == [0, 0, 0, 0, 0, 125, 275, 225, 85, 15, 1]
    assert list(rhs.coeffs) == [0, 0, 0, 0, 0, 121, 275, 225, 85, 15, 1]
    d = defect(K, 5)
    assert d.epsilon == 4 and len(d.forests) == 1
    assert relative_homology_order(d.forests[0]) == 2


@criterion(5, "bipyramid: 1125 vs 1119 at λ^4, six defect forests of order 1", budget=10)
def test_bipyramid():
    K = builtin("bipyramid")
    lhs = char_poly_shifted(laplacian(K, 2))
    rhs = census_polynomial(gradient_census(K))
    assert list(lhs.coeffs) == [0, 0, 0, 0, 1125, 1425, 710, 174, 21, 1]
    assert list(rhs.coeffs) == [0, 0, 0, 0, 1119, 1425, 710, 174, 21, 1]
    d = defect(K, 4)
    assert d.epsilon == 6 and len(d.forests) == 6
    assert all(relative_homology_order(rf) == 1 for rf in d.forests)


@criterion(6, "orientable manifolds: all-zero deltas on two spheres and the octahedron file")
def test_orientable_manifolds():
    for K in (builtin("simplex_boundary", 3), load_complex(DATA / "octahedron.json"),
              builtin("simplex_boundary", 4)):
        t0 = time.perf_counter()
        r = verify_main_theorem(K)
        assert r.verdict == "pass" and not any(r.delta), K.name
        assert r.lhs == list(char_poly_shifted(laplacian(K, K.dim)).coeffs)
        assert r.rhs == list(census_polynomial(gradient_census(K)).coeffs)
        assert time.perf_counter() - t0 < 60, K.name


def _random_complexes(count=25, seed=2024):
    rng = random.Random(seed)
    return [random_complex(rng, rng.randint(4, 7), rng.randint(1, 8), dim=2, name=f"random-{i}")
            for i in range(count)]


@criterion(7, "forest generating polynomial equals det(Δ+λI) on builtins and 25 random complexes",
           budget=120)
def test_forest_polynomial():
    complexes = [builtin(name, n) for name, n in BUILTINS] + _random_complexes()
    for K in complexes:
        assert forest_generating_polynomial(K) == char_poly_shifted(laplacian(K, K.dim)), K.name


@criterion(8, "at most one acyclic fitting orientation per rooted forest with |F| <= 6; peeling agrees")
def test_uniqueness():
    for name, n in BUILTINS:
        K = builtin(name, n)
        for rf in enumerate_rooted_forests(K):
            if len(rf.forest) > 6:
                continue
            _, acyclic = count_acyclic_fitting_orientations(rf)
            assert acyclic <= 1, (K.name, rf.forest)
            found = acyclic_fitting_orientation(rf) is not None
            assert found == (acyclic == 1), (K.name, rf.forest)


@criterion(9, "realized Morse functions are valid and round-trip for every gradient, <= 12 top cells")
def test_morse_realization():
    complexes = [builtin(name, n) for name, n in BUILTINS]
    complexes = [K for K in complexes if len(K.cells(K.dim)) <= 12]
    for K in complexes:
        betti = betti_numbers(K)
        for M in enumerate_gradients(K):
            f = realize_morse_function(K, M)
            counts = f.all_local_counts(K)
            assert not f.violations(K, counts), (K.name, M)
            assert f.exclusivity_holds(K, counts), (K.name, M)
            assert f.weak_morse_inequalities(K, betti, counts), (K.name, M)
            assert f.induced_field(K) == M.pairs, (K.name, M)


@criterion(10, "projective plane has epsilon_5 > 0", budget=30)
def test_projective_plane():
    K = builtin("projective_plane")
    s = len(K.cells(1)) - len(K.cells(2))
    assert s == 5
    assert defect(K, s).epsilon > 0


@criterion(11, "graph identity on every labeled connected graph with <= 5 vertices", budget=60)
def test_graph_exhaustion():
    count = 0
    for n, edges in connected_graphs(5):
        G = from_maximal_faces([list(e) for e in edges])
        assert verify_graph_theorem(G).verdict == "pass", edges
        count += 1
    assert count == 1 + 4 + 38 + 728


@criterion(12, "Hasse adjacency polynomial from the Laplacian on every forest with <= 6 edges",
           budget=60)
def test_matching_adjacency():
    # every forest shape with at most 6 edges, plus all labelings on up to 6 vertices
    cases = list(forest_shapes(6)) + list(labeled_forests(5, max_vertices=6))
    for n, edges in cases:
        F = from_maximal_faces([list(e) for e in edges] + [[v] for v in range(n)])
        assert verify_matching_adjacency(F).verdict == "pass", edges


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(RESULTS[k] for k in sorted(RESULTS)))
