"""Formed spaces, enumeration, and dual polar graph structure."""

import itertools
import random

import numpy as np
import pytest

from dualpolar.geometry import (
    DPGraph,
    Fq,
    FormedSpace,
    InstanceTooLarge,
    build_space,
    dual_polar_graph,
    enumerate_maximal_isotropics,
    export_edge_list,
    fq_nullspace,
    fq_rref,
    integral_q_power,
    max_isotropic_count,
)
from dualpolar.scalars import family_params

from conftest import get_graph


def test_fq_field_axioms():
    rng = random.Random(4)
    for q0 in (2, 3, 4, 5, 8, 9, 16):
        F = Fq(q0)
        els = list(range(q0))
        for _ in range(80):
            a, b, c = (rng.choice(els) for _ in range(3))
            assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
            assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            if a:
                assert F.mul(a, F.inv(a)) == 1
        # Frobenius is an automorphism
        for _ in range(20):
            a, b = rng.choice(els), rng.choice(els)
            assert F.frob[F.add(a, b)] == F.add(F.frob[a], F.frob[b])
            assert F.frob[F.mul(a, b)] == F.mul(F.frob[a], F.frob[b])


def test_fq_conjugation_involution():
    for q0 in (4, 9, 16):
        F = Fq(q0)
        r = F.p ** (F.k // 2)
        for a in range(q0):
            assert F.conj(F.conj(a)) == a
            assert F.conj(a) == F.pow(a, r)
        assert any(F.conj(a) != a for a in range(q0))


def test_f4_defining_polynomial():
    assert Fq(4).poly == (1, 1, 1)  # t^2 + t + 1


def test_fq_rref_and_nullspace():
    F = Fq(3)
    rows = [(1, 2, 0), (0, 1, 1)]
    red, piv = fq_rref(F, rows)
    assert piv == (0, 1)
    ns = fq_nullspace(F, rows, 3)
    assert len(ns) == 1
    # solution actually annihilates the rows
    for w in ns:
        for r in rows:
            acc = 0
            for a, b in zip(r, w):
                acc = F.add(acc, F.mul(a, b))
            assert acc == 0


def test_build_space_errors():
    with pytest.raises(ValueError, match="square"):
        build_space("2A-odd", 3, 3)
    with pytest.raises(ValueError):
        build_space("X", 2, 3)
    with pytest.raises(ValueError):
        build_space("C", 6, 3)  # not a prime power


def test_standard_spaces():
    sp = build_space("C", 2, 3)
    assert (sp.n, sp.params.e) == (6, 1)
    sp = build_space("2A-odd", 4, 3)
    assert (sp.n, sp.params.e) == (6, 0.5)
    sp = build_space("D", 2, 3)
    assert (sp.n, sp.params.e) == (6, 0)
    sp = build_space("2D", 2, 3)
    assert sp.n == 8
    sp = build_space("B", 2, 3)
    assert sp.n == 7
    sp = build_space("2A-even", 4, 3)
    assert sp.n == 7


ENUM_CASES = [
    ("C", 2, 3, 135),
    ("B", 2, 3, 135),
    ("D", 2, 3, 30),
    ("2D", 2, 3, 765),
    ("2A-odd", 4, 3, 891),
    ("C", 3, 3, 1120),
    ("D", 2, 4, 270),
]


@pytest.mark.parametrize("tag,q0,D,expected", ENUM_CASES)
def test_enumeration_counts_match_product_oracle(tag, q0, D, expected):
    params = family_params(tag, D)
    assert max_isotropic_count(params, q0) == expected
    g = get_graph(tag, q0, D)
    assert g.size == expected


def _all_rref_subspaces(F, n, k):
    """Every k-dimensional subspace of Fq^n, by rref pivot patterns."""
    for pivots in itertools.combinations(range(n), k):
        free = [
            (r, c)
            for r in range(k)
            for c in range(n)
            if c > pivots[r] and c not in pivots
        ]
        for vals in itertools.product(range(F.q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r in range(k):
                rows[r][pivots[r]] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


@pytest.mark.parametrize("tag,q0,D", [("C", 2, 3), ("B", 2, 3), ("D", 2, 3), ("2D", 2, 3)])
def test_enumeration_against_exhaustive_search(tag, q0, D):
    """Independent oracle: filter all D-subspaces (rref enumeration)."""
    sp = build_space(tag, q0, D)
    brute = {
        rows
        for rows in _all_rref_subspaces(sp.F, sp.n, D)
        if sp.subspace_isotropic(rows)
    }
    enum = {v.rows for v in enumerate_maximal_isotropics(sp)}
    assert enum == brute


def test_enumeration_deterministic_order():
    sp = build_space("D", 2, 3)
    a = enumerate_maximal_isotropics(sp)
    b = enumerate_maximal_isotropics(sp)
    assert [v.rows for v in a] == [v.rows for v in b]
    assert [v.rows for v in a] == sorted(v.rows for v in a)


def test_vertex_cap():
    sp = build_space("C", 3, 3)
    with pytest.raises(InstanceTooLarge):
        enumerate_maximal_isotropics(sp, max_vertices=100)


@pytest.mark.parametrize("tag,q0,D", [("C", 2, 3), ("D", 2, 3), ("2D", 2, 3)])
def test_graph_structure(tag, q0, D):
    g = get_graph(tag, q0, D)
    params = g.params
    # no self loops; distance equals D - dim(intersection) for all pairs
    assert not np.any(np.diag(g.adjacency))
    assert np.all(g.distance == g.subspace_distance)
    # valency b0 = q^e [D]
    b0 = integral_q_power(q0, params.e) * (q0**D - 1) // (q0 - 1)
    assert set(g.adjacency.sum(axis=1).tolist()) == {b0}
    # distance distribution independent of the vertex
    rows = {tuple(sorted(np.bincount(g.distance[i]).tolist())) for i in range(g.size)}
    assert len(rows) == 1


@pytest.mark.parametrize("tag,q0,D", [("C", 2, 3), ("D", 2, 3)])
def test_unique_maximal_clique_per_edge(tag, q0, D):
    """Every edge lies in a unique maximal clique of size 1 + q^e, namely the
    vertices containing the (D-1)-dimensional intersection."""
    g = get_graph(tag, q0, D)
    adj = g.adjacency
    size = 1 + integral_q_power(q0, g.params.e)
    edges = [(u, v) for u in range(g.size) for v in range(u + 1, g.size) if adj[u, v]]
    for u, v in edges:
        common = np.nonzero(adj[u] & adj[v])[0]
        members = [u, v] + list(common)
        assert len(members) == size
        for a, b in itertools.combinations(members, 2):
            assert adj[a, b]


def test_export_edge_list_format():
    g = get_graph("D", 2, 3)
    text = export_edge_list(g)
    lines = text.strip().split("\n")
    assert lines[0] == "# D 2 3 30"
    assert len(lines) - 1 == int(g.adjacency.sum()) // 2
    u, v = map(int, lines[1].split())
    assert g.adjacency[u, v]
