import random

from hypothesis import given, settings

from vrsp import Graph, Label, is_isomorphic
from vrsp.iso import IsoWitness

from .conftest import FIGURES, dags, fixture_doc, path, renamed
from .oracles import brute_isomorphic


def test_renamed_copy_is_isomorphic(fig1):
    h = renamed(fig1.graph, seed=3)
    w = is_isomorphic(fig1.graph, h)
    assert w is not None and w.validates(fig1.graph, h)
    assert w.inverse().validates(h, fig1.graph)


def test_different_label_not_isomorphic():
    assert is_isomorphic(path("a"), path("b")) is None
    assert is_isomorphic(path("a"), Graph(["p0", "p1"], [("p0", "p1", Label("a", 2))])) is None


def test_size_mismatch(fig1, fig4):
    assert is_isomorphic(fig1.graph, fig4.graph) is None


def test_empty_graphs():
    w = is_isomorphic(Graph(), Graph())
    assert w is not None and w.pairs() == []


def test_witness_rejects_bad_map():
    g = path("a", "b")
    bad = IsoWitness({"p0": "p1", "p1": "p0", "p2": "p2"})
    assert not bad.validates(g, g)


def test_fixture_iso_relation_properties():
    docs = [fixture_doc(n).graph for n in FIGURES]
    copies = [renamed(g, seed=k) for k, g in enumerate(docs)]
    for g, c in zip(docs, copies):
        assert is_isomorphic(g, g) is not None
        w = is_isomorphic(g, c)
        assert w.inverse().validates(c, g)
        c2 = renamed(c, seed=99, prefix="s")
        w2 = is_isomorphic(c, c2)
        composed = IsoWitness({v: w2.vertex_map[w.vertex_map[v]] for v in g.vertex_ids})
        assert composed.validates(g, c2)
    for i, g in enumerate(docs):
        for h in docs[i + 1:]:
            assert is_isomorphic(g, h) is None


def test_regular_structures_need_backtracking():
    # two disjoint 2-paths vs a 2-path plus two single arcs: same degree
    # multisets per label on some vertices, different shape
    a = Label("a", 1)
    g = Graph(list("abcdef"), [("a", "b", a), ("b", "c", a), ("d", "e", a), ("e", "f", a)])
    h = Graph(list("abcdef"), [("a", "b", a), ("b", "c", a), ("d", "e", a), ("d", "f", a)])
    assert is_isomorphic(g, h) is None
    assert brute_isomorphic(g, h) is False


@settings(max_examples=80, deadline=None)
@given(dags(max_vertices=6, actions="ab"))
def test_agrees_with_brute_force_on_copies(g):
    h = renamed(g, seed=len(g.arcs))
    w = is_isomorphic(g, h)
    assert w is not None and w.validates(g, h)


@settings(max_examples=80, deadline=None)
@given(dags(max_vertices=5, actions="ab"), dags(max_vertices=5, actions="ab"))
def test_agrees_with_brute_force_on_pairs(g, h):
    h = renamed(h, seed=1)
    w = is_isomorphic(g, h)
    assert (w is not None) == brute_isomorphic(g, h)
    if w is not None:
        assert w.validates(g, h)


def test_mutated_copies_rejected():
    rng = random.Random(5)
    from vrsp.generate import random_graph

    for _ in range(30):
        g = random_graph(rng, rng.randint(3, 6), p=0.5)
        if not g.arcs:
            continue
        arcs = list(g.arcs)
        arcs.pop(rng.randrange(len(arcs)))
        h = renamed(Graph(g.vertices, arcs), seed=rng.randrange(100))
        assert is_isomorphic(g, h) is None
