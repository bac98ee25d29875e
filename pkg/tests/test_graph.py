from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrsp import (
    Arc,
    ContractionSpec,
    Graph,
    Label,
    Vertex,
    arc_induced_subgraph,
    build_graph,
    components,
    contract,
    contract_seq,
    contraction_images,
    cut,
    degrees,
    disjoint_union,
    induced_subgraph,
    is_isomorphic,
    level_assignment,
    sink_set,
    source_set,
)
from vrsp.errors import (
    ContractionCreatesCycle,
    CycleDetected,
    DanglingEndpoint,
    EmptyAction,
    EmptySet,
    NonPositiveWeight,
    NotProperSubset,
    OverlappingSets,
    UnknownArc,
    UnknownVertex,
)
from vrsp.graph import format_weight, natural_key, to_weight

from .conftest import dags, path, single_arc
from .oracles import arc_triples, brute_contract, longest_path_levels

A1 = Label("a", 1)


# --- labels and weights

def test_weights_are_exact():
    assert to_weight("0.1") == Fraction(1, 10)
    assert to_weight("1/3") == Fraction(1, 3)
    assert to_weight(2) == 2
    with pytest.raises(Exception):
        to_weight(0.5)
    assert format_weight(Fraction(1, 2)) == "0.5"
    assert format_weight(Fraction(1, 3)) == "1/3"
    assert format_weight(Fraction(4)) == "4"


def test_label_equality_uses_weight():
    assert Label("a", 1) == Label("a", "1.0")
    assert Label("a", 1) != Label("a", 2)
    with pytest.raises(EmptyAction):
        Label("", 1)
    with pytest.raises(NonPositiveWeight):
        Label("a", 0)
    with pytest.raises(NonPositiveWeight):
        Label("a", "-1")


def test_natural_key_orders_numbers():
    assert sorted(["u10", "u2", "u1"], key=natural_key) == ["u1", "u2", "u10"]


# --- build_graph

def test_build_minimal():
    g = build_graph(["u", "v"], [("u", "v", A1)])
    assert len(g) == 2 and len(g.arcs) == 1


def test_build_merges_duplicates():
    g = build_graph(["u", "v"], [("u", "v", A1), ("u", "v", Label("a", "1"))])
    assert len(g.arcs) == 1


def test_parallel_arcs_with_distinct_labels_kept():
    g = build_graph(["u", "v"], [("u", "v", A1), ("u", "v", Label("a", 2))])
    assert len(g.arcs) == 2


def test_build_rejects_cycle_and_reports_it():
    with pytest.raises(CycleDetected) as exc:
        build_graph(["u", "v"], [("u", "v", A1), ("v", "u", Label("b", 1))])
    assert set(exc.value.cycle) >= {"u", "v"}


def test_build_rejects_self_loop():
    with pytest.raises(CycleDetected):
        build_graph(["u"], [("u", "u", A1)])


def test_build_rejects_dangling():
    with pytest.raises(DanglingEndpoint):
        build_graph(["u"], [("u", "w", A1)])


def test_graph_equality():
    assert path("a", "b") == path("a", "b")
    assert path("a", "b") != path("a", "c")


# --- degrees, sources, sinks

def test_degrees_fig1(fig1):
    g = fig1.graph
    assert degrees(g, "u0") == (0, 4)
    assert degrees(g, "v3") == (2, 0)


def test_degrees_isolated_and_unknown():
    g = Graph(["x"])
    assert degrees(g, "x") == (0, 0)
    with pytest.raises(UnknownVertex):
        degrees(g, "y")


def test_sources_and_sinks(fig1, fig4):
    assert source_set(fig1.graph) == {"u0"}
    assert sink_set(fig1.graph) == {"v3", "v4"}
    assert source_set(fig4.graph) == {"u2"}
    assert sink_set(fig4.graph) == {"u13"}
    g = Graph(["x"])
    assert source_set(g) == sink_set(g) == {"x"}


# --- levels

def test_levels_path():
    lv = level_assignment(path("a", "b"))
    assert [lv["p0"], lv["p1"], lv["p2"]] == [0, 1, 2]


def test_levels_fig1(fig1):
    lv = level_assignment(fig1.graph)
    expected = {"u0": 0, "u1_1": 1, "u1_2": 1, "v1_1": 2, "v1_2": 2, "v2_1": 2, "v2_2": 2, "v3": 3, "v4": 3}
    assert lv.level == expected
    assert lv.layers()[3] == {"v3", "v4"}


def test_levels_antichain():
    assert set(level_assignment(Graph(["a", "b", "c"])).level.values()) == {0}


@given(dags(max_vertices=8))
def test_levels_match_longest_path(g):
    lv = level_assignment(g)
    assert lv.level == longest_path_levels(g)
    for a in g.arcs:
        assert lv[a.tail] < lv[a.head]


# --- components and subgraphs

def test_components(fig1):
    assert len(components(fig1.graph)) == 1
    u = disjoint_union([fig1.graph, Graph(["lone"])])
    assert len(components(u)) == 2
    assert components(Graph()) == []


def test_components_order_by_smallest_id():
    g = Graph(["b", "a", "z", "c"], [("z", "c", A1)])
    assert [c.vertex_ids[0] for c in components(g)] == ["a", "b", "c"]


def test_induced_subgraph_d_block(fig1):
    X = {"u1_1", "u1_2", "v1_1", "v1_2", "v2_1", "v2_2"}
    sub = induced_subgraph(fig1.graph, X)
    assert len(sub.arcs) == 8 and {a.label.action for a in sub.arcs} == {"d"}
    assert len(induced_subgraph(fig1.graph, ())) == 0
    with pytest.raises(UnknownVertex):
        induced_subgraph(fig1.graph, {"nope"})


def test_arc_induced_subgraph(fig1):
    e = [a for a in fig1.graph.arcs if a.label.action == "e"]
    sub = arc_induced_subgraph(fig1.graph, e)
    assert set(sub.vertex_ids) == {"v1_1", "v3"} and len(sub.arcs) == 1
    with pytest.raises(UnknownArc):
        arc_induced_subgraph(fig1.graph, [Arc("u0", "v3", A1)])


# --- cut

def test_cut_fig1(fig1):
    g = fig1.graph
    X = fig1.set("X")
    c = cut(g, X, set(g.vertex_ids) - X)
    assert len(c.forward) == 10 and not c.backward
    assert sorted(a.label.action for a in c.forward).count("d") == 8


def test_cut_fig4_rows(fig4):
    rows = fig4.family("R")
    c = cut(fig4.graph, rows[0], rows[1])
    assert len(c.forward) == 4 and {a.label.action for a in c.forward} == {"b"}


def test_cut_errors_and_empty():
    g = Graph(["a", "b", "c"])
    c = cut(g, {"a"}, {"b"})
    assert not c.forward and not c.backward
    with pytest.raises(EmptySet):
        cut(g, set(), {"a"})
    with pytest.raises(OverlappingSets):
        cut(g, {"a", "b"}, {"b"})


@given(dags(max_vertices=7), st.data())
def test_cut_counts_crossing_arcs(g, data):
    ids = list(g.vertex_ids)
    if len(ids) < 2:
        return
    X = set(data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=len(ids) - 1, unique=True)))
    Y = set(ids) - X
    c = cut(g, X, Y)
    assert len(c.arcs) == sum(1 for a in g.arcs if (a.tail in X) != (a.head in X))


# --- contraction

def test_contract_fig1_ypp1(fig1):
    g = contract(fig1.graph, fig1.set("Ypp1"), name="y")
    ins = sorted((a.tail, a.label.action) for a in g.in_arcs("y"))
    outs = sorted(a.label.action for a in g.out_arcs("y"))
    assert ins == [("u0", "a"), ("u1_1", "d"), ("u1_2", "d")]
    assert outs == ["e", "f"]
    assert g.vertex("y").origin == ("v1_1", "v1_2")


def test_contract_single_vertex_is_renaming():
    g = single_arc()
    c = contract(g, {"u"})
    assert is_isomorphic(g, c) is not None


def test_contract_errors():
    g = path("a", "b")
    with pytest.raises(ContractionCreatesCycle):
        contract(g, {"p0", "p2"})
    with pytest.raises(EmptySet):
        contract(g, set())
    with pytest.raises(NotProperSubset):
        contract(g, set(g.vertex_ids))
    assert len(contract(g, set(g.vertex_ids), allow_whole=True)) == 1


def test_contract_default_name_and_clash():
    g = Graph(["a", "b", "{a|b}"])
    c = contract(g, {"a", "b"})
    assert len(c) == 2 and "{a|b}'" in c


def test_contract_seq_fig1_left(fig1):
    spec = ContractionSpec([fig1.set("Xp1"), fig1.set("Yp1"), fig1.set("Yp2")])
    g = contract_seq(fig1.graph, spec)
    assert len(g) == 6 and len(g.arcs) == 10


def test_contract_seq_empty_is_identity(fig1):
    assert contract_seq(fig1.graph, ContractionSpec([])) == fig1.graph


def test_contract_seq_overlap_substitutes():
    g = Graph(["a", "b", "c", "d"])
    spec = ContractionSpec([{"a", "b"}, {"b", "c"}], names=["x1", "x2"])
    out = contract_seq(g, spec)
    assert set(out.vertex_ids) == {"d", "x2"}
    assert out.vertex("x2").origin == ("c", "x1")
    img = contraction_images(g, spec)
    assert img == {"a": "x2", "b": "x2", "c": "x2", "d": "d"}


def test_contract_seq_reports_step():
    g = path("a", "b", "c")
    with pytest.raises(ContractionCreatesCycle) as exc:
        contract_seq(g, [{"p3"}, {"p0", "p2"}])
    assert exc.value.step == 1


@settings(max_examples=60)
@given(dags(max_vertices=7), st.data())
def test_contract_matches_oracle(g, data):
    ids = list(g.vertex_ids)
    if len(ids) < 2:
        return
    X = set(data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=len(ids) - 1, unique=True)))
    try:
        c = contract(g, X, name="*")
    except ContractionCreatesCycle:
        return
    verts, arcs = brute_contract(g, X, "*")
    assert set(c.vertex_ids) == verts
    assert arc_triples(c) == arcs
    assert len(c) == len(g) - len(X) + 1


# --- disjoint union

def test_disjoint_union():
    g = single_arc()
    assert disjoint_union([g]) == g
    u = disjoint_union([single_arc(), single_arc()])
    assert len(u) == 4 and len(u.arcs) == 2 and len(components(u)) == 2


def test_disjoint_union_of_components_roundtrip(fig1):
    g = disjoint_union([fig1.graph, path("x", "y")])
    parts = components(g)
    again = components(disjoint_union(parts))
    assert len(parts) == len(again)
    for p, q in zip(parts, again):
        assert is_isomorphic(p, q) is not None


def test_vertex_origin_kept():
    g = Graph([Vertex("x", ("a", "b"))])
    assert g.vertex("x").origin == ("a", "b")
