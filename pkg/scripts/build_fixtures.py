"""Write the figure fixtures in canonical form.

The figure graphs are transcribed here by hand; running the script
regenerates src/vrsp/fixtures/*.json byte for byte.
"""

from itertools import product
from pathlib import Path

from vrsp import ContractionSpec, Graph, Label, MatrixIndexing, contract_seq, decompose_t5, intermediate_product
from vrsp.document import GraphDocument, emit

OUT = Path(__file__).resolve().parents[1] / "src" / "vrsp" / "fixtures"


def one(action):
    return Label(action, 1)


def fig1():
    coord = {
        "u0": (1, 1), "u1_1": (2, 2), "u1_2": (2, 3),
        "v1_1": (3, 4), "v2_1": (3, 5), "v1_2": (4, 4), "v2_2": (4, 5),
        "v3": (5, 6), "v4": (6, 7),
    }
    arcs = [
        ("u0", "v1_1", "a"), ("u0", "v4", "i"), ("u0", "u1_1", "b"), ("u0", "u1_2", "c"),
        ("v1_1", "v3", "e"), ("v1_2", "v3", "f"), ("v2_1", "v4", "g"), ("v2_2", "v4", "h"),
    ]
    arcs += [(u, v, "d") for u in ("u1_1", "u1_2") for v in ("v1_1", "v1_2", "v2_1", "v2_2")]
    g = Graph(coord, [(t, h, one(a)) for t, h, a in arcs])
    sets = {
        "X": frozenset({"u0", "u1_1", "u1_2"}),
        "Xp1": frozenset({"u1_1", "u1_2"}),
        "Yp1": frozenset({"v1_1", "v2_1"}),
        "Yp2": frozenset({"v1_2", "v2_2"}),
        "Ypp1": frozenset({"v1_1", "v1_2"}),
        "Ypp2": frozenset({"v2_1", "v2_2"}),
    }
    return GraphDocument(g, MatrixIndexing(coord), sets, {"figure": "1"})


def fig2():
    grids = {
        "X1": ((2, 5, 6), (2, 4, 5), "c"),
        "X2": ((1, 2, 3, 4, 5), (1, 2, 3, 4), "b"),
        "X3": ((4, 5, 6), (2, 3, 4, 6), "a"),
    }
    coord = {"u7_7": (7, 7)}
    arcs = []
    sets = {"X4": frozenset({"u7_7"})}
    for name, (I, J, lab) in grids.items():
        members = set()
        for i, j in product(I, J):
            v = f"u{i}_{j}"
            coord[v] = (i, j)
            members.add(v)
            arcs.append((v, "u7_7", one(lab)))
        sets[name] = frozenset(members)
    g = Graph(coord, arcs)
    return GraphDocument(g, MatrixIndexing(coord), sets, {"figure": "2"})


def fig4():
    coord, arcs = {}, []
    vid = lambda i, j: f"u{2 + 3 * (j - 1) + (i - 1)}"
    for i in range(1, 4):
        for j in range(1, 5):
            coord[vid(i, j)] = (i, j)
    for j in range(1, 5):
        arcs += [(vid(1, j), vid(2, j), one("b")), (vid(2, j), vid(3, j), one("c"))]
    for i in range(1, 4):
        arcs += [(vid(i, 1), vid(i, 2), one("d")), (vid(i, 2), vid(i, 3), one("e")),
                 (vid(i, 3), vid(i, 4), one("f"))]
    g = Graph(coord, arcs)
    # rows are the sets contracted to the 3-vertex factor's complement: row i
    # holds the vertices joined by d, e, f
    R = tuple(frozenset(vid(i, j) for j in range(1, 5)) for i in range(1, 4))
    C = tuple(frozenset(vid(i, j) for i in range(1, 4)) for j in range(1, 5))
    return GraphDocument(g, MatrixIndexing(coord), {"R": R, "C": C}, {"figure": "4"})


def fig5():
    coord = {"u1_1": (1, 1), "u4_5": (4, 5), "u5_6": (5, 6)}
    M = set()
    for i, j in product((2, 3), (2, 3, 4)):
        coord[f"u{i}_{j}"] = (i, j)
        M.add(f"u{i}_{j}")
    arcs = [("u1_1", "u2_2", "a"), ("u3_3", "u4_5", "c"), ("u3_4", "u4_5", "c"),
            ("u4_5", "u5_6", "g"), ("u1_1", "u5_6", "i")]
    for i in (2, 3):
        arcs += [(f"u{i}_2", f"u{i}_3", "d"), (f"u{i}_2", f"u{i}_4", "e")]
    for j in (2, 3, 4):
        arcs.append((f"u2_{j}", f"u3_{j}", "b"))
    g = Graph(coord, [(t, h, one(a)) for t, h, a in arcs])
    meta = {"figure": "5", "reconstructed": "no drawing available; rebuilt as a 5x6 mixed matrix graph"}
    return GraphDocument(g, MatrixIndexing(coord), {"M": (frozenset(M),)}, meta)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    f1 = fig1()
    docs = {"fig1": f1, "fig2": fig2(), "fig4": fig4(), "fig5": fig5()}
    s = f1.sets
    left = contract_seq(f1.graph, ContractionSpec([s["Xp1"], s["Yp1"], s["Yp2"]], ["x'1", "y'1", "y'2"]))
    right = contract_seq(f1.graph, ContractionSpec([s["Ypp1"], s["Ypp2"]], ["y''1", "y''2"]))
    docs["fig1_left"] = GraphDocument(left, meta={"figure": "1", "factor": "G/X'1/Y'1/Y'2"})
    docs["fig1_right"] = GraphDocument(right, meta={"figure": "1", "factor": "G/Y''1/Y''2"})
    cert = decompose_t5(docs["fig2"].graph, docs["fig2"].indexing)
    inter = intermediate_product(cert.factor_left, cert.factor_right)
    docs["fig3"] = GraphDocument(inter, meta={"figure": "3", "derived": "intermediate product of the fig2 factors"})
    for name, doc in docs.items():
        (OUT / f"{name}.json").write_bytes(emit(doc))
        print(name, len(doc.graph), len(doc.graph.arcs))


if __name__ == "__main__":
    main()
