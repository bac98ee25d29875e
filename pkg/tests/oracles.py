"""Slow, obviously-correct reference implementations used as test oracles.

They share nothing with the package beyond reading ``Graph`` attributes.
"""

from itertools import permutations


def arc_triples(g):
    return {(a.tail, a.head, a.label) for a in g.arcs}


def brute_isomorphic(G, H):
    """Try every bijection V(G) -> V(H)."""
    if len(G) != len(H) or len(G.arcs) != len(H.arcs):
        return False
    gv, hv = list(G.vertex_ids), list(H.vertex_ids)
    target = arc_triples(H)
    src = arc_triples(G)
    for perm in permutations(hv):
        phi = dict(zip(gv, perm))
        if {(phi[t], phi[h], lab) for t, h, lab in src} == target:
            return True
    return False


def longest_path_levels(g):
    """Length of the longest path ending in each vertex."""
    preds = {v: [] for v in g.vertex_ids}
    for a in g.arcs:
        preds[a.head].append(a.tail)
    memo = {}

    def depth(v):
        if v not in memo:
            memo[v] = max((depth(u) + 1 for u in preds[v]), default=0)
        return memo[v]

    return {v: depth(v) for v in g.vertex_ids}


def brute_products(G, H):
    """(box, inter, vrsp) as (vertex set, arc triple set) pairs, built from scratch."""
    V = {(v, w) for v in G.vertex_ids for w in H.vertex_ids}
    LG = {a.label for a in G.arcs}
    LH = {a.label for a in H.arcs}
    box = set()
    inter = set()
    for a in G.arcs:
        for w in H.vertex_ids:
            box.add(((a.tail, w), (a.head, w), a.label))
            if a.label not in LH:
                inter.add(((a.tail, w), (a.head, w), a.label))
    for b in H.arcs:
        for v in G.vertex_ids:
            box.add(((v, b.tail), (v, b.head), b.label))
            if b.label not in LG:
                inter.add(((v, b.tail), (v, b.head), b.label))
    for a in G.arcs:
        for b in H.arcs:
            if a.label == b.label:
                inter.add(((a.tail, b.tail), (a.head, b.head), a.label))

    def deg(arcs, v, end):
        return sum(1 for t in arcs if t[end] == v)

    alive = set(V)
    arcs = set(inter)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            dead_in = deg(arcs, v, 1) == 0 and deg(box, v, 1) > 0
            dead_out = deg(arcs, v, 0) == 0 and deg(box, v, 0) > 0
            if dead_in or dead_out:
                alive.discard(v)
                arcs = {t for t in arcs if v not in (t[0], t[1])}
                changed = True
    return (V, box), (V, inter), (alive, arcs)


def brute_contract(g, X, new="*"):
    """Vertex set and arc triples of G/X."""
    X = set(X)
    verts = (set(g.vertex_ids) - X) | {new}
    arcs = set()
    for t, h, lab in arc_triples(g):
        if t in X and h in X:
            continue
        arcs.add((new if t in X else t, new if h in X else h, lab))
    return verts, arcs
