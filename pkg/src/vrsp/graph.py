"""Labelled acyclic directed multigraphs.

A graph is immutable once built.  Arcs are identified by their
``(tail, head, label)`` triple: two arcs with the same ends and the same
label describe the same action, so duplicates are merged on construction.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
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

_DIGITS = re.compile(r"(\d+)")


def natural_key(s: str):
    """Sort key that orders ``u2`` before ``u10``."""
    return tuple((0, int(t)) if t.isdigit() else (1, t) for t in _DIGITS.split(s))


def sort_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=natural_key)


def to_weight(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("weight must be a number, not bool")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise NonPositiveWeight(f"unparsable weight {value!r}") from exc
    if isinstance(value, float):
        raise TypeError("float weights are inexact; pass a decimal string or Fraction")
    raise TypeError(f"unsupported weight type {type(value).__name__}")


def format_weight(w: Fraction) -> str:
    """Exact text form: a decimal when one exists, ``p/q`` otherwise."""
    d = w.denominator
    k = 0
    while d % 10 == 0:
        d //= 10
        k += 1
    while d % 2 == 0 or d % 5 == 0:
        d = d // 2 if d % 2 == 0 else d // 5
        k += 1
    if d != 1:
        return f"{w.numerator}/{w.denominator}"
    if k == 0:
        return str(w.numerator)
    scaled = w.numerator * 10**k // w.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(k + 1, "0")
    return f"{sign}{digits[:-k]}.{digits[-k:]}".rstrip("0").rstrip(".")


@dataclass(frozen=True, order=True)
class Label:
    """Action name plus worst-case execution time."""

    action: str
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.action, str) or not self.action:
            raise EmptyAction("label action must be a non-empty string")
        w = to_weight(self.weight)
        if w <= 0:
            raise NonPositiveWeight(f"label weight must be positive, got {format_weight(w)}")
        object.__setattr__(self, "weight", w)

    def __str__(self):
        return f"{self.action}/{format_weight(self.weight)}"

    @classmethod
    def coerce(cls, obj) -> "Label":
        if isinstance(obj, Label):
            return obj
        if isinstance(obj, str):
            return cls(obj)
        action, weight = obj
        return cls(action, weight)


@dataclass(frozen=True)
class Vertex:
    id: str
    origin: tuple | None = None


@dataclass(frozen=True, order=True)
class Arc:
    tail: str
    head: str
    label: Label

    @property
    def id(self) -> str:
        return f"{self.tail}->{self.head}:{self.label}"

    def sort_key(self):
        return (natural_key(self.tail), natural_key(self.head), self.label)


class Graph:
    """Immutable labelled acyclic directed multigraph.

    Use :func:`build_graph` for raw input; the constructor validates too.
    """

    __slots__ = ("_vertices", "_arcs", "_out", "_in")

    def __init__(self, vertices: Iterable = (), arcs: Iterable = ()):
        vmap = {}
        for v in vertices:
            v = v if isinstance(v, Vertex) else Vertex(str(v))
            vmap[v.id] = v
        arcset = set()
        for a in arcs:
            if not isinstance(a, Arc):
                tail, head, label = a
                a = Arc(str(tail), str(head), Label.coerce(label))
            for end in (a.tail, a.head):
                if end not in vmap:
                    raise DanglingEndpoint(f"arc {a.id} has undeclared endpoint {end!r}")
            arcset.add(a)
        self._setup(vmap, arcset)
        cycle = _find_cycle(self)
        if cycle:
            raise CycleDetected(cycle)

    @classmethod
    def _trusted(cls, vmap: Mapping[str, Vertex], arcs: Iterable[Arc]) -> "Graph":
        # caller guarantees endpoints exist and the result is acyclic
        g = cls.__new__(cls)
        g._setup(dict(vmap), set(arcs))
        return g

    def _setup(self, vmap, arcset):
        ids = sort_ids(vmap)
        self._vertices = {i: vmap[i] for i in ids}
        self._arcs = tuple(sorted(arcset, key=Arc.sort_key))
        out = {i: [] for i in ids}
        inc = {i: [] for i in ids}
        for a in self._arcs:
            out[a.tail].append(a)
            inc[a.head].append(a)
        self._out = {i: tuple(v) for i, v in out.items()}
        self._in = {i: tuple(v) for i, v in inc.items()}

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(self._vertices.values())

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(self._vertices)

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return self._arcs

    @property
    def labels(self) -> frozenset[Label]:
        return frozenset(a.label for a in self._arcs)

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vertices[vid]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vid!r}") from None

    def out_arcs(self, vid: str) -> tuple[Arc, ...]:
        self.vertex(vid)
        return self._out[vid]

    def in_arcs(self, vid: str) -> tuple[Arc, ...]:
        self.vertex(vid)
        return self._in[vid]

    def has_arc(self, tail: str, head: str, label: Label) -> bool:
        return tail in self._out and Arc(tail, head, label) in self._out[tail]

    def __contains__(self, vid) -> bool:
        return vid in self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._arcs == other._arcs

    def __hash__(self):
        return hash((tuple(self._vertices), self._arcs))

    def __repr__(self):
        return f"<Graph |V|={len(self._vertices)} |A|={len(self._arcs)}>"


def build_graph(vertices: Iterable, arcs: Iterable) -> Graph:
    """Validate raw input into a :class:`Graph`.

    ``arcs`` may hold :class:`Arc` objects or ``(tail, head, label)`` tuples
    where ``label`` is a :class:`Label` or an ``(action, weight)`` pair.
    Parallel arcs with identical labels are merged into one.
    """
    return Graph(vertices, arcs)


def _find_cycle(g: Graph) -> list[str] | None:
    indeg = {v: len(g._in[v]) for v in g._vertices}
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for a in g._out[v]:
            indeg[a.head] -= 1
            if indeg[a.head] == 0:
                queue.append(a.head)
    if seen == len(indeg):
        return None
    # every leftover vertex has an in-arc from another leftover vertex: walk backwards
    left = {v for v, d in indeg.items() if d > 0}
    v = sort_ids(left)[0]
    path, pos = [], {}
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = next(a.tail for a in g._in[v] if a.tail in left)
    cycle = path[pos[v]:]
    cycle.reverse()
    return cycle + [cycle[0]]


def degrees(g: Graph, v: str) -> tuple[int, int]:
    """``(in_degree, out_degree)`` of ``v``."""
    return len(g.in_arcs(v)), len(g.out_arcs(v))


def source_set(g: Graph) -> frozenset[str]:
    return frozenset(v for v in g._vertices if not g._in[v])


def sink_set(g: Graph) -> frozenset[str]:
    return frozenset(v for v in g._vertices if not g._out[v])


@dataclass(frozen=True)
class LevelAssignment:
    """Level of every vertex under repeated removal of in-degree-0 vertices."""

    level: Mapping[str, int]

    def __getitem__(self, vid):
        return self.level[vid]

    def layers(self) -> list[frozenset[str]]:
        if not self.level:
            return []
        out = [set() for _ in range(max(self.level.values()) + 1)]
        for v, j in self.level.items():
            out[j].add(v)
        return [frozenset(s) for s in out]


def level_assignment(g: Graph) -> LevelAssignment:
    indeg = {v: len(g._in[v]) for v in g._vertices}
    current = [v for v, d in indeg.items() if d == 0]
    level = {}
    j = 0
    while current:
        nxt = []
        for v in current:
            level[v] = j
            for a in g._out[v]:
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    nxt.append(a.head)
        current = nxt
        j += 1
    return LevelAssignment(level)


def induced_subgraph(g: Graph, X: Iterable[str]) -> Graph:
    X = _check_ids(g, X)
    arcs = [a for a in g.arcs if a.tail in X and a.head in X]
    return Graph._trusted({v: g._vertices[v] for v in X}, arcs)


def arc_induced_subgraph(g: Graph, S: Iterable[Arc]) -> Graph:
    S = set(S)
    for a in S:
        if not g.has_arc(a.tail, a.head, a.label):
            raise UnknownArc(f"arc {a.id} is not in the graph")
    ends = {a.tail for a in S} | {a.head for a in S}
    return Graph._trusted({v: g._vertices[v] for v in ends}, S)


def components(g: Graph) -> list[Graph]:
    """Weakly connected components, ordered by their smallest vertex id."""
    seen = set()
    out = []
    for start in g._vertices:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for a in g._out[v] + g._in[v]:
                for w in (a.tail, a.head):
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
        seen |= comp
        out.append(induced_subgraph(g, comp))
    return out


def disjoint_union(graphs: Sequence[Graph], namespace: bool | None = None) -> Graph:
    """Disjoint union of ``graphs``.

    With ``namespace=None`` ids are prefixed ``"<k>."`` only when two
    operands share a vertex id; ``True`` always prefixes.
    """
    graphs = list(graphs)
    if namespace is None:
        seen: set[str] = set()
        namespace = False
        for g in graphs:
            if seen & set(g._vertices):
                namespace = True
                break
            seen |= set(g._vertices)
    vmap, arcs = {}, []
    for k, g in enumerate(graphs):
        ren = (lambda v, k=k: f"{k}.{v}") if namespace else (lambda v: v)
        for v in g.vertices:
            vmap[ren(v.id)] = Vertex(ren(v.id), v.origin)
        arcs.extend(Arc(ren(a.tail), ren(a.head), a.label) for a in g.arcs)
    return Graph._trusted(vmap, arcs)


@dataclass(frozen=True)
class CutSet:
    X: frozenset[str]
    Y: frozenset[str]
    forward: frozenset[Arc]
    backward: frozenset[Arc]

    @property
    def arcs(self) -> frozenset[Arc]:
        return self.forward | self.backward


def cut(g: Graph, X: Iterable[str], Y: Iterable[str]) -> CutSet:
    """Arcs with one end in ``X`` and the other in ``Y``, split by direction."""
    X, Y = _check_ids(g, X), _check_ids(g, Y)
    if not X or not Y:
        raise EmptySet("cut sides must be nonempty")
    if X & Y:
        raise OverlappingSets(f"cut sides share vertices {sort_ids(X & Y)}")
    fwd = frozenset(a for a in g.arcs if a.tail in X and a.head in Y)
    bwd = frozenset(a for a in g.arcs if a.tail in Y and a.head in X)
    return CutSet(X, Y, fwd, bwd)


def _check_ids(g: Graph, ids: Iterable[str]) -> frozenset[str]:
    ids = frozenset(ids)
    for v in ids:
        if v not in g._vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
    return ids


@dataclass(frozen=True)
class ContractionSpec:
    """Ordered vertex sets to contract one after another.

    ``names`` optionally fixes the id of each new vertex; by default the
    id is built from the sorted member ids.
    """

    sets: tuple[frozenset[str], ...]
    names: tuple[str | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != len(self.sets):
                raise ValueError("names must match sets one to one")
            object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.sets)

    def name(self, i):
        return None if self.names is None else self.names[i]


def _fresh_id(g: Graph, members: frozenset[str], name: str | None) -> str:
    vid = name if name is not None else "{" + "|".join(sort_ids(members)) + "}"
    while vid in g._vertices and vid not in members:
        vid += "'"
    return vid


def contract(g: Graph, X: Iterable[str], *, name: str | None = None, allow_whole: bool = False) -> Graph:
    """Replace the vertex set ``X`` by a single new vertex.

    Arcs inside ``X`` disappear, arcs crossing into or out of ``X`` are
    re-ended at the new vertex with their labels, and arcs that become
    identical merge.  ``X`` must be a nonempty proper subset unless
    ``allow_whole`` is set.
    """
    X = _check_ids(g, X)
    if not X:
        raise EmptySet("cannot contract an empty set")
    if X == frozenset(g._vertices) and not allow_whole:
        raise NotProperSubset("contraction set must be a proper subset of V(G)")
    _reject_cycle(g, X)
    new = _fresh_id(g, X, name)
    vmap = {v: vx for v, vx in g._vertices.items() if v not in X}
    vmap[new] = Vertex(new, tuple(sort_ids(X)))
    arcs = set()
    for a in g.arcs:
        t, h = a.tail in X, a.head in X
        if t and h:
            continue
        arcs.add(Arc(new if t else a.tail, new if h else a.head, a.label))
    return Graph._trusted(vmap, arcs)


def _reject_cycle(g: Graph, X: frozenset[str]):
    # a cycle appears iff some vertex outside X is both reachable from X and reaches X
    def reach(step):
        seen, stack = set(), list(X)
        while stack:
            v = stack.pop()
            for w in step(v):
                if w not in seen and w not in X:
                    seen.add(w)
                    stack.append(w)
        return seen

    down = reach(lambda v: [a.head for a in g._out[v]])
    up = reach(lambda v: [a.tail for a in g._in[v]])
    bad = down & up
    if bad:
        raise ContractionCreatesCycle(
            f"contracting {sort_ids(X)} creates a cycle through {sort_ids(bad)[0]!r}"
        )


def contract_seq(g: Graph, spec: ContractionSpec | Sequence[Iterable[str]], *, allow_whole: bool = False) -> Graph:
    """Left-to-right fold of :func:`contract`.

    Vertices absorbed by an earlier set are replaced by that set's new
    vertex in every later set, so overlapping sets are allowed.
    """
    return _contract_seq(g, spec, allow_whole)[0]


def contraction_images(g: Graph, spec, *, allow_whole: bool = False) -> dict[str, str]:
    """Map each vertex of ``g`` to the vertex it ends up in after ``spec``."""
    return _contract_seq(g, spec, allow_whole)[1]


def _contract_seq(g, spec, allow_whole):
    if not isinstance(spec, ContractionSpec):
        spec = ContractionSpec(tuple(spec))
    image = {v: v for v in g._vertices}
    cur = g
    for i, X in enumerate(spec.sets):
        resolved = set()
        for v in X:
            if v in image:
                resolved.add(image[v])
            elif v in cur:
                resolved.add(v)
            else:
                exc = UnknownVertex(f"step {i}: unknown vertex {v!r}")
                exc.step = i
                raise exc
        new = _fresh_id(cur, frozenset(resolved), spec.name(i))
        try:
            nxt = contract(cur, resolved, name=new, allow_whole=allow_whole)
        except (EmptySet, NotProperSubset, ContractionCreatesCycle) as exc:
            err = type(exc)(f"step {i}: {exc}")
            err.step = i
            raise err from exc
        for v, img in image.items():
            if img in resolved:
                image[v] = new
        cur = nxt
    return cur, image
