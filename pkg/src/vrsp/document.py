"""JSON graph documents, DOT export and certificate directories.

A document looks like::

    {
      "arcs": [{"action": "a", "head": "v", "tail": "u", "weight": "1"}],
      "format_version": "1",
      "meta": {},
      "sets": {"X": ["u"], "R": [["u"], ["v"]]},
      "vertices": [{"id": "u", "coord": [1, 1]}, {"id": "v", "coord": [2, 2]}]
    }

Weights are exact decimal strings (``"p/q"`` when no finite decimal
exists).  Emission is canonical: sorted keys, sorted vertices and arcs,
two-space indent, trailing newline.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import DocumentSyntaxError, DocumentValidationError, GraphError
from .graph import Arc, ContractionSpec, Graph, Label, Vertex, format_weight, sort_ids
from .iso import IsoWitness
from .matrix import MatrixIndexing

FORMAT_VERSION = "1"


@dataclass
class GraphDocument:
    graph: Graph
    indexing: MatrixIndexing | None = None
    sets: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    def set(self, name: str) -> frozenset[str]:
        s = self._lookup(name)
        if isinstance(s, tuple):
            raise DocumentValidationError(f"set {name!r} is a family of sets, expected one set")
        return s

    def family(self, name: str) -> tuple[frozenset[str], ...]:
        s = self._lookup(name)
        if isinstance(s, tuple):
            return s
        return (s,) if s else ()

    def _lookup(self, name):
        try:
            return self.sets[name]
        except KeyError:
            known = ", ".join(sorted(self.sets)) or "none"
            raise DocumentValidationError(f"no set named {name!r} (known: {known})") from None


def _need(obj, key, typ, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentSyntaxError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, typ) or isinstance(val, bool):
        raise DocumentSyntaxError(f"{where}.{key}: expected {getattr(typ, '__name__', typ)}")
    return val


def parse(data: bytes | str) -> GraphDocument:
    """Load and validate a document.

    Raises :class:`DocumentSyntaxError` for malformed JSON or fields of the
    wrong shape and :class:`DocumentValidationError` when the content does
    not describe a valid graph.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise DocumentSyntaxError("document must be a JSON object")
    version = raw.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DocumentSyntaxError(f"unsupported format_version {version!r}")
    verts = _need(raw, "vertices", list, "document")
    arcs = _need(raw, "arcs", list, "document")

    vertices, coords = [], {}
    for k, v in enumerate(verts):
        where = f"vertices[{k}]"
        vid = _need(v, "id", str, where)
        origin = None
        if "origin" in v:
            origin = v["origin"]
            if not isinstance(origin, list) or not all(isinstance(o, str) for o in origin):
                raise DocumentSyntaxError(f"{where}.origin: expected a list of ids")
            origin = tuple(origin)
        if "coord" in v:
            c = v["coord"]
            if (not isinstance(c, list) or len(c) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in c)):
                raise DocumentSyntaxError(f"{where}.coord: expected [row, col] integers")
            coords[vid] = tuple(c)
        vertices.append(Vertex(vid, origin))
    ids = [v.id for v in vertices]
    if len(set(ids)) != len(ids):
        dup = sort_ids({i for i in ids if ids.count(i) > 1})
        raise DocumentValidationError(f"vertices: duplicate ids {dup}")

    arc_objs = []
    for k, a in enumerate(arcs):
        where = f"arcs[{k}]"
        tail = _need(a, "tail", str, where)
        head = _need(a, "head", str, where)
        action = _need(a, "action", str, where)
        if "weight" not in a:
            raise DocumentSyntaxError(f"{where}: missing field 'weight'")
        w = a["weight"]
        if isinstance(w, float) or isinstance(w, bool) or not isinstance(w, (str, int)):
            raise DocumentSyntaxError(f"{where}.weight: expected a decimal string")
        try:
            arc_objs.append(Arc(tail, head, Label(action, w)))
        except GraphError as exc:
            raise DocumentValidationError(f"{where}: {exc}") from exc
    try:
        g = Graph(vertices, arc_objs)
    except GraphError as exc:
        raise DocumentValidationError(str(exc)) from exc

    indexing = None
    if coords:
        try:
            indexing = MatrixIndexing(coords)
        except GraphError as exc:
            raise DocumentValidationError(f"coords: {exc}") from exc

    sets = {}
    raw_sets = raw.get("sets", {})
    if not isinstance(raw_sets, dict):
        raise DocumentSyntaxError("sets: expected an object")
    for name, val in raw_sets.items():
        where = f"sets.{name}"
        if not isinstance(val, list):
            raise DocumentSyntaxError(f"{where}: expected a list")
        if val and all(isinstance(x, list) for x in val):
            fam = []
            for s in val:
                if not all(isinstance(x, str) for x in s):
                    raise DocumentSyntaxError(f"{where}: expected lists of ids")
                fam.append(frozenset(s))
            members = frozenset().union(*fam)
            sets[name] = tuple(fam)
        elif all(isinstance(x, str) for x in val):
            members = frozenset(val)
            sets[name] = members
        else:
            raise DocumentSyntaxError(f"{where}: expected ids or lists of ids")
        unknown = members - set(g.vertex_ids)
        if unknown:
            raise DocumentValidationError(f"{where}: unknown vertices {sort_ids(unknown)}")
    meta = raw.get("meta", {})
    if not isinstance(meta, dict):
        raise DocumentSyntaxError("meta: expected an object")
    return GraphDocument(g, indexing, sets, meta, version)


def load(path) -> GraphDocument:
    return parse(Path(path).read_bytes())


def to_dict(doc: GraphDocument | Graph) -> dict:
    if isinstance(doc, Graph):
        doc = GraphDocument(doc)
    g = doc.graph
    verts = []
    for v in g.vertices:
        entry = {"id": v.id}
        if doc.indexing is not None and v.id in doc.indexing:
            entry["coord"] = list(doc.indexing[v.id])
        if v.origin is not None:
            entry["origin"] = list(v.origin)
        verts.append(entry)
    arcs = [{"tail": a.tail, "head": a.head, "action": a.label.action, "weight": format_weight(a.label.weight)}
            for a in g.arcs]
    sets = {}
    for name in sorted(doc.sets):
        s = doc.sets[name]
        if isinstance(s, tuple):
            sets[name] = [sort_ids(x) for x in s]
        else:
            sets[name] = sort_ids(s)
    return {"format_version": doc.format_version, "vertices": verts, "arcs": arcs,
            "sets": sets, "meta": doc.meta}


def emit(doc: GraphDocument | Graph) -> bytes:
    """Canonical document bytes; ``parse(emit(d))`` reproduces ``d``."""
    return (json.dumps(to_dict(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(g: Graph, name: str = "G") -> str:
    """DOT text: one node line per vertex, one edge line per arc."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=TB;"]
    for v in g.vertex_ids:
        lines.append(f"  {_dot_id(v)};")
    for a in g.arcs:
        lines.append(f"  {_dot_id(a.tail)} -> {_dot_id(a.head)} [label={_dot_id(str(a.label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_atomic(path, data: bytes | str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    parent = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _spec_list(spec: ContractionSpec):
    out = []
    for k, s in enumerate(spec.sets):
        out.append({"name": spec.name(k), "members": sort_ids(s)})
    return out


def write_certificate(cert, directory) -> Path:
    """Store a certificate as ``left.json``, ``right.json``, ``spec.json``
    and ``witness.json`` inside ``directory``."""
    from .errors import _plain

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_atomic(d / "left.json", emit(cert.factor_left))
    write_atomic(d / "right.json", emit(cert.factor_right))
    spec = {
        "theorem": cert.theorem,
        "allow_whole": cert.allow_whole,
        "left": _spec_list(cert.spec_left),
        "right": _spec_list(cert.spec_right),
        "warnings": list(cert.warnings),
        "details": _plain(cert.details),
    }
    write_atomic(d / "spec.json", _json_bytes(spec))
    witness = {"direction": "graph-to-product", "pairs": [list(p) for p in cert.witness.pairs()]}
    write_atomic(d / "witness.json", _json_bytes(witness))
    return d


def read_certificate(directory):
    from .decompose import DecompositionCertificate

    d = Path(directory)
    try:
        left = load(d / "left.json").graph
        right = load(d / "right.json").graph
        spec = json.loads((d / "spec.json").read_text("utf-8"))
        wit = json.loads((d / "witness.json").read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"certificate: {exc}") from exc

    def cspec(items):
        return ContractionSpec([frozenset(x["members"]) for x in items], [x["name"] for x in items])

    try:
        return DecompositionCertificate(
            spec["theorem"], left, right, cspec(spec["left"]), cspec(spec["right"]),
            IsoWitness({v: p for v, p in wit["pairs"]}), bool(spec.get("allow_whole", False)),
            tuple(spec.get("warnings", ())), spec.get("details", {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentSyntaxError(f"certificate: malformed field ({exc})") from exc


def document_with(graph: Graph, indexing: MatrixIndexing | None = None,
                  sets: Mapping | None = None, meta: Mapping | None = None) -> GraphDocument:
    return GraphDocument(graph, indexing, dict(sets or {}), dict(meta or {}))
