"""Model file format: one JSON document per classifier.

Layout (integers only, bit-exact):

.. code-block:: json

    {"type": "table" | "dt" | "omdd",
     "features": [{"name": "x1", "domain": 2}, ...],
     "classes": [0, 1, 2, 3],
     ...body...}

* table body -- ``"rows": [[x1, ..., xm, class], ...]`` (must be complete);
* dt body -- ``"nodes": [...]`` where internal nodes look like
  ``{"id": 0, "feature": 1, "edges": [{"values": [0, 1], "to": 3}]}`` and
  leaves like ``{"id": 3, "class": 2}``; the first listed node is the root;
* omdd body -- dt body plus ``"order": [1, 2, 3]``.

Feature indices in files are 1-based; loaded OMDDs are canonicalized with
``reduce_omdd`` so the in-memory diagram is always reduced.
"""

from __future__ import annotations

import json

from .errors import InputError
from .models import (
    Classifier,
    DecisionTree,
    DTLeaf,
    DTNode,
    FeatureSpace,
    Omdd,
    OmddNode,
    OmddTerminal,
    TabularClassifier,
    reduce_omdd,
)


def load_model(path) -> Classifier:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def save_model(model: Classifier, path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(model_to_json(model))


def model_to_json(model: Classifier) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def _space_from_doc(doc) -> FeatureSpace:
    feats = doc.get("features")
    if not isinstance(feats, list) or not feats:
        raise InputError('model file needs a nonempty "features" list')
    names, sizes = [], []
    for k, f in enumerate(feats):
        if not isinstance(f, dict) or "domain" not in f:
            raise InputError(f"feature entry {k} needs a domain size")
        if not isinstance(f["domain"], int):
            raise InputError("domain sizes must be integers")
        names.append(str(f.get("name", f"x{k + 1}")))
        sizes.append(f["domain"])
    return FeatureSpace(tuple(sizes), tuple(names))


def _check_classes(doc, used) -> None:
    declared = doc.get("classes")
    if not isinstance(declared, list) or not all(isinstance(c, int) for c in declared):
        raise InputError('model file needs an integer "classes" list')
    extra = set(used) - set(declared)
    if extra:
        raise InputError(f"classes {sorted(extra)} used but not declared")


def model_from_dict(doc) -> Classifier:
    if not isinstance(doc, dict):
        raise InputError("model document must be a JSON object")
    kind = doc.get("type")
    space = _space_from_doc(doc)
    if kind == "table":
        return _table_from_doc(doc, space)
    if kind == "dt":
        root = _graph_from_doc(doc, space, DTNode, DTLeaf)
        dt = DecisionTree(space, root)
        _check_classes(doc, dt.class_values())
        return dt
    if kind == "omdd":
        order = doc.get("order")
        if not isinstance(order, list) or not all(isinstance(f, int) for f in order):
            raise InputError('omdd model needs an integer "order" list')
        root = _graph_from_doc(doc, space, OmddNode, OmddTerminal)
        omdd = reduce_omdd(Omdd(space, tuple(f - 1 for f in order), root))
        _check_classes(doc, omdd.class_values())
        return omdd
    raise InputError(f"unknown model type {kind!r}")


def _table_from_doc(doc, space) -> TabularClassifier:
    rows = doc.get("rows")
    if not isinstance(rows, list):
        raise InputError('table model needs a "rows" list')
    values = [None] * space.size
    for row in rows:
        if not isinstance(row, list) or len(row) != space.m + 1 \
                or not all(isinstance(x, int) for x in row):
            raise InputError(f"malformed table row {row!r}")
        point = space.validate_point(row[:-1])
        idx = space.index(point)
        if values[idx] is not None and values[idx] != row[-1]:
            raise InputError(f"conflicting rows for point {point}")
        values[idx] = row[-1]
    if any(c is None for c in values):
        missing = values.index(None)
        raise InputError(
            f"table is incomplete: no row for point {space.point_at(missing)}")
    table = TabularClassifier(space, tuple(values))
    _check_classes(doc, table.class_values())
    return table


def _graph_from_doc(doc, space, node_cls, leaf_cls):
    entries = doc.get("nodes")
    if not isinstance(entries, list) or not entries:
        raise InputError('model needs a nonempty "nodes" list')
    by_id = {}
    for e in entries:
        if not isinstance(e, dict) or "id" not in e:
            raise InputError(f"malformed node entry {e!r}")
        if e["id"] in by_id:
            raise InputError(f"duplicate node id {e['id']}")
        by_id[e["id"]] = e

    building = set()
    built = {}

    def resolve(nid):
        if nid in built:
            return built[nid]
        if nid in building:
            raise InputError(f"cycle through node {nid}")
        if nid not in by_id:
            raise InputError(f"edge points to unknown node {nid}")
        building.add(nid)
        e = by_id[nid]
        if "class" in e:
            if not isinstance(e["class"], int):
                raise InputError("leaf classes must be integers")
            node = leaf_cls(e["class"])
        else:
            if "feature" not in e or not isinstance(e.get("edges"), list):
                raise InputError(f"node {nid} needs a feature and an edge list")
            f = e["feature"]
            if not isinstance(f, int) or not 1 <= f <= space.m:
                raise InputError(f"node {nid} tests unknown feature {f}")
            edges = []
            for edge in e["edges"]:
                if not isinstance(edge, dict) or "to" not in edge:
                    raise InputError(f"malformed edge on node {nid}")
                values = edge.get("values")
                if not isinstance(values, list) or not all(isinstance(x, int) for x in values):
                    raise InputError(f"malformed edge on node {nid}")
                edges.append((frozenset(values), resolve(edge["to"])))
            node = node_cls(f - 1, tuple(edges))
        building.discard(nid)
        built[nid] = node
        return node

    root = resolve(entries[0]["id"])
    return root


def model_to_dict(model: Classifier) -> dict:
    space = model.space
    doc = {
        "type": None,
        "features": [{"name": n, "domain": d}
                     for n, d in zip(space.feature_names, space.domain_sizes)],
        "classes": sorted(model.class_values()),
    }
    if isinstance(model, TabularClassifier):
        doc["type"] = "table"
        doc["rows"] = [list(p) + [model.evaluate(p)] for p in space.points()]
        return doc
    if isinstance(model, DecisionTree):
        doc["type"] = "dt"
        doc["nodes"] = _graph_to_entries(model.root, DTLeaf)
        return doc
    if isinstance(model, Omdd):
        doc["type"] = "omdd"
        doc["order"] = [f + 1 for f in model.order]
        doc["nodes"] = _graph_to_entries(model.root, OmddTerminal)
        return doc
    raise InputError(f"cannot serialize {type(model).__name__}")


def _graph_to_entries(root, leaf_cls) -> list:
    ids = {}
    entries = []

    def visit(node):
        if id(node) in ids:
            return ids[id(node)]
        nid = len(ids)
        ids[id(node)] = nid
        entry = {"id": nid}
        entries.append(entry)
        if isinstance(node, leaf_cls):
            entry["class"] = node.class_value
        else:
            entry["feature"] = node.feature + 1
            edges = sorted(node.edges, key=lambda e: min(e[0]))
            entry["edges"] = [{"values": sorted(vs), "to": visit(ch)} for vs, ch in edges]
        return nid

    visit(root)
    return entries
