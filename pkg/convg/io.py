"""
Space documents, DOT export and witness documents.

A space document is JSON::

    {
      "name": "S2",
      "points": ["a", "b"],
      "limits": {"a": ["a", "b"], "b": ["b"], "a b": ["b"]},
      "metadata": {"description": "..."}
    }

A limits key names a filter base: its labels in point order, joined by single
spaces. Bases without a key have no limits.
"""

import json
import logging

import numpy as np

from .constructions import SpaceMap
from .exceptions import BadSubsetKey, DuplicateKey, SchemaError
from .filters import Carrier
from .spaces import FiniteTopology, Preconvergence, specialization_graph
from .utils import canonical_order

logger = logging.getLogger(__name__)

__all__ = ["DOCUMENT_KEYS", "parse_space", "serialize_space", "space_document",
           "load_space", "save_space", "export_dot", "parse_map",
           "parse_set", "parse_classes", "witness_document", "dumps"]

DOCUMENT_KEYS = ("name", "points", "limits", "metadata")

# Missing keys are listed in the warning up to this many.
_WARN_KEYS = 8


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DuplicateKey("duplicate key {0!r}".format(key))
        out[key] = value
    return out


def _plain(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError("{0!r} is not JSON serializable".format(obj))


def dumps(document):
    """Render a document as indented JSON with a trailing newline."""
    return json.dumps(document, indent=2, ensure_ascii=False,
                      default=_plain) + "\n"


def _key(carrier, mask):
    return " ".join(carrier.labels_of(mask))


def _parse_key(carrier, key):
    parts = key.split(" ")
    if key == "" or "" in parts:
        raise BadSubsetKey("malformed subset key {0!r}".format(key))
    indices = [carrier.index(label) for label in parts]
    if any(i >= j for i, j in zip(indices, indices[1:])):
        raise BadSubsetKey("subset key {0!r} is not in point order".format(
            key))
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _labels_at(path, value):
    if not isinstance(value, list) or not all(isinstance(v, str)
                                              for v in value):
        raise SchemaError("{0}: expected a list of labels".format(path))
    return value


def parse_space(text):
    """
    Read a space document.

    Args:
        text (str): UTF-8 JSON text.

    Returns:
        L (Preconvergence): The space, with the document name and metadata.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as err:
        raise SchemaError("line {0} column {1}: {2}".format(
            err.lineno, err.colno, err.msg))
    if not isinstance(doc, dict):
        raise SchemaError("$: expected an object")
    for key in ("points", "limits"):
        if key not in doc:
            raise SchemaError("$: missing {0!r}".format(key))
    extra = [key for key in doc if key not in DOCUMENT_KEYS]
    if extra:
        logger.warning("ignoring unknown document keys %s", extra)

    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("$.name: expected a string")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("$.metadata: expected an object")
    points = _labels_at("$.points", doc["points"])
    if any(label == "" or label.split() != [label] for label in points):
        raise SchemaError("$.points: labels must be nonempty and free of "
                          "whitespace")
    try:
        carrier = Carrier(points)
    except ValueError as err:
        raise SchemaError("$.points: {0}".format(err))
    if not isinstance(doc["limits"], dict):
        raise SchemaError("$.limits: expected an object")

    table = np.zeros(1 << carrier.size, dtype=np.int64)
    for key, value in doc["limits"].items():
        A = _parse_key(carrier, key)
        table[A] = carrier.mask(_labels_at("$.limits[{0!r}]".format(key),
                                           value))
    missing = [_key(carrier, A) for A in canonical_order(carrier.size)
               if _key(carrier, A) not in doc["limits"]]
    if missing:
        shown = ", ".join(repr(k) for k in missing[:_WARN_KEYS])
        if len(missing) > _WARN_KEYS:
            shown += ", ... ({0} in all)".format(len(missing))
        logger.warning("%s: no limits given for %s", name or "space", shown)
    return Preconvergence(carrier, table, name=name, metadata=metadata)


def space_document(L):
    """
    The canonical document of a space, as a dict.

    Points keep their order, keys run in size-then-point order and empty
    limit entries are left out.
    """
    for label in L.carrier.labels:
        if label == "" or label.split() != [label]:
            raise SchemaError("label {0!r} cannot appear in a subset "
                              "key".format(label))
    limits = {}
    for A in canonical_order(L.size):
        if L.limits[A]:
            limits[_key(L.carrier, A)] = L.carrier.labels_of(L.limits[A])
    doc = {"name": L.name or "unnamed",
           "points": list(L.carrier.labels),
           "limits": limits}
    if L.metadata:
        doc["metadata"] = L.metadata
    return doc


def serialize_space(L):
    """Canonical JSON text of a space."""
    return dumps(space_document(L))


def load_space(path):
    """Read a space document from a file."""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except UnicodeDecodeError as err:
        raise SchemaError("{0}: not valid UTF-8 ({1})".format(
            path, err.reason))
    return parse_space(text)


def save_space(L, path):
    """Write the canonical document of a space to a file."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_space(L))


def _gvquote(s):
    return '"{0}"'.format(s.replace("\\", "\\\\").replace('"', r'\"'))


def export_dot(space, name=None):
    """
    The specialisation preorder of the induced topology, in DOT.

    Nodes follow the carrier order and edges ``x -> y`` (x in the closure of
    {y}) are sorted by the indices of x and y.

    Args:
        space (Preconvergence or FiniteTopology): The space or topology.
        name (Optional[str]): Graph name. Default is the space name.

    Returns:
        text (str): The DOT source.
    """
    if name is None and not isinstance(space, FiniteTopology):
        name = space.name
    carrier = space.carrier
    graph = specialization_graph(space)
    edges = sorted(graph.edges(),
                   key=lambda e: (carrier.index(e[0]), carrier.index(e[1])))
    lines = ["digraph {0} {{".format(_gvquote(name or "specialization"))]
    for label in carrier.labels:
        lines.append("  {0};".format(_gvquote(label)))
    for x, y in edges:
        lines.append("  {0} -> {1};".format(_gvquote(x), _gvquote(y)))
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_map(text, X, Y):
    """
    Read a map written ``a:b,b:b``.

    Every point of X must appear exactly once.

    Returns:
        f (SpaceMap): The map X -> Y.
    """
    mapping = {}
    for item in text.split(","):
        parts = [p.strip() for p in item.split(":")]
        if len(parts) != 2 or not all(parts):
            raise SchemaError("malformed map entry {0!r}".format(item))
        source, target = parts
        X.carrier.index(source)
        if source in mapping:
            raise DuplicateKey("{0!r} is mapped twice".format(source))
        mapping[source] = target
    unmapped = [x for x in X.carrier.labels if x not in mapping]
    if unmapped:
        raise SchemaError("no image given for {0}".format(", ".join(unmapped)))
    return SpaceMap.from_labels(X, Y, mapping)


def parse_set(text, carrier):
    """Read a subset written as space-separated labels, e.g. ``"a b"``."""
    return carrier.subset(text.split())


def parse_classes(text, carrier):
    """Read a partition written ``"a b|c"``."""
    classes = [block.split() for block in text.split("|")]
    for block in classes:
        for label in block:
            carrier.index(label)
    return classes


def witness_document(w):
    """
    A search witness as a JSON-ready dict.

    The spaces are embedded as space documents and maps as index graphs, so
    the document is enough to rebuild and replay the instance.
    """
    return {"property": w.property,
            "theorem": w.theorem,
            "seed": w.seed,
            "instance": w.instance,
            "details": w.details,
            "spaces": [space_document(L) for L in w.spaces],
            "maps": [list(g) for g in w.maps],
            "context": w.context}
