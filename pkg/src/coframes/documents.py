"""JSON document formats for every object the engine exchanges with disk.

One canonical serialization per kind, strict parsers that reject missing or
unknown entries, and a kind sniffer so the command line can validate a file
without being told what it holds.  Canonical form: object keys sorted,
subset labels written as ``{a,b}`` with the member labels sorted, two-space
indentation, trailing newline.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from .adherence import AdherenceStructure
from .convergence import ConvergenceStructure
from .duality import (
    FiniteAdherenceSpace,
    FiniteConvergenceSpace,
    FiniteTopologicalSpace,
)
from .errors import DocumentError
from .filters import Filter, UpSet
from .lattice import FiniteLattice, bits, build_lattice, dualize, powerset_lattice
from .topology import TopologicalStructure, topological_structure

__all__ = [
    "adherence_from_doc",
    "adherence_space_from_doc",
    "adherence_space_to_doc",
    "adherence_to_doc",
    "canonical_json",
    "convergence_from_doc",
    "convergence_to_doc",
    "document_kind",
    "filter_from_doc",
    "filter_to_doc",
    "lattice_from_doc",
    "lattice_to_doc",
    "load_document",
    "space_from_doc",
    "space_to_doc",
    "structure_from_doc",
    "structure_to_doc",
    "subset_mask",
    "topological_space_from_doc",
    "topological_space_to_doc",
    "topology_from_doc",
    "topology_to_doc",
    "upset_from_doc",
    "upset_to_doc",
]


def canonical_json(doc: Any) -> str:
    """The one true serialization: sorted keys, 2-space indent, newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# subset labels (used by the space documents)


def _check_point_labels(points: Iterable[str]) -> tuple[str, ...]:
    pts = tuple(points)
    for p in pts:
        if not isinstance(p, str) or not p:
            raise DocumentError("point labels must be non-empty strings")
        if p != p.strip():
            raise DocumentError(f"point label {p!r} may not have flanking spaces")
    if len(set(pts)) != len(pts):
        raise DocumentError("point labels must be unique")
    return pts


def subset_label(points: tuple[str, ...], mask: int) -> str:
    return "{" + ",".join(sorted(points[i] for i in bits(mask))) + "}"


def _subset_parses(
    points: tuple[str, ...], fragments: list[str], lenient: bool
) -> set[int]:
    """All ways of reassembling comma-split fragments into known point
    labels (labels may themselves contain commas, so fragments are grouped
    by backtracking)."""
    index = {p: i for i, p in enumerate(points)}
    results: set[int] = set()

    def rec(pos: int, mask: int) -> None:
        if pos == len(fragments):
            results.add(mask)
            return
        for end in range(pos, len(fragments)):
            name = ",".join(fragments[pos : end + 1])
            if lenient and end == pos:
                name = name.strip()
            i = index.get(name)
            if i is not None and not mask >> i & 1:
                rec(end + 1, mask | 1 << i)

    rec(0, 0)
    return results


def subset_mask(points: tuple[str, ...], label: str) -> int:
    if not isinstance(label, str):
        raise DocumentError(f"subset label must be a string, got {label!r}")
    body = label.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise DocumentError(f"subset label {label!r} is not brace-delimited")
    inner = body[1:-1]
    if not inner.strip():
        return 0
    parses = _subset_parses(points, inner.split(","), lenient=False)
    if not parses:
        parses = _subset_parses(points, inner.split(","), lenient=True)
    if not parses:
        raise DocumentError(f"{label!r} does not name a subset of {list(points)}")
    if len(parses) > 1:
        raise DocumentError(f"subset label {label!r} is ambiguous")
    return parses.pop()


# ---------------------------------------------------------------------------
# lattices


def _require_mapping(doc: Any, kind: str) -> Mapping[str, Any]:
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{kind} document must be a JSON object")
    return doc


def _string_list(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise DocumentError(f"{what} must be a list of strings")
    return list(value)


def lattice_to_doc(lattice: FiniteLattice) -> dict[str, Any]:
    covers = sorted(
        [lattice.label(lo), lattice.label(hi)]
        for hi in range(lattice.n)
        for lo in lattice.lower_covers(hi)
    )
    return {
        "name": lattice.name,
        "elements": list(lattice.elements),
        "covers": covers,
    }


_LATTICE_KEYS = {"name", "elements", "covers", "powerset", "as"}


def lattice_from_doc(doc: Any) -> FiniteLattice:
    """Build a lattice from a document, a ``{"powerset": [...]}`` shorthand,
    or a built-in fixture name.  ``"as": "frame"`` means the document lists
    the *opposite* order, so the result is dualized after construction."""
    if isinstance(doc, str):
        from .fixtures import lattice_fixture

        return lattice_fixture(doc)
    doc = _require_mapping(doc, "lattice")
    extra = set(doc) - _LATTICE_KEYS
    if extra:
        raise DocumentError(f"unknown lattice document keys {sorted(extra)}")
    as_kind = doc.get("as", "coframe")
    if as_kind not in ("coframe", "frame"):
        raise DocumentError(f'"as" must be "frame" or "coframe", got {as_kind!r}')
    if "powerset" in doc:
        if "elements" in doc or "covers" in doc:
            raise DocumentError('"powerset" excludes "elements"/"covers"')
        lattice = powerset_lattice(tuple(_string_list(doc["powerset"], '"powerset"')))
    else:
        if "elements" not in doc or "covers" not in doc:
            raise DocumentError('lattice document needs "elements" and "covers"')
        elements = _string_list(doc["elements"], '"elements"')
        raw = doc["covers"]
        if not isinstance(raw, list):
            raise DocumentError('"covers" must be a list of [lo, hi] pairs')
        covers = []
        for pair in raw:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(p, str) for p in pair)
            ):
                raise DocumentError(f"cover {pair!r} is not a [lo, hi] label pair")
            covers.append((pair[0], pair[1]))
        name = doc.get("name", "lattice")
        if not isinstance(name, str) or not name:
            raise DocumentError('"name" must be a non-empty string')
        try:
            lattice = build_lattice(name, elements, covers)
        except KeyError as err:
            raise DocumentError(
                f'"covers" names undeclared element {err.args[0]!r}'
            ) from None
    if as_kind == "frame":
        lattice = dualize(lattice)
    return lattice


def _label_of(lattice: FiniteLattice, value: Any, what: str) -> int:
    if not isinstance(value, str):
        raise DocumentError(f"{what} must be an element label, got {value!r}")
    try:
        return lattice.index(value)
    except KeyError:
        raise DocumentError(f"unknown element {value!r} in {what}") from None


def _table_from_mapping(
    lattice: FiniteLattice, mapping: Any, key: str
) -> tuple[int, ...]:
    if not isinstance(mapping, Mapping):
        raise DocumentError(f'"{key}" must be an object mapping labels to labels')
    seen = set()
    table = [0] * lattice.n
    for k, v in mapping.items():
        i = _label_of(lattice, k, f'"{key}" key')
        seen.add(i)
        table[i] = _label_of(lattice, v, f'"{key}"[{k!r}]')
    missing = [lattice.label(i) for i in range(lattice.n) if i not in seen]
    if missing:
        raise DocumentError(f'"{key}" is missing entries for {missing}')
    return tuple(table)


# ---------------------------------------------------------------------------
# lattice-side structures


def convergence_to_doc(cs: ConvergenceStructure) -> dict[str, Any]:
    lat = cs.lattice
    return {
        "lattice": lattice_to_doc(lat),
        "lim": {lat.label(g): lat.label(cs.limtab[g]) for g in range(lat.n)},
    }


def convergence_from_doc(doc: Any) -> ConvergenceStructure:
    doc = _require_mapping(doc, "convergence")
    if set(doc) != {"lattice", "lim"}:
        raise DocumentError('convergence document needs exactly "lattice" and "lim"')
    lattice = lattice_from_doc(doc["lattice"])
    return ConvergenceStructure(lattice, _table_from_mapping(lattice, doc["lim"], "lim"))


def adherence_to_doc(ns: AdherenceStructure) -> dict[str, Any]:
    lat = ns.lattice
    return {
        "lattice": lattice_to_doc(lat),
        "nu": {lat.label(l): lat.label(ns.nutab[l]) for l in range(lat.n)},
    }


def adherence_from_doc(doc: Any) -> AdherenceStructure:
    doc = _require_mapping(doc, "adherence")
    if set(doc) != {"lattice", "nu"}:
        raise DocumentError('adherence document needs exactly "lattice" and "nu"')
    lattice = lattice_from_doc(doc["lattice"])
    return AdherenceStructure(lattice, _table_from_mapping(lattice, doc["nu"], "nu"))


def topology_to_doc(ts: TopologicalStructure) -> dict[str, Any]:
    lat = ts.lattice
    return {
        "lattice": lattice_to_doc(lat),
        "closed": sorted(lat.label(c) for c in bits(ts.closed)),
    }


def topology_from_doc(doc: Any) -> TopologicalStructure:
    doc = _require_mapping(doc, "topology")
    if set(doc) != {"lattice", "closed"}:
        raise DocumentError('topological document needs exactly "lattice" and "closed"')
    lattice = lattice_from_doc(doc["lattice"])
    labels = _string_list(doc["closed"], '"closed"')
    members = [_label_of(lattice, c, '"closed"') for c in labels]
    if len(set(members)) != len(members):
        raise DocumentError('"closed" lists an element twice')
    return topological_structure(lattice, members)


# ---------------------------------------------------------------------------
# filter and up-set literals


def filter_to_doc(f: Filter) -> dict[str, Any]:
    return {"filter": f.lattice.label(f.generator)}


def filter_from_doc(doc: Any, lattice: FiniteLattice) -> Filter:
    doc = _require_mapping(doc, "filter")
    if set(doc) - {"filter", "lattice"} or "filter" not in doc:
        raise DocumentError('filter document needs a "filter" generator label')
    return Filter(lattice, _label_of(lattice, doc["filter"], '"filter"'))


def upset_to_doc(u: UpSet) -> dict[str, Any]:
    return {"upset": sorted(u.lattice.label(i) for i in bits(u.members))}


def upset_from_doc(doc: Any, lattice: FiniteLattice) -> UpSet:
    """Upward closure is validated, never applied silently."""
    doc = _require_mapping(doc, "up-set")
    if set(doc) - {"upset", "lattice"} or "upset" not in doc:
        raise DocumentError('up-set document needs an "upset" member list')
    labels = _string_list(doc["upset"], '"upset"')
    members = 0
    for c in labels:
        members |= 1 << _label_of(lattice, c, '"upset"')
    return UpSet(lattice, members)


# ---------------------------------------------------------------------------
# spaces


def _subset_table_doc(
    pts: tuple[str, ...], table: tuple[int, ...]
) -> dict[str, str]:
    out = {subset_label(pts, a): subset_label(pts, table[a]) for a in range(len(table))}
    if len(out) != len(table):
        raise DocumentError("point labels make subset labels collide")
    return out


def space_to_doc(space: FiniteConvergenceSpace) -> dict[str, Any]:
    return {
        "points": list(space.points),
        "lim": _subset_table_doc(space.points, space.limtab),
    }


def _space_table(doc: Mapping[str, Any], key: str) -> tuple[tuple[str, ...], list[int]]:
    pts = _check_point_labels(_string_list(doc["points"], '"points"'))
    mapping = doc[key]
    if not isinstance(mapping, Mapping):
        raise DocumentError(f'"{key}" must map subset labels to subset labels')
    table = [-1] * (1 << len(pts))
    for k, v in mapping.items():
        a = subset_mask(pts, k)
        if table[a] != -1:
            raise DocumentError(f"subset {k!r} listed twice")
        table[a] = subset_mask(pts, v)
    missing = [subset_label(pts, a) for a, v in enumerate(table) if v == -1]
    if missing:
        raise DocumentError(f'"{key}" is missing entries for {missing}')
    return pts, table


def space_from_doc(doc: Any) -> FiniteConvergenceSpace:
    doc = _require_mapping(doc, "space")
    if set(doc) != {"points", "lim"}:
        raise DocumentError('space document needs exactly "points" and "lim"')
    pts, table = _space_table(doc, "lim")
    return FiniteConvergenceSpace(pts, tuple(table))


def adherence_space_to_doc(adh: FiniteAdherenceSpace) -> dict[str, Any]:
    return {
        "points": list(adh.points),
        "nu": _subset_table_doc(adh.points, adh.adhtab),
    }


def adherence_space_from_doc(doc: Any) -> FiniteAdherenceSpace:
    doc = _require_mapping(doc, "adherence space")
    if set(doc) != {"points", "nu"}:
        raise DocumentError('adherence-space document needs exactly "points" and "nu"')
    pts, table = _space_table(doc, "nu")
    return FiniteAdherenceSpace(pts, tuple(table))


def topological_space_to_doc(tsp: FiniteTopologicalSpace) -> dict[str, Any]:
    labels = sorted(subset_label(tsp.points, c) for c in tsp.closed)
    if len(set(labels)) != len(labels):
        raise DocumentError("point labels make subset labels collide")
    return {"points": list(tsp.points), "closed": labels}


def topological_space_from_doc(doc: Any) -> FiniteTopologicalSpace:
    doc = _require_mapping(doc, "topological space")
    if set(doc) != {"points", "closed"}:
        raise DocumentError(
            'topological-space document needs exactly "points" and "closed"'
        )
    pts = _check_point_labels(_string_list(doc["points"], '"points"'))
    labels = _string_list(doc["closed"], '"closed"')
    masks = [subset_mask(pts, c) for c in labels]
    if len(set(masks)) != len(masks):
        raise DocumentError('"closed" lists a subset twice')
    return FiniteTopologicalSpace(pts, tuple(sorted(masks)))


# ---------------------------------------------------------------------------
# kind detection and dispatch


def document_kind(doc: Any) -> str:
    """Sniff which document format a parsed JSON value uses."""
    if isinstance(doc, str):
        return "lattice"
    doc = _require_mapping(doc, "any")
    if "points" in doc:
        if "lim" in doc:
            return "space"
        if "nu" in doc:
            return "adherence-space"
        if "closed" in doc:
            return "topological-space"
        raise DocumentError('a "points" document needs "lim", "nu" or "closed"')
    if "lattice" in doc:
        if "lim" in doc:
            return "convergence"
        if "nu" in doc:
            return "adherence"
        if "closed" in doc:
            return "topology"
        if "filter" in doc:
            return "filter"
        if "upset" in doc:
            return "upset"
        raise DocumentError(
            'a "lattice" document needs "lim", "nu", "closed", "filter" or "upset"'
        )
    if "elements" in doc or "powerset" in doc:
        return "lattice"
    raise DocumentError(f"cannot tell what kind of document this is: keys {sorted(doc)}")


def structure_from_doc(doc: Any):
    """Parse a document of any kind into the corresponding engine object."""
    kind = document_kind(doc)
    if kind == "lattice":
        return lattice_from_doc(doc)
    if kind == "convergence":
        return convergence_from_doc(doc)
    if kind == "adherence":
        return adherence_from_doc(doc)
    if kind == "topology":
        return topology_from_doc(doc)
    if kind == "space":
        return space_from_doc(doc)
    if kind == "adherence-space":
        return adherence_space_from_doc(doc)
    if kind == "topological-space":
        return topological_space_from_doc(doc)
    lattice = lattice_from_doc(doc["lattice"])
    if kind == "filter":
        return filter_from_doc(doc, lattice)
    return upset_from_doc(doc, lattice)


def structure_to_doc(obj: Any) -> dict[str, Any]:
    """Serialize any engine object to its document form."""
    if isinstance(obj, FiniteLattice):
        return lattice_to_doc(obj)
    if isinstance(obj, ConvergenceStructure):
        return convergence_to_doc(obj)
    if isinstance(obj, AdherenceStructure):
        return adherence_to_doc(obj)
    if isinstance(obj, TopologicalStructure):
        return topology_to_doc(obj)
    if isinstance(obj, FiniteConvergenceSpace):
        return space_to_doc(obj)
    if isinstance(obj, FiniteAdherenceSpace):
        return adherence_space_to_doc(obj)
    if isinstance(obj, FiniteTopologicalSpace):
        return topological_space_to_doc(obj)
    if isinstance(obj, Filter):
        doc = filter_to_doc(obj)
        doc["lattice"] = lattice_to_doc(obj.lattice)
        return doc
    if isinstance(obj, UpSet):
        doc = upset_to_doc(obj)
        doc["lattice"] = lattice_to_doc(obj.lattice)
        return doc
    raise DocumentError(f"cannot serialize {type(obj).__name__}")


def load_document(text: str):
    """Parse JSON text and build the object it describes."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError(f"not valid JSON: {err}") from None
    return document_kind(doc), structure_from_doc(doc)
