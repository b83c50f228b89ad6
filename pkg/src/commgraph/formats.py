"""Document persistence, CSV ingestion, and graph exports.

The document format is versioned JSON with a fixed key order:
format_version, people, communities, links, memberships. People entries
may carry an optional role and tags, community entries an optional
domain_tag; this metadata is descriptive only, lives in documents alone,
and is not part of the in-memory state. Serialization is canonical:
sorted, deduplicated, 2-space indent, UTF-8, trailing newline, so equal
inputs give byte-identical outputs on every platform.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple
from xml.sax.saxutils import escape, quoteattr

from .analysis import ClusterLabeling
from .core import CommunityState, EntityId, Kind, build, check_entity_name
from .errors import (
    BuildError,
    CommunityError,
    EmptyInput,
    ParseError,
    SchemaError,
)

FORMAT_VERSION = "1"

MEMBER_KINDS = ("person", "community")


@dataclass(frozen=True)
class PersonEntry:
    name: str
    role: Optional[str] = None
    tags: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CommunityEntry:
    name: str
    domain_tag: Optional[str] = None


@dataclass(frozen=True)
class CommunityDocument:
    """Decoded document: the on-disk shape of a state plus metadata.

    links entries are (source_name, target_name); memberships entries are
    (member_name, member_kind, community_name), where member_kind
    disambiguates the two name spaces.
    """

    format_version: str = FORMAT_VERSION
    people: Tuple[PersonEntry, ...] = ()
    communities: Tuple[CommunityEntry, ...] = ()
    links: Tuple[Tuple[str, str], ...] = ()
    memberships: Tuple[Tuple[str, str, str], ...] = ()


def _checked_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a string, got {type(value).__name__}")
    return value


def _checked_name(value, where: str) -> str:
    _checked_str(value, where)
    try:
        check_entity_name(value)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    return value


def _checked_fields(obj, required, optional, where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise SchemaError(f"{where}: unknown fields {unknown}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise SchemaError(f"{where}: missing fields {missing}")


def _checked_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return value


def _parse_person(obj, where: str) -> PersonEntry:
    _checked_fields(obj, ("name",), ("role", "tags"), where)
    name = _checked_name(obj["name"], f"{where}.name")
    role = None
    if "role" in obj:
        role = _checked_str(obj["role"], f"{where}.role")
    tags: Tuple[str, ...] = ()
    if "tags" in obj:
        raw = _checked_list(obj["tags"], f"{where}.tags")
        tags = tuple(
            _checked_str(tag, f"{where}.tags[{i}]") for i, tag in enumerate(raw)
        )
    return PersonEntry(name=name, role=role, tags=tags)


def _parse_community(obj, where: str) -> CommunityEntry:
    _checked_fields(obj, ("name",), ("domain_tag",), where)
    name = _checked_name(obj["name"], f"{where}.name")
    domain_tag = None
    if "domain_tag" in obj:
        domain_tag = _checked_str(obj["domain_tag"], f"{where}.domain_tag")
    return CommunityEntry(name=name, domain_tag=domain_tag)


def parse_document(data) -> CommunityDocument:
    """Decode document bytes; strict about structure, silent about content.

    Raises ParseError for malformed JSON and SchemaError for anything not
    matching the document layout (unknown fields, wrong types, bad
    member_kind, invalid names, unsupported format_version).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not valid UTF-8: {exc}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"document is not valid JSON: {exc}", line=exc.lineno) from None

    _checked_fields(
        raw,
        ("format_version", "people", "communities", "links", "memberships"),
        (),
        "document",
    )
    version = _checked_str(raw["format_version"], "document.format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(
            f"document.format_version: unsupported version {version!r}"
            f" (expected {FORMAT_VERSION!r})"
        )

    people = tuple(
        _parse_person(obj, f"people[{i}]")
        for i, obj in enumerate(_checked_list(raw["people"], "document.people"))
    )
    communities = tuple(
        _parse_community(obj, f"communities[{i}]")
        for i, obj in enumerate(
            _checked_list(raw["communities"], "document.communities")
        )
    )

    links = []
    for i, entry in enumerate(_checked_list(raw["links"], "document.links")):
        where = f"links[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(f"{where}: expected [source_name, target_name]")
        links.append(
            (
                _checked_name(entry[0], f"{where}[0]"),
                _checked_name(entry[1], f"{where}[1]"),
            )
        )

    memberships = []
    for i, entry in enumerate(
        _checked_list(raw["memberships"], "document.memberships")
    ):
        where = f"memberships[{i}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise SchemaError(
                f"{where}: expected [member_name, member_kind, community_name]"
            )
        member = _checked_name(entry[0], f"{where}[0]")
        kind = _checked_str(entry[1], f"{where}[1]")
        if kind not in MEMBER_KINDS:
            raise SchemaError(
                f"{where}[1]: member_kind must be one of {list(MEMBER_KINDS)},"
                f" got {kind!r}"
            )
        community = _checked_name(entry[2], f"{where}[2]")
        memberships.append((member, kind, community))

    return CommunityDocument(
        format_version=version,
        people=people,
        communities=communities,
        links=tuple(links),
        memberships=tuple(memberships),
    )


def _merge_entries(entries, label: str):
    merged = {}
    for entry in entries:
        seen = merged.get(entry.name)
        if seen is None:
            merged[entry.name] = entry
        elif seen != entry:
            raise SchemaError(
                f"{label} entry {entry.name!r} duplicated with conflicting metadata"
            )
    return tuple(merged[name] for name in sorted(merged))


def canonical_document(doc: CommunityDocument) -> CommunityDocument:
    """Sort and deduplicate; conflicting duplicate entries are rejected."""
    people = _merge_entries(
        (
            PersonEntry(e.name, e.role, tuple(sorted(set(e.tags))))
            for e in doc.people
        ),
        "people",
    )
    communities = _merge_entries(doc.communities, "communities")
    links = tuple(sorted(set(doc.links)))
    memberships = tuple(
        sorted(set(doc.memberships), key=lambda m: ((m[1], m[0]), m[2]))
    )
    return CommunityDocument(
        format_version=doc.format_version,
        people=people,
        communities=communities,
        links=links,
        memberships=memberships,
    )


def document_to_bytes(doc: CommunityDocument) -> bytes:
    """Serialize canonically: byte-identical for equal document contents."""
    doc = canonical_document(doc)
    people = []
    for entry in doc.people:
        obj = {"name": entry.name}
        if entry.role is not None:
            obj["role"] = entry.role
        if entry.tags:
            obj["tags"] = list(entry.tags)
        people.append(obj)
    communities = []
    for entry in doc.communities:
        obj = {"name": entry.name}
        if entry.domain_tag is not None:
            obj["domain_tag"] = entry.domain_tag
        communities.append(obj)
    payload = {
        "format_version": doc.format_version,
        "people": people,
        "communities": communities,
        "links": [list(pair) for pair in doc.links],
        "memberships": [list(entry) for entry in doc.memberships],
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def document_to_state(doc: CommunityDocument) -> CommunityState:
    """Assemble the state, reporting every dangling reference with its index."""
    people = frozenset(EntityId.person(e.name) for e in doc.people)
    communities = frozenset(EntityId.community(e.name) for e in doc.communities)
    person_names = {p.name for p in people}
    community_names = {c.name for c in communities}

    problems = []
    links = []
    for i, (src, tgt) in enumerate(doc.links):
        for name in (src, tgt):
            if name not in person_names:
                problems.append(f"links[{i}]: unknown person {name!r}")
        links.append((EntityId.person(src), EntityId.person(tgt)))

    memberships = []
    for i, (member, kind, community) in enumerate(doc.memberships):
        if kind == "person":
            if member not in person_names:
                problems.append(f"memberships[{i}]: unknown person {member!r}")
            source = EntityId.person(member)
        else:
            if member not in community_names:
                problems.append(f"memberships[{i}]: unknown community {member!r}")
            source = EntityId.community(member)
        if community not in community_names:
            problems.append(f"memberships[{i}]: unknown community {community!r}")
        memberships.append((source, EntityId.community(community)))

    if problems:
        raise BuildError("; ".join(problems))
    try:
        return build(people, communities, links, memberships)
    except CommunityError as exc:
        raise BuildError(f"document does not assemble: {exc}", exc.offenders) from exc


def document_from_state(state: CommunityState) -> CommunityDocument:
    return CommunityDocument(
        format_version=FORMAT_VERSION,
        people=tuple(PersonEntry(p.name) for p in sorted(state.people)),
        communities=tuple(CommunityEntry(c.name) for c in sorted(state.communities)),
        links=tuple((a.name, b.name) for a, b in state.links.pairs()),
        memberships=tuple(
            (m.name, m.kind.value, c.name) for m, c in state.memberships.pairs()
        ),
    )


def load_document(data) -> CommunityState:
    """Decode bytes and assemble the validated state."""
    return document_to_state(parse_document(data))


def save_document(state: CommunityState) -> bytes:
    """Canonical document bytes for the state."""
    return document_to_bytes(document_from_state(state))


def canonicalize_document(data) -> bytes:
    """Re-emit a document in canonical form, metadata included."""
    return document_to_bytes(parse_document(data))


def import_links_csv(data, default_kind: Kind = Kind.PERSON) -> CommunityState:
    """Build a links-only state from a source,target edge list.

    Every mentioned name becomes an entity of ``default_kind`` (the
    default, person, is the only kind that yields a buildable state).
    Duplicated edges collapse. An optional first line `source,target` is
    treated as a header.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None

    names = set()
    edges = set()
    first_data_row = True
    for lineno, row in enumerate(csv.reader(data.splitlines()), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise ParseError(
                f"line {lineno}: expected source,target ({len(row)} fields)",
                line=lineno,
            )
        source, target = (field.strip() for field in row)
        if first_data_row and (source, target) == ("source", "target"):
            first_data_row = False
            continue
        first_data_row = False
        for name in (source, target):
            if not name:
                raise ParseError(f"line {lineno}: empty name", line=lineno)
        names.update((source, target))
        edges.add((EntityId(default_kind, source), EntityId(default_kind, target)))

    if not edges:
        raise EmptyInput("no edges in input")
    people = frozenset(EntityId(default_kind, name) for name in names)
    return build(people, (), edges, ())


DOT_PALETTE = (
    "lightblue",
    "lightcoral",
    "palegreen",
    "gold",
    "plum",
    "orange",
    "cyan",
    "khaki",
    "pink",
    "lavender",
    "salmon",
    "tan",
)


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(state: CommunityState, clusters: Optional[ClusterLabeling] = None) -> bytes:
    """Render the state as a deterministic DOT digraph.

    People are ellipses, communities boxes; links are solid edges and
    memberships dashed ones. With a cluster labeling, person nodes are
    filled with a palette color cycled by cluster index.
    """
    lines = ["digraph community {"]
    for entity in sorted(state.entities):
        attrs = [f"label={_dot_quote(entity.name)}"]
        attrs.append("shape=ellipse" if entity.kind is Kind.PERSON else "shape=box")
        if clusters is not None and entity in clusters.assignment:
            index = clusters.assignment[entity]
            attrs.append("style=filled")
            attrs.append(f"fillcolor={DOT_PALETTE[index % len(DOT_PALETTE)]}")
        lines.append(f"  {_dot_quote(str(entity))} [{', '.join(attrs)}];")
    for a, b in state.links.pairs():
        lines.append(f"  {_dot_quote(str(a))} -> {_dot_quote(str(b))} [style=solid];")
    for member, community in state.memberships.pairs():
        lines.append(
            f"  {_dot_quote(str(member))} -> {_dot_quote(str(community))} [style=dashed];"
        )
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_graphml(
    state: CommunityState, clusters: Optional[ClusterLabeling] = None
) -> bytes:
    """Render the state as deterministic GraphML.

    Nodes carry a `kind` key (and `cluster` when a labeling is given);
    edges carry a `relation` key valued "link" or "membership".
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="kind" for="node" attr.name="kind" attr.type="string"/>',
    ]
    if clusters is not None:
        lines.append(
            '  <key id="cluster" for="node" attr.name="cluster" attr.type="int"/>'
        )
    lines.append(
        '  <key id="relation" for="edge" attr.name="relation" attr.type="string"/>'
    )
    lines.append('  <graph id="community" edgedefault="directed">')
    for entity in sorted(state.entities):
        data = f'<data key="kind">{escape(entity.kind.value)}</data>'
        if clusters is not None and entity in clusters.assignment:
            data += f'<data key="cluster">{clusters.assignment[entity]}</data>'
        lines.append(f"    <node id={quoteattr(str(entity))}>{data}</node>")
    for relation, rel in (("link", state.links), ("membership", state.memberships)):
        for a, b in rel.pairs():
            lines.append(
                f"    <edge source={quoteattr(str(a))} target={quoteattr(str(b))}>"
                f'<data key="relation">{relation}</data></edge>'
            )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return ("\n".join(lines) + "\n").encode("utf-8")
