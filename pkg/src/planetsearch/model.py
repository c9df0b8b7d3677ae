"""Domain model for the eleven-collection resource catalog.

Defines the entry types stored in a catalog, the identifier scheme that
cross-links entries between collections, and the cross-entry validation
rules (`validate_catalog`). All types are immutable values: safe to share
between threads without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union
from urllib.parse import urlparse

# The closed set of collection names. Any other name is rejected at parse time.
COLLECTION_NAMES: tuple[str, ...] = (
    "Activity",
    "Country",
    "Institute",
    "Keyword",
    "KeywordType",
    "N2dwg",
    "Node",
    "PDSnode",
    "Person",
    "Resource",
    "ScienceCase",
)

# Collections stored as flat field lists (GenericEntry).
GENERIC_COLLECTIONS: tuple[str, ...] = (
    "Activity",
    "Country",
    "Institute",
    "KeywordType",
    "N2dwg",
    "Node",
    "PDSnode",
    "ScienceCase",
)

# The closed set of resource section names (the result-card tab bar).
SECTION_NAMES: tuple[str, ...] = (
    "General Info",
    "Resource Info",
    "Responsibilities",
    "Related Persons",
    "URLs",
    "Restrictions",
    "Biblio Ref.",
    "Related Staff",
)

# A (field-name, field-value) pair. Values are display strings, never typed.
FieldPair = tuple[str, str]


class ModelError(ValueError):
    """A value violates one of the model's construction invariants."""


def require_collection(name: str) -> str:
    """Return `name` if it is a valid collection name, else raise ModelError."""
    if name not in COLLECTION_NAMES:
        raise ModelError(f"unknown collection {name!r} (valid: {', '.join(COLLECTION_NAMES)})")
    return name


def _require_id_value(value: str) -> str:
    # IDs must survive the keyword=value wire format unescaped.
    if not value:
        raise ModelError("entry id must be non-empty")
    if any(ch.isspace() for ch in value):
        raise ModelError(f"entry id {value!r} contains whitespace")
    if "=" in value or "&" in value:
        raise ModelError(f"entry id {value!r} contains '=' or '&'")
    return value


def is_absolute_url(url: str) -> bool:
    parsed = urlparse(url)
    return bool(parsed.scheme) and bool(parsed.netloc)


@dataclass(frozen=True, order=True)
class EntryId:
    """Identifier of one entry: a collection name plus an opaque value.

    Serialized as `collection:value` in link references.
    """

    collection: str
    value: str

    def __post_init__(self) -> None:
        require_collection(self.collection)
        _require_id_value(self.value)

    @property
    def ref(self) -> str:
        return f"{self.collection}:{self.value}"

    @classmethod
    def from_ref(cls, ref: str) -> "EntryId":
        collection, sep, value = ref.partition(":")
        if not sep:
            raise ModelError(f"link reference {ref!r} is not of the form collection:id")
        return cls(collection, value)

    def __str__(self) -> str:
        return self.ref


@dataclass(frozen=True)
class Section:
    """One named group of display fields on a resource card."""

    name: str
    fields: tuple[FieldPair, ...] = ()

    def __post_init__(self) -> None:
        if self.name not in SECTION_NAMES:
            raise ModelError(
                f"unknown section name {self.name!r} (valid: {', '.join(SECTION_NAMES)})"
            )


@dataclass(frozen=True)
class ResourceDescriptor:
    """A catalogued resource with its sectioned descriptive fields."""

    id: EntryId
    name: str
    short_description: str = ""
    url: Optional[str] = None
    long_description: str = ""
    sections: tuple[Section, ...] = ()
    links: tuple[EntryId, ...] = ()

    def __post_init__(self) -> None:
        if self.id.collection != "Resource":
            raise ModelError(f"resource entry carries id from collection {self.id.collection!r}")
        if not self.name:
            raise ModelError(f"resource {self.id.ref} has an empty name")
        if self.url is not None and not is_absolute_url(self.url):
            raise ModelError(f"resource {self.id.ref} url {self.url!r} is not absolute")
        seen = set()
        for section in self.sections:
            if section.name in seen:
                raise ModelError(f"resource {self.id.ref} repeats section {section.name!r}")
            seen.add(section.name)
        for link in self.links:
            if link == self.id:
                raise ModelError(f"resource {self.id.ref} links to itself")


@dataclass(frozen=True)
class PersonDescriptor:
    """A person entry, optionally affiliated with an institute."""

    id: EntryId
    name: str
    institute: Optional[EntryId] = None
    free_fields: tuple[FieldPair, ...] = ()

    def __post_init__(self) -> None:
        if self.id.collection != "Person":
            raise ModelError(f"person entry carries id from collection {self.id.collection!r}")
        if self.institute is not None and self.institute.collection != "Institute":
            raise ModelError(
                f"person {self.id.ref} institute link targets {self.institute.collection!r}"
            )


@dataclass(frozen=True)
class KeywordEntry:
    """A keyword with a reference to its keyword type."""

    id: EntryId
    name: str
    type_id: EntryId

    def __post_init__(self) -> None:
        if self.id.collection != "Keyword":
            raise ModelError(f"keyword entry carries id from collection {self.id.collection!r}")
        if self.type_id.collection != "KeywordType":
            raise ModelError(f"keyword {self.id.ref} type link targets {self.type_id.collection!r}")


@dataclass(frozen=True)
class GenericEntry:
    """An entry of one of the flat collections: an id plus free field pairs."""

    id: EntryId
    fields: tuple[FieldPair, ...] = ()

    def __post_init__(self) -> None:
        if self.id.collection not in GENERIC_COLLECTIONS:
            raise ModelError(
                f"collection {self.id.collection!r} entries need a dedicated type, not GenericEntry"
            )


Entry = Union[ResourceDescriptor, PersonDescriptor, KeywordEntry, GenericEntry]


@dataclass(frozen=True)
class NodeDescriptor:
    """Name and query endpoint of one peer in the federation registry."""

    name: str
    base_url: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("peer node name must be non-empty")
        if not is_absolute_url(self.base_url):
            raise ModelError(f"peer {self.name!r} base url {self.base_url!r} is not absolute")


def entry_links(entry: Entry) -> tuple[EntryId, ...]:
    """All EntryIds this entry references in other entries."""
    if isinstance(entry, ResourceDescriptor):
        return entry.links
    if isinstance(entry, PersonDescriptor):
        return (entry.institute,) if entry.institute is not None else ()
    if isinstance(entry, KeywordEntry):
        return (entry.type_id,)
    return ()


def entry_name(entry: Entry) -> str:
    """The entry's display name; for flat entries, the field called `name`."""
    if isinstance(entry, GenericEntry):
        for fname, fvalue in entry.fields:
            if fname.lower() == "name":
                return fvalue
        return ""
    return entry.name


def entry_descriptions(entry: Entry) -> tuple[str, ...]:
    """The entry's description texts; for flat entries, fields called `description`."""
    if isinstance(entry, ResourceDescriptor):
        return (entry.short_description, entry.long_description)
    if isinstance(entry, (PersonDescriptor, GenericEntry)):
        pairs = entry.free_fields if isinstance(entry, PersonDescriptor) else entry.fields
        return tuple(v for k, v in pairs if k.lower() == "description")
    return ()


def index_texts(entry: Entry) -> tuple[str, ...]:
    """The texts feeding the suggestion word index: name and descriptions only."""
    name = entry_name(entry)
    texts = (name,) if name else ()
    return texts + tuple(t for t in entry_descriptions(entry) if t)


def all_texts(entry: Entry) -> tuple[str, ...]:
    """Every text field of the entry, for whole-record free-text matching.

    Covers name, descriptions, url, and every section/flat field value.
    Field names are schema labels and are not included.
    """
    texts: list[str] = []
    if isinstance(entry, ResourceDescriptor):
        texts.extend([entry.name, entry.short_description, entry.long_description])
        if entry.url:
            texts.append(entry.url)
        for section in entry.sections:
            texts.extend(v for _, v in section.fields)
    elif isinstance(entry, PersonDescriptor):
        texts.append(entry.name)
        texts.extend(v for _, v in entry.free_fields)
    elif isinstance(entry, KeywordEntry):
        texts.append(entry.name)
    else:
        texts.extend(v for _, v in entry.fields)
    return tuple(t for t in texts if t)


def named_fields(entry: Entry) -> tuple[FieldPair, ...]:
    """All (field-name, value) pairs of the entry, sections flattened in order."""
    if isinstance(entry, ResourceDescriptor):
        pairs: list[FieldPair] = []
        for section in entry.sections:
            pairs.extend(section.fields)
        return tuple(pairs)
    if isinstance(entry, PersonDescriptor):
        return entry.free_fields
    if isinstance(entry, GenericEntry):
        return entry.fields
    return ()


@dataclass(frozen=True)
class Violation:
    """One failed validation rule, attributed to a collection and entry."""

    collection: str
    entry_id: str
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        suffix = f": {self.detail}" if self.detail else ""
        return f"{self.collection}:{self.entry_id} [{self.rule}]{suffix}"


def validate_catalog(collections: Mapping[str, Sequence[Entry]]) -> list[Violation]:
    """Check every cross-entry invariant; violations are data, not errors.

    Rules reported: `misfiled-entry` (entry listed under the wrong
    collection), `duplicate-id`, `dangling-link`, and
    `duplicate-resource-name` (resource names must be unique so that
    by-name drill-down stays unambiguous).
    """
    violations: list[Violation] = []
    known_ids: set[EntryId] = set()

    for collection, entries in collections.items():
        require_collection(collection)
        seen: set[str] = set()
        for entry in entries:
            if entry.id.collection != collection:
                violations.append(
                    Violation(collection, entry.id.value, "misfiled-entry",
                              f"entry belongs to {entry.id.collection}")
                )
            if entry.id.value in seen:
                violations.append(Violation(collection, entry.id.value, "duplicate-id"))
            seen.add(entry.id.value)
            known_ids.add(entry.id)

    names_seen: dict[str, str] = {}
    for entry in collections.get("Resource", ()):
        other = names_seen.get(entry.name)
        if other is not None:
            violations.append(
                Violation("Resource", entry.id.value, "duplicate-resource-name",
                          f"name {entry.name!r} already used by {other}")
            )
        else:
            names_seen[entry.name] = entry.id.value

    for collection, entries in collections.items():
        for entry in entries:
            for link in entry_links(entry):
                if link not in known_ids:
                    violations.append(
                        Violation(collection, entry.id.value, "dangling-link",
                                  f"unresolved {link.ref}")
                    )
    return violations


def iter_entries(collections: Mapping[str, Sequence[Entry]]) -> Iterator[Entry]:
    """All entries in document order: canonical collection order, then file order."""
    for collection in COLLECTION_NAMES:
        yield from collections.get(collection, ())
