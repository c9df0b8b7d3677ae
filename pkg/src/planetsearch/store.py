"""On-disk XML catalog store: parsing, persistence, indexing, mutation.

One UTF-8 XML file per collection, named `<CollectionName>.xml`. The exact
grammar is documented in docs/file-formats.md. A loaded `Catalog` is an
immutable snapshot carrying two derived indexes:

* `id_index`  - EntryId -> entry, for O(1) by-ID lookup;
* `word_index` - collection -> lowercase word -> set of EntryIds, built
  from each entry's name and description texts only (the fields the
  suggestion service draws from).

Mutations (`upsert_entry`, `remove_entry`) are copy-on-write at collection
granularity and return a new snapshot; `CatalogStore` serializes writers
and publishes snapshots atomically for concurrent readers.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path
from typing import Iterable, Optional
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from .model import (
    COLLECTION_NAMES,
    Entry,
    EntryId,
    GenericEntry,
    KeywordEntry,
    ModelError,
    PersonDescriptor,
    ResourceDescriptor,
    Section,
    Violation,
    entry_links,
    index_texts,
    validate_catalog,
)

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
MIN_WORD_LEN = 2


class CatalogError(Exception):
    """Base class for catalog store failures."""


class ParseError(CatalogError):
    """Malformed catalog XML; carries file, line and reason."""

    def __init__(self, file: str, line: Optional[int], reason: str):
        self.file = file
        self.line = line
        self.reason = reason
        where = f"{file}:{line}" if line is not None else file
        super().__init__(f"{where}: {reason}")


class IntegrityError(CatalogError):
    """A mutation or load would leave the catalog violating an invariant."""


def tokenize(text: str) -> list[str]:
    """Lowercase words of `text`, split on any non-alphanumeric character.

    Tokens shorter than MIN_WORD_LEN characters are dropped.
    """
    return [w for w in _WORD_RE.findall(text.lower()) if len(w) >= MIN_WORD_LEN]


def _entry_words(entry: Entry) -> set[str]:
    words: set[str] = set()
    for text in index_texts(entry):
        words.update(tokenize(text))
    return words


class Catalog:
    """An immutable snapshot of all eleven collections plus derived indexes."""

    __slots__ = ("collections", "id_index", "word_index")

    def __init__(self, collections: dict[str, tuple[Entry, ...]]):
        self.collections: dict[str, tuple[Entry, ...]] = {
            name: tuple(collections.get(name, ())) for name in COLLECTION_NAMES
        }
        self.id_index: dict[EntryId, Entry] = {}
        self.word_index: dict[str, dict[str, set[EntryId]]] = {
            name: {} for name in COLLECTION_NAMES
        }
        for name, entries in self.collections.items():
            for entry in entries:
                if entry.id in self.id_index:
                    raise IntegrityError(f"duplicate entry id {entry.id.ref}")
                self.id_index[entry.id] = entry
                words = self.word_index[name]
                for word in _entry_words(entry):
                    words.setdefault(word, set()).add(entry.id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return self.collections == other.collections

    def __repr__(self) -> str:
        sizes = {k: len(v) for k, v in self.collections.items() if v}
        return f"Catalog({sizes or 'empty'})"

    def entries(self) -> Iterable[Entry]:
        for name in COLLECTION_NAMES:
            yield from self.collections[name]

    def size(self) -> int:
        return len(self.id_index)


def empty_catalog() -> Catalog:
    return Catalog({})


# --------------------------------------------------------------------------
# XML parsing

def _parse_field(elem: ET.Element, file: str) -> tuple[str, str]:
    name = elem.get("name")
    if name is None:
        raise ParseError(file, None, "field element missing name attribute")
    return (name, elem.text or "")


# Allowed child elements per entry kind; anything else is a parse error.
_ALLOWED_CHILDREN = {
    "Resource": ("name", "description", "url", "section", "link"),
    "Person": ("name", "field", "link"),
    "Keyword": ("name", "link"),
    "generic": ("field",),
}


def _parse_entry(elem: ET.Element, collection: str, file: str) -> Entry:
    id_value = elem.get("id")
    if id_value is None:
        raise ParseError(file, None, f"{collection} entry missing id attribute")
    entry_id = EntryId(collection, id_value)
    kind = collection if collection in ("Resource", "Person", "Keyword") else "generic"
    allowed = _ALLOWED_CHILDREN[kind]

    name: Optional[str] = None
    descriptions: dict[str, str] = {}
    url: Optional[str] = None
    sections: list[Section] = []
    fields: list[tuple[str, str]] = []
    links: list[EntryId] = []

    for child in elem:
        if child.tag not in allowed:
            raise ParseError(file, None,
                             f"element <{child.tag}> not allowed in {collection} entry {id_value}")
        if child.tag == "name":
            if name is not None:
                raise ParseError(file, None, f"{collection} entry {id_value} repeats <name>")
            name = child.text or ""
        elif child.tag == "description":
            dkind = child.get("kind")
            if dkind not in ("short", "long"):
                raise ParseError(file, None,
                                 f"description kind must be short or long, got {dkind!r}")
            if dkind in descriptions:
                raise ParseError(file, None,
                                 f"{collection} entry {id_value} repeats description {dkind!r}")
            descriptions[dkind] = child.text or ""
        elif child.tag == "url":
            if url is not None:
                raise ParseError(file, None, f"{collection} entry {id_value} repeats <url>")
            url = child.text or ""
        elif child.tag == "section":
            sname = child.get("name")
            if sname is None:
                raise ParseError(file, None, "section element missing name attribute")
            sections.append(
                Section(sname, tuple(_parse_field(f, file) for f in child if f.tag == "field"))
            )
        elif child.tag == "field":
            fields.append(_parse_field(child, file))
        elif child.tag == "link":
            ref = child.get("ref")
            if ref is None:
                raise ParseError(file, None, "link element missing ref attribute")
            links.append(EntryId.from_ref(ref))

    if collection == "Resource":
        return ResourceDescriptor(
            id=entry_id,
            name=name or "",
            short_description=descriptions.get("short", ""),
            url=url,
            long_description=descriptions.get("long", ""),
            sections=tuple(sections),
            links=tuple(links),
        )
    if collection == "Person":
        if any(l.collection != "Institute" for l in links) or len(links) > 1:
            raise ParseError(file, None,
                             f"person {id_value} may carry one Institute link at most")
        return PersonDescriptor(id=entry_id, name=name or "",
                                institute=links[0] if links else None,
                                free_fields=tuple(fields))
    if collection == "Keyword":
        if len(links) != 1 or links[0].collection != "KeywordType":
            raise ParseError(file, None,
                             f"keyword {id_value} needs exactly one KeywordType link")
        return KeywordEntry(id=entry_id, name=name or "", type_id=links[0])
    return GenericEntry(id=entry_id, fields=tuple(fields))


def parse_collection(text: str, collection: str, file: str = "<string>") -> list[Entry]:
    """Parse one collection document into entries, in document order."""
    if collection not in COLLECTION_NAMES:
        raise CatalogError(f"unknown collection file name {collection!r}")
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else None
        raise ParseError(file, line, exc.msg or str(exc)) from exc
    if root.tag != collection:
        raise ParseError(file, None,
                         f"root element <{root.tag}> does not match collection {collection}")
    entries = []
    for child in root:
        if child.tag != "entry":
            raise ParseError(file, None, f"unexpected element <{child.tag}> under <{collection}>")
        try:
            entries.append(_parse_entry(child, collection, file))
        except ModelError as exc:
            raise ParseError(file, None, str(exc)) from exc
    return entries


def load_catalog(directory: str | Path) -> Catalog:
    """Load every collection file under `directory` into a validated Catalog.

    Missing files mean empty collections. Any `*.xml` file not named after
    a collection is rejected; other files are ignored. The returned catalog
    passes `validate_catalog`; duplicate IDs or dangling links raise
    IntegrityError.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise CatalogError(f"catalog directory {directory} does not exist")

    for path in sorted(directory.glob("*.xml")):
        if path.stem not in COLLECTION_NAMES:
            raise CatalogError(f"unknown collection file name {path.name!r}")

    collections: dict[str, tuple[Entry, ...]] = {}
    for name in COLLECTION_NAMES:
        path = directory / f"{name}.xml"
        if path.exists():
            text = path.read_text(encoding="utf-8")
            collections[name] = tuple(parse_collection(text, name, str(path)))

    catalog = Catalog(collections)  # raises IntegrityError on duplicate ids
    violations = validate_catalog(catalog.collections)
    if violations:
        listing = "; ".join(str(v) for v in violations)
        raise IntegrityError(f"catalog fails validation: {listing}")
    return catalog


# --------------------------------------------------------------------------
# XML serialization (canonical form: fixed child order, 2-space indent, LF)

def _field_xml(pair: tuple[str, str], indent: str) -> str:
    name, value = pair
    return f"{indent}<field name={quoteattr(name)}>{escape(value)}</field>\n"


def _entry_xml(entry: Entry) -> str:
    lines = [f'  <entry id={quoteattr(entry.id.value)}>\n']
    if isinstance(entry, ResourceDescriptor):
        lines.append(f"    <name>{escape(entry.name)}</name>\n")
        lines.append(f'    <description kind="short">{escape(entry.short_description)}'
                     "</description>\n")
        lines.append(f'    <description kind="long">{escape(entry.long_description)}'
                     "</description>\n")
        if entry.url is not None:
            lines.append(f"    <url>{escape(entry.url)}</url>\n")
        for section in entry.sections:
            lines.append(f"    <section name={quoteattr(section.name)}>\n")
            lines.extend(_field_xml(pair, "      ") for pair in section.fields)
            lines.append("    </section>\n")
        for link in entry.links:
            lines.append(f"    <link ref={quoteattr(link.ref)}/>\n")
    elif isinstance(entry, PersonDescriptor):
        lines.append(f"    <name>{escape(entry.name)}</name>\n")
        lines.extend(_field_xml(pair, "    ") for pair in entry.free_fields)
        if entry.institute is not None:
            lines.append(f"    <link ref={quoteattr(entry.institute.ref)}/>\n")
    elif isinstance(entry, KeywordEntry):
        lines.append(f"    <name>{escape(entry.name)}</name>\n")
        lines.append(f"    <link ref={quoteattr(entry.type_id.ref)}/>\n")
    else:
        lines.extend(_field_xml(pair, "    ") for pair in entry.fields)
    lines.append("  </entry>\n")
    return "".join(lines)


def serialize_collection(collection: str, entries: Iterable[Entry]) -> str:
    """Render one collection to its canonical XML document."""
    require = collection in COLLECTION_NAMES
    if not require:
        raise CatalogError(f"unknown collection {collection!r}")
    body = "".join(_entry_xml(e) for e in entries)
    return f'<?xml version="1.0" encoding="UTF-8"?>\n<{collection}>\n{body}</{collection}>\n'


def store_catalog(catalog: Catalog, directory: str | Path) -> None:
    """Write the catalog under `directory`, one file per non-empty collection.

    Collection files for now-empty collections are removed so that a
    directory always reflects exactly one catalog snapshot.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name in COLLECTION_NAMES:
            path = directory / f"{name}.xml"
            entries = catalog.collections[name]
            if entries:
                path.write_text(serialize_collection(name, entries), encoding="utf-8")
            elif path.exists():
                path.unlink()
    except OSError as exc:
        raise CatalogError(f"cannot write catalog to {directory}: {exc}") from exc


# --------------------------------------------------------------------------
# Mutations (copy-on-write; each returns a new snapshot)

def lookup_by_id(catalog: Catalog, entry_id: EntryId) -> Optional[Entry]:
    """O(1) lookup via the id index; equivalent to scanning the collection."""
    return catalog.id_index.get(entry_id)


def _with_collection(catalog: Catalog, name: str, entries: tuple[Entry, ...],
                     old: Optional[Entry], new: Optional[Entry]) -> Catalog:
    """Snapshot with one collection replaced and both indexes patched."""
    clone = Catalog.__new__(Catalog)
    clone.collections = dict(catalog.collections)
    clone.collections[name] = entries
    clone.id_index = dict(catalog.id_index)
    clone.word_index = dict(catalog.word_index)
    words = {w: set(ids) for w, ids in catalog.word_index[name].items()}
    clone.word_index[name] = words

    if old is not None:
        del clone.id_index[old.id]
        for word in _entry_words(old):
            ids = words.get(word)
            if ids is not None:
                ids.discard(old.id)
                if not ids:
                    del words[word]
    if new is not None:
        clone.id_index[new.id] = new
        for word in _entry_words(new):
            words.setdefault(word, set()).add(new.id)
    return clone


def upsert_entry(catalog: Catalog, entry: Entry) -> Catalog:
    """Insert or replace `entry` by ID; last writer wins.

    Raises IntegrityError if the entry links to IDs that do not resolve,
    or if it would duplicate another resource's name.
    """
    unresolved = [l.ref for l in entry_links(entry)
                  if l != entry.id and l not in catalog.id_index]
    if unresolved:
        raise IntegrityError(f"unresolved links: {', '.join(unresolved)}")

    if isinstance(entry, ResourceDescriptor):
        for other in catalog.collections["Resource"]:
            if other.id != entry.id and other.name == entry.name:
                raise IntegrityError(
                    f"resource name {entry.name!r} already used by {other.id.ref}")

    name = entry.id.collection
    old = catalog.id_index.get(entry.id)
    if old is None:
        entries = catalog.collections[name] + (entry,)
    else:
        entries = tuple(entry if e.id == entry.id else e for e in catalog.collections[name])
    return _with_collection(catalog, name, entries, old, entry)


def remove_entry(catalog: Catalog, entry_id: EntryId) -> tuple[Catalog, Optional[Entry]]:
    """Remove the entry, returning (new snapshot, removed entry or None).

    Removing an ID that other entries still link to raises IntegrityError;
    removing an unknown ID is a no-op reported by the None result.
    """
    old = catalog.id_index.get(entry_id)
    if old is None:
        return catalog, None
    dependents = [e.id.ref for e in catalog.entries()
                  if e.id != entry_id and entry_id in entry_links(e)]
    if dependents:
        raise IntegrityError(
            f"cannot remove {entry_id.ref}: still linked from {', '.join(dependents)}")
    name = entry_id.collection
    entries = tuple(e for e in catalog.collections[name] if e.id != entry_id)
    return _with_collection(catalog, name, entries, old, None), old


def catalog_violations(catalog: Catalog) -> list[Violation]:
    return validate_catalog(catalog.collections)


class CatalogStore:
    """Publishes catalog snapshots; writers serialize, readers never block.

    `snapshot()` is an atomic reference read, so a request handler sees one
    consistent catalog for its whole lifetime regardless of concurrent
    admin mutations.
    """

    def __init__(self, catalog: Optional[Catalog] = None):
        self._catalog = catalog if catalog is not None else empty_catalog()
        self._lock = threading.Lock()

    def snapshot(self) -> Catalog:
        return self._catalog

    def upsert(self, entry: Entry) -> Catalog:
        with self._lock:
            self._catalog = upsert_entry(self._catalog, entry)
            return self._catalog

    def remove(self, entry_id: EntryId) -> Optional[Entry]:
        with self._lock:
            self._catalog, removed = remove_entry(self._catalog, entry_id)
            return removed

    def replace(self, catalog: Catalog) -> None:
        with self._lock:
            self._catalog = catalog
