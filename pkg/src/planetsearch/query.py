"""The local search facilities: full-text search, suggestions, by-ID drill-down.

Two query classes exist. Free-text domains (every collection, notably
Person and Resource) match an entry when each search value occurs
case-insensitively as a substring in at least one of the entry's text
fields - all fields are checked. Predefined domains (mission, target,
science field, ...) match when the entry's designated field equals the
selected value; the value must come from the domain's configured list.

All operations are pure functions over an immutable Catalog snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .model import COLLECTION_NAMES, Entry, EntryId, all_texts, named_fields
from .store import Catalog, lookup_by_id

FACILITIES = ("LQF", "RQF", "SQF", "SUGGEST")
FREE_TEXT = "free_text"
PREDEFINED = "predefined"

SUGGESTION_LIMIT = 20

# Suggestion matching modes: word-prefix is the default behaviour; the
# substring mode is available for deployments that prefer containment.
SUGGEST_PREFIX = "prefix"
SUGGEST_SUBSTRING = "substring"


class DomainError(Exception):
    """The request names a search domain this node does not know."""


class RequestError(Exception):
    """The request is structurally invalid (missing or malformed values)."""


@dataclass(frozen=True)
class QueryRequest:
    """A decoded search request: facility, domain, and search values."""

    facility: str
    domain: str
    values: tuple[str, ...]
    value_mode: str = FREE_TEXT

    def __post_init__(self) -> None:
        if self.facility not in FACILITIES:
            raise RequestError(
                f"unknown facility {self.facility!r} (allowed: {', '.join(FACILITIES)})")
        if self.value_mode not in (FREE_TEXT, PREDEFINED):
            raise RequestError(f"unknown value mode {self.value_mode!r}")
        if self.value_mode == PREDEFINED and len(self.values) != 1:
            raise RequestError("predefined-domain queries take exactly one value")


@dataclass(frozen=True)
class LocalResultSet:
    """Full local search results, echoing the request they answer."""

    request: QueryRequest
    hits: tuple[Entry, ...] = ()

    @property
    def count(self) -> int:
        return len(self.hits)


def _normalize_label(text: str) -> str:
    return "".join(ch for ch in text.lower() if ch.isalnum())


@dataclass(frozen=True)
class DomainRegistry:
    """The searchable domains: the eleven collections plus configured
    predefined-value domains.

    Predefined domains search the Resource collection and designate the
    field whose display label normalizes to the domain name (an optional
    trailing `s` on the label is tolerated, so a `mission` domain matches
    a `Mission(s)` field).
    """

    predefined: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def is_collection(self, domain: str) -> bool:
        return domain in COLLECTION_NAMES

    def predefined_values(self, domain: str) -> Optional[tuple[str, ...]]:
        for name, values in self.predefined:
            if name == domain:
                return values
        return None

    def classify(self, domain: str) -> str:
        if self.is_collection(domain):
            return FREE_TEXT
        if self.predefined_values(domain) is not None:
            return PREDEFINED
        raise DomainError(f"unknown search domain {domain!r}")

    def field_matches_domain(self, field_name: str, domain: str) -> bool:
        field_norm = _normalize_label(field_name)
        domain_norm = _normalize_label(domain)
        return field_norm == domain_norm or field_norm == domain_norm + "s"

    def collection_for(self, domain: str) -> str:
        """The collection a domain searches: itself, or Resource for
        predefined domains."""
        if self.is_collection(domain):
            return domain
        if self.predefined_values(domain) is not None:
            return "Resource"
        raise DomainError(f"unknown search domain {domain!r}")


def load_domains(path: str | Path) -> DomainRegistry:
    """Read the predefined-domain config: one `domain: v1|v2|...` line each.

    Blank lines and lines starting with `#` are ignored.
    """
    entries: list[tuple[str, tuple[str, ...]]] = []
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        domain, sep, values = line.partition(":")
        if not sep:
            raise ValueError(f"{path}:{number}: expected 'domain: value|value|...'")
        domain = domain.strip()
        if domain in COLLECTION_NAMES:
            raise ValueError(f"{path}:{number}: {domain!r} is a collection name")
        parsed = tuple(v.strip() for v in values.split("|") if v.strip())
        if not domain or not parsed:
            raise ValueError(f"{path}:{number}: empty domain or value list")
        entries.append((domain, parsed))
    return DomainRegistry(tuple(entries))


def _require_values(request: QueryRequest) -> None:
    if not request.values:
        raise RequestError("search request carries no values")
    if any(not v.strip() for v in request.values):
        raise RequestError("search values must be non-blank")


def _free_text_match(entry: Entry, values: tuple[str, ...]) -> bool:
    # Every value must occur in some text field; different values may
    # match different fields.
    texts = [t.lower() for t in all_texts(entry)]
    return all(any(v.lower() in t for t in texts) for v in values)


def local_query(catalog: Catalog, request: QueryRequest,
                domains: Optional[DomainRegistry] = None) -> LocalResultSet:
    """Answer a full-descriptor search over the local catalog."""
    domains = domains if domains is not None else DomainRegistry()
    if request.facility != "LQF":
        raise RequestError(f"local_query answers LQF requests, not {request.facility}")
    _require_values(request)

    mode = domains.classify(request.domain)
    if mode != request.value_mode:
        raise RequestError(
            f"domain {request.domain!r} is a {mode} domain, request says {request.value_mode}")

    if mode == FREE_TEXT:
        entries = catalog.collections[request.domain]
        hits = tuple(e for e in entries if _free_text_match(e, request.values))
        return LocalResultSet(request, hits)

    allowed = domains.predefined_values(request.domain) or ()
    value = request.values[0]
    if value.lower() not in {v.lower() for v in allowed}:
        raise RequestError(
            f"value {value!r} is not in the predefined list for {request.domain!r}")
    wanted = value.lower()
    hits = tuple(
        entry
        for entry in catalog.collections[domains.collection_for(request.domain)]
        if any(domains.field_matches_domain(fname, request.domain)
               and fvalue.lower() == wanted
               for fname, fvalue in named_fields(entry))
    )
    return LocalResultSet(request, hits)


def suggest(catalog: Catalog, domain: str, fragment: str,
            domains: Optional[DomainRegistry] = None,
            mode: str = SUGGEST_PREFIX,
            limit: int = SUGGESTION_LIMIT) -> list[str]:
    """Indexed words from the domain's name/description texts matching
    `fragment`, sorted, at most `limit` of them. Blank fragments suggest
    nothing.
    """
    domains = domains if domains is not None else DomainRegistry()
    fragment = fragment.strip().lower()
    if not fragment:
        return []
    collection = domains.collection_for(domain)
    words = catalog.word_index[collection]
    if mode == SUGGEST_PREFIX:
        matched = [w for w in words if w.startswith(fragment)]
    elif mode == SUGGEST_SUBSTRING:
        matched = [w for w in words if fragment in w]
    else:
        raise ValueError(f"unknown suggestion mode {mode!r}")
    return sorted(matched)[:limit]


def secondary_query(catalog: Catalog, entry_id: EntryId) -> LocalResultSet:
    """By-ID drill-down; resolves through the id index, count is 0 or 1."""
    request = QueryRequest("SQF", entry_id.collection, (entry_id.value,))
    entry = lookup_by_id(catalog, entry_id)
    return LocalResultSet(request, (entry,) if entry is not None else ())
