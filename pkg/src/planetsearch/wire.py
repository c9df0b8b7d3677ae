"""keyword=value wire format for search requests.

A request travels as a URL query string of ordered keyword=value pairs.
Required keywords: `type` (LQF, RQF, SQF or SUGGEST) and `domain`. Search
values ride as repeated `value` keywords; SQF carries the target in `id`
instead. Unknown keywords are ignored but reported back to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
from urllib.parse import parse_qsl, quote, urlencode

from .model import EntryId, ModelError
from .query import (
    FACILITIES,
    FREE_TEXT,
    DomainError,
    DomainRegistry,
    QueryRequest,
    RequestError,
)

KNOWN_KEYWORDS = ("type", "domain", "value", "id")


class WireError(Exception):
    """The query string cannot be mapped to a valid request."""


@dataclass(frozen=True)
class WireRequest:
    """The raw decoded pairs, order and multiplicity preserved."""

    pairs: tuple[tuple[str, str], ...]

    def all(self, keyword: str) -> list[str]:
        return [v for k, v in self.pairs if k == keyword]

    def single(self, keyword: str) -> Optional[str]:
        values = self.all(keyword)
        if len(values) > 1:
            raise WireError(f"keyword {keyword!r} given {len(values)} times")
        return values[0] if values else None


def decode_pairs(query_string: str) -> WireRequest:
    """Percent-decode a query string into ordered pairs."""
    pairs = parse_qsl(query_string, keep_blank_values=True, strict_parsing=False)
    return WireRequest(tuple(pairs))


def encode_pairs(wire: WireRequest) -> str:
    """Re-encode pairs; preserves order and count exactly."""
    return urlencode(wire.pairs, quote_via=quote)


def decode_request(query_string: str,
                   domains: Optional[DomainRegistry] = None
                   ) -> tuple[QueryRequest, list[str]]:
    """Map a query string to a QueryRequest plus the ignored keywords.

    Raises WireError when `type` or `domain` is missing or invalid, when
    SQF lacks an id, or when a non-SQF request carries no values.
    """
    domains = domains if domains is not None else DomainRegistry()
    wire = decode_pairs(query_string)
    ignored = sorted({k for k, _ in wire.pairs if k not in KNOWN_KEYWORDS})

    facility = wire.single("type")
    if facility is None:
        raise WireError("missing required keyword 'type'")
    if facility not in FACILITIES:
        raise WireError(f"invalid type {facility!r} (allowed: {', '.join(FACILITIES)})")

    domain = wire.single("domain")
    if domain is None:
        raise WireError("missing required keyword 'domain'")

    if facility == "SQF":
        id_value = wire.single("id")
        if id_value is None:
            raise WireError("SQF requests require the 'id' keyword")
        try:
            EntryId(domain, id_value)
        except ModelError as exc:
            raise WireError(str(exc)) from exc
        request = QueryRequest("SQF", domain, (id_value,), FREE_TEXT)
        return request, ignored

    values = tuple(wire.all("value"))
    if not values:
        raise WireError(f"{facility} requests require at least one 'value' keyword")
    if facility == "SUGGEST" and len(values) != 1:
        raise WireError("SUGGEST requests take exactly one 'value' keyword")

    try:
        mode = domains.classify(domain)
    except DomainError:
        # Unknown domains surface later, from the facility, as DomainError;
        # decoding itself stays total.
        mode = FREE_TEXT
    try:
        request = QueryRequest(facility, domain, values, mode)
    except RequestError as exc:
        raise WireError(str(exc)) from exc
    return request, ignored


def encode_request(request: QueryRequest) -> str:
    """Render a request to its canonical query string."""
    pairs: list[tuple[str, str]] = [("type", request.facility), ("domain", request.domain)]
    if request.facility == "SQF":
        pairs.append(("id", request.values[0]))
    else:
        pairs.extend(("value", v) for v in request.values)
    return encode_pairs(WireRequest(tuple(pairs)))
