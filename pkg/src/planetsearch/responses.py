"""Response envelopes and their XML / JSON / debug-HTML encodings.

Every answer a node gives is wrapped in an envelope that echoes the query
keyword/value couples alongside the body: full descriptors for local and
drill-down searches, a bare count for remote queries, a word list for
suggestions, or an error code. The XML form is canonical (fixed element
and attribute order, LF line endings, UTF-8); the JSON form mirrors it
structurally, field for field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional
from xml.sax.saxutils import escape, quoteattr

from .federation import RemoteCountSet
from .model import (
    Entry,
    EntryId,
    GenericEntry,
    KeywordEntry,
    PersonDescriptor,
    ResourceDescriptor,
    entry_name,
)
from .query import LocalResultSet, QueryRequest
from .store import Catalog

# Machine-readable error codes carried in error envelopes.
DOMAIN_UNKNOWN = "DOMAIN_UNKNOWN"
BAD_REQUEST = "BAD_REQUEST"
INTERNAL = "INTERNAL"


@dataclass(frozen=True)
class ResponseEnvelope:
    """One response: query echo plus exactly one body variant."""

    kind: str  # "results" | "count" | "suggestions" | "remote" | "error"
    request: Optional[QueryRequest] = None
    results: Optional[LocalResultSet] = None
    count: Optional[int] = None
    suggestions: tuple[str, ...] = ()
    remote: Optional[RemoteCountSet] = None
    error_code: str = ""
    error_message: str = ""

    @classmethod
    def of_results(cls, results: LocalResultSet) -> "ResponseEnvelope":
        return cls("results", request=results.request, results=results)

    @classmethod
    def of_count(cls, request: QueryRequest, count: int) -> "ResponseEnvelope":
        return cls("count", request=request, count=count)

    @classmethod
    def of_suggestions(cls, request: QueryRequest,
                       suggestions: list[str]) -> "ResponseEnvelope":
        return cls("suggestions", request=request, suggestions=tuple(suggestions))

    @classmethod
    def of_remote(cls, request: QueryRequest, remote: RemoteCountSet) -> "ResponseEnvelope":
        return cls("remote", request=request, remote=remote)

    @classmethod
    def of_error(cls, code: str, message: str,
                 request: Optional[QueryRequest] = None) -> "ResponseEnvelope":
        return cls("error", request=request, error_code=code, error_message=message)


def _link_targets(entry: Entry, catalog: Optional[Catalog]) -> dict[str, str]:
    """Lowercased target-entry name -> link ref, for drill-down enrichment."""
    if catalog is None:
        return {}
    targets: dict[str, str] = {}
    if isinstance(entry, ResourceDescriptor):
        for link in entry.links:
            target = catalog.id_index.get(link)
            if target is not None:
                name = entry_name(target)
                if name:
                    targets.setdefault(name.lower(), link.ref)
    return targets


# --------------------------------------------------------------------------
# XML encoding

def _query_xml(request: Optional[QueryRequest], indent: str) -> list[str]:
    if request is None:
        return []
    lines = [f"{indent}<query type={quoteattr(request.facility)} "
             f"domain={quoteattr(request.domain)}>\n"]
    tag = "id" if request.facility == "SQF" else "value"
    for value in request.values:
        lines.append(f"{indent}  <{tag}>{escape(value)}</{tag}>\n")
    lines.append(f"{indent}</query>\n")
    return lines


def _field_xml(name: str, value: str, ref: Optional[str], indent: str) -> str:
    ref_attr = f" ref={quoteattr(ref)}" if ref is not None else ""
    return f"{indent}<field name={quoteattr(name)}{ref_attr}>{escape(value)}</field>\n"


def entry_xml(entry: Entry, catalog: Optional[Catalog] = None, indent: str = "") -> str:
    """Canonical envelope form of one entry; field elements gain a `ref`
    attribute when their value names a linked entry (drill-down handle)."""
    targets = _link_targets(entry, catalog)

    def ref_for(value: str) -> Optional[str]:
        return targets.get(value.lower())

    i = indent
    lines = [f"{i}<entry collection={quoteattr(entry.id.collection)} "
             f"id={quoteattr(entry.id.value)}>\n"]
    if isinstance(entry, ResourceDescriptor):
        lines.append(f"{i}  <name>{escape(entry.name)}</name>\n")
        lines.append(f'{i}  <description kind="short">{escape(entry.short_description)}'
                     "</description>\n")
        lines.append(f'{i}  <description kind="long">{escape(entry.long_description)}'
                     "</description>\n")
        if entry.url is not None:
            lines.append(f"{i}  <url>{escape(entry.url)}</url>\n")
        for section in entry.sections:
            lines.append(f"{i}  <section name={quoteattr(section.name)}>\n")
            for fname, fvalue in section.fields:
                lines.append(_field_xml(fname, fvalue, ref_for(fvalue), i + "    "))
            lines.append(f"{i}  </section>\n")
        for link in entry.links:
            lines.append(f"{i}  <link ref={quoteattr(link.ref)}/>\n")
    elif isinstance(entry, PersonDescriptor):
        lines.append(f"{i}  <name>{escape(entry.name)}</name>\n")
        for fname, fvalue in entry.free_fields:
            lines.append(_field_xml(fname, fvalue, None, i + "  "))
        if entry.institute is not None:
            lines.append(f"{i}  <link ref={quoteattr(entry.institute.ref)}/>\n")
    elif isinstance(entry, KeywordEntry):
        lines.append(f"{i}  <name>{escape(entry.name)}</name>\n")
        lines.append(f"{i}  <link ref={quoteattr(entry.type_id.ref)}/>\n")
    else:
        for fname, fvalue in entry.fields:
            lines.append(_field_xml(fname, fvalue, None, i + "  "))
    lines.append(f"{i}</entry>\n")
    return "".join(lines)


def encode_response(envelope: ResponseEnvelope, catalog: Optional[Catalog] = None) -> str:
    """Canonical XML document for the envelope."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>\n', "<response>\n"]
    lines.extend(_query_xml(envelope.request, "  "))

    if envelope.kind == "results":
        results = envelope.results
        assert results is not None
        lines.append(f'  <results count="{results.count}">\n')
        for entry in results.hits:
            lines.append(entry_xml(entry, catalog, indent="    "))
        lines.append("  </results>\n")
    elif envelope.kind == "count":
        lines.append(f"  <count>{envelope.count}</count>\n")
    elif envelope.kind == "suggestions":
        lines.append("  <suggestions>\n")
        for word in envelope.suggestions:
            lines.append(f"    <s>{escape(word)}</s>\n")
        lines.append("  </suggestions>\n")
    elif envelope.kind == "remote":
        remote = envelope.remote
        assert remote is not None
        lines.append(f'  <remote local="{remote.local_count}">\n')
        for outcome in remote.per_node:
            attrs = (f"name={quoteattr(outcome.node.name)} "
                     f"url={quoteattr(outcome.node.base_url)}")
            if outcome.reachable:
                lines.append(f'    <node {attrs} count="{outcome.count}"/>\n')
            else:
                lines.append(f"    <node {attrs} error={quoteattr(outcome.error or '')}/>\n")
        lines.append("  </remote>\n")
    else:
        lines.append(f"  <error code={quoteattr(envelope.error_code)}>"
                     f"{escape(envelope.error_message)}</error>\n")

    lines.append("</response>\n")
    return "".join(lines)


# --------------------------------------------------------------------------
# JSON mirror (structurally equivalent to the XML form)

def _query_json(request: Optional[QueryRequest]) -> Optional[dict[str, Any]]:
    if request is None:
        return None
    echo: dict[str, Any] = {"type": request.facility, "domain": request.domain}
    if request.facility == "SQF":
        echo["id"] = request.values[0]
    else:
        echo["values"] = list(request.values)
    return echo


def entry_json(entry: Entry, catalog: Optional[Catalog] = None) -> dict[str, Any]:
    targets = _link_targets(entry, catalog)

    def field_json(fname: str, fvalue: str, enrich: bool) -> dict[str, Any]:
        ref = targets.get(fvalue.lower()) if enrich else None
        item: dict[str, Any] = {"name": fname, "value": fvalue}
        if ref is not None:
            item["ref"] = ref
        return item

    data: dict[str, Any] = {"collection": entry.id.collection, "id": entry.id.value}
    if isinstance(entry, ResourceDescriptor):
        data["name"] = entry.name
        data["short_description"] = entry.short_description
        data["long_description"] = entry.long_description
        if entry.url is not None:
            data["url"] = entry.url
        data["sections"] = [
            {"name": s.name, "fields": [field_json(k, v, True) for k, v in s.fields]}
            for s in entry.sections
        ]
        data["links"] = [l.ref for l in entry.links]
    elif isinstance(entry, PersonDescriptor):
        data["name"] = entry.name
        data["fields"] = [field_json(k, v, False) for k, v in entry.free_fields]
        data["links"] = [entry.institute.ref] if entry.institute is not None else []
    elif isinstance(entry, KeywordEntry):
        data["name"] = entry.name
        data["links"] = [entry.type_id.ref]
    else:
        data["fields"] = [field_json(k, v, False) for k, v in entry.fields]
    return data


def response_json(envelope: ResponseEnvelope, catalog: Optional[Catalog] = None
                  ) -> dict[str, Any]:
    data: dict[str, Any] = {}
    echo = _query_json(envelope.request)
    if echo is not None:
        data["query"] = echo

    if envelope.kind == "results":
        results = envelope.results
        assert results is not None
        data["results"] = {
            "count": results.count,
            "entries": [entry_json(e, catalog) for e in results.hits],
        }
    elif envelope.kind == "count":
        data["count"] = envelope.count
    elif envelope.kind == "suggestions":
        data["suggestions"] = list(envelope.suggestions)
    elif envelope.kind == "remote":
        remote = envelope.remote
        assert remote is not None
        nodes = []
        for outcome in remote.per_node:
            node: dict[str, Any] = {"name": outcome.node.name, "url": outcome.node.base_url}
            if outcome.reachable:
                node["count"] = outcome.count
            else:
                node["error"] = outcome.error
            nodes.append(node)
        data["remote"] = {"local": remote.local_count, "nodes": nodes}
    else:
        data["error"] = {"code": envelope.error_code, "message": envelope.error_message}
    return data


def encode_response_json(envelope: ResponseEnvelope,
                         catalog: Optional[Catalog] = None) -> str:
    return json.dumps(response_json(envelope, catalog), ensure_ascii=False, indent=2) + "\n"


# --------------------------------------------------------------------------
# Plain-HTML debug renderer (server-side rendering parity; the real UI is
# a client of the JSON mirror)

def _request_title(request: Optional[QueryRequest]) -> str:
    if request is None:
        return "Search results"
    values = ", ".join(request.values)
    return f"Results for '{values}' ({request.domain})"


def encode_response_html(envelope: ResponseEnvelope,
                         catalog: Optional[Catalog] = None) -> str:
    title = escape(_request_title(envelope.request))
    parts = ["<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">",
             f"<title>{title}</title></head><body>", f"<h1>{title}</h1>"]

    if envelope.kind == "results":
        results = envelope.results
        assert results is not None
        parts.append(f"<p>{results.count} results</p>")
        for entry in results.hits:
            name = escape(entry_name(entry) or entry.id.ref)
            parts.append(f"<div class=\"card\"><h2>{name}</h2>")
            if isinstance(entry, ResourceDescriptor):
                parts.append(f"<p><em>{escape(entry.short_description)}</em></p>")
                if entry.url:
                    url = escape(entry.url)
                    parts.append(f'<p><a href="{url}">{url}</a></p>')
                parts.append(f"<p>{escape(entry.long_description)}</p>")
                for section in entry.sections:
                    parts.append(f"<h3>{escape(section.name)}</h3><dl>")
                    for fname, fvalue in section.fields:
                        parts.append(f"<dt>{escape(fname)}</dt><dd>{escape(fvalue)}</dd>")
                    parts.append("</dl>")
            parts.append("</div>")
    elif envelope.kind == "count":
        parts.append(f"<p>{envelope.count} results</p>")
    elif envelope.kind == "suggestions":
        parts.append("<ul>")
        parts.extend(f"<li>{escape(w)}</li>" for w in envelope.suggestions)
        parts.append("</ul>")
    elif envelope.kind == "remote":
        remote = envelope.remote
        assert remote is not None
        parts.append(f"<p>Local node: {remote.local_count} results</p><ul>")
        for outcome in remote.per_node:
            label = escape(outcome.node.name)
            if outcome.reachable:
                parts.append(f"<li>{label}: {outcome.count} results</li>")
            else:
                parts.append(f"<li>{label}: unreachable ({escape(outcome.error or '')})</li>")
        parts.append("</ul>")
    else:
        parts.append(f"<p>Error {escape(envelope.error_code)}: "
                     f"{escape(envelope.error_message)}</p>")

    parts.append("</body></html>\n")
    return "".join(parts)
