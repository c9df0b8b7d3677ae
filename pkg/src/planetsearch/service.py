"""HTTP face of a node: request decoding, facility dispatch, envelope encoding.

Endpoints:

    GET  /query?type=...&domain=...&value=...   all four facilities
    GET  /remote?...                            fan-out aggregation
    GET  /health                                liveness probe
    GET  /config                                UI configuration (JSON)
    POST   /admin/entry                         upsert one entry (XML body)
    DELETE /admin/entry/<collection>/<id>       remove one entry
    GET  /ui/...                                static front-end assets

Responses are XML by default; `Accept: application/json` selects the JSON
mirror and `Accept: text/html` a plain debug rendering. Admin endpoints
require the shared-secret `X-Admin-Token` header. Reads operate on one
catalog snapshot taken at entry, so concurrent admin writes are invisible
to an in-flight request.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import unquote, urlsplit
from xml.etree import ElementTree as ET

from . import federation, query, responses, store, wire
from .model import COLLECTION_NAMES, EntryId, ModelError
from .query import DomainError, DomainRegistry, QueryRequest, RequestError
from .responses import BAD_REQUEST, DOMAIN_UNKNOWN, INTERNAL, ResponseEnvelope

logger = logging.getLogger(__name__)

DEFAULT_PORT = 8710

# Collections offered as free-text search domains, grouped the way the
# search page presents them.
GENERAL_INFORMATION_DOMAINS = tuple(
    c for c in COLLECTION_NAMES if c not in ("Person", "Resource"))
EPN_GENERAL_DOMAINS = ("Person", "Resource")


@dataclass
class NodeService:
    """Everything one node needs to answer requests."""

    name: str
    store: store.CatalogStore
    domains: DomainRegistry = field(default_factory=DomainRegistry)
    registry: federation.NodeRegistry = None  # type: ignore[assignment]
    timeout: float = federation.DEFAULT_TIMEOUT
    admin_token: Optional[str] = None
    suggest_mode: str = query.SUGGEST_PREFIX
    ui_dir: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.registry is None:
            self.registry = federation.NodeRegistry((), self.name)

    # -- facilities ---------------------------------------------------------

    def handle(self, request: QueryRequest, catalog: store.Catalog) -> ResponseEnvelope:
        """Route one decoded request to its facility."""
        if request.facility == "LQF":
            return ResponseEnvelope.of_results(
                query.local_query(catalog, request, self.domains))
        if request.facility == "RQF":
            count = federation.answer_remote(catalog, request, self.domains)
            return ResponseEnvelope.of_count(request, count)
        if request.facility == "SUGGEST":
            words = query.suggest(catalog, request.domain, request.values[0],
                                  self.domains, mode=self.suggest_mode)
            return ResponseEnvelope.of_suggestions(request, words)
        entry_id = EntryId(request.domain, request.values[0])
        return ResponseEnvelope.of_results(query.secondary_query(catalog, entry_id))

    def answer(self, query_string: str) -> tuple[int, ResponseEnvelope, list[str]]:
        """Full pipeline for /query: decode, dispatch, classify errors.

        Always returns a well-formed envelope; never raises.
        """
        catalog = self.store.snapshot()
        request: Optional[QueryRequest] = None
        ignored: list[str] = []
        try:
            request, ignored = wire.decode_request(query_string, self.domains)
            return 200, self.handle(request, catalog), ignored
        except (wire.WireError, RequestError, ModelError) as exc:
            return 400, ResponseEnvelope.of_error(BAD_REQUEST, str(exc), request), ignored
        except DomainError as exc:
            return 400, ResponseEnvelope.of_error(DOMAIN_UNKNOWN, str(exc), request), ignored
        except Exception as exc:  # pragma: no cover - defensive totality
            logger.exception("internal error answering %r", query_string)
            return 500, ResponseEnvelope.of_error(INTERNAL, str(exc), request), ignored

    def answer_remote_fanout(self, query_string: str
                             ) -> tuple[int, ResponseEnvelope, list[str]]:
        """Full pipeline for /remote: local count plus per-peer counts."""
        catalog = self.store.snapshot()
        request: Optional[QueryRequest] = None
        ignored: list[str] = []
        try:
            request, ignored = wire.decode_request(query_string, self.domains)
            if request.facility == "SQF":
                raise RequestError("SQF is local-only; remote fan-out takes value queries")
            as_remote = QueryRequest("RQF", request.domain, request.values,
                                     request.value_mode)
            local_count = federation.answer_remote(catalog, as_remote, self.domains)
            remote = federation.remote_query(self.registry, as_remote, local_count,
                                             timeout=self.timeout)
            return 200, ResponseEnvelope.of_remote(as_remote, remote), ignored
        except (wire.WireError, RequestError, ModelError) as exc:
            return 400, ResponseEnvelope.of_error(BAD_REQUEST, str(exc), request), ignored
        except DomainError as exc:
            return 400, ResponseEnvelope.of_error(DOMAIN_UNKNOWN, str(exc), request), ignored
        except Exception as exc:  # pragma: no cover - defensive totality
            logger.exception("internal error fanning out %r", query_string)
            return 500, ResponseEnvelope.of_error(INTERNAL, str(exc), request), ignored

    # -- admin --------------------------------------------------------------

    def admin_upsert(self, body: str) -> tuple[int, dict]:
        """Upsert one entry from a single-entry collection document."""
        try:
            root = ET.fromstring(body)
        except ET.ParseError as exc:
            return 400, {"ok": False, "error": f"malformed XML: {exc}"}
        try:
            entries = store.parse_collection(body, root.tag, "<request body>")
        except store.CatalogError as exc:
            return 400, {"ok": False, "error": str(exc)}
        if len(entries) != 1:
            return 400, {"ok": False, "error": "admin upsert takes exactly one entry"}
        try:
            self.store.upsert(entries[0])
        except store.IntegrityError as exc:
            return 409, {"ok": False, "error": str(exc)}
        return 200, {"ok": True, "id": entries[0].id.ref}

    def admin_remove(self, collection: str, id_value: str) -> tuple[int, dict]:
        try:
            entry_id = EntryId(collection, id_value)
        except ModelError as exc:
            return 400, {"ok": False, "error": str(exc)}
        try:
            removed = self.store.remove(entry_id)
        except store.IntegrityError as exc:
            return 409, {"ok": False, "error": str(exc)}
        return 200, {"ok": True, "removed": removed is not None}

    # -- UI configuration -----------------------------------------------------

    def config_payload(self) -> dict:
        return {
            "node": self.name,
            "sections": {
                "general_information": list(GENERAL_INFORMATION_DOMAINS),
                "epn_resources": {
                    "general": list(EPN_GENERAL_DOMAINS),
                    "predefined": {name: list(values)
                                   for name, values in self.domains.predefined},
                },
            },
            "peers": [{"name": n.name, "url": n.base_url} for n in self.registry.nodes],
        }


def _negotiate(accept: str) -> str:
    accept = accept or ""
    if "application/json" in accept:
        return "json"
    if "text/html" in accept:
        return "html"
    return "xml"


_CONTENT_TYPES = {
    "xml": "application/xml; charset=utf-8",
    "json": "application/json; charset=utf-8",
    "html": "text/html; charset=utf-8",
}

_UI_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class _Handler(BaseHTTPRequestHandler):
    service: NodeService  # injected by make_server
    protocol_version = "HTTP/1.1"

    # -- plumbing -----------------------------------------------------------

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        logger.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, content_type: str, body: bytes,
              extra: Optional[dict[str, str]] = None) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for key, value in (extra or {}).items():
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(body)

    def _send_envelope(self, status: int, envelope: ResponseEnvelope,
                       ignored: list[str]) -> None:
        catalog = self.service.store.snapshot()
        form = _negotiate(self.headers.get("Accept", ""))
        if form == "json":
            text = responses.encode_response_json(envelope, catalog)
        elif form == "html":
            text = responses.encode_response_html(envelope, catalog)
        else:
            text = responses.encode_response(envelope, catalog)
        extra = {"X-Ignored-Keywords": ",".join(ignored)} if ignored else None
        self._send(status, _CONTENT_TYPES[form], text.encode("utf-8"), extra)

    def _send_json(self, status: int, payload: dict) -> None:
        body = (json.dumps(payload, ensure_ascii=False) + "\n").encode("utf-8")
        self._send(status, _CONTENT_TYPES["json"], body)

    def _authorized(self) -> bool:
        token = self.service.admin_token
        return bool(token) and self.headers.get("X-Admin-Token") == token

    # -- routes -------------------------------------------------------------

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        try:
            url = urlsplit(self.path)
            path = url.path
            if path == "/health":
                self._send(200, "text/plain; charset=utf-8", b"ok\n")
            elif path == "/query":
                self._send_envelope(*self.service.answer(url.query))
            elif path == "/remote":
                self._send_envelope(*self.service.answer_remote_fanout(url.query))
            elif path == "/config":
                self._send_json(200, self.service.config_payload())
            elif path == "/" and self.service.ui_dir is not None:
                self._send(302, "text/plain; charset=utf-8", b"",
                           {"Location": "/ui/"})
            elif path.startswith("/ui"):
                self._serve_ui(path)
            else:
                self._send_json(404, {"ok": False, "error": f"no route {path}"})
        except BrokenPipeError:  # client went away; nothing to answer
            pass
        except Exception as exc:  # pragma: no cover - last-resort totality
            logger.exception("unhandled error on %s", self.path)
            envelope = ResponseEnvelope.of_error(INTERNAL, str(exc))
            try:
                self._send_envelope(500, envelope, [])
            except Exception:
                pass

    def do_POST(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        if url.path != "/admin/entry":
            self._send_json(404, {"ok": False, "error": f"no route {url.path}"})
            return
        if not self._authorized():
            self._send_json(403, {"ok": False, "error": "admin token missing or wrong"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length).decode("utf-8", errors="replace")
        self._send_json(*self.service.admin_upsert(body))

    def do_DELETE(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        parts = url.path.split("/")
        if len(parts) != 5 or parts[1] != "admin" or parts[2] != "entry":
            self._send_json(404, {"ok": False, "error": f"no route {url.path}"})
            return
        if not self._authorized():
            self._send_json(403, {"ok": False, "error": "admin token missing or wrong"})
            return
        self._send_json(*self.service.admin_remove(unquote(parts[3]), unquote(parts[4])))

    def _serve_ui(self, path: str) -> None:
        base = self.service.ui_dir
        if base is None:
            self._send_json(404, {"ok": False, "error": "no UI assets configured"})
            return
        relative = unquote(path[len("/ui"):]).lstrip("/") or "index.html"
        target = (base / relative).resolve()
        if base.resolve() not in target.parents and target != base.resolve():
            self._send_json(404, {"ok": False, "error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"ok": False, "error": "not found"})
            return
        content_type = _UI_CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, content_type, target.read_bytes())


class NodeServer:
    """A bound, startable HTTP server wrapping one NodeService."""

    def __init__(self, service: NodeService, host: str = "127.0.0.1",
                 port: int = DEFAULT_PORT):
        handler = type("BoundHandler", (_Handler,), {"service": service})
        self.service = service
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self.httpd.daemon_threads = True
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def base_url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever,
                                        name=f"node-{self.service.name}", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
