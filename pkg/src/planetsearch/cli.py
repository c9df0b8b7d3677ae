"""Operator command line: validate, query, suggest, upsert, remove, serve, harness.

Exit codes: 0 success, 1 violation or failed assertion, 2 usage or I/O
error. Flags override PLANETSEARCH_* environment variables, which override
the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import signal
import sys
from pathlib import Path
from typing import Optional

import requests

from . import __version__, federation, harness, query, service, store
from .model import EntryId, ModelError

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    return os.environ.get(f"PLANETSEARCH_{name}", default)


def cmd_validate(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_USAGE
    try:
        collections = {}
        for name in store.COLLECTION_NAMES:
            path = directory / f"{name}.xml"
            if path.exists():
                collections[name] = tuple(store.parse_collection(
                    path.read_text(encoding="utf-8"), name, str(path)))
        for path in sorted(directory.glob("*.xml")):
            if path.stem not in store.COLLECTION_NAMES:
                print(f"error: unknown collection file {path.name}", file=sys.stderr)
                return EXIT_USAGE
    except store.CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    from .model import validate_catalog

    violations = validate_catalog(collections)
    for violation in violations:
        print(violation)
    if violations:
        print(f"{len(violations)} violation(s)", file=sys.stderr)
        return EXIT_VIOLATION
    print("catalog valid")
    return EXIT_OK


def _print_envelope(response: requests.Response, raw: bool, as_json: bool) -> None:
    if raw:
        sys.stdout.buffer.write(response.content)
        if not response.content.endswith(b"\n"):
            sys.stdout.write("\n")
        return
    if as_json:
        print(json.dumps(response.json(), indent=2, ensure_ascii=False))
        return
    # Summary form: one line per notable envelope element.
    from xml.etree import ElementTree as ET

    root = ET.fromstring(response.content)
    results = root.find("results")
    count = root.find("count")
    suggestions = root.find("suggestions")
    remote = root.find("remote")
    error = root.find("error")
    if results is not None:
        print(f"{results.get('count')} results")
        for entry in results.findall("entry"):
            name = entry.findtext("name") or entry.get("id")
            print(f"  - {name} [{entry.get('collection')}:{entry.get('id')}]")
    elif count is not None:
        print(f"{count.text} results")
    elif suggestions is not None:
        for word in suggestions.findall("s"):
            print(word.text)
    elif remote is not None:
        print(f"local: {remote.get('local')} results")
        for node in remote.findall("node"):
            if node.get("count") is not None:
                print(f"  {node.get('name')}: {node.get('count')} results")
            else:
                print(f"  {node.get('name')}: unreachable ({node.get('error')})")
    elif error is not None:
        print(f"error {error.get('code')}: {error.text}")


def cmd_query(args: argparse.Namespace) -> int:
    pairs = [("type", args.type), ("domain", args.domain)]
    if args.id is not None:
        pairs.append(("id", args.id))
    pairs.extend(("value", v) for v in args.value or [])
    query_string = "&".join(f"{k}={requests.utils.quote(v)}" for k, v in pairs)
    endpoint = "/remote?" if args.remote else "/query?"
    url = args.url.rstrip("/") + endpoint + query_string
    accept = "application/json" if args.json else "application/xml"
    try:
        response = requests.get(url, timeout=args.timeout, headers={"Accept": accept})
    except requests.RequestException as exc:
        print(f"error: cannot reach {args.url}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_envelope(response, args.raw, args.json)
    return EXIT_OK if response.status_code == 200 else EXIT_VIOLATION


def cmd_suggest(args: argparse.Namespace) -> int:
    args.type = "SUGGEST"
    args.value = [args.fragment]
    args.id = None
    args.remote = False
    return cmd_query(args)


def cmd_upsert(args: argparse.Namespace) -> int:
    body = Path(args.file).read_text(encoding="utf-8")
    if args.url:
        token = args.token or _env("ADMIN_TOKEN")
        if not token:
            print("error: remote upsert needs --token", file=sys.stderr)
            return EXIT_USAGE
        response = requests.post(args.url.rstrip("/") + "/admin/entry", data=body.encode(),
                                 headers={"X-Admin-Token": token}, timeout=args.timeout)
        print(response.text.strip())
        return EXIT_OK if response.ok else EXIT_VIOLATION
    from xml.etree import ElementTree as ET

    try:
        root = ET.fromstring(body)
        entries = store.parse_collection(body, root.tag, args.file)
        catalog = store.load_catalog(args.dir)
        for entry in entries:
            catalog = store.upsert_entry(catalog, entry)
        store.store_catalog(catalog, args.dir)
    except (ET.ParseError, store.CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"upserted {len(entries)} entr{'y' if len(entries) == 1 else 'ies'}")
    return EXIT_OK


def cmd_remove(args: argparse.Namespace) -> int:
    try:
        entry_id = EntryId(args.collection, args.id)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.url:
        token = args.token or _env("ADMIN_TOKEN")
        if not token:
            print("error: remote remove needs --token", file=sys.stderr)
            return EXIT_USAGE
        response = requests.delete(
            f"{args.url.rstrip('/')}/admin/entry/{args.collection}/{args.id}",
            headers={"X-Admin-Token": token}, timeout=args.timeout)
        print(response.text.strip())
        return EXIT_OK if response.ok else EXIT_VIOLATION
    try:
        catalog = store.load_catalog(args.dir)
        catalog, removed = store.remove_entry(catalog, entry_id)
        store.store_catalog(catalog, args.dir)
    except store.CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"removed {entry_id.ref}" if removed else f"no entry {entry_id.ref}; nothing done")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    data_dir = Path(args.data)
    try:
        catalog = store.load_catalog(data_dir)
    except store.CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    domains_path = Path(args.domains) if args.domains else data_dir / "domains.conf"
    domains = (query.load_domains(domains_path)
               if domains_path.exists() else query.DomainRegistry())
    registry = (federation.load_registry(args.registry, args.name)
                if args.registry else federation.NodeRegistry((), args.name))

    svc = service.NodeService(
        name=args.name,
        store=store.CatalogStore(catalog),
        domains=domains,
        registry=registry,
        timeout=args.timeout,
        admin_token=args.admin_token,
        suggest_mode=(query.SUGGEST_SUBSTRING if args.suggest_substring
                      else query.SUGGEST_PREFIX),
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    try:
        server = service.NodeServer(svc, host=args.host, port=args.port)
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"node {args.name!r} serving {catalog.size()} entries on {server.base_url}")
    try:
        server.httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.httpd.server_close()
    return EXIT_OK


def cmd_harness(args: argparse.Namespace) -> int:
    try:
        config = harness.load_harness_config(args.config)
    except (OSError, harness.HarnessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        fed = harness.Federation(config, timeout=args.timeout)
        fed.start()
    except harness.HarnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    stop = signal.getsignal(signal.SIGINT)
    try:
        fed.wait_healthy()
        for node in config.nodes:
            print(f"node {node.name!r} up at {fed.base_url(node.name)}")
        failures = 0
        if args.scenario:
            text = Path(args.scenario).read_text(encoding="utf-8")
            for result in harness.run_scenario(text, fed):
                print(result)
                failures += 0 if result.passed else 1
            if not args.keep_running:
                return EXIT_VIOLATION if failures else EXIT_OK
        print("federation running; Ctrl-C to stop")
        signal.signal(signal.SIGINT, stop)
        try:
            signal.pause()
        except (KeyboardInterrupt, AttributeError):
            pass
        return EXIT_VIOLATION if failures else EXIT_OK
    finally:
        fed.stop()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planetsearch",
        description="Federated metadata-search node for planetary-science catalogs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a catalog directory's invariants")
    p.add_argument("directory")
    p.set_defaults(func=cmd_validate)

    def add_client_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--url", default=_env("URL", "http://127.0.0.1:8710"),
                       help="node base URL")
        p.add_argument("--timeout", type=float, default=float(_env("TIMEOUT", "10")))
        p.add_argument("--raw", action="store_true", help="print wire bytes verbatim")
        p.add_argument("--json", action="store_true", help="request the JSON mirror")

    p = sub.add_parser("query", help="send one query to a node")
    add_client_flags(p)
    p.add_argument("--type", default="LQF", choices=["LQF", "RQF", "SQF", "SUGGEST"])
    p.add_argument("--domain", required=True)
    p.add_argument("--value", action="append", help="search value (repeatable)")
    p.add_argument("--id", help="entry id (SQF)")
    p.add_argument("--remote", action="store_true", help="use the fan-out endpoint")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("suggest", help="fetch suggestions for a fragment")
    add_client_flags(p)
    p.add_argument("--domain", default="Resource")
    p.add_argument("fragment")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("upsert", help="insert or replace one entry")
    p.add_argument("file", help="single-entry collection XML document")
    p.add_argument("--dir", help="catalog directory (local mode)")
    p.add_argument("--url", help="node base URL (remote mode)")
    p.add_argument("--token", help="admin token for remote mode")
    p.add_argument("--timeout", type=float, default=float(_env("TIMEOUT", "10")))
    p.set_defaults(func=cmd_upsert)

    p = sub.add_parser("remove", help="remove one entry by collection and id")
    p.add_argument("collection")
    p.add_argument("id")
    p.add_argument("--dir", help="catalog directory (local mode)")
    p.add_argument("--url", help="node base URL (remote mode)")
    p.add_argument("--token", help="admin token for remote mode")
    p.add_argument("--timeout", type=float, default=float(_env("TIMEOUT", "10")))
    p.set_defaults(func=cmd_remove)

    p = sub.add_parser("serve", help="run one node")
    p.add_argument("--name", default=_env("NAME", "Local Node"))
    p.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(_env("PORT", str(service.DEFAULT_PORT))))
    p.add_argument("--data", default=_env("DATA", "."), help="catalog directory")
    p.add_argument("--registry", default=_env("REGISTRY"), help="peer registry file")
    p.add_argument("--domains", default=_env("DOMAINS"),
                   help="predefined-domain config (default: <data>/domains.conf)")
    p.add_argument("--timeout", type=float,
                   default=float(_env("TIMEOUT", str(federation.DEFAULT_TIMEOUT))),
                   help="per-peer timeout for fan-out queries")
    p.add_argument("--admin-token", default=_env("ADMIN_TOKEN"))
    p.add_argument("--ui-dir", default=_env("UI"), help="static UI asset directory")
    p.add_argument("--suggest-substring", action="store_true",
                   help="suggestion matching by containment instead of prefix")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("harness", help="run an N-node federation from one config")
    p.add_argument("config")
    p.add_argument("--scenario", help="scenario file to replay")
    p.add_argument("--timeout", type=float,
                   default=float(_env("TIMEOUT", str(federation.DEFAULT_TIMEOUT))))
    p.add_argument("--keep-running", action="store_true",
                   help="stay up after the scenario finishes")
    p.set_defaults(func=cmd_harness)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("PLANETSEARCH_LOG", "WARNING"))
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) in ("upsert", "remove"):
        if bool(args.dir) == bool(args.url):
            parser.error("give exactly one of --dir or --url")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
