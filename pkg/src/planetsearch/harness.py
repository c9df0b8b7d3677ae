"""Multi-node federation harness and scenario runner.

Launches N nodes in-process from one config file, wires their registries
(full mesh or explicit edges), waits for health, and optionally replays a
scenario file asserting expected counts. Config grammar (shlex quoting,
`#` comments):

    node "<name>" <port> <data-dir>
    mesh full
    edge "<from>" "<to>"

Scenario grammar:

    VIA "<node>"                                 select the querying node
    EXPECT "<node>" <count> FOR <query-string>   peer count via /remote
    EXPECT LOCAL <count> FOR <query-string>      local count via /query
"""

from __future__ import annotations

import logging
import shlex
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional
from xml.etree import ElementTree as ET

import requests

from . import federation, query, service, store
from .model import NodeDescriptor

logger = logging.getLogger(__name__)

HEALTH_TIMEOUT = 10.0


class HarnessError(Exception):
    """Configuration or startup failure; nothing was left running."""


@dataclass(frozen=True)
class HarnessNode:
    name: str
    port: int
    data_dir: Path


@dataclass(frozen=True)
class HarnessConfig:
    nodes: tuple[HarnessNode, ...]
    edges: Optional[tuple[tuple[str, str], ...]] = None  # None means full mesh

    def __post_init__(self) -> None:
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise HarnessError("node names must be distinct")
        ports = [n.port for n in self.nodes]
        if len(set(ports)) != len(ports):
            raise HarnessError("node ports must be distinct")
        for source, target in self.edges or ():
            if source not in names or target not in names:
                raise HarnessError(f"edge {source!r} -> {target!r} names unknown node")

    def peers_of(self, name: str) -> list[str]:
        if self.edges is None:
            return [n.name for n in self.nodes if n.name != name]
        return [target for source, target in self.edges if source == name]


def parse_harness_config(text: str, base_dir: Path = Path(".")) -> HarnessConfig:
    """Parse a harness config; relative data dirs resolve against `base_dir`."""
    nodes: list[HarnessNode] = []
    edges: list[tuple[str, str]] = []
    mesh_full = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            words = shlex.split(line)
        except ValueError as exc:
            raise HarnessError(f"line {number}: {exc}") from exc
        keyword = words[0]
        if keyword == "node" and len(words) == 4:
            try:
                port = int(words[2])
            except ValueError as exc:
                raise HarnessError(f"line {number}: bad port {words[2]!r}") from exc
            data_dir = Path(words[3])
            if not data_dir.is_absolute():
                data_dir = base_dir / data_dir
            nodes.append(HarnessNode(words[1], port, data_dir))
        elif keyword == "mesh" and words[1:] == ["full"]:
            mesh_full = True
        elif keyword == "edge" and len(words) == 3:
            edges.append((words[1], words[2]))
        else:
            raise HarnessError(f"line {number}: cannot parse {line!r}")
    if not nodes:
        raise HarnessError("config declares no nodes")
    if mesh_full and edges:
        raise HarnessError("config mixes 'mesh full' with explicit edges")
    return HarnessConfig(tuple(nodes), None if mesh_full or not edges else tuple(edges))


def load_harness_config(path: str | Path) -> HarnessConfig:
    path = Path(path)
    return parse_harness_config(path.read_text(encoding="utf-8"), path.parent)


class Federation:
    """A running set of nodes; use as a context manager for clean teardown."""

    def __init__(self, config: HarnessConfig, timeout: float = federation.DEFAULT_TIMEOUT):
        self.config = config
        self.timeout = timeout
        self.servers: dict[str, service.NodeServer] = {}

    def __enter__(self) -> "Federation":
        self.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()

    def base_url(self, name: str) -> str:
        return self.servers[name].base_url

    def start(self) -> None:
        """Bind and start every node; a port conflict aborts before any serves."""
        descriptors = {
            n.name: NodeDescriptor(n.name, f"http://127.0.0.1:{n.port}")
            for n in self.config.nodes
        }
        bound: list[service.NodeServer] = []
        try:
            for node in self.config.nodes:
                catalog = store.load_catalog(node.data_dir)
                domains_file = node.data_dir / "domains.conf"
                domains = (query.load_domains(domains_file)
                           if domains_file.exists() else query.DomainRegistry())
                registry = federation.NodeRegistry(
                    tuple(descriptors[p] for p in self.config.peers_of(node.name)),
                    self_name=node.name,
                )
                svc = service.NodeService(
                    name=node.name, store=store.CatalogStore(catalog),
                    domains=domains, registry=registry, timeout=self.timeout,
                )
                bound.append(service.NodeServer(svc, port=node.port))
        except OSError as exc:
            for server in bound:
                server.httpd.server_close()
            raise HarnessError(f"cannot bind all node ports: {exc}") from exc
        except (store.CatalogError, ValueError) as exc:
            for server in bound:
                server.httpd.server_close()
            raise HarnessError(str(exc)) from exc

        for server in bound:
            server.start()
            self.servers[server.service.name] = server

    def stop(self) -> None:
        for server in self.servers.values():
            server.stop()
        self.servers.clear()

    def wait_healthy(self, timeout: float = HEALTH_TIMEOUT) -> None:
        deadline = time.monotonic() + timeout
        for name, server in self.servers.items():
            url = server.base_url + "/health"
            while True:
                try:
                    if requests.get(url, timeout=1).status_code == 200:
                        break
                except requests.RequestException:
                    pass
                if time.monotonic() > deadline:
                    raise HarnessError(f"node {name!r} never became healthy")
                time.sleep(0.05)


# --------------------------------------------------------------------------
# Scenario runner

@dataclass(frozen=True)
class ScenarioResult:
    line: int
    description: str
    expected: int
    actual: Optional[int]
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status}: {self.description} expected={self.expected} " \
               f"actual={self.actual}{extra}"


def _remote_counts(base_url: str, query_string: str, timeout: float
                   ) -> dict[str, Optional[int]]:
    response = requests.get(f"{base_url}/remote?{query_string}", timeout=timeout,
                            headers={"Accept": "application/xml"})
    root = ET.fromstring(response.content)
    counts: dict[str, Optional[int]] = {}
    remote = root.find("remote")
    if remote is None:
        raise HarnessError(f"no remote section in response: {response.text[:200]}")
    for node in remote.findall("node"):
        name = node.get("name") or ""
        count = node.get("count")
        counts[name] = int(count) if count is not None else None
    return counts


def _local_count(base_url: str, query_string: str, timeout: float) -> int:
    response = requests.get(f"{base_url}/query?{query_string}", timeout=timeout,
                            headers={"Accept": "application/xml"})
    root = ET.fromstring(response.content)
    results = root.find("results")
    if results is not None:
        return int(results.get("count", "0"))
    count = root.find("count")
    if count is not None and count.text is not None:
        return int(count.text)
    raise HarnessError(f"no count in response: {response.text[:200]}")


def run_scenario(text: str, fed: Federation,
                 timeout: float = 30.0) -> list[ScenarioResult]:
    """Replay a scenario against a running federation."""
    results: list[ScenarioResult] = []
    via = fed.config.nodes[0].name
    fanout_cache: dict[tuple[str, str], dict[str, Optional[int]]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = shlex.split(line)
        if words[0] == "VIA" and len(words) == 2:
            if words[1] not in fed.servers:
                raise HarnessError(f"line {number}: unknown node {words[1]!r}")
            via = words[1]
            continue
        if words[0] != "EXPECT" or "FOR" not in words:
            raise HarnessError(f"line {number}: cannot parse {line!r}")
        for_index = words.index("FOR")
        query_string = " ".join(words[for_index + 1:])
        target = words[1]
        expected = int(words[for_index - 1])

        if target == "LOCAL":
            actual: Optional[int] = _local_count(fed.base_url(via), query_string, timeout)
            description = f"local count at {via} for {query_string}"
            detail = ""
        else:
            cache_key = (via, query_string)
            if cache_key not in fanout_cache:
                fanout_cache[cache_key] = _remote_counts(fed.base_url(via),
                                                         query_string, timeout)
            counts = fanout_cache[cache_key]
            if target not in counts:
                actual, detail = None, "node absent from remote response"
            else:
                actual = counts[target]
                detail = "unreachable" if actual is None else ""
            description = f"remote count of {target} via {via} for {query_string}"
        results.append(ScenarioResult(number, description, expected, actual,
                                      passed=(actual == expected), detail=detail))
    return results
