"""Remote query fan-out: per-peer counts with timeout and fault isolation.

`remote_query` asks every registered peer node for its result count
concurrently. A peer that fails or stalls is reported as unreachable, a
distinct outcome from a zero count; the remaining peers are unaffected.
The whole fan-out finishes within the per-node timeout plus a fixed
aggregation slack, no matter how many peers hang.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional
from xml.etree import ElementTree as ET

import requests

from .model import ModelError, NodeDescriptor
from .query import DomainRegistry, QueryRequest, RequestError, local_query
from .store import Catalog
from .wire import encode_request

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 5.0
AGGREGATION_SLACK = 0.25  # seconds the join may add on top of the per-node timeout


@dataclass(frozen=True)
class NodeRegistry:
    """The peers this node fans out to, in display order."""

    nodes: tuple[NodeDescriptor, ...]
    self_name: str

    def __post_init__(self) -> None:
        names = [n.name for n in self.nodes]
        if self.self_name in names:
            raise ModelError(f"registry lists the local node {self.self_name!r} as a peer")
        if len(set(names)) != len(names):
            raise ModelError("registry peer names must be unique")
        urls = [n.base_url for n in self.nodes]
        if len(set(urls)) != len(urls):
            raise ModelError("registry peer base urls must be unique")


def load_registry(path: str | Path, self_name: str) -> NodeRegistry:
    """Read a registry file: one `name = base_url` line per peer.

    Blank lines and `#` comments are ignored. A line naming the local node
    is skipped with a warning so a federation can share one registry file.
    """
    nodes: list[NodeDescriptor] = []
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, url = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{number}: expected 'name = base_url'")
        name = name.strip()
        url = url.strip()
        if name == self_name:
            logger.warning("registry %s lists the local node %r; skipping", path, name)
            continue
        nodes.append(NodeDescriptor(name, url))
    return NodeRegistry(tuple(nodes), self_name)


@dataclass(frozen=True)
class PeerOutcome:
    """One peer's answer: a count, or the reason it could not be reached."""

    node: NodeDescriptor
    count: Optional[int] = None
    error: Optional[str] = None

    @property
    def reachable(self) -> bool:
        return self.count is not None


@dataclass(frozen=True)
class RemoteCountSet:
    """Per-peer counts in registry order, plus the local count for comparison."""

    per_node: tuple[PeerOutcome, ...]
    local_count: int


CountFetcher = Callable[[NodeDescriptor, str, float], int]


def fetch_count(node: NodeDescriptor, query_string: str, timeout: float) -> int:
    """Fetch one peer's count over HTTP; raises on any failure."""
    url = node.base_url.rstrip("/") + "/query?" + query_string
    response = requests.get(url, timeout=timeout, headers={"Accept": "application/xml"})
    if response.status_code != 200:
        raise RuntimeError(f"HTTP {response.status_code}")
    root = ET.fromstring(response.content)
    count_elem = root.find("count")
    if count_elem is None or count_elem.text is None:
        raise RuntimeError("response carries no count")
    return int(count_elem.text)


def remote_query(registry: NodeRegistry, request: QueryRequest, local_count: int,
                 timeout: float = DEFAULT_TIMEOUT,
                 fetcher: CountFetcher = fetch_count) -> RemoteCountSet:
    """Fan the request out to every registered peer and collect counts.

    The request is coerced to RQF before dispatch. Peer faults never
    surface as exceptions: each failed or late peer is reported
    unreachable with a reason.
    """
    coerced = replace(request, facility="RQF")
    query_string = encode_request(coerced)
    outcomes: list[Optional[PeerOutcome]] = [None] * len(registry.nodes)

    def worker(index: int, node: NodeDescriptor) -> None:
        try:
            count = fetcher(node, query_string, timeout)
            if count < 0:
                raise RuntimeError(f"negative count {count}")
            outcomes[index] = PeerOutcome(node, count=count)
        except requests.Timeout:
            outcomes[index] = PeerOutcome(node, error="timeout")
        except requests.ConnectionError:
            outcomes[index] = PeerOutcome(node, error="connection failed")
        except Exception as exc:
            outcomes[index] = PeerOutcome(node, error=str(exc) or exc.__class__.__name__)

    threads = []
    for index, node in enumerate(registry.nodes):
        thread = threading.Thread(target=worker, args=(index, node),
                                  name=f"rqf-{node.name}", daemon=True)
        thread.start()
        threads.append(thread)

    deadline = time.monotonic() + timeout + AGGREGATION_SLACK
    for thread in threads:
        thread.join(max(0.0, deadline - time.monotonic()))

    per_node = tuple(
        outcome if outcome is not None else PeerOutcome(node, error="timeout")
        for node, outcome in zip(registry.nodes, outcomes)
    )
    return RemoteCountSet(per_node, local_count)


def answer_remote(catalog: Catalog, request: QueryRequest,
                  domains: Optional[DomainRegistry] = None) -> int:
    """The server side of a remote query: counts-only, same matching as LQF."""
    if request.facility != "RQF":
        raise RequestError(f"answer_remote answers RQF requests, not {request.facility}")
    as_local = replace(request, facility="LQF")
    return local_query(catalog, as_local, domains).count
