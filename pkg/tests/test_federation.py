"""Remote fan-out: counts, fault isolation, timeouts, registry handling."""

from __future__ import annotations

import random
import socket
import threading
import time

import pytest

from gen import TEST_DOMAINS, random_catalog, random_request
from planetsearch.federation import (
    NodeRegistry,
    PeerOutcome,
    RemoteCountSet,
    answer_remote,
    load_registry,
    remote_query,
)
from planetsearch.model import ModelError, NodeDescriptor
from planetsearch.query import QueryRequest, RequestError, local_query
from planetsearch.store import empty_catalog


def peers(*names: str) -> tuple[NodeDescriptor, ...]:
    return tuple(NodeDescriptor(n, f"http://127.0.0.1:9{i:03d}")
                 for i, n in enumerate(names))


REQUEST = QueryRequest("RQF", "Resource", ("planet",))


class StalledListener:
    """Accepts TCP connections and never answers."""

    def __init__(self):
        self.sock = socket.socket()
        self.sock.bind(("127.0.0.1", 0))
        self.sock.listen(8)
        self.port = self.sock.getsockname()[1]
        self._accepted: list[socket.socket] = []
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def _run(self):
        while True:
            try:
                conn, _ = self.sock.accept()
            except OSError:
                return
            self._accepted.append(conn)

    def close(self):
        self.sock.close()
        for conn in self._accepted:
            conn.close()


class TestNodeRegistry:
    def test_self_name_among_peers_rejected(self):
        with pytest.raises(ModelError, match="local node"):
            NodeRegistry(peers("A", "B"), self_name="A")

    def test_duplicate_urls_rejected(self):
        node = NodeDescriptor("A", "http://127.0.0.1:9001")
        other = NodeDescriptor("B", "http://127.0.0.1:9001")
        with pytest.raises(ModelError, match="unique"):
            NodeRegistry((node, other), self_name="Me")

    def test_load_registry_skips_self_with_warning(self, tmp_path, caplog):
        path = tmp_path / "registry.conf"
        path.write_text(
            "# peers\n"
            "Atmospheres Node = http://127.0.0.1:9001\n"
            "SBD Node = http://127.0.0.1:9002\n", encoding="utf-8")
        registry = load_registry(path, self_name="SBD Node")
        assert [n.name for n in registry.nodes] == ["Atmospheres Node"]
        assert "skipping" in caplog.text

    def test_load_registry_fixture_file(self):
        from conftest import REPO_ROOT

        registry = load_registry(REPO_ROOT / "fixtures" / "registry.conf",
                                 self_name="Query Node")
        assert [n.name for n in registry.nodes] == [
            "Atmospheres Node", "Interiors and Surfaces Node",
            "Plasma Node", "SBD Node"]

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "registry.conf"
        path.write_text("just a name without url\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_registry(path, self_name="Me")


class TestRemoteQueryWithFakeFetcher:
    def test_counts_in_registry_order(self):
        registry = NodeRegistry(peers("A", "B", "C"), "Me")
        counts = {"A": 0, "B": 7, "C": 2}

        def fetcher(node, query_string, timeout):
            return counts[node.name]

        result = remote_query(registry, REQUEST, local_count=4, fetcher=fetcher)
        assert [o.node.name for o in result.per_node] == ["A", "B", "C"]
        assert [o.count for o in result.per_node] == [0, 7, 2]
        assert result.local_count == 4

    def test_request_coerced_to_rqf(self):
        registry = NodeRegistry(peers("A"), "Me")
        seen = {}

        def fetcher(node, query_string, timeout):
            seen["qs"] = query_string
            return 0

        remote_query(registry, QueryRequest("LQF", "Resource", ("x",)), 0,
                     fetcher=fetcher)
        assert seen["qs"].startswith("type=RQF&")

    def test_fault_isolation(self):
        registry = NodeRegistry(peers("A", "B", "C"), "Me")

        def fetcher(node, query_string, timeout):
            if node.name == "B":
                raise RuntimeError("boom")
            return 1

        result = remote_query(registry, REQUEST, 0, fetcher=fetcher)
        outcomes = {o.node.name: o for o in result.per_node}
        assert outcomes["A"].count == 1
        assert outcomes["C"].count == 1
        assert not outcomes["B"].reachable
        assert outcomes["B"].error == "boom"

    def test_unreachable_distinct_from_zero(self):
        zero = PeerOutcome(peers("A")[0], count=0)
        down = PeerOutcome(peers("A")[0], error="timeout")
        assert zero.reachable and not down.reachable
        assert zero.count == 0 and down.count is None

    def test_empty_registry(self):
        result = remote_query(NodeRegistry((), "Me"), REQUEST, local_count=5)
        assert result == RemoteCountSet((), 5)


class TestRemoteQueryOverHttp:
    def test_fig4_counts_against_live_nodes(self, live_node):
        registry = NodeRegistry(
            (NodeDescriptor("SBD Node", live_node.base_url),), "Query Node")
        result = remote_query(registry, REQUEST, local_count=0, timeout=5.0)
        assert [o.count for o in result.per_node] == [7]

    def test_dead_port_unreachable_others_fine(self, live_node):
        dead_port = _claimed_free_port()
        registry = NodeRegistry((
            NodeDescriptor("SBD Node", live_node.base_url),
            NodeDescriptor("Dead Node", f"http://127.0.0.1:{dead_port}"),
        ), "Query Node")
        result = remote_query(registry, REQUEST, local_count=0, timeout=3.0)
        by_name = {o.node.name: o for o in result.per_node}
        assert by_name["SBD Node"].count == 7
        assert not by_name["Dead Node"].reachable

    def test_stalled_peer_timeout_within_bound(self, live_node):
        stalled = StalledListener()
        try:
            registry = NodeRegistry((
                NodeDescriptor("SBD Node", live_node.base_url),
                NodeDescriptor("Stalled Node", f"http://127.0.0.1:{stalled.port}"),
            ), "Query Node")
            timeout = 1.0
            start = time.monotonic()
            result = remote_query(registry, REQUEST, local_count=0, timeout=timeout)
            elapsed = time.monotonic() - start
            assert elapsed <= timeout + 0.5
            by_name = {o.node.name: o for o in result.per_node}
            assert by_name["SBD Node"].count == 7
            assert not by_name["Stalled Node"].reachable
        finally:
            stalled.close()

    def test_all_peers_hanging_still_bounded(self):
        listeners = [StalledListener() for _ in range(3)]
        try:
            registry = NodeRegistry(tuple(
                NodeDescriptor(f"Hung {i}", f"http://127.0.0.1:{l.port}")
                for i, l in enumerate(listeners)), "Me")
            timeout = 1.0
            start = time.monotonic()
            result = remote_query(registry, REQUEST, 0, timeout=timeout)
            elapsed = time.monotonic() - start
            assert elapsed <= timeout + 0.5
            assert all(not o.reachable for o in result.per_node)
        finally:
            for listener in listeners:
                listener.close()


def _claimed_free_port() -> int:
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


class TestAnswerRemote:
    def test_identity_with_local_count(self, fixture_catalog, fixture_domains):
        assert answer_remote(fixture_catalog, REQUEST, fixture_domains) == 7

    def test_empty_catalog_counts_zero(self):
        assert answer_remote(empty_catalog(), REQUEST) == 0

    def test_requires_rqf(self, fixture_catalog):
        with pytest.raises(RequestError):
            answer_remote(fixture_catalog, QueryRequest("LQF", "Resource", ("x",)))

    def test_identity_over_random_catalogs(self):
        from dataclasses import replace

        rng = random.Random(20260808)
        for _ in range(50):
            catalog = random_catalog(rng, max_entries=50)
            request = random_request(rng, catalog, facility="RQF")
            as_local = replace(request, facility="LQF")
            assert answer_remote(catalog, request, TEST_DOMAINS) == \
                local_query(catalog, as_local, TEST_DOMAINS).count
