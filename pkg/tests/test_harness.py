"""Multi-node harness: config parsing, startup semantics, scenario replay."""

from __future__ import annotations

import socket
from pathlib import Path

import pytest

from conftest import EMPTY_DIR, FIG4_SCENARIO, FIXTURE_DIR, HARNESS_CONFIG, free_ports
from planetsearch.harness import (
    Federation,
    HarnessConfig,
    HarnessError,
    HarnessNode,
    load_harness_config,
    parse_harness_config,
    run_scenario,
)


def config_with_ports(ports: list[int]) -> HarnessConfig:
    return HarnessConfig((
        HarnessNode("SBD Node", ports[0], FIXTURE_DIR),
        HarnessNode("Atmospheres Node", ports[1], EMPTY_DIR),
        HarnessNode("Interiors and Surfaces Node", ports[2], EMPTY_DIR),
        HarnessNode("Plasma Node", ports[3], EMPTY_DIR),
        HarnessNode("Query Node", ports[4], EMPTY_DIR),
    ))


class TestConfigParsing:
    def test_fig4_config_parses(self):
        config = load_harness_config(HARNESS_CONFIG)
        assert [n.name for n in config.nodes] == [
            "SBD Node", "Atmospheres Node", "Interiors and Surfaces Node",
            "Plasma Node", "Query Node"]
        assert config.edges is None  # full mesh
        assert config.nodes[0].data_dir.resolve() == FIXTURE_DIR.resolve()

    def test_relative_dirs_resolve_against_config_location(self, tmp_path):
        config = parse_harness_config('node "A" 1 data/a\n', base_dir=tmp_path)
        assert config.nodes[0].data_dir == tmp_path / "data" / "a"

    def test_duplicate_ports_rejected(self):
        with pytest.raises(HarnessError, match="distinct"):
            parse_harness_config('node "A" 8001 x\nnode "B" 8001 y\n')

    def test_duplicate_names_rejected(self):
        with pytest.raises(HarnessError, match="distinct"):
            parse_harness_config('node "A" 8001 x\nnode "A" 8002 y\n')

    def test_unparsable_line_rejected(self):
        with pytest.raises(HarnessError, match="line 1"):
            parse_harness_config("nodes A 8001 x\n")

    def test_explicit_edges(self):
        config = parse_harness_config(
            'node "A" 8001 x\nnode "B" 8002 y\nedge "A" "B"\n')
        assert config.peers_of("A") == ["B"]
        assert config.peers_of("B") == []

    def test_full_mesh_excludes_self(self):
        config = parse_harness_config(
            'node "A" 8001 x\nnode "B" 8002 y\nmesh full\n')
        assert config.peers_of("A") == ["B"]

    def test_edge_to_unknown_node_rejected(self):
        with pytest.raises(HarnessError, match="unknown node"):
            parse_harness_config('node "A" 8001 x\nedge "A" "Z"\n')


class TestStartup:
    def test_port_conflict_aborts_before_any_node_serves(self):
        ports = free_ports(5)
        blocker = socket.socket()
        blocker.bind(("127.0.0.1", ports[2]))
        blocker.listen(1)
        try:
            with pytest.raises(HarnessError, match="bind"):
                Federation(config_with_ports(ports)).start()
            # Nothing else must be left listening.
            for port in (ports[0], ports[1], ports[3], ports[4]):
                probe = socket.socket()
                try:
                    assert probe.connect_ex(("127.0.0.1", port)) != 0
                finally:
                    probe.close()
        finally:
            blocker.close()

    def test_missing_data_dir_aborts(self):
        ports = free_ports(1)
        config = HarnessConfig((HarnessNode("A", ports[0], Path("/nonexistent")),))
        with pytest.raises(HarnessError):
            Federation(config).start()


@pytest.fixture(scope="module")
def fig4_federation():
    config = config_with_ports(free_ports(5))
    with Federation(config, timeout=3.0) as federation:
        federation.wait_healthy()
        yield federation


class TestScenario:
    def test_fig4_scenario_passes(self, fig4_federation):
        text = FIG4_SCENARIO.read_text(encoding="utf-8")
        results = run_scenario(text, fig4_federation)
        assert len(results) == 5
        assert all(r.passed for r in results), [str(r) for r in results]

    def test_scenario_report_is_deterministic(self, fig4_federation):
        text = FIG4_SCENARIO.read_text(encoding="utf-8")
        first = [str(r) for r in run_scenario(text, fig4_federation)]
        second = [str(r) for r in run_scenario(text, fig4_federation)]
        assert first == second

    def test_empty_nodes_count_zero(self, fig4_federation):
        text = ('VIA "Query Node"\n'
                'EXPECT "Atmospheres Node" 0 FOR type=RQF&domain=Resource&value=q\n'
                'EXPECT "Plasma Node" 0 FOR type=RQF&domain=Resource&value=q\n')
        assert all(r.passed for r in run_scenario(text, fig4_federation))

    def test_failed_expectation_reported_not_raised(self, fig4_federation):
        text = 'EXPECT LOCAL 99 FOR type=LQF&domain=Resource&value=planet\n'
        results = run_scenario(text, fig4_federation)
        assert len(results) == 1
        assert not results[0].passed
        assert results[0].expected == 99
        assert results[0].actual == 7
        assert str(results[0]).startswith("FAIL:")

    def test_unknown_via_node_rejected(self, fig4_federation):
        with pytest.raises(HarnessError, match="unknown node"):
            run_scenario('VIA "Ghost"\n', fig4_federation)

    def test_counts_visible_from_every_node(self, fig4_federation):
        # Count consistency: each node reports remotely what it holds locally.
        for via in ("Atmospheres Node", "Plasma Node", "Query Node"):
            text = (f'VIA "{via}"\n'
                    'EXPECT "SBD Node" 7 FOR type=RQF&domain=Resource&value=planet\n')
            results = run_scenario(text, fig4_federation)
            assert all(r.passed for r in results), (via, [str(r) for r in results])


class TestFaultInjection:
    def test_blackholed_peer_reported_unreachable_scenario_completes(self):
        from planetsearch.model import NodeDescriptor
        from planetsearch.federation import NodeRegistry, remote_query
        from planetsearch.query import QueryRequest
        from test_federation import StalledListener

        ports = free_ports(2)
        config = HarnessConfig((
            HarnessNode("SBD Node", ports[0], FIXTURE_DIR),
            HarnessNode("Query Node", ports[1], EMPTY_DIR),
        ))
        stalled = StalledListener()
        try:
            with Federation(config, timeout=1.0) as federation:
                federation.wait_healthy()
                registry = NodeRegistry((
                    NodeDescriptor("SBD Node", federation.base_url("SBD Node")),
                    NodeDescriptor("Black Hole", f"http://127.0.0.1:{stalled.port}"),
                ), "Probe")
                request = QueryRequest("RQF", "Resource", ("planet",))
                result = remote_query(registry, request, 0, timeout=1.0)
                by_name = {o.node.name: o for o in result.per_node}
                assert by_name["SBD Node"].count == 7
                assert not by_name["Black Hole"].reachable
        finally:
            stalled.close()
