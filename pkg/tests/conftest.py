"""Shared fixtures: the fixture corpus, a live node, and port allocation."""

from __future__ import annotations

import socket
from pathlib import Path

import pytest

from planetsearch import load_catalog, load_domains
from planetsearch.federation import NodeRegistry
from planetsearch.query import DomainRegistry
from planetsearch.service import NodeServer, NodeService
from planetsearch.store import CatalogStore

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "fixtures" / "catalog"
EMPTY_DIR = REPO_ROOT / "fixtures" / "empty"
HARNESS_CONFIG = REPO_ROOT / "fixtures" / "harness" / "fig4.conf"
FIG4_SCENARIO = REPO_ROOT / "fixtures" / "scenarios" / "fig4.scenario"

ADMIN_TOKEN = "test-admin-secret"


def free_ports(count: int) -> list[int]:
    """Ports the kernel considers free right now."""
    sockets = []
    try:
        for _ in range(count):
            sock = socket.socket()
            sock.bind(("127.0.0.1", 0))
            sockets.append(sock)
        return [s.getsockname()[1] for s in sockets]
    finally:
        for sock in sockets:
            sock.close()


@pytest.fixture(scope="session")
def fixture_catalog():
    return load_catalog(FIXTURE_DIR)


@pytest.fixture(scope="session")
def fixture_domains() -> DomainRegistry:
    return load_domains(FIXTURE_DIR / "domains.conf")


@pytest.fixture(scope="module")
def live_node(fixture_catalog, fixture_domains):
    """One running node serving the fixture corpus, admin enabled."""
    service = NodeService(
        name="SBD Node",
        store=CatalogStore(fixture_catalog),
        domains=fixture_domains,
        registry=NodeRegistry((), "SBD Node"),
        admin_token=ADMIN_TOKEN,
    )
    server = NodeServer(service, port=free_ports(1)[0])
    server.start()
    yield server
    server.stop()
