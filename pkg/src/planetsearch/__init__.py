"""Federated metadata-search node for planetary-science resource catalogs."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    COLLECTION_NAMES,
    SECTION_NAMES,
    Entry,
    EntryId,
    GenericEntry,
    KeywordEntry,
    NodeDescriptor,
    PersonDescriptor,
    ResourceDescriptor,
    Section,
    Violation,
    validate_catalog,
)
from .store import (  # noqa: F401
    Catalog,
    CatalogError,
    CatalogStore,
    IntegrityError,
    ParseError,
    empty_catalog,
    load_catalog,
    lookup_by_id,
    remove_entry,
    store_catalog,
    upsert_entry,
)
from .expressions import PathExpression, evaluate, parse_expression  # noqa: F401
from .query import (  # noqa: F401
    DomainError,
    DomainRegistry,
    LocalResultSet,
    QueryRequest,
    RequestError,
    load_domains,
    local_query,
    secondary_query,
    suggest,
)
from .federation import (  # noqa: F401
    NodeRegistry,
    PeerOutcome,
    RemoteCountSet,
    answer_remote,
    load_registry,
    remote_query,
)
from .wire import decode_request, encode_request  # noqa: F401
