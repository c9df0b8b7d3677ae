"""keyword=value request codec: decoding, encoding, round-trips."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import PREDEFINED_VALUES, TEST_DOMAINS
from planetsearch.model import COLLECTION_NAMES
from planetsearch.query import FREE_TEXT, PREDEFINED, QueryRequest
from planetsearch.wire import (
    WireError,
    WireRequest,
    decode_pairs,
    decode_request,
    encode_pairs,
    encode_request,
)


class TestDecode:
    def test_lqf_planet_resource(self):
        request, ignored = decode_request("type=LQF&domain=Resource&value=planet")
        assert request == QueryRequest("LQF", "Resource", ("planet",), FREE_TEXT)
        assert ignored == []

    def test_sqf_by_id(self):
        request, _ = decode_request("type=SQF&domain=Resource&id=R12")
        assert request == QueryRequest("SQF", "Resource", ("R12",), FREE_TEXT)

    def test_missing_type_is_error(self):
        with pytest.raises(WireError, match="type"):
            decode_request("domain=Resource")

    def test_missing_domain_is_error(self):
        with pytest.raises(WireError, match="domain"):
            decode_request("type=LQF&value=x")

    def test_invalid_type_names_allowed_values(self):
        with pytest.raises(WireError) as excinfo:
            decode_request("type=XQF&domain=Resource&value=x")
        message = str(excinfo.value)
        for allowed in ("LQF", "RQF", "SQF", "SUGGEST"):
            assert allowed in message

    def test_unknown_keywords_ignored_and_reported(self):
        request, ignored = decode_request(
            "type=LQF&domain=Resource&value=x&debug=1&page=2")
        assert request.values == ("x",)
        assert ignored == ["debug", "page"]

    def test_repeated_values_collected_in_order(self):
        request, _ = decode_request("type=LQF&domain=Resource&value=a&value=b")
        assert request.values == ("a", "b")

    def test_duplicate_type_rejected(self):
        with pytest.raises(WireError, match="'type'"):
            decode_request("type=LQF&type=RQF&domain=Resource&value=x")

    def test_percent_decoding_applied(self):
        request, _ = decode_request(
            "type=LQF&domain=Resource&value=solar%20wind%26dust")
        assert request.values == ("solar wind&dust",)

    def test_suggest_takes_exactly_one_value(self):
        with pytest.raises(WireError, match="SUGGEST"):
            decode_request("type=SUGGEST&domain=Resource&value=a&value=b")

    def test_sqf_without_id_is_error(self):
        with pytest.raises(WireError, match="id"):
            decode_request("type=SQF&domain=Resource&value=R1")

    def test_value_query_without_values_is_error(self):
        with pytest.raises(WireError, match="value"):
            decode_request("type=LQF&domain=Resource")

    def test_predefined_domain_classified(self):
        request, _ = decode_request("type=LQF&domain=mission&value=Rosetta",
                                    TEST_DOMAINS)
        assert request.value_mode == PREDEFINED

    def test_unknown_domain_decodes_as_free_text(self):
        # Domain resolution errors belong to the facility, not the codec.
        request, _ = decode_request("type=LQF&domain=Galaxy&value=x", TEST_DOMAINS)
        assert request.domain == "Galaxy"
        assert request.value_mode == FREE_TEXT


class TestPairPreservation:
    @given(st.lists(st.tuples(
        st.text(min_size=1, max_size=8).filter(lambda s: "\x00" not in s),
        st.text(max_size=12).filter(lambda s: "\x00" not in s),
    ), max_size=8))
    @settings(max_examples=200)
    def test_decode_encode_preserves_order_and_count(self, pairs):
        wire = WireRequest(tuple(pairs))
        assert decode_pairs(encode_pairs(wire)).pairs == wire.pairs


_values = st.text(min_size=1, max_size=15).filter(lambda s: s.strip())
_free_requests = st.builds(
    lambda f, d, vs: QueryRequest(f, d, tuple(vs), FREE_TEXT),
    st.sampled_from(["LQF", "RQF"]),
    st.sampled_from(COLLECTION_NAMES),
    st.lists(_values, min_size=1, max_size=4),
)
_suggest_requests = st.builds(
    lambda d, v: QueryRequest("SUGGEST", d, (v,), FREE_TEXT),
    st.sampled_from(COLLECTION_NAMES),
    _values,
)
_predefined_requests = st.builds(
    lambda d, f: QueryRequest(f, d, (PREDEFINED_VALUES[d][0],), PREDEFINED),
    st.sampled_from(sorted(PREDEFINED_VALUES)),
    st.sampled_from(["LQF", "RQF"]),
)
_sqf_requests = st.builds(
    lambda c, v: QueryRequest("SQF", c, (v,), FREE_TEXT),
    st.sampled_from(COLLECTION_NAMES),
    st.from_regex(r"[A-Za-z0-9_.:-]{1,10}", fullmatch=True),
)


class TestRequestRoundTrip:
    @given(st.one_of(_free_requests, _suggest_requests, _predefined_requests,
                     _sqf_requests))
    @settings(max_examples=400)
    def test_decode_encode_identity(self, request):
        decoded, ignored = decode_request(encode_request(request), TEST_DOMAINS)
        assert decoded == request
        assert ignored == []
