"""Tests for end-to-end key establishment with retries."""
import pytest

from share_relay.core.topology import CompromisePattern, build_network
from share_relay.errors import LayoutError
from share_relay.session import establish_key
from share_relay.types import HashSpec, NodeAddress, ShareString

LAYOUT = (32, 32, 32, 64)


@pytest.fixture
def spec():
    """Four cities of three nodes carrying 160-bit keys."""
    return build_network(m=4, n=3, ell=160)


class TestEstablishKey:
    """Relay, verify, retry."""

    def test_honest_network_succeeds_first_time(self, spec):
        result = establish_key(spec, CompromisePattern.honest(spec), 5, LAYOUT, HashSpec())
        assert result.succeeded
        assert result.attempts == 1
        assert result.key.length == 64
        assert result.outcomes[0].alice_accepts

    def test_persistent_payload_tamper_never_yields_a_key(self, spec):
        tamper = {(2, 2): ShareString(1 << 150, 160)}
        result = establish_key(
            spec, CompromisePattern.honest(spec), 5, LAYOUT, HashSpec(), tamper, max_attempts=3
        )
        assert not result.succeeded
        assert result.key is None
        assert result.attempts == 3
        assert all(not o.bob_accepts for o in result.outcomes)

    def test_leaky_nodes_do_not_block_agreement(self, spec):
        pattern = CompromisePattern.from_nodes(spec, [NodeAddress(1, 1), NodeAddress(2, 3)])
        result = establish_key(spec, pattern, 9, LAYOUT, HashSpec("linear-test"))
        assert result.succeeded

    def test_deterministic(self, spec):
        honest = CompromisePattern.honest(spec)
        first = establish_key(spec, honest, 12, LAYOUT, HashSpec())
        second = establish_key(spec, honest, 12, LAYOUT, HashSpec())
        assert first == second

    def test_layout_must_fill_the_key(self, spec):
        with pytest.raises(LayoutError):
            establish_key(spec, CompromisePattern.honest(spec), 0, (32, 32, 32, 32), HashSpec())

    def test_needs_an_attempt(self, spec):
        with pytest.raises(ValueError):
            establish_key(
                spec, CompromisePattern.honest(spec), 0, LAYOUT, HashSpec(), max_attempts=0
            )
