"""Tests for the seeded 64-bit stream."""
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from share_relay.core.prng import (
    GOLDEN_GAMMA,
    MASK64,
    SplitMix64,
    derive_seed,
    derive_seeds,
    mix64,
    mix64_array,
    stream_words,
    words_to_uniform,
)

DATA = Path(__file__).parent.parent / "data"

u64 = st.integers(min_value=0, max_value=MASK64)


@pytest.fixture
def vectors():
    """Published outputs for seed 0."""
    doc = json.loads((DATA / "prng_vectors.json").read_text())
    return doc["seed"], [int(word, 16) for word in doc["words"]]


class TestSplitMix64:
    """Scalar stream against known outputs."""

    def test_known_outputs(self, vectors):
        seed, words = vectors
        rng = SplitMix64(seed)
        assert [rng.next_word() for _ in words] == words
        assert rng.words_drawn == len(words)

    def test_first_output_is_mix_of_gamma(self, vectors):
        _, words = vectors
        assert mix64(GOLDEN_GAMMA) == words[0]

    def test_draw_consumes_low_bits_first(self, vectors):
        _, words = vectors
        assert SplitMix64(0).draw(8).value == words[0] & 0xFF

    def test_draw_spanning_two_words(self, vectors):
        _, words = vectors
        drawn = SplitMix64(0).draw(72)
        assert drawn.length == 72
        assert drawn.value == words[0] | ((words[1] & 0xFF) << 64)

    def test_each_draw_starts_a_fresh_word(self, vectors):
        _, words = vectors
        rng = SplitMix64(0)
        rng.draw(1)
        assert rng.draw(64).value == words[1]

    def test_uniform_in_unit_interval(self):
        rng = SplitMix64(123)
        values = [rng.uniform() for _ in range(1000)]
        assert all(0.0 <= v < 1.0 for v in values)

    def test_below_in_range(self):
        rng = SplitMix64(5)
        assert all(0 <= rng.below(7) < 7 for _ in range(500))

    def test_derive_seed(self):
        assert derive_seed(10, 5) == mix64(15)
        assert derive_seed(MASK64, 1) == mix64(0)


class TestVectorisedStream:
    """numpy forms must agree bit for bit with the scalar stream."""

    @settings(max_examples=50, deadline=None)
    @given(st.lists(u64, min_size=1, max_size=20))
    def test_mix64_array_matches_scalar(self, values):
        got = mix64_array(np.array(values, dtype=np.uint64))
        assert [int(v) for v in got] == [mix64(v) for v in values]

    @settings(max_examples=30, deadline=None)
    @given(u64, st.integers(min_value=0, max_value=1000))
    def test_derive_seeds_matches_scalar(self, seed, start):
        got = derive_seeds(seed, start, 5)
        assert [int(v) for v in got] == [derive_seed(seed, start + k) for k in range(5)]

    @settings(max_examples=30, deadline=None)
    @given(st.lists(u64, min_size=1, max_size=5))
    def test_stream_words_matches_scalar(self, seeds):
        words = stream_words(np.array(seeds, dtype=np.uint64), 4)
        for row, seed in zip(words, seeds):
            rng = SplitMix64(seed)
            assert [int(w) for w in row] == [rng.next_word() for _ in range(4)]

    def test_words_to_uniform_matches_scalar(self):
        words = stream_words(np.array([99], dtype=np.uint64), 16)[0]
        rng = SplitMix64(99)
        assert list(words_to_uniform(words)) == [rng.uniform() for _ in range(16)]
