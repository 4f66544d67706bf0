"""Chain-of-cities network graph, compromise sampling and the cut predicate."""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from share_relay.core.prng import SplitMix64, stream_words, words_to_uniform
from share_relay.errors import DimensionError, ProbabilityError
from share_relay.types import AdversaryModel, Endpoint, NodeAddress

logger = logging.getLogger(__name__)

Vertex = NodeAddress | Endpoint
Edge = tuple[Vertex, Vertex]


@dataclass(frozen=True)
class NetworkSpec:
    """Dimensions of the chain: ``m`` cities of ``n`` nodes, shares of ``ell`` bits."""

    m: int
    n: int
    ell: int

    def __post_init__(self) -> None:
        for name in ("m", "n", "ell"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise DimensionError(f"{name} must be an integer >= 1, got {value!r}")

    @property
    def node_count(self) -> int:
        """N = m * n relay nodes (Alice and Bob excluded)."""
        return self.m * self.n

    def nodes(self) -> Iterator[NodeAddress]:
        """Relay nodes in row-major order: by city, then within-city index."""
        for j in range(1, self.m + 1):
            for i in range(1, self.n + 1):
                yield NodeAddress(i, j)

    def contains(self, node: NodeAddress) -> bool:
        return node.i <= self.n and node.j <= self.m

    def flat_index(self, node: NodeAddress) -> int:
        if not self.contains(node):
            raise DimensionError(f"{node} is outside an m={self.m}, n={self.n} network")
        return (node.j - 1) * self.n + (node.i - 1)

    def city_links(self) -> list[Edge]:
        """Long-distance edges between adjacent cities, ``v_{i,j} -- v_{i,j+1}``."""
        return [
            (NodeAddress(i, j), NodeAddress(i, j + 1))
            for j in range(1, self.m)
            for i in range(1, self.n + 1)
        ]

    def alice_links(self) -> list[Edge]:
        return [(Endpoint.ALICE, NodeAddress(i, 1)) for i in range(1, self.n + 1)]

    def bob_links(self) -> list[Edge]:
        return [(NodeAddress(i, self.m), Endpoint.BOB) for i in range(1, self.n + 1)]

    def long_distance_edges(self) -> list[Edge]:
        """E_l plus the endpoint links: one edge per (row, layer), layers 0..m."""
        return self.alice_links() + self.city_links() + self.bob_links()

    def intracity_edges(self) -> list[Edge]:
        """E_sigma: every unordered pair inside each city."""
        return [
            (NodeAddress(i, j), NodeAddress(k, j))
            for j in range(1, self.m + 1)
            for i, k in itertools.combinations(range(1, self.n + 1), 2)
        ]


def build_network(m: int, n: int, ell: int) -> NetworkSpec:
    """Validate dimensions and return the network spec."""
    spec = NetworkSpec(m=m, n=n, ell=ell)
    logger.debug(f"Built network m={m} n={n} ell={ell}")
    return spec


@dataclass(frozen=True)
class CompromisePattern:
    """Honest/dishonest flag for every relay node, row-major by city.

    Alice and Bob are not representable here and are always honest.
    """

    m: int
    n: int
    dishonest: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.dishonest) != self.m * self.n:
            raise DimensionError(
                f"pattern has {len(self.dishonest)} flags, expected {self.m * self.n}"
            )

    @classmethod
    def honest(cls, spec: NetworkSpec) -> "CompromisePattern":
        return cls(spec.m, spec.n, (False,) * spec.node_count)

    @classmethod
    def from_nodes(
        cls, spec: NetworkSpec, nodes: "set[NodeAddress] | list[NodeAddress]"
    ) -> "CompromisePattern":
        flags = [False] * spec.node_count
        for node in nodes:
            flags[spec.flat_index(node)] = True
        return cls(spec.m, spec.n, tuple(flags))

    @classmethod
    def from_mask(cls, spec: NetworkSpec, mask: int) -> "CompromisePattern":
        """Bit ``k`` of ``mask`` marks the k-th node in row-major order."""
        return cls(spec.m, spec.n, tuple(bool((mask >> k) & 1) for k in range(spec.node_count)))

    @classmethod
    def from_text(cls, text: str, m: int, n: int) -> "CompromisePattern":
        """Parse the '0'/'1' text form produced by :meth:`to_text`."""
        text = text.strip()
        if len(text) != m * n or set(text) - {"0", "1"}:
            raise DimensionError(f"expected {m * n} characters of 0/1, got {text!r}")
        return cls(m, n, tuple(ch == "1" for ch in text))

    def to_text(self) -> str:
        return "".join("1" if flag else "0" for flag in self.dishonest)

    def _flat_index(self, node: NodeAddress) -> int:
        if not (1 <= node.i <= self.n and 1 <= node.j <= self.m):
            raise DimensionError(f"{node} is outside an m={self.m}, n={self.n} pattern")
        return (node.j - 1) * self.n + (node.i - 1)

    def is_dishonest(self, node: Vertex) -> bool:
        if isinstance(node, Endpoint):
            return False
        return self.dishonest[self._flat_index(node)]

    def city(self, j: int) -> tuple[bool, ...]:
        return self.dishonest[(j - 1) * self.n : j * self.n]

    @property
    def dishonest_count(self) -> int:
        return sum(self.dishonest)

    def with_node(self, node: NodeAddress) -> "CompromisePattern":
        """Copy with ``node`` additionally dishonest."""
        flags = list(self.dishonest)
        flags[self._flat_index(node)] = True
        return CompromisePattern(self.m, self.n, tuple(flags))

    def matches(self, spec: NetworkSpec) -> bool:
        return self.m == spec.m and self.n == spec.n

    def check(self, spec: NetworkSpec) -> None:
        if not self.matches(spec):
            raise DimensionError(
                f"pattern is m={self.m}, n={self.n} but spec is m={spec.m}, n={spec.n}"
            )


def _check_probability(t: float) -> None:
    if not 0.0 <= t <= 1.0 or math.isnan(t):
        raise ProbabilityError(f"t must lie in [0, 1], got {t}")


def sample_pattern_bernoulli(spec: NetworkSpec, t: float, seed: int) -> CompromisePattern:
    """Each node dishonest independently with probability 1 - t.

    Node k (row-major) consumes the k-th word of the stream for ``seed``.
    """
    _check_probability(t)
    rng = SplitMix64(seed)
    flags = tuple(rng.uniform() < 1.0 - t for _ in range(spec.node_count))
    return CompromisePattern(spec.m, spec.n, flags)


def fixed_fraction_count(spec: NetworkSpec, t: float) -> int:
    """floor((1 - t) * N), never exceeding the adversary's cap."""
    _check_probability(t)
    return math.floor((1.0 - t) * spec.node_count + 1e-9)


def sample_pattern_fixed_fraction(spec: NetworkSpec, t: float, seed: int) -> CompromisePattern:
    """Exactly floor((1 - t) * N) dishonest nodes, uniform without replacement.

    A Fisher-Yates shuffle of the node indices driven by the seeded stream;
    the first ``count`` entries of the permutation are compromised.
    """
    count = fixed_fraction_count(spec, t)
    rng = SplitMix64(seed)
    order = list(range(spec.node_count))
    for idx in range(spec.node_count - 1, 0, -1):
        swap = rng.below(idx + 1)
        order[idx], order[swap] = order[swap], order[idx]
    flags = [False] * spec.node_count
    for k in order[:count]:
        flags[k] = True
    return CompromisePattern(spec.m, spec.n, tuple(flags))


def sample_pattern(
    spec: NetworkSpec, t: float, seed: int, model: AdversaryModel = "bernoulli"
) -> CompromisePattern:
    if model == "bernoulli":
        return sample_pattern_bernoulli(spec, t, seed)
    if model == "fixed-fraction":
        return sample_pattern_fixed_fraction(spec, t, seed)
    raise ValueError(f"Unknown adversary model: {model}")


def has_cut(spec: NetworkSpec, pattern: CompromisePattern) -> bool:
    """True iff the adversary sees every share of some layer.

    That is some stage j in 1..m-1 where each row has a dishonest node at
    city j or j+1, or a fully dishonest first or last city.
    """
    pattern.check(spec)
    cities = [pattern.city(j) for j in range(1, spec.m + 1)]
    if all(cities[0]) or all(cities[-1]):
        return True
    return any(
        all(a or b for a, b in zip(cities[j], cities[j + 1])) for j in range(spec.m - 1)
    )


def min_cut_size(spec: NetworkSpec) -> int:
    """Fewest dishonest nodes that produce a cut, by exhaustive search.

    Patterns are visited in order of increasing size, so the search stops at
    the first cut found. Intended for small specs only.
    """
    nodes = list(spec.nodes())
    for size in range(1, spec.node_count + 1):
        for chosen in itertools.combinations(nodes, size):
            if has_cut(spec, CompromisePattern.from_nodes(spec, list(chosen))):
                return size
    raise AssertionError("the all-dishonest pattern always has a cut")


# ---------------------------------------------------------------------------
# Batched forms used by Monte Carlo
# ---------------------------------------------------------------------------

def sample_patterns_batch(
    spec: NetworkSpec, t: float, seeds: np.ndarray, model: AdversaryModel = "bernoulli"
) -> np.ndarray:
    """Boolean array ``(len(seeds), m, n)``; row r equals the scalar sampler at ``seeds[r]``."""
    _check_probability(t)
    seeds = np.asarray(seeds, dtype=np.uint64)
    size = spec.node_count
    if model == "bernoulli":
        flags = words_to_uniform(stream_words(seeds, size)) < 1.0 - t
    elif model == "fixed-fraction":
        count = fixed_fraction_count(spec, t)
        flags = np.zeros((len(seeds), size), dtype=bool)
        if count and size > 1:
            words = stream_words(seeds, size - 1)
            order = np.tile(np.arange(size), (len(seeds), 1))
            rows = np.arange(len(seeds))
            for step, idx in enumerate(range(size - 1, 0, -1)):
                swap = (words[:, step] % np.uint64(idx + 1)).astype(np.int64)
                held = order[rows, idx].copy()
                order[rows, idx] = order[rows, swap]
                order[rows, swap] = held
            np.put_along_axis(flags, order[:, :count], True, axis=1)
        elif count:
            flags[:, :] = True
    else:
        raise ValueError(f"Unknown adversary model: {model}")
    return flags.reshape(len(seeds), spec.m, spec.n)


def has_cut_batch(spec: NetworkSpec, patterns: np.ndarray) -> np.ndarray:
    """Vectorised :func:`has_cut` over an ``(T, m, n)`` boolean array."""
    patterns = np.asarray(patterns, dtype=bool)
    if patterns.shape[1:] != (spec.m, spec.n):
        raise DimensionError(f"batch shape {patterns.shape} does not match m={spec.m}, n={spec.n}")
    cut = patterns[:, 0, :].all(axis=1) | patterns[:, -1, :].all(axis=1)
    if spec.m > 1:
        stages = (patterns[:, :-1, :] | patterns[:, 1:, :]).all(axis=2)
        cut |= stages.any(axis=1)
    return cut
