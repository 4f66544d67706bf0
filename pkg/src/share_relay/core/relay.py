"""Relay protocol engine: share generation, per-city re-randomization, delivery.

Edge strings are keyed ``(i, j)``: ``r_{i,j}`` travels from ``v_{i,j}`` to
``v_{i,j+1}``, with layer 0 sent by Alice and layer m received by Bob.
Intracity strings are keyed ``(j, i, k)``: ``q_{i,j}^{(k)}``, generated by
``v_{i,j}`` and sent to ``v_{k,j}``.
"""
import logging
from dataclasses import dataclass, field
from functools import reduce
from operator import xor
from typing import Mapping, Optional

from share_relay.core.prng import BitSource, SplitMix64
from share_relay.core.topology import CompromisePattern, NetworkSpec
from share_relay.errors import DimensionError, TamperPlanError
from share_relay.types import Bandwidth, NodeAddress, ShareString

logger = logging.getLogger(__name__)

EdgeKey = tuple[int, int]
IntraKey = tuple[int, int, int]
TamperPlan = Mapping[EdgeKey, ShareString]


def xor_all(strings: list[ShareString], ell: int) -> ShareString:
    return reduce(xor, strings, ShareString.zeros(ell))


@dataclass(frozen=True)
class Transcript:
    """Every string sent during one run. ``edge_strings`` hold values as sent."""

    spec: NetworkSpec
    edge_strings: dict[EdgeKey, ShareString]
    intra_strings: dict[IntraKey, ShareString]
    bandwidth: Bandwidth
    tamper: dict[EdgeKey, ShareString] = field(default_factory=dict)

    def delivered(self, i: int, j: int) -> ShareString:
        """``r_{i,j}`` as its receiver saw it, tamper mask applied."""
        sent = self.edge_strings[(i, j)]
        mask = self.tamper.get((i, j))
        return sent if mask is None else sent ^ mask

    def layer(self, j: int) -> list[ShareString]:
        return [self.edge_strings[(i, j)] for i in range(1, self.spec.n + 1)]

    def layer_xor(self, j: int) -> ShareString:
        return xor_all(self.layer(j), self.spec.ell)

    def to_text(self) -> str:
        """Line-oriented export used for golden-file comparisons."""
        spec = self.spec
        lines = [f"# m={spec.m} n={spec.n} ell={spec.ell}"]
        for j in range(spec.m + 1):
            for i in range(1, spec.n + 1):
                lines.append(f"edge {j} {i} {self.edge_strings[(i, j)].to_hex()}")
        for (j, i, k), q in sorted(self.intra_strings.items()):
            lines.append(f"intra {j} {i} {k} {q.to_hex()}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunOutcome:
    """Alice's key ``s``, Bob's key ``s_prime`` and the run transcript."""

    s: ShareString
    s_prime: ShareString
    transcript: Transcript

    @property
    def spec(self) -> NetworkSpec:
        return self.transcript.spec

    @property
    def keys_equal(self) -> bool:
        return self.s == self.s_prime


@dataclass(frozen=True)
class AdversaryView:
    """Strings incident to at least one dishonest node."""

    known_edge_strings: dict[EdgeKey, ShareString]
    known_intra_strings: dict[IntraKey, ShareString]
    pattern: CompromisePattern

    @property
    def is_empty(self) -> bool:
        return not self.known_edge_strings and not self.known_intra_strings

    def signature(self) -> tuple:
        """Hashable, order-independent rendering of the view's contents."""
        return (
            tuple(sorted((k, v.value) for k, v in self.known_edge_strings.items())),
            tuple(sorted((k, v.value) for k, v in self.known_intra_strings.items())),
        )


def _validate_tamper(spec: NetworkSpec, tamper: Optional[TamperPlan]) -> dict[EdgeKey, ShareString]:
    plan = dict(tamper or {})
    for (i, j), mask in plan.items():
        if not (1 <= i <= spec.n and 0 <= j <= spec.m):
            raise TamperPlanError(
                f"tamper plan names edge (i={i}, j={j}), which does not exist "
                f"for m={spec.m}, n={spec.n}"
            )
        if mask.length != spec.ell:
            raise TamperPlanError(
                f"tamper mask for edge ({i}, {j}) has {mask.length} bits, expected {spec.ell}"
            )
    return plan


def execute_relay(
    spec: NetworkSpec,
    source: BitSource,
    tamper: Optional[TamperPlan] = None,
) -> RunOutcome:
    """Run the relay with randomness drawn from ``source``.

    Draw order: Alice's n strings, then each city's q strings in (j, i, k)
    order. Tamper masks XOR into the named edge strings in transit.
    """
    plan = _validate_tamper(spec, tamper)
    n, m, ell = spec.n, spec.m, spec.ell
    rows = range(1, n + 1)

    edges: dict[EdgeKey, ShareString] = {(i, 0): source.draw(ell) for i in rows}
    intra: dict[IntraKey, ShareString] = {}

    def delivered(i: int, j: int) -> ShareString:
        mask = plan.get((i, j))
        return edges[(i, j)] if mask is None else edges[(i, j)] ^ mask

    for j in range(1, m + 1):
        for i in rows:
            for k in rows:
                if k != i:
                    intra[(j, i, k)] = source.draw(ell)
        for i in rows:
            outgoing = [intra[(j, i, k)] for k in rows if k != i]
            incoming = [intra[(j, k, i)] for k in rows if k != i]
            edges[(i, j)] = xor_all([delivered(i, j - 1), *outgoing, *incoming], ell)

    bandwidth = Bandwidth(
        intercity_bits=len(edges) * ell,
        intracity_bits=len(intra) * ell,
    )
    transcript = Transcript(spec, edges, intra, bandwidth, plan)
    s = xor_all([edges[(i, 0)] for i in rows], ell)
    s_prime = xor_all([delivered(i, m) for i in rows], ell)
    logger.debug(
        f"Relay run m={m} n={n} ell={ell}: {len(edges)} edge strings, "
        f"{len(intra)} intracity strings, {len(plan)} tampered"
    )
    return RunOutcome(s=s, s_prime=s_prime, transcript=transcript)


def run_relay(
    spec: NetworkSpec,
    pattern: CompromisePattern,
    seed: int,
    tamper: Optional[TamperPlan] = None,
) -> RunOutcome:
    """Seeded relay run. Dishonest nodes follow the schedule; they only leak or tamper."""
    pattern.check(spec)
    return execute_relay(spec, SplitMix64(seed), tamper)


def extract_view(outcome: RunOutcome, pattern: CompromisePattern) -> AdversaryView:
    """Everything sent or received by a dishonest node."""
    spec = outcome.spec
    pattern.check(spec)
    transcript = outcome.transcript

    def bad(i: int, j: int) -> bool:
        return 1 <= j <= spec.m and pattern.is_dishonest(NodeAddress(i, j))

    known_edges = {
        (i, j): r
        for (i, j), r in transcript.edge_strings.items()
        if bad(i, j) or bad(i, j + 1)
    }
    known_intra = {
        (j, i, k): q
        for (j, i, k), q in transcript.intra_strings.items()
        if bad(i, j) or bad(k, j)
    }
    return AdversaryView(known_edges, known_intra, pattern)


def adversary_reconstruct(view: AdversaryView, spec: NetworkSpec) -> Optional[ShareString]:
    """XOR of the first fully known layer, or ``None`` when no layer is complete."""
    view.pattern.check(spec)
    for (i, j) in view.known_edge_strings:
        if not (1 <= i <= spec.n and 0 <= j <= spec.m):
            raise DimensionError(f"view holds edge ({i}, {j}) outside the network")
    for j in range(spec.m + 1):
        layer = [view.known_edge_strings.get((i, j)) for i in range(1, spec.n + 1)]
        if all(r is not None for r in layer):
            logger.debug(f"Adversary holds every share of layer {j}")
            return xor_all(layer, spec.ell)
    return None
