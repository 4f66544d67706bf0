"""Experiment campaigns: the orchestration layer behind each CLI command.

Every campaign is a pure function of its config. Trial k always draws from
``derive_seed(config.seed, k)``, and work is split into fixed chunks, so
the thread count changes wall time only.
"""
import logging
from dataclasses import dataclass

from share_relay.config import (
    AnalyzeConfig,
    DimensionConfig,
    SimulateConfig,
    SweepConfig,
    VerifyDemoConfig,
)
from share_relay.core.analysis import (
    SecurityReport,
    approx_n,
    bandwidth_model,
    bound_ps,
    build_report,
    naive_chain_secure_prob,
    required_n,
    stage_compromise_prob,
)
from share_relay.core.prng import SplitMix64, derive_seed
from share_relay.core.relay import adversary_reconstruct, extract_view, run_relay
from share_relay.core.topology import build_network, has_cut, sample_pattern
from share_relay.core.verification import (
    TamperString,
    VerificationOutcome,
    attack_impersonate_bob,
    compute_hash,
    run_verification,
    split_key,
)
from share_relay.core.workers import chunk_ranges, ordered_map
from share_relay.types import HashSpec, ShareString

logger = logging.getLogger(__name__)

VERIFY_CHUNK = 4096

SIMULATE_COLUMNS = (
    "trial", "pattern", "dishonest", "cut", "reconstructed", "keys_equal",
    "intercity_bits", "intracity_bits",
)
VERIFY_COLUMNS = (
    "attack", "hash_family", "trials", "bob_accepts", "alice_accepts",
    "bob_rate", "alice_rate", "reference_rate",
)
SWEEP_COLUMNS = SecurityReport.CSV_COLUMNS + (
    "naive_chain", "stage_compromise", "intercity_bits", "intracity_bits",
    "all_pairs_intercity",
)
DIMENSION_COLUMNS = (
    "p_s", "delta", "m", "t", "required_n", "approx_n", "bound_at_required",
    "intercity_bits",
)


@dataclass(frozen=True)
class VerifyTally:
    bob_accepts: int = 0
    alice_accepts: int = 0

    def __add__(self, other: "VerifyTally") -> "VerifyTally":
        return VerifyTally(
            self.bob_accepts + other.bob_accepts,
            self.alice_accepts + other.alice_accepts,
        )


def _nonzero(rng: SplitMix64, ell: int) -> ShareString:
    """Random nonzero string; an all-zero draw is replaced by the lowest bit."""
    value = rng.draw(ell)
    return value if not value.is_zero else ShareString(1, ell)


def fixed_payload_error(config: VerifyDemoConfig) -> ShareString:
    """The nonzero e3 every random-e1b trial of one campaign shares, drawn from ``config.seed``."""
    return _nonzero(SplitMix64(config.seed), config.ell_3)


class ExperimentRunner:
    """Runs campaigns and returns rows ready for :mod:`share_relay.output`."""

    def __init__(self, threads: int = 1):
        self.threads = threads

    # -- simulate ------------------------------------------------------------

    def simulate(self, config: SimulateConfig) -> list[dict]:
        """One row per trial: sampled pattern, cut, reconstruction, key agreement."""
        spec = build_network(config.m, config.n, config.ell)

        def trial(idx: int) -> dict:
            trial_seed = derive_seed(config.seed, idx)
            pattern = sample_pattern(spec, config.t, trial_seed, config.model)
            run = run_relay(spec, pattern, derive_seed(trial_seed, 1))
            recovered = adversary_reconstruct(extract_view(run, pattern), spec)
            return {
                "trial": idx,
                "pattern": pattern.to_text(),
                "dishonest": pattern.dishonest_count,
                "cut": has_cut(spec, pattern),
                "reconstructed": recovered is not None and recovered == run.s,
                "keys_equal": run.keys_equal,
                "intercity_bits": run.transcript.bandwidth.intercity_bits,
                "intracity_bits": run.transcript.bandwidth.intracity_bits,
            }

        rows = ordered_map(trial, range(config.trials), self.threads)
        cuts = sum(row["cut"] for row in rows)
        logger.info(f"Simulated {len(rows)} relay runs, {cuts} with a cut")
        return rows

    # -- verify-demo -----------------------------------------------------------

    def verify_trial(self, config: VerifyDemoConfig, idx: int) -> VerificationOutcome:
        """One verification trial under ``config.attack``."""
        hash_spec = HashSpec(config.hash_family, config.ell_1b, config.hash_seed)
        trial_seed = derive_seed(config.seed, idx)
        nonce_seed = derive_seed(trial_seed, 1)
        rng = SplitMix64(trial_seed)
        alice = split_key(rng.draw(config.ell), config.ell_1a, config.ell_1b, config.ell_2)
        layout = alice.layout

        if config.attack == "impersonate":
            nonce = SplitMix64(nonce_seed).draw(config.ell_1a)
            nonce_hash = compute_hash(hash_spec.with_bits(config.ell_2), nonce)
            guess = rng.draw(config.ell_2)
            accepted = attack_impersonate_bob(guess, alice, nonce_hash)
            return VerificationOutcome(False, accepted, ShareString.zeros(0), guess)

        tamper = TamperString.zero(layout)
        if config.attack == "random-e1b":
            # e3 is fixed across trials; only e1b and the key vary.
            e3 = fixed_payload_error(config)
            tamper = TamperString(tamper.e1a, rng.draw(config.ell_1b), tamper.e2, e3)
        elif config.attack == "linear-forge":
            # Eve does not know s3; she bets on linearity, e1b = H[e3].
            e3 = _nonzero(rng, config.ell_3)
            tamper = TamperString(tamper.e1a, compute_hash(hash_spec, e3), tamper.e2, e3)
        return run_verification(alice, alice.apply(tamper), hash_spec, nonce_seed)

    def verify_demo(self, config: VerifyDemoConfig) -> dict:
        """Acceptance counts and rates over ``config.trials`` trials."""

        def tally(bounds: tuple[int, int]) -> VerifyTally:
            bob = alice = 0
            for idx in range(*bounds):
                outcome = self.verify_trial(config, idx)
                bob += outcome.bob_accepts
                alice += outcome.alice_accepts
            return VerifyTally(bob, alice)

        chunks = ordered_map(tally, chunk_ranges(config.trials, VERIFY_CHUNK), self.threads)
        total = sum(chunks, VerifyTally())

        if config.attack == "random-e1b":
            reference = 2.0 ** -config.ell_1b
        elif config.attack == "impersonate":
            reference = 2.0 ** -config.ell_2
        else:
            reference = 1.0
        logger.info(
            f"Verification attack={config.attack}: Bob accepted {total.bob_accepts}, "
            f"Alice accepted {total.alice_accepts} of {config.trials}"
        )
        return {
            "attack": config.attack,
            "hash_family": config.hash_family,
            "trials": config.trials,
            "bob_accepts": total.bob_accepts,
            "alice_accepts": total.alice_accepts,
            "bob_rate": total.bob_accepts / config.trials,
            "alice_rate": total.alice_accepts / config.trials,
            "reference_rate": reference,
        }

    # -- analyze / sweep / dimension -------------------------------------------

    def _report(self, config, point: int, n: int, m: int, t: float) -> SecurityReport:
        return build_report(
            n, m, t,
            trials=config.trials,
            seed=derive_seed(config.seed, point),
            model=config.model,
            threads=self.threads,
        )

    def analyze(self, config: AnalyzeConfig) -> list[SecurityReport]:
        """One report per (n, m, t), nested in that order."""
        grid = [(n, m, t) for n in config.n for m in config.m for t in config.t]
        reports = [self._report(config, k, *point) for k, point in enumerate(grid)]
        logger.info(f"Analyzed {len(reports)} grid points")
        return reports

    def sweep(self, config: SweepConfig) -> list[dict]:
        """Analyze rows plus baseline and bandwidth columns over the ranges."""
        grid = [(n, m, t) for n in config.n_values for m in config.m_values for t in config.t]
        rows = []
        for k, (n, m, t) in enumerate(grid):
            row = self._report(config, k, n, m, t).to_csv_row()
            bandwidth = bandwidth_model(n, m, config.ell)
            row.update(
                naive_chain=naive_chain_secure_prob(m, t),
                stage_compromise=stage_compromise_prob(n, t),
                intercity_bits=bandwidth.intercity_bits,
                intracity_bits=bandwidth.intracity_bits,
                all_pairs_intercity=bandwidth.all_pairs_intercity,
            )
            rows.append(row)
        logger.info(f"Swept {len(rows)} grid points")
        return rows

    def dimension(self, config: DimensionConfig) -> list[dict]:
        """required_n and approx_n per (target, m, t)."""
        rows = []
        for p_s, delta in config.targets():
            for m in config.m:
                for t in config.t:
                    n = required_n(p_s, m, t)
                    rows.append({
                        "p_s": p_s,
                        "delta": delta,
                        "m": m,
                        "t": t,
                        "required_n": n,
                        "approx_n": approx_n(delta, m, t),
                        "bound_at_required": bound_ps(n, m, t),
                        "intercity_bits": bandwidth_model(n, m, config.ell).intercity_bits,
                    })
        logger.info(f"Dimensioned {len(rows)} targets")
        return rows
