"""Security bound, exact compromise probability, Monte Carlo and dimensioning."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm

from share_relay.core.prng import derive_seeds
from share_relay.core.topology import NetworkSpec, has_cut_batch, sample_patterns_batch
from share_relay.core.workers import chunk_ranges, ordered_map
from share_relay.errors import DimensionError, OracleLimitError, ProbabilityError
from share_relay.types import AdversaryModel

logger = logging.getLogger(__name__)

EXACT_MAX_N = 12
CONFIDENCE = 0.99
_Z = float(norm.ppf(0.5 + CONFIDENCE / 2))
_BOUND_TOLERANCE = 1e-12
# Past 2^50 nodes per city, n * log1p(-t^2) no longer separates neighbouring n.
MAX_REQUIRED_N = 1 << 50
_MC_CELLS_PER_CHUNK = 1 << 22

M1_CAVEAT = "m=1: bound counts no stages; exact includes the fully dishonest city"


def _check_dims(**dims: int) -> None:
    for name, value in dims.items():
        if value < 1:
            raise DimensionError(f"{name} must be >= 1, got {value}")


def _check_t(t: float, *, open_interval: bool = False) -> None:
    ok = 0.0 < t < 1.0 if open_interval else 0.0 <= t <= 1.0
    if not ok:
        interval = "(0, 1)" if open_interval else "[0, 1]"
        raise ProbabilityError(f"t must lie in {interval}, got {t}")


@dataclass(frozen=True)
class SecurityParams:
    """Network size, node honesty probability and, optionally, the security target."""

    n: int
    m: int
    t: float
    p_s: Optional[float] = None

    @property
    def delta(self) -> Optional[float]:
        return None if self.p_s is None else 1.0 - self.p_s


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Secure fraction over sampled patterns with a 99% normal-approximation half-width."""

    estimate: float
    half_width: float
    trials: int
    secure: int

    def covers(self, value: float) -> bool:
        return abs(value - self.estimate) <= self.half_width


@dataclass(frozen=True)
class BandwidthModel:
    """Per-run bit counts and the all-pairs scaling figures."""

    intercity_bits: int
    intracity_bits: int
    all_pairs_intercity: float
    public_key_all_pairs: float

    def to_dict(self) -> dict:
        return {
            "intercity_bits": self.intercity_bits,
            "intracity_bits": self.intracity_bits,
            "all_pairs_intercity": self.all_pairs_intercity,
            "public_key_all_pairs": self.public_key_all_pairs,
        }


@dataclass(frozen=True)
class SecurityReport:
    params: SecurityParams
    bound: float
    exact: Optional[float] = None
    mc: Optional[MonteCarloEstimate] = None
    caveat: Optional[str] = None

    CSV_COLUMNS = (
        "n", "m", "t", "bound", "exact", "mc_estimate", "mc_half_width",
        "trials", "exact_oracle", "caveat",
    )

    def to_dict(self) -> dict:
        """JSON document form."""
        return {
            "params": {"n": self.params.n, "m": self.params.m, "t": self.params.t},
            "bound": self.bound,
            "exact": self.exact,
            "mc_estimate": None if self.mc is None else {
                "estimate": self.mc.estimate,
                "half_width": self.mc.half_width,
                "trials": self.mc.trials,
                "confidence": CONFIDENCE,
            },
            "caveat": self.caveat,
        }

    def to_csv_row(self) -> dict:
        return {
            "n": self.params.n,
            "m": self.params.m,
            "t": self.params.t,
            "bound": self.bound,
            "exact": self.exact,
            "mc_estimate": None if self.mc is None else self.mc.estimate,
            "mc_half_width": None if self.mc is None else self.mc.half_width,
            "trials": 0 if self.mc is None else self.mc.trials,
            "exact_oracle": "dp" if self.exact is not None else "unavailable",
            "caveat": self.caveat,
        }


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _log_stage(n: int, t: float) -> float:
    """log of (1 - t^2)^n, kept in log space so tiny t does not round to 1."""
    if t == 1.0:
        return -math.inf
    return n * math.log1p(-t * t)


def stage_compromise_prob(n: int, t: float) -> float:
    """Probability that one stage is fully covered: (1 - t^2)^n."""
    _check_dims(n=n)
    _check_t(t)
    return math.exp(_log_stage(n, t))


def bound_ps(n: int, m: int, t: float) -> float:
    """Lower bound on the secure probability, [1 - (1 - t^2)^n]^(m - 1)."""
    _check_dims(n=n, m=m)
    _check_t(t)
    if m == 1:
        return 1.0
    return (0.0 - math.expm1(_log_stage(n, t))) ** (m - 1)


def naive_chain_secure_prob(m: int, t: float) -> float:
    """Single-path chain of m trusted repeaters: secure only if all are honest."""
    _check_dims(m=m)
    _check_t(t)
    return t**m


def _superset_sums(values: np.ndarray, n: int) -> np.ndarray:
    """``out[S] = sum(values[T] for T superset of S)`` over n-bit subsets."""
    out = values.copy()
    for b in range(n):
        view = out.reshape(-1, 2, 1 << b)
        view[:, 0, :] += view[:, 1, :]
    return out


def exact_secure_prob(n: int, m: int, t: float) -> float:
    """Exact probability of no cut under independent compromise.

    Transfer-matrix DP over the dishonest subset of the current city. The
    carried vector holds only cut-free mass; a transition S -> S' is blocked
    when S | S' covers every row, which is summed with a superset transform
    instead of a 2^n x 2^n matrix.
    """
    _check_dims(n=n, m=m)
    _check_t(t)
    if n > EXACT_MAX_N:
        raise OracleLimitError(f"exact oracle supports n <= {EXACT_MAX_N}, got n={n}")

    full = (1 << n) - 1
    subsets = np.arange(1 << n)
    dishonest = np.array([bin(int(s)).count("1") for s in subsets])
    weight = (1.0 - t) ** dishonest * t ** (n - dishonest)

    mass = weight.copy()
    mass[full] = 0.0  # fully dishonest first city exposes layer 0
    for _ in range(m - 1):
        blocked = _superset_sums(mass, n)[full ^ subsets]
        mass = weight * (mass.sum() - blocked)
        mass[full] = 0.0
    return float(mass.sum())


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def monte_carlo_secure_prob(
    n: int,
    m: int,
    t: float,
    trials: int,
    seed: int,
    model: AdversaryModel = "bernoulli",
    threads: int = 1,
) -> MonteCarloEstimate:
    """Fraction of sampled patterns with no cut.

    Trial k samples its pattern from ``derive_seed(seed, k)``; chunks are
    fixed by the network size, so the result is identical for any
    ``threads``.
    """
    _check_dims(n=n, m=m, trials=trials)
    _check_t(t)
    spec = NetworkSpec(m=m, n=n, ell=1)
    chunk = max(1, _MC_CELLS_PER_CHUNK // (2 * spec.node_count))

    def count_secure(bounds: tuple[int, int]) -> int:
        start, stop = bounds
        seeds = derive_seeds(seed, start, stop - start)
        cut = has_cut_batch(spec, sample_patterns_batch(spec, t, seeds, model))
        return int((~cut).sum())

    secure = sum(ordered_map(count_secure, chunk_ranges(trials, chunk), threads))
    p = secure / trials
    half_width = _Z * math.sqrt(p * (1.0 - p) / trials)
    logger.debug(f"Monte Carlo n={n} m={m} t={t}: {secure}/{trials} secure")
    return MonteCarloEstimate(estimate=p, half_width=half_width, trials=trials, secure=secure)


def build_report(
    n: int,
    m: int,
    t: float,
    trials: int = 0,
    seed: int = 0,
    model: AdversaryModel = "bernoulli",
    threads: int = 1,
) -> SecurityReport:
    """Bound, exact (when n is small enough) and optional Monte Carlo for one point."""
    exact = exact_secure_prob(n, m, t) if n <= EXACT_MAX_N else None
    mc = monte_carlo_secure_prob(n, m, t, trials, seed, model, threads) if trials > 0 else None
    return SecurityReport(
        params=SecurityParams(n=n, m=m, t=t),
        bound=bound_ps(n, m, t),
        exact=exact,
        mc=mc,
        caveat=M1_CAVEAT if m == 1 else None,
    )


# ---------------------------------------------------------------------------
# Dimensioning
# ---------------------------------------------------------------------------

def required_n(p_s: float, m: int, t: float) -> int:
    """Smallest n with bound_ps(n, m, t) >= p_s.

    Starts from the closed form, which can land on either side of an integer,
    then brackets and bisects against the bound itself.
    """
    if not 0.0 < p_s < 1.0:
        raise ProbabilityError(f"p_s must lie in (0, 1), got {p_s}")
    if m < 2:
        raise DimensionError(f"dimensioning needs m >= 2, got {m}")
    _check_t(t)
    if t == 0.0:
        raise ProbabilityError("t = 0: no n reaches a positive secure probability")

    def meets(n: int) -> bool:
        return bound_ps(n, m, t) >= p_s - _BOUND_TOLERANCE

    if t == 1.0:
        return 1
    shortfall = -math.expm1(math.log(p_s) / (m - 1))
    good = max(1, math.ceil(math.log(shortfall) / math.log1p(-t * t)))
    if good > MAX_REQUIRED_N:
        raise ProbabilityError(f"t = {t} needs more than 2^50 nodes per city")
    bad, step = 0, 1
    while not meets(good):
        if good == MAX_REQUIRED_N:
            raise ProbabilityError(f"t = {t} needs more than 2^50 nodes per city")
        bad, good = good, min(good + step, MAX_REQUIRED_N)
        step *= 2
    while good - bad > 1:
        mid = (good + bad) // 2
        if meets(mid):
            good = mid
        else:
            bad = mid
    return good


def approx_n(delta: float, m: int, t: float) -> float:
    """Small-delta estimate (log(m - 1) - log delta) / -log(1 - t^2)."""
    if not 0.0 < delta < 1.0:
        raise ProbabilityError(f"delta must lie in (0, 1), got {delta}")
    if m < 2:
        raise DimensionError(f"dimensioning needs m >= 2, got {m}")
    _check_t(t, open_interval=True)
    return (math.log(m - 1) - math.log(delta)) / -math.log1p(-t * t)


# ---------------------------------------------------------------------------
# Alternative adversaries and scaling
# ---------------------------------------------------------------------------

def chosen_k_secure(n: int, k: int) -> bool:
    """An adversary choosing k - 1 nodes cannot cut when k <= n (a cut needs n nodes)."""
    _check_dims(n=n, k=k)
    return k <= n


def pvss_dos_tolerance(n: int) -> int:
    """Corrupt shares tolerated by proactive verifiable sharing: ceil(n/4) - 1, at least 0."""
    _check_dims(n=n)
    return max(0, -(-n // 4) - 1)


def pvss_threshold() -> float:
    """Honesty threshold for DOS robustness, sqrt(3)/2."""
    return math.sqrt(3.0) / 2.0


def bandwidth_model(n: int, m: int, ell: int) -> BandwidthModel:
    """Bits per relay run and the all-pairs figures.

    All-pairs: each of the m*n parties talks to a partner m/2 cities away,
    with n shares (secret sharing) or one stream (public key) per hop.
    """
    _check_dims(n=n, m=m, ell=ell)
    return BandwidthModel(
        intercity_bits=n * (m + 1) * ell,
        intracity_bits=m * n * (n - 1) * ell,
        all_pairs_intercity=m * m * n * n * ell / 2,
        public_key_all_pairs=m * m * n * ell / 2,
    )
