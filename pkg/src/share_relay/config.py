"""Experiment configuration for share-relay commands."""
import json
import logging
from pathlib import Path
from typing import Annotated, Literal, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from share_relay.core.prng import MASK64
from share_relay.errors import ConfigError
from share_relay.types import AdversaryModel, HashFamily

logger = logging.getLogger(__name__)

Count = Annotated[int, Field(ge=1)]
Probability = Annotated[float, Field(ge=0.0, le=1.0)]
OpenProbability = Annotated[float, Field(gt=0.0, lt=1.0)]
AttackName = Literal["none", "random-e1b", "linear-forge", "impersonate"]

# Fields that never change results; kept out of the echoed provenance header.
_NON_PROVENANCE = {"threads", "out"}


class CommonConfig(BaseModel):
    """Options shared by every command."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, ge=0, le=MASK64)
    trials: int = Field(default=1000, ge=1)
    threads: int = Field(default=1, ge=1, le=256)
    out: Optional[Path] = Field(default=None, description="Output file; stdout when absent")


class SimulateConfig(CommonConfig):
    """Seeded relay runs over sampled compromise patterns."""

    trials: int = Field(default=100, ge=1)
    m: int = Field(default=4, ge=1)
    n: int = Field(default=3, ge=1)
    ell: int = Field(default=128, ge=1)
    t: Probability = 0.7
    model: AdversaryModel = "bernoulli"


class VerifyDemoConfig(CommonConfig):
    """Verification trials under one attack."""

    ell_1a: int = Field(default=64, ge=1)
    ell_1b: int = Field(default=64, ge=1)
    ell_2: int = Field(default=64, ge=1)
    ell_3: int = Field(default=128, ge=1)
    hash_family: HashFamily = "default-nonlinear"
    hash_seed: int = Field(default=0, ge=0, le=MASK64)
    attack: AttackName = "none"

    @property
    def ell(self) -> int:
        return self.ell_1a + self.ell_1b + self.ell_2 + self.ell_3


class AnalyzeConfig(CommonConfig):
    """Security figures over an explicit (n, m, t) grid; trials = 0 skips Monte Carlo."""

    trials: int = Field(default=0, ge=0)
    n: list[Count] = Field(default_factory=lambda: [3], min_length=1)
    m: list[Count] = Field(default_factory=lambda: [4], min_length=1)
    t: list[Probability] = Field(default_factory=lambda: [0.7], min_length=1)
    model: AdversaryModel = "bernoulli"
    format: Literal["csv", "json"] = "csv"


class SweepConfig(CommonConfig):
    """Security and bandwidth over inclusive [start, stop, step] ranges."""

    trials: int = Field(default=0, ge=0)
    n_range: tuple[Count, Count, Count] = (1, 8, 1)
    m_range: tuple[Count, Count, Count] = (2, 20, 2)
    t: list[Probability] = Field(default_factory=lambda: [0.5, 0.7, 0.9], min_length=1)
    ell: int = Field(default=128, ge=1)
    model: AdversaryModel = "bernoulli"

    @model_validator(mode="after")
    def check_ranges(self) -> "SweepConfig":
        for name in ("n_range", "m_range"):
            start, stop, _ = getattr(self, name)
            if stop < start:
                raise ValueError(f"{name} stop {stop} is below start {start}")
        return self

    @property
    def n_values(self) -> list[int]:
        start, stop, step = self.n_range
        return list(range(start, stop + 1, step))

    @property
    def m_values(self) -> list[int]:
        start, stop, step = self.m_range
        return list(range(start, stop + 1, step))


class DimensionConfig(CommonConfig):
    """Required n per target; give either p_s or delta (p_s = [0.999] when neither is set)."""

    p_s: Optional[list[OpenProbability]] = None
    delta: Optional[list[OpenProbability]] = None
    m: list[Annotated[int, Field(ge=2)]] = Field(default_factory=lambda: [11], min_length=1)
    t: list[OpenProbability] = Field(default_factory=lambda: [0.5], min_length=1)
    ell: int = Field(default=128, ge=1)

    @model_validator(mode="after")
    def check_target(self) -> "DimensionConfig":
        if self.p_s is not None and self.delta is not None:
            raise ValueError("set p_s or delta, not both")
        return self

    def targets(self) -> list[tuple[float, float]]:
        """``(p_s, delta)`` pairs in input order."""
        if self.delta is not None:
            return [(1.0 - d, d) for d in self.delta]
        return [(p, 1.0 - p) for p in (self.p_s or [0.999])]


C = TypeVar("C", bound=CommonConfig)


def _describe(error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "config"
        problems.append(f"{where}: {item['msg']}")
    return "; ".join(problems)


def load_config(
    model: type[C],
    path: Optional[Path] = None,
    overrides: Optional[dict] = None,
) -> C:
    """Build a validated config. Precedence: overrides > JSON file > defaults.

    Raises:
        ConfigError: unreadable file, malformed JSON, unknown keys or
            out-of-range values
    """
    data: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        data.update(raw)

    data.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        config = model(**data)
    except ValidationError as e:
        raise ConfigError(_describe(e)) from e
    logger.debug(f"Loaded {model.__name__}: {config.model_dump(mode='json')}")
    return config


def effective_config_json(config: CommonConfig) -> str:
    """Canonical JSON of the result-determining fields."""
    payload = config.model_dump(mode="json", exclude=_NON_PROVENANCE)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
