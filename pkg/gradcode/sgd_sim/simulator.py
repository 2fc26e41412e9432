"""
Master-worker gradient descent with simulated stragglers.

Every iteration the master waits for the n - s workers it does not treat
as stragglers, decodes a recovery certificate for the straggler set and
steps along the recovered partial gradient sum.
"""
import logging
from typing import Callable, Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gradcode.config import get_seed
from gradcode.core.loads import validate
from gradcode.core.models import GcScheme
from gradcode.decoding import RecoveryCertificate, apply_certificate, decode
from gradcode.delay_models.models import DelayModel
from gradcode.errors import ConfigError, StructuralError
from gradcode.sgd_sim.tasks import DatasetSpec, SyntheticTask, make_dataset
from gradcode.sgd_sim.traces import SimTrace

logger = logging.getLogger(__name__)

DELAY_STREAM = 0
PATTERN_STREAM = 1


# ============================================================================
# Configuration
# ============================================================================

class StragglerPattern(BaseModel):
    """
    Workers forced to straggle. Worker numbers are 1-based.

    random:      nobody is forced; the s slowest workers straggle
    consecutive: `length` consecutive workers from `start` (random start per
                 delay block when unset), applied with `probability`
    custom:      the listed workers
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["random", "consecutive", "custom"] = "random"
    workers: Tuple[int, ...] = ()
    start: Optional[int] = None
    length: Optional[int] = None
    probability: float = Field(default=1.0, ge=0.0, le=1.0)


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scheme: GcScheme
    model: DelayModel
    dataset: DatasetSpec = Field(default_factory=DatasetSpec)
    step_size: Optional[float] = Field(default=None, gt=0.0)
    iterations: int = Field(default=300, ge=1)
    persistence_block: int = Field(default=300, ge=1)
    seed: int = Field(default_factory=get_seed)
    pattern: StragglerPattern = Field(default_factory=StragglerPattern)
    delta_override: Optional[float] = Field(default=None, ge=0.0)
    normalize: bool = False
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_partitions(self):
        if self.dataset.n_points % self.scheme.k != 0:
            raise ConfigError(
                f"n_points={self.dataset.n_points} must be a multiple of k={self.scheme.k}"
            )
        return self

    @property
    def display_name(self) -> str:
        return self.name or self.scheme.label


# ============================================================================
# Straggler selection
# ============================================================================

ForcedSelector = Callable[[np.random.Generator], FrozenSet[int]]


def adversarial_straggler_hook(pattern: StragglerPattern, n: int, s: int) -> ForcedSelector:
    """
    Build the per-block selector of forced stragglers (0-based) for a pattern.

    Raises:
        ConfigError: If the pattern forces more than s workers or names
            workers outside [1, n]
    """
    if pattern.kind == "custom":
        forced = frozenset(w - 1 for w in pattern.workers)
        if any(not 0 <= w < n for w in forced):
            raise ConfigError(f"custom stragglers must lie in [1, {n}], got {list(pattern.workers)}")
        if len(forced) > s:
            raise ConfigError(f"custom pattern names {len(forced)} workers, more than s={s}")
        return lambda rng: forced

    if pattern.kind == "consecutive":
        length = s if pattern.length is None else pattern.length
        if length > s:
            raise ConfigError(f"consecutive pattern of length {length} exceeds s={s}")
        if pattern.start is not None and not 1 <= pattern.start <= n:
            raise ConfigError(f"pattern start must lie in [1, {n}], got {pattern.start}")

        def select(rng: np.random.Generator) -> FrozenSet[int]:
            start = pattern.start - 1 if pattern.start is not None else int(rng.integers(n))
            if rng.random() >= pattern.probability:
                return frozenset()
            return frozenset((start + t) % n for t in range(length))

        return select

    return lambda rng: frozenset()


def pick_stragglers(times: np.ndarray, s: int, forced: FrozenSet[int]) -> FrozenSet[int]:
    """Forced workers plus the slowest others until s straggle; ties go to the higher index."""
    order = sorted(
        (w for w in range(len(times)) if w not in forced),
        key=lambda w: (times[w], w),
    )
    extra = s - len(forced)
    return frozenset(forced) | frozenset(order[len(order) - extra:] if extra > 0 else [])


def _stream(seed: int, kind: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, kind, block])))


# ============================================================================
# Simulation
# ============================================================================

def run_sim(config: SimConfig, task: Optional[SyntheticTask] = None) -> SimTrace:
    """
    Run the simulation described by config.

    Raw worker delays are redrawn every persistence_block iterations from a
    stream that depends only on the seed and the block index, so runs with
    the same seed see identical delays whatever the scheme.
    """
    scheme = config.scheme
    violations = validate(scheme)
    if violations:
        raise StructuralError(f"Malformed {scheme.label} scheme: {violations[0]}", violations)
    n, k, s = scheme.n, scheme.k, scheme.params.s

    task = task or make_dataset(config.dataset, config.seed)
    if task.n_points % k != 0:
        raise ConfigError(f"n_points={task.n_points} must be a multiple of k={k}")
    model = config.model if config.delta_override is None else config.model.with_delta(config.delta_override)
    step = config.step_size if config.step_size is not None else 1.0 / task.smoothness_constant()
    selector = adversarial_straggler_hook(config.pattern, n, s)
    points = np.array([len(a) * task.n_points / k for a in scheme.assignment], dtype=float)

    theta = np.zeros(task.dim)
    cache: Dict[FrozenSet[int], RecoveryCertificate] = {}
    histogram = np.zeros(k, dtype=np.int64)
    blocks: List[np.ndarray] = []
    rows = []
    wall_clock = 0.0
    raw = np.zeros(n)
    forced: FrozenSet[int] = frozenset()

    logger.info(
        "Simulating %s: n=%d k=%d s=%d, %d iterations, step %.4g",
        config.display_name, n, k, s, config.iterations, step,
    )
    for it in range(config.iterations):
        if it % config.persistence_block == 0:
            block = it // config.persistence_block
            raw = model.draw(_stream(config.seed, DELAY_STREAM, block), n)
            forced = selector(_stream(config.seed, PATTERN_STREAM, block))
            blocks.append(np.asarray(raw, dtype=float))

        times = model.scale(raw, points)
        stragglers = pick_stragglers(times, s, forced)
        survivors = [w for w in range(n) if w not in stragglers]
        # Slowest survivor, not the (n-s)-th order statistic: forced stragglers
        # may be fast workers, and the master still waits for every survivor.
        iteration_time = float(max(times[w] for w in survivors))
        wall_clock += iteration_time

        cert = cache.get(stragglers)
        if cert is None:
            cert = decode(scheme, sorted(stragglers))
            cache[stragglers] = cert
        recovered = np.asarray(cert.recovered, dtype=np.int64)
        histogram[recovered] += 1

        gradient = apply_certificate(scheme, cert, task.partial_gradients(theta, k))
        if config.normalize and cert.recovered_count:
            gradient *= k / cert.recovered_count
        theta = theta - step * gradient

        rows.append({
            "iter": it + 1,
            "wall_clock": wall_clock,
            "iteration_time": iteration_time,
            "recovered": cert.recovered_count,
            "loss": task.loss(theta),
            "test_loss": task.loss(theta, split="test"),
            "accuracy": task.accuracy(theta),
            "shortfall": cert.shortfall,
            "stragglers": " ".join(str(w + 1) for w in sorted(stragglers)),
        })

    records = pd.DataFrame(rows)
    records["accuracy"] = records["accuracy"].astype(float)
    logger.info(
        "%s finished: wall clock %.4g, mean recovered %.2f/%d, %d shortfall rounds",
        config.display_name, wall_clock, records["recovered"].mean(), k,
        int((records["shortfall"] > 0).sum()),
    )
    return SimTrace(
        name=config.display_name,
        scheme=scheme,
        seed=config.seed,
        records=records,
        recovery_histogram=histogram,
        delay_blocks=np.vstack(blocks),
    )


def run_comparison(
    schemes: Sequence[GcScheme],
    model: DelayModel,
    dataset: Optional[DatasetSpec] = None,
    seed: Optional[int] = None,
    iterations: int = 300,
    persistence_block: int = 300,
    pattern: Optional[StragglerPattern] = None,
    mode: Optional[Literal["fixed-s", "fixed-alpha"]] = None,
    step_size: Optional[float] = None,
    names: Optional[Sequence[str]] = None,
    delta_overrides: Optional[Sequence[Optional[float]]] = None,
) -> List[SimTrace]:
    """
    Run every scheme on the same data with common random delays.

    Raises:
        ConfigError: If the schemes disagree on n, or on s / alpha in
            fixed-s / fixed-alpha mode
    """
    if not schemes:
        raise ConfigError("no schemes to compare")
    if len({sc.n for sc in schemes}) != 1:
        raise ConfigError(f"schemes must share n, got {sorted({sc.n for sc in schemes})}")
    if mode == "fixed-s" and len({sc.params.s for sc in schemes}) != 1:
        raise ConfigError(f"fixed-s mode needs one s, got {sorted({sc.params.s for sc in schemes})}")
    if mode == "fixed-alpha" and len({sc.params.alpha for sc in schemes}) != 1:
        raise ConfigError("fixed-alpha mode needs every scheme to share alpha")

    seed = get_seed(seed)
    dataset = dataset or DatasetSpec()
    task = make_dataset(dataset, seed)
    if step_size is None:
        step_size = 1.0 / task.smoothness_constant()
    names = list(names) if names else [sc.label for sc in schemes]
    overrides = list(delta_overrides) if delta_overrides else [None] * len(schemes)

    traces = []
    for scheme, name, override in zip(schemes, names, overrides):
        config = SimConfig(
            scheme=scheme,
            model=model,
            dataset=dataset,
            step_size=step_size,
            iterations=iterations,
            persistence_block=persistence_block,
            seed=seed,
            pattern=pattern or StragglerPattern(),
            delta_override=override,
            name=name,
        )
        traces.append(run_sim(config, task))
    return traces
