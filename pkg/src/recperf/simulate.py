"""Synthetic tournaments drawn from a known strength vector.

Each scheduled game between i and j is decided by a biased coin: i wins
with probability model.expected_score(theta_i, theta_j), and the winner
takes the full point (no draws). The seed fully determines the output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import RatingModel
from .tournament import Tournament, build_tournament

SCHEDULE_KINDS = ("round_robin", "random")
MAX_SCHEDULE_RETRIES = 100


@dataclass(frozen=True)
class Schedule:
    """Pairing plan: `count` is rounds for round_robin, total games for random."""

    kind: str
    count: int

    def __post_init__(self) -> None:
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(
                f"unknown schedule {self.kind!r}; expected one of {SCHEDULE_KINDS}"
            )
        if self.count < 1:
            raise ValueError(f"schedule count must be positive, got {self.count}")


@dataclass(frozen=True)
class SimulationConfig:
    """Ground truth and pairing plan for one synthetic tournament.

    Strengths come either from `true_strengths` or, when absent, from a
    seeded uniform draw over [-spread/2, spread/2].
    """

    n: int
    model: RatingModel
    schedule: Schedule
    seed: int
    true_strengths: tuple[float, ...] | None = None
    spread: float = 400.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 players, got {self.n}")
        if self.schedule.kind == "round_robin" and self.n < 3:
            raise ValueError(
                "round_robin needs at least 3 players; a 2-player schedule is bipartite"
            )
        if self.true_strengths is not None:
            strengths = tuple(float(v) for v in self.true_strengths)
            if len(strengths) != self.n:
                raise ValueError(
                    f"{len(strengths)} strengths given for {self.n} players"
                )
            object.__setattr__(self, "true_strengths", strengths)
        elif self.spread <= 0:
            raise ValueError(f"strength spread must be positive, got {self.spread}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")


@dataclass(frozen=True)
class SimulationResult:
    players: tuple[str, ...]
    records: tuple[tuple[str, str, float], ...]
    true_strengths: tuple[float, ...]
    seed: int

    def tournament(self) -> Tournament:
        return build_tournament(self.players, self.records)


def _schedule_pairs(config: SimulationConfig, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = config.n
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if config.schedule.kind == "round_robin":
        return all_pairs * config.schedule.count

    for _ in range(MAX_SCHEDULE_RETRIES):
        picks = rng.integers(0, len(all_pairs), size=config.schedule.count)
        pairs = [all_pairs[k] for k in picks]
        seen = {i for pair in pairs for i in pair}
        if len(seen) == n:
            return pairs
    raise ValueError(
        f"random schedule of {config.schedule.count} games kept leaving a player "
        f"idle after {MAX_SCHEDULE_RETRIES} attempts; increase the game count"
    )


def simulate_tournament(config: SimulationConfig) -> SimulationResult:
    """Draw one tournament; identical configs give identical results."""
    rng = np.random.default_rng(config.seed)
    players = tuple(f"P{i + 1}" for i in range(config.n))
    if config.true_strengths is not None:
        theta = np.array(config.true_strengths)
    else:
        theta = rng.uniform(-config.spread / 2.0, config.spread / 2.0, config.n)
    pairs = _schedule_pairs(config, rng)
    records = []
    for i, j in pairs:
        p_win = config.model.expected_score(theta[i], theta[j])
        score = 1.0 if rng.random() < p_win else 0.0
        records.append((players[i], players[j], score))
    return SimulationResult(
        players=players,
        records=tuple(records),
        true_strengths=tuple(float(v) for v in theta),
        seed=config.seed,
    )
