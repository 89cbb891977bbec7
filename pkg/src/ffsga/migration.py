"""Adaptive two-island migration.

The ratio of the two islands' best fitness values decides everything:

* ``beta`` is the worse best fitness over the better one (1 when equal);
* the migration rate is ``alpha = 1 - beta`` if that is below the threshold
  ``theta``, else 0;
* migrants flow from the island with the better best fitness, and the
  ``floor(alpha * N)`` best emigrants overwrite the same number of worst
  immigrants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ConfigError, ContractError

A_TO_B = "A->B"
B_TO_A = "B->A"
NONE = "none"


@dataclass(frozen=True)
class MigrationPolicy:
    theta: float = 1.0
    gap: int = 500

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}")
        if self.gap < 1:
            raise ConfigError(f"gap must be >= 1, got {self.gap}")


@dataclass(frozen=True)
class MigrationDecision:
    beta: float
    alpha: float
    direction: str
    k: int

    def as_dict(self) -> dict:
        return asdict(self)


def compute_beta(fit_a: float, fit_b: float) -> float:
    if fit_a < 0 or fit_b < 0 or math.isnan(fit_a) or math.isnan(fit_b):
        raise ContractError(f"fitness must be non-negative, got ({fit_a}, {fit_b})")
    if fit_a < fit_b:
        return fit_a / fit_b
    if fit_a > fit_b:
        return fit_b / fit_a
    # equal, including 0/0: no migration
    return 1.0


def compute_alpha(beta: float, theta: float) -> float:
    if not (0.0 <= beta <= 1.0 and 0.0 <= theta <= 1.0):
        raise ContractError(f"beta and theta must lie in [0, 1], got ({beta}, {theta})")
    gap = 1.0 - beta
    return gap if gap < theta else 0.0


def decide(fit_a: float, fit_b: float, policy: MigrationPolicy, island_size: int) -> MigrationDecision:
    if island_size < 1:
        raise ContractError("island size must be >= 1")
    beta = compute_beta(fit_a, fit_b)
    alpha = compute_alpha(beta, policy.theta)
    k = math.floor(alpha * island_size)
    if fit_a > fit_b:
        direction = A_TO_B
    elif fit_a < fit_b:
        direction = B_TO_A
    else:
        direction = NONE
    if alpha == 0.0 or k == 0:
        direction = NONE
    if direction == NONE:
        k = 0
    return MigrationDecision(beta=beta, alpha=alpha, direction=direction, k=k)


def execute(emigrant, immigrant, k: int) -> None:
    """Copy the ``k`` best emigrants over the ``k`` worst immigrants.

    The i-th best emigrant lands in the slot of the i-th worst immigrant.
    The emigrant island is only read.
    """
    if k < 0 or k > emigrant.size or k > immigrant.size:
        raise ContractError(f"cannot migrate {k} individuals between islands of {emigrant.size}/{immigrant.size}")
    if k == 0:
        return
    donors = emigrant.ranking()[:k]
    slots = immigrant.ranking()[::-1][:k]
    immigrant.import_genes(slots, emigrant.export_genes(donors))
