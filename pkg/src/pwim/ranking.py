"""Similarity ranking and display weights for candidate actions.

Actions are sorted by cosine similarity to the intent embedding; display
intensity is a per-turn min-max normalization of the similarities (raw
encoder scores cluster in a narrow band, so absolute mapping would wash
out the contrast), and the top K entries are flagged for enlargement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import GroundedAction
from .errors import DimensionMismatchError, ZeroVectorError

DEGENERATE_INTENSITY = 0.5


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against float rounding.

    Identical vectors short-circuit to exactly 1.0.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {u.shape} vs {v.shape}"
        )
    if np.array_equal(u, v):
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            raise ZeroVectorError("cosine of a zero vector is undefined")
        return 1.0
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("cosine of a zero vector is undefined")
    value = float(np.dot(u, v)) / (nu * nv)
    return max(-1.0, min(1.0, value))


def display_intensities(similarities: list[float]) -> list[float]:
    """Min-max normalize a similarity list into [0, 1] intensities.

    Degenerate lists (all equal, including singletons) map to a neutral
    0.5 everywhere.
    """
    if not similarities:
        raise ValueError("similarities must be non-empty")
    lo = min(similarities)
    hi = max(similarities)
    if hi == lo:
        return [DEGENERATE_INTENSITY] * len(similarities)
    span = hi - lo
    return [(s - lo) / span for s in similarities]


@dataclass(frozen=True)
class RankingConfig:
    """k: number of top matches rendered enlarged (display default 3)."""

    k: int = 3

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class RankedAction:
    action: GroundedAction
    similarity: float
    intensity: float
    enlarged: bool


def rank_actions(
    intent_vec: np.ndarray,
    actions: list[tuple[GroundedAction, np.ndarray]],
    config: RankingConfig = RankingConfig(),
) -> list[RankedAction]:
    """Sort actions by similarity to the intent, descending.

    Ties break lexicographically by summary then action_id, so equal
    inputs always produce byte-identical output. The first min(k, N)
    entries are flagged enlarged; intensities come from
    display_intensities over the sorted similarity list.
    """
    if not actions:
        return []
    scored = [
        (cosine(intent_vec, vec), action) for action, vec in actions
    ]
    scored.sort(key=lambda sa: (-sa[0], sa[1].summary, sa[1].action_id))
    similarities = [s for s, _ in scored]
    intensities = display_intensities(similarities)
    cutoff = min(config.k, len(scored))
    return [
        RankedAction(
            action=action,
            similarity=similarity,
            intensity=intensity,
            enlarged=(i < cutoff),
        )
        for i, ((similarity, action), intensity) in enumerate(
            zip(scored, intensities)
        )
    ]
