"""Majority-vote combination of per-record label predictions.

Tie policy: when the top vote count is shared by several labels, the answer
is the vote of the highest-priority voter among those voting for a tied
label. Priority defaults to input order, so with three models A, B, C a
three-way disagreement resolves to model A's label. This matters for
ternary tasks and is deliberately deterministic and auditable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CoverageError, DataError

ENSEMBLE_MODEL_ID = "ensemble"


@dataclass(frozen=True)
class PredictionSet:
    """One model's predicted label per record id."""

    model_id: str
    labels: Mapping[str, str]


def majority_vote(votes: Sequence[str], priority: Sequence[int] | None = None) -> str:
    """Label with a strict plurality, else the tied label of the best-priority voter."""
    if not votes:
        raise DataError("majority_vote needs at least one vote")
    if priority is None:
        priority = range(len(votes))
    elif sorted(priority) != list(range(len(votes))):
        raise DataError("priority must be a permutation of voter indices")
    counts = Counter(votes)
    top = max(counts.values())
    tied = {label for label, count in counts.items() if count == top}
    if len(tied) == 1:
        return next(iter(tied))
    for voter in priority:
        if votes[voter] in tied:
            return votes[voter]
    raise AssertionError("unreachable: some voter voted for every tied label")


def ensemble_predictions(
    sets: Sequence[PredictionSet], priority: Sequence[int] | None = None
) -> PredictionSet:
    """Per-record majority vote over prediction sets covering identical record ids."""
    if len(sets) < 2:
        raise DataError("ensembling needs at least two prediction sets")
    reference = set(sets[0].labels)
    for ps in sets[1:]:
        keys = set(ps.labels)
        if keys != reference:
            missing = sorted(reference ^ keys)
            raise CoverageError(
                f"prediction sets {sets[0].model_id!r} and {ps.model_id!r} "
                f"disagree on record ids: {', '.join(missing)}"
            )
    labels = {
        rid: majority_vote([ps.labels[rid] for ps in sets], priority)
        for rid in sorted(reference)
    }
    return PredictionSet(ENSEMBLE_MODEL_ID, labels)
