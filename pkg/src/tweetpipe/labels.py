"""The 6-way stance x premise joint label space and its marginals.

A multitask classifier predicts one distribution over the six joint labels
(Against-1, Against-0, None-1, None-0, Favor-1, Favor-0, in that canonical
order); stance and premise answers are obtained by summing out the other
factor and taking the argmax, with ties broken by canonical label order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import InvalidDistributionError

SUM_TOLERANCE = 1e-9


class Stance(Enum):
    AGAINST = "Against"
    NONE = "None"
    FAVOR = "Favor"


class Premise(Enum):
    ARGUMENTATIVE = "1"
    NON_ARGUMENTATIVE = "0"


STANCE_ORDER = (Stance.AGAINST, Stance.NONE, Stance.FAVOR)
PREMISE_ORDER = (Premise.ARGUMENTATIVE, Premise.NON_ARGUMENTATIVE)


@dataclass(frozen=True)
class JointLabel:
    stance: Stance
    premise: Premise

    @property
    def index(self) -> int:
        return 2 * STANCE_ORDER.index(self.stance) + PREMISE_ORDER.index(self.premise)

    @classmethod
    def from_index(cls, index: int) -> "JointLabel":
        if not 0 <= index < 6:
            raise InvalidDistributionError(f"joint label index {index} outside 0..5")
        return cls(STANCE_ORDER[index // 2], PREMISE_ORDER[index % 2])

    def __str__(self) -> str:
        return f"{self.stance.value}-{self.premise.value}"


JOINT_LABELS = tuple(JointLabel.from_index(i) for i in range(6))
JOINT_LABEL_NAMES = tuple(str(j) for j in JOINT_LABELS)


def parse_joint_label(name: str) -> JointLabel:
    """Parse a serialized joint label like ``Favor-1``."""
    stance_name, sep, premise_name = name.rpartition("-")
    if not sep:
        raise InvalidDistributionError(f"malformed joint label {name!r}")
    try:
        return JointLabel(Stance(stance_name), Premise(premise_name))
    except ValueError:
        raise InvalidDistributionError(f"malformed joint label {name!r}") from None


def _as_probs(dist: "JointDistribution | Sequence[float]") -> tuple[float, ...]:
    probs = dist.probs if isinstance(dist, JointDistribution) else tuple(float(p) for p in dist)
    if len(probs) != 6:
        raise InvalidDistributionError(f"expected 6 probabilities, got {len(probs)}")
    for p in probs:
        if not math.isfinite(p) or p < 0:
            raise InvalidDistributionError(f"invalid probability {p!r}")
    return probs


@dataclass(frozen=True)
class JointDistribution:
    """A probability vector over the six joint labels, canonical order."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", _as_probs(self.probs))
        total = sum(self.probs)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")


def marginalize_stance(dist: JointDistribution | Sequence[float]) -> list[float]:
    """Sum premise out: [Against, None, Favor]. Preserves the input total."""
    p = _as_probs(dist)
    return [p[0] + p[1], p[2] + p[3], p[4] + p[5]]


def marginalize_premise(dist: JointDistribution | Sequence[float]) -> list[float]:
    """Sum stance out: [argumentative (1), non-argumentative (0)]."""
    p = _as_probs(dist)
    return [p[0] + p[2] + p[4], p[1] + p[3] + p[5]]


def decide(dist: JointDistribution | Sequence[float], task: str) -> Stance | Premise:
    """Argmax of the task marginal; ties go to the canonically first label.

    Scale-invariant: multiplying all probabilities by a positive constant
    never changes the answer, so unnormalized score vectors are accepted.
    """
    if task == "stance":
        marginal, order = marginalize_stance(dist), STANCE_ORDER
    elif task == "premise":
        marginal, order = marginalize_premise(dist), PREMISE_ORDER
    else:
        raise InvalidDistributionError(f"unknown task {task!r}, expected 'stance' or 'premise'")
    best = max(range(len(order)), key=lambda i: (marginal[i], -i))
    return order[best]
