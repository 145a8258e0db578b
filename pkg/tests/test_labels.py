import math
import random

import pytest

from tweetpipe import (
    JOINT_LABELS,
    JOINT_LABEL_NAMES,
    InvalidDistributionError,
    JointDistribution,
    JointLabel,
    Premise,
    Stance,
    decide,
    marginalize_premise,
    marginalize_stance,
    parse_joint_label,
)

EXAMPLE = [0.1, 0.2, 0.05, 0.15, 0.3, 0.2]  # (Ag-1, Ag-0, No-1, No-0, Fa-1, Fa-0)


def test_canonical_joint_order():
    assert JOINT_LABEL_NAMES == (
        "Against-1",
        "Against-0",
        "None-1",
        "None-0",
        "Favor-1",
        "Favor-0",
    )


def test_index_round_trip():
    for i, joint in enumerate(JOINT_LABELS):
        assert joint.index == i
        assert JointLabel.from_index(i) == joint
        assert parse_joint_label(str(joint)) == joint


def test_stance_marginal_example():
    stance = marginalize_stance(EXAMPLE)
    assert stance == pytest.approx([0.3, 0.2, 0.5], abs=1e-12)


def test_premise_marginal_example():
    premise = marginalize_premise(EXAMPLE)
    assert premise == pytest.approx([0.45, 0.55], abs=1e-12)


def test_one_hot_marginals():
    one_hot_ag1 = [1, 0, 0, 0, 0, 0]
    assert marginalize_stance(one_hot_ag1) == [1, 0, 0]
    one_hot_fa0 = [0, 0, 0, 0, 0, 1]
    assert marginalize_premise(one_hot_fa0) == [0, 1]


def test_uniform_marginals():
    uniform = [1 / 6] * 6
    assert marginalize_stance(uniform) == pytest.approx([1 / 3] * 3)
    assert marginalize_premise(uniform) == pytest.approx([0.5, 0.5])


def test_decide_examples():
    assert decide(EXAMPLE, "stance") is Stance.FAVOR
    assert decide(EXAMPLE, "premise") is Premise.NON_ARGUMENTATIVE


def test_decide_tie_goes_to_canonical_order():
    tie = [0.25, 0.25, 0.25, 0.25, 0.0, 0.0]
    assert decide(tie, "stance") is Stance.AGAINST
    assert decide([1 / 6] * 6, "premise") is Premise.ARGUMENTATIVE


def test_decide_scale_invariance():
    rng = random.Random(7)
    for _ in range(200):
        raw = [rng.random() for _ in range(6)]
        scale = rng.uniform(1e-6, 1e6)
        scaled = [p * scale for p in raw]
        assert decide(raw, "stance") is decide(scaled, "stance")
        assert decide(raw, "premise") is decide(scaled, "premise")


def test_marginals_conserve_total():
    rng = random.Random(11)
    for _ in range(1000):
        raw = [rng.random() for _ in range(6)]
        total = sum(raw)
        dist = JointDistribution(tuple(p / total for p in raw))
        assert abs(sum(marginalize_stance(dist)) - sum(dist.probs)) < 1e-12
        assert abs(sum(marginalize_premise(dist)) - sum(dist.probs)) < 1e-12


def test_distribution_validation():
    with pytest.raises(InvalidDistributionError):
        JointDistribution((0.5, 0.5, 0.0, 0.0, 0.0, 0.1))  # sums to 1.1
    with pytest.raises(InvalidDistributionError):
        JointDistribution((1.0, 0.0, 0.0, 0.0, 0.0))  # wrong length
    with pytest.raises(InvalidDistributionError):
        JointDistribution((1.2, -0.2, 0.0, 0.0, 0.0, 0.0))  # negative entry
    with pytest.raises(InvalidDistributionError):
        marginalize_stance([0.1] * 5)
    with pytest.raises(InvalidDistributionError):
        decide([math.nan] * 6, "stance")
    with pytest.raises(InvalidDistributionError):
        decide([1 / 6] * 6, "both")


def test_parse_joint_label_rejects_garbage():
    for bad in ("Against", "Favor-2", "favor-1", "", "None+1"):
        with pytest.raises(InvalidDistributionError):
            parse_joint_label(bad)
