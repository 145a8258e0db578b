import math
import random

import numpy as np
import pytest

from tweetpipe import (
    DataError,
    DivergenceError,
    FeatureVector,
    ModelParams,
    ShapeError,
    TrainConfig,
    featurize,
    fnv1a_64,
    load_model,
    loss_and_grad,
    predict_proba,
    save_model,
    train,
)


def test_fnv1a_64_published_vectors():
    # reference vectors from the FNV test suite
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8


def test_featurize_empty():
    fv = featurize("", 4096)
    assert fv.indices == () and fv.counts == ()


def test_featurize_counts():
    fv = featurize("a a b", 4096)
    by_index = dict(zip(fv.indices, fv.counts))
    assert by_index == {fnv1a_64(b"a") % 4096: 2, fnv1a_64(b"b") % 4096: 1}
    assert list(fv.indices) == sorted(fv.indices)


def test_featurize_golden_values():
    # frozen from the FNV-1a 64 hashes of the lowercased tokens, mod 4096
    fv = featurize("Hello, WORLD! hello", 4096)
    assert dict(zip(fv.indices, fv.counts)) == {3339: 2, 2803: 1}


def test_featurize_splits_on_non_alphanumerics():
    fv = featurize("re-test re_test", 64)
    expected = {}
    for token in ("re", "test", "re", "test"):
        idx = fnv1a_64(token.encode()) % 64
        expected[idx] = expected.get(idx, 0) + 1
    assert dict(zip(fv.indices, fv.counts)) == expected


def test_featurize_requires_power_of_two():
    with pytest.raises(DataError):
        featurize("x", 1000)


def _params(k, d, fill=0.0):
    return ModelParams(np.full((k, d), fill, dtype=float), np.zeros(k))


def test_predict_proba_zero_params_is_uniform():
    probs = predict_proba(_params(6, 8), featurize("a b", 8))
    assert probs == pytest.approx([1 / 6] * 6, abs=1e-12)


def test_predict_proba_closed_form_bias():
    params = ModelParams(np.zeros((2, 8)), np.array([math.log(2.0), 0.0]))
    probs = predict_proba(params, featurize("", 8))
    assert probs == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_predict_proba_shift_invariance():
    rng = np.random.default_rng(3)
    w = rng.normal(size=(3, 16))
    x = featurize("one two three two", 16)
    base = predict_proba(ModelParams(w, np.zeros(3)), x)
    shifted = predict_proba(ModelParams(w, np.full(3, 17.5)), x)
    assert shifted == pytest.approx(base, abs=1e-12)


def test_predict_proba_shape_error():
    with pytest.raises(ShapeError):
        predict_proba(_params(2, 8), featurize("x", 16))


def test_loss_zero_params_binary_is_ln2():
    loss, _ = loss_and_grad(_params(2, 8), [(featurize("a", 8), 0)])
    assert loss == pytest.approx(math.log(2.0), abs=1e-12)


def test_loss_mean_invariant_under_duplication():
    batch = [(featurize("a b", 8), 1), (featurize("c", 8), 0)]
    loss_once, _ = loss_and_grad(_params(2, 8), batch)
    loss_twice, _ = loss_and_grad(_params(2, 8), batch + batch)
    assert loss_twice == pytest.approx(loss_once, abs=1e-12)


def _random_instance(rng):
    d = 2 ** rng.randint(2, 5)  # up to 32
    k = rng.randint(2, 6)
    params = ModelParams(
        np.array([[rng.uniform(-1, 1) for _ in range(d)] for _ in range(k)]),
        np.array([rng.uniform(-1, 1) for _ in range(k)]),
    )
    batch = []
    for _ in range(rng.randint(1, 4)):
        n_idx = rng.randint(0, min(5, d))
        indices = tuple(sorted(rng.sample(range(d), n_idx)))
        counts = tuple(rng.randint(1, 3) for _ in indices)
        batch.append((FeatureVector(indices, counts, d), rng.randrange(k)))
    return params, batch, rng.choice([0.0, 1e-4, 1e-2])


def test_gradient_matches_central_finite_differences():
    rng = random.Random(12345)
    h = 1e-5
    for _ in range(50):
        params, batch, l2 = _random_instance(rng)
        _, grad = loss_and_grad(params, batch, l2)

        def numeric(setter):
            plus = params.copy()
            minus = params.copy()
            setter(plus, +h)
            setter(minus, -h)
            lp, _ = loss_and_grad(plus, batch, l2)
            lm, _ = loss_and_grad(minus, batch, l2)
            return (lp - lm) / (2 * h)

        k, d = params.weights.shape
        for i in range(k):
            for j in range(d):
                g = grad.weights[i, j]
                if abs(g) <= 1e-8:
                    continue
                fd = numeric(lambda p, eps, i=i, j=j: p.weights.__setitem__((i, j), p.weights[i, j] + eps))
                assert abs(fd - g) / max(abs(fd), abs(g)) < 1e-4
        for i in range(k):
            g = grad.bias[i]
            if abs(g) <= 1e-8:
                continue
            fd = numeric(lambda p, eps, i=i: p.bias.__setitem__(i, p.bias[i] + eps))
            assert abs(fd - g) / max(abs(fd), abs(g)) < 1e-4


def test_train_single_sample_saturates():
    sample = (featurize("only sample here", 64), 2)
    params = train([sample], TrainConfig(epochs=200, learning_rate=0.5, l2=0.0), 4)
    assert predict_proba(params, sample[0])[2] > 0.99


def test_train_separable_clusters_fits_exactly():
    rng = random.Random(5)
    vocab = (["apple", "pear", "plum"], ["bolt", "nut", "gear"])
    data = []
    for _ in range(60):
        y = rng.randrange(2)
        words = [rng.choice(vocab[y]) for _ in range(rng.randint(3, 6))]
        data.append((featurize(" ".join(words), 256), y))
    params = train(data, TrainConfig(epochs=20, learning_rate=0.5, seed=9), 2)
    predicted = [int(np.argmax(predict_proba(params, x))) for x, _ in data]
    assert predicted == [y for _, y in data]


def test_train_zero_learning_rate_keeps_init():
    data = [(featurize("a b c", 32), 0), (featurize("d e", 32), 1)]
    params = train(data, TrainConfig(epochs=3, learning_rate=0.0), 2)
    assert not params.weights.any()
    assert not params.bias.any()


def test_train_is_bitwise_deterministic():
    rng = random.Random(21)
    data = [
        (featurize(" ".join(rng.choice("abcdefgh") for _ in range(6)), 64), rng.randrange(3))
        for _ in range(40)
    ]
    cfg = TrainConfig(epochs=5, learning_rate=0.2, seed=77, l2=1e-4)
    first, second = train(data, cfg, 3), train(data, cfg, 3)
    assert np.array_equal(first.weights, second.weights)
    assert np.array_equal(first.bias, second.bias)
    different = train(data, TrainConfig(epochs=5, learning_rate=0.2, seed=78, l2=1e-4), 3)
    assert not np.array_equal(first.weights, different.weights)


def test_full_batch_descent_is_monotone():
    rng = random.Random(4)
    data = [
        (featurize(" ".join(rng.choice("mnopqr") for _ in range(4)), 64), rng.randrange(2))
        for _ in range(24)
    ]
    losses = []
    for epochs in range(1, 9):
        cfg = TrainConfig(epochs=epochs, learning_rate=0.05, seed=1, l2=1e-3, batch_size=len(data))
        params = train(data, cfg, 2)
        losses.append(loss_and_grad(params, data, 1e-3)[0])
    assert all(a >= b - 1e-12 for a, b in zip(losses, losses[1:]))


def test_train_rejects_bad_input():
    with pytest.raises(DataError):
        train([], TrainConfig(), 2)
    with pytest.raises(DataError):
        train([(featurize("a", 32), 5)], TrainConfig(), 2)
    with pytest.raises(DataError):
        TrainConfig(epochs=0)


def test_train_divergence_is_reported():
    data = [(FeatureVector((0,), (1000,), 32), 0), (FeatureVector((0,), (1000,), 32), 1)]
    with pytest.raises(DivergenceError):
        train(data, TrainConfig(epochs=50, learning_rate=1e18, l2=0.0, batch_size=1), 2)


def test_model_file_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    params = ModelParams(rng.normal(size=(3, 16)), rng.normal(size=3))
    path = tmp_path / "model.txt"
    save_model(params, ["x", "y", "z"], str(path))
    loaded, classes = load_model(str(path))
    assert classes == ["x", "y", "z"]
    assert np.array_equal(loaded.weights, params.weights)
    assert np.array_equal(loaded.bias, params.bias)


def test_load_model_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a model\n")
    with pytest.raises(DataError):
        load_model(str(path))
