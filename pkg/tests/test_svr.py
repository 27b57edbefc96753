import numpy as np
import pytest

from attacklab.errors import ContractViolation, InvalidInputError, UnderdeterminedError
from attacklab.regression import AvoidanceModel, Hyperparams, TrainingSample, fit, predict
from attacklab.svr import EpsilonSVR, kernel_matrix

from oracles import sklearn_svr


def toy(n=120, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-2, 2, size=(n, 3))
    y = np.sin(X[:, 0]) + 0.5 * X[:, 1] ** 2 - 0.3 * X[:, 2] + rng.normal(0, 0.05, n)
    return X, y


def test_rbf_kernel_is_symmetric_with_unit_diagonal():
    X, _ = toy(20)
    K = kernel_matrix(X, X, "rbf", 0.7)
    assert np.allclose(K, K.T)
    assert np.allclose(np.diag(K), 1.0)
    assert np.all(np.linalg.eigvalsh(K) > -1e-10)


def test_matches_sklearn_reference():
    X, y = toy()
    ours = EpsilonSVR(C=10.0, epsilon=0.05, gamma=0.5, tol=1e-4).fit(X, y)
    ref = sklearn_svr(X, y, C=10.0, epsilon=0.05, gamma=0.5, tol=1e-4)
    Xt, _ = toy(50, seed=1)
    assert np.max(np.abs(ours.predict(Xt) - ref.predict(Xt))) < 5e-3
    assert abs(ours.n_support - len(ref.support_)) <= 2


def test_dual_coefficients_are_box_constrained_and_balanced():
    X, y = toy()
    m = EpsilonSVR(C=2.0, epsilon=0.05, gamma=0.5).fit(X, y)
    assert np.all(np.abs(m.dual_coef) <= 2.0 + 1e-9)
    assert abs(m.dual_coef.sum()) < 1e-8


def test_serialised_svr_predicts_identically():
    X, y = toy()
    m = EpsilonSVR(C=5.0, epsilon=0.02, gamma=0.3).fit(X, y)
    again = EpsilonSVR.from_dict(m.to_dict())
    assert np.array_equal(m.predict(X), again.predict(X))


def test_rejects_bad_hyperparameters():
    with pytest.raises(ContractViolation):
        EpsilonSVR(C=0.0)
    with pytest.raises(ContractViolation):
        EpsilonSVR().fit(np.zeros((3, 2)), np.zeros(2))


def samples(n=80, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 6))
    Y = np.column_stack([0.1 + 0.01 * X[:, 0], 0.2 * np.tanh(X[:, 3])])
    return [TrainingSample(tuple(x), tuple(yv)) for x, yv in zip(X, Y)]


def test_model_fit_reports_quality_and_round_trips():
    model = fit(samples(200), Hyperparams(C=10.0), seed=1)
    assert len(model.r2) == 2 and len(model.coverage_2sigma) == 2
    assert min(model.r2) > 0.8
    back = AvoidanceModel.from_json(model.to_json())
    q = np.array([s.q_in for s in samples(5, seed=7)])
    assert np.array_equal(predict(model, q), predict(back, q))
    assert predict(model, q[0]).shape == (2,)


def test_model_input_checks():
    with pytest.raises(UnderdeterminedError):
        fit(samples(3))
    model = fit(samples(), seed=0)
    with pytest.raises(InvalidInputError):
        predict(model, np.zeros(5))
    with pytest.raises(InvalidInputError):
        predict(model, np.full(6, np.nan))
