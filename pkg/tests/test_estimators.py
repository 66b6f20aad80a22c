import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from schurspec import SpectrumTransformer, WeightedEigenvalueSum
from schurspec.exceptions import InvalidArgument, MonotonicityError
from schurspec.matrixcore import random_symmetric
from schurspec.spectralfun import psi_matrix


def stack(n, count, seed=0):
    return np.stack([random_symmetric(n, seed + i).entries for i in range(count)])


def test_spectrum_transformer():
    out = SpectrumTransformer().fit_transform(np.diag([3.0, 1.0, 2.0]))
    assert out.tolist() == [[3.0, 2.0, 1.0]]
    X = stack(4, 6)
    out = SpectrumTransformer().fit(X).transform(X)
    assert out.shape == (6, 4) and np.all(np.diff(out, axis=1) <= 0)


def test_weighted_sum_matches_functional():
    X = stack(5, 8, seed=3)
    out = WeightedEigenvalueSum("tsap:1:2").fit_transform(X)
    assert out.shape == (8, 1)
    np.testing.assert_allclose(out[:, 0], [psi_matrix(a, "tsap:1:2") for a in X], rtol=1e-12)


def test_params_and_clone():
    est = WeightedEigenvalueSum(weights="osp:1:3", zero_tol=1e-8)
    assert est.get_params() == {"weights": "osp:1:3", "zero_tol": 1e-8, "require_monotone": True}
    c = clone(est).set_params(weights="list:1,1")
    assert c.weights == "list:1,1" and est.weights == "osp:1:3"


def test_validation_errors():
    with pytest.raises(NotFittedError):
        WeightedEigenvalueSum().transform(stack(3, 1))
    with pytest.raises(MonotonicityError):
        WeightedEigenvalueSum("list:0,1").fit(stack(2, 1))
    WeightedEigenvalueSum("list:0,1", require_monotone=False).fit(stack(2, 1))
    with pytest.raises(InvalidArgument):
        WeightedEigenvalueSum(zero_tol=-1.0).fit(stack(2, 1))
    est = WeightedEigenvalueSum().fit(stack(3, 2))
    with pytest.raises(InvalidArgument, match="size 4"):
        est.transform(stack(4, 1))
    with pytest.raises(InvalidArgument):
        SpectrumTransformer().fit(np.array([[[1.0, 2.0], [0.0, 1.0]]]))


def test_pipeline():
    X = stack(4, 10)
    out = make_pipeline(SpectrumTransformer(), StandardScaler()).fit_transform(X)
    np.testing.assert_allclose(out.mean(axis=0), 0.0, atol=1e-12)
