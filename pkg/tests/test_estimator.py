import math

import numpy as np
import pytest
from sklearn.base import clone

from knotsub.estimator import KnottedSubgroupClassifier, check_matrix_stack
from knotsub.exceptions import InvalidInputError

from conftest import su_from_frequencies


def test_predict_su(rng):
    X = np.stack([
        su_from_frequencies(rng, [3, 5, -8]),
        su_from_frequencies(rng, [1.0, math.sqrt(2), -1 - math.sqrt(2)]),
        np.zeros((3, 3), dtype=complex),
    ])
    est = KnottedSubgroupClassifier(family="su").fit(X)
    assert list(est.predict(X)) == ["Knotted", "InjectiveLine", "Trivial"]
    periods = est.predict_period(X)
    assert periods[0] == pytest.approx(2 * math.pi, rel=1e-9)
    assert np.isnan(periods[1]) and np.isnan(periods[2])


def test_score_and_clone():
    X = np.stack([np.array([[0.0, -1.0], [1.0, 0.0]]), np.array([[1.0, 0.0], [0.0, -1.0]])])
    y = np.array(["Knotted", "InjectiveLine"])
    est = KnottedSubgroupClassifier(family="sl2R")
    assert est.fit(X, y).score(X, y) == 1.0
    other = clone(est).set_params(qmax=10)
    assert other.get_params()["qmax"] == 10 and other.family == "sl2R"


def test_unfitted_and_shape_errors():
    est = KnottedSubgroupClassifier(family="so")
    with pytest.raises(Exception):
        est.predict(np.zeros((1, 3, 3)))
    est.fit(np.zeros((1, 3, 3)))
    with pytest.raises(InvalidInputError):
        est.predict(np.zeros((1, 4, 4)))
    with pytest.raises(InvalidInputError):
        est.predict(np.eye(3)[None])  # not skew


@pytest.mark.parametrize("bad", [np.zeros((0, 2, 2)), np.zeros((2, 2, 3)), np.full((1, 2, 2), np.nan),
                                 np.array([[["a"]]])])
def test_check_matrix_stack(bad):
    with pytest.raises(InvalidInputError):
        check_matrix_stack(bad)


def test_single_matrix_promoted():
    assert check_matrix_stack(np.zeros((2, 2))).shape == (1, 2, 2)
