import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from tsrckit.engineer import plan
from tsrckit.estimators import PhotonStatistics, RecipePlanner
from tsrckit.fock import FockState, coherent
from tsrckit.lossy import fidelity_with_loss
from tsrckit.stats import OBSERVABLES, report


def test_transform_matches_report(rng):
    X = rng.normal(size=(5, 12)) + 1j * rng.normal(size=(5, 12))
    out = PhotonStatistics().fit_transform(X)
    assert out.shape == (5, len(OBSERVABLES))
    for row, amps in zip(out, X):
        rep = report(FockState(amps / np.linalg.norm(amps)))
        np.testing.assert_allclose(row, [getattr(rep, k) for k in OBSERVABLES], rtol=1e-12)


def test_observable_subset_and_names():
    X = coherent(1.5, 40).amplitudes[None, :]
    est = PhotonStatistics(observables=("mean_n", "g2")).fit(X)
    assert list(est.get_feature_names_out()) == ["mean_n", "g2"]
    np.testing.assert_allclose(est.transform(X), [[2.25, 1.0]], rtol=1e-8)


def test_get_params_and_clone():
    est = PhotonStatistics(observables=("entropy",), normalize=False)
    assert est.get_params() == {"observables": ("entropy",), "normalize": False}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    planner = RecipePlanner(fixed_t=0.8, max_dim=200)
    assert clone(planner).get_params()["fixed_t"] == 0.8


def test_unknown_observable():
    with pytest.raises(ValueError, match="unknown"):
        PhotonStatistics(observables=("bogus",)).fit(np.ones((1, 3)))


def test_unfitted_and_width_mismatch():
    with pytest.raises(NotFittedError):
        PhotonStatistics().transform(np.ones((1, 3)))
    est = PhotonStatistics().fit(np.ones((1, 3)))
    with pytest.raises(ValueError, match="levels"):
        est.transform(np.ones((1, 4)))


def test_in_pipeline(rng):
    X = rng.normal(size=(6, 10)) + 0j
    out = make_pipeline(PhotonStatistics(), StandardScaler()).fit_transform(X)
    assert out.shape == (6, len(OBSERVABLES))


def test_planner_matches_functional_api():
    amps = np.array([0.2, 0.5j, -0.3 + 0.4j, 0.6])
    target = FockState(amps / np.linalg.norm(amps))
    est = RecipePlanner(fixed_t=0.85).fit(target.amplitudes)
    ref = plan(target, fixed_t=0.85)
    np.testing.assert_allclose(est.recipe_.alphas, ref.alphas)
    assert est.transmittance_ == 0.85
    assert est.score() >= 1 - 1e-10
    etas = [0.9, 0.95, 1.0]
    np.testing.assert_allclose(est.predict(etas), [fidelity_with_loss(ref, e) for e in etas])
