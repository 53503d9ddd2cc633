"""scikit-learn style wrappers so the toolkit slots into pipelines.

``PhotonStatistics`` maps amplitude rows to observable features;
``RecipePlanner`` fits an engineering recipe to one target state and
predicts the lossy-detector fidelity for a list of efficiencies.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import engineer, lossy, stats
from .fock import FockState
from .validation import check_amplitudes


class PhotonStatistics(TransformerMixin, BaseEstimator):
    """Transform state amplitudes into photon and quadrature statistics.

    Parameters
    ----------
    observables : tuple of str, default=all
        Subset of ``stats.OBSERVABLES`` to emit, in order.
    normalize : bool, default=True
        Rescale each row to unit norm before evaluating.
    """

    def __init__(self, observables=stats.OBSERVABLES, normalize=True):
        self.observables = observables
        self.normalize = normalize

    def fit(self, X, y=None):
        X = check_amplitudes(X, ensure_2d=True)
        unknown = set(self.observables) - set(stats.OBSERVABLES)
        if unknown:
            raise ValueError(f"unknown observables {sorted(unknown)}")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_amplitudes(X, ensure_2d=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} levels, fitted with {self.n_features_in_}")
        out = np.empty((X.shape[0], len(self.observables)))
        for i, row in enumerate(X):
            if self.normalize:
                row = row / np.linalg.norm(row)
            rep = stats.report(FockState(row))
            out[i] = [getattr(rep, name) for name in self.observables]
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.observables, dtype=object)


class RecipePlanner(BaseEstimator):
    """Fit a conditional beam-splitter recipe to a target state.

    Parameters
    ----------
    t_grid : (lo, hi, step)
        Transmittance search grid.
    fixed_t : float or None
        Skip the search and use this transmittance.
    max_dim : int
        Largest Fock workspace allowed.

    Attributes
    ----------
    recipe_ : engineer.Recipe
    transmittance_ : float
    success_prob_ : float
    """

    def __init__(self, t_grid=engineer.DEFAULT_T_GRID, fixed_t=None, max_dim=engineer.MAX_DIM):
        self.t_grid = t_grid
        self.fixed_t = fixed_t
        self.max_dim = max_dim

    def fit(self, X, y=None):
        target = X if isinstance(X, FockState) else FockState(check_amplitudes(X))
        self.recipe_ = engineer.plan(target, t_grid=self.t_grid, fixed_t=self.fixed_t, max_dim=self.max_dim)
        self.transmittance_ = self.recipe_.transmittance
        self.success_prob_ = self.recipe_.success_prob
        self.n_features_in_ = target.dim
        return self

    def predict(self, X):
        """Fidelity for each detector efficiency in ``X``."""
        check_is_fitted(self, "recipe_")
        etas = np.atleast_1d(np.asarray(X, dtype=float)).ravel()
        return np.array([lossy.fidelity_with_loss(self.recipe_, float(e)) for e in etas])

    def score(self, X=None, y=None):
        """Two-mode simulation fidelity of the fitted recipe."""
        check_is_fitted(self, "recipe_")
        return float(self.recipe_.meta["fidelity"])
