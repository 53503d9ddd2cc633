"""Detector inefficiency: first-order Langevin branch expansion of a recipe.

With efficiency ``eta`` each no-click detector may have absorbed the
photon instead.  Keeping at most one absorption, the field-plus-environment
state is a sum of branches: branch 0 is the ideal chain with prefactor
``R**N``; branch ``k`` drops the ``k``-th creation operator (counted from
the vacuum end), carries ``R**(N-1)`` and is tagged with its own
environment excitation.  Environment excitations of different detectors are
orthogonal and each has weight ``1 - eta``.
"""

from dataclasses import dataclass
import warnings

import numpy as np

from .engineer import operator_chain
from .fock import FockState
from .validation import check_eta

TRUNCATION_ORDER = 1  # absorptions kept per branch
TRUSTED_ETA = 0.9


@dataclass(frozen=True, eq=False)
class LossBranches:
    ideal: FockState
    absorbed: tuple
    eta: float = 1.0

    @property
    def labels(self):
        """Environment label per branch: 0 for none, ``k`` for detector ``k``."""
        return tuple(range(len(self.absorbed) + 1))

    def norms2(self):
        return np.array([self.ideal.norm2] + [b.norm2 for b in self.absorbed])

    def absorbed_ratio(self):
        """``sum_k ||phi_k||^2 / ||phi_0||^2``."""
        n = self.norms2()
        return float(n[1:].sum() / n[0])


def branch_states(recipe, dim=None, eta=1.0):
    dim = recipe.meta.get("dim", recipe.workspace()) if dim is None else int(dim)
    R = recipe.reflectance
    N = recipe.n
    ideal = operator_chain(recipe.alphas, recipe.transmittance, dim)
    ideal = FockState(R**N * ideal.amplitudes, leakage=ideal.leakage)
    absorbed = []
    for k in range(1, N + 1):
        chain = operator_chain(recipe.alphas, recipe.transmittance, dim, skip=k)
        absorbed.append(FockState(R ** (N - 1) * chain.amplitudes, leakage=chain.leakage))
    return LossBranches(ideal, tuple(absorbed), check_eta(eta))


def fidelity_from_branches(branches, target, eta):
    """``<target| rho |target>`` for the branch mixture at efficiency ``eta``."""
    eta = check_eta(eta)
    phi0 = branches.ideal.amplitudes
    norm0 = branches.ideal.norm2
    absorbed = sum(b.norm2 for b in branches.absorbed)
    overlap = abs(np.vdot(target, phi0)) ** 2 / norm0
    return float(norm0 * overlap / (norm0 + (1.0 - eta) * absorbed))


def fidelity_with_loss(recipe, eta, dim=None):
    """Engineering fidelity with detector efficiency ``eta``.

    Values for ``eta < 0.9`` are computed but flagged with a
    ``RuntimeWarning``: second-order absorption terms are not modelled.
    """
    eta = check_eta(eta)
    if eta < TRUSTED_ETA:
        warnings.warn(
            f"eta={eta} is below {TRUSTED_ETA}; multi-absorption terms are neglected",
            RuntimeWarning,
            stacklevel=2,
        )
    branches = branch_states(recipe, dim, eta)
    target = np.zeros(branches.ideal.dim, dtype=np.complex128)
    target[: len(recipe.coeffs)] = recipe.coeffs
    target /= np.linalg.norm(target)
    return fidelity_from_branches(branches, target, eta)
