import numpy as np
import pytest

from tsrckit.fock import FockState


def random_state(rng, dim, support=None, normalized=True):
    support = dim if support is None else support
    amps = np.zeros(dim, dtype=np.complex128)
    amps[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    if normalized:
        amps /= np.linalg.norm(amps)
    return FockState(amps)


def ladder_matrices(dim):
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(np.complex128)
    return a, a.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
