"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .exceptions import BadEta, BadTransmittance, ConfigInvalid, NotNormalized

NORM_TOL = 1e-10


def check_amplitudes(amplitudes, *, ensure_2d=False):
    """Coerce ``amplitudes`` to a finite complex ndarray.

    Parameters
    ----------
    amplitudes : array-like
        Complex amplitudes, one state per row when ``ensure_2d`` is set.
    ensure_2d : bool, default=False
        Require a (n_states, dim) array instead of a single vector.

    Returns
    -------
    ndarray of complex128
    """
    arr = np.asarray(amplitudes, dtype=np.complex128)
    if ensure_2d:
        if arr.ndim == 1:
            raise ConfigInvalid(
                "expected a 2D array of amplitude rows, got a 1D vector; "
                "reshape with array.reshape(1, -1) for a single state"
            )
        if arr.ndim != 2:
            raise ConfigInvalid(f"expected a 2D array, got ndim={arr.ndim}")
    elif arr.ndim != 1:
        raise ConfigInvalid(f"expected a 1D amplitude vector, got ndim={arr.ndim}")
    if arr.shape[-1] < 1:
        raise ConfigInvalid("amplitude vector must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ConfigInvalid("amplitudes contain NaN or Inf")
    return arr


def check_normalized(amplitudes, tol=NORM_TOL):
    norm2 = float(np.vdot(amplitudes, amplitudes).real)
    if abs(norm2 - 1.0) > tol:
        raise NotNormalized(f"state norm^2 is {norm2!r}, expected 1", norm2=norm2)
    return norm2


def check_transmittance(T, *, allow_one=True):
    if not isinstance(T, numbers.Real) or not np.isfinite(T):
        raise BadTransmittance(f"transmittance must be a finite real, got {T!r}")
    upper_ok = T <= 1.0 if allow_one else T < 1.0
    if not (T > 0.0 and upper_ok):
        bound = "(0, 1]" if allow_one else "(0, 1)"
        raise BadTransmittance(f"transmittance {T!r} outside {bound}", T=float(T))
    return float(T)


def check_eta(eta):
    if not isinstance(eta, numbers.Real) or not (0.0 < eta <= 1.0):
        raise BadEta(f"detector efficiency {eta!r} outside (0, 1]")
    return float(eta)
