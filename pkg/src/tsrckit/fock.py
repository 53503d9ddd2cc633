"""Truncated single-mode Fock space: state container and ladder primitives.

States are dense complex vectors over ``|0>, ..., |dim-1>``.  Operations
that push amplitude past the top level record the discarded norm squared in
``FockState.leakage`` instead of silently renormalising.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import gammaln

from .exceptions import DimMismatch, TruncationOverflow, ZeroNorm
from .validation import check_amplitudes, check_transmittance

LEAKAGE_TOL = 1e-8
ZERO_NORM = 1e-300


@dataclass(frozen=True, eq=False)
class FockState:
    """Immutable amplitude vector in a truncated Fock space.

    Attributes
    ----------
    amplitudes : ndarray of complex128, shape (dim,)
        Coefficient of ``|n>`` at index ``n``.
    leakage : float
        Norm squared discarded by the operation that produced this state.
    """

    amplitudes: np.ndarray
    leakage: float = 0.0
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        amps = check_amplitudes(self.amplitudes).copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if not self.leakage >= 0.0:
            raise ValueError(f"leakage must be non-negative, got {self.leakage!r}")

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    @property
    def norm2(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol=1e-12):
        return abs(self.norm2 - 1.0) <= tol

    def padded(self, dim):
        """Return a copy embedded in a larger workspace (zero padding)."""
        if dim < self.dim:
            raise DimMismatch(f"cannot pad dim {self.dim} down to {dim}")
        out = np.zeros(dim, dtype=np.complex128)
        out[: self.dim] = self.amplitudes
        return FockState(out, meta=dict(self.meta))

    def top_index(self, rtol=1e-14):
        """Highest occupied level, ignoring entries below ``rtol * max|a_n|``."""
        mag = np.abs(self.amplitudes)
        peak = mag.max()
        if peak == 0.0:
            raise ZeroNorm("state has no occupied level")
        return int(np.flatnonzero(mag > rtol * peak)[-1])


def fock(n, dim):
    """Number state ``|n>`` in a ``dim``-level workspace."""
    if not 0 <= n < dim:
        raise ValueError(f"level {n} outside workspace of dim {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return FockState(amps)


def vacuum(dim):
    return fock(0, dim)


def coherent(alpha, dim):
    """Truncated, renormalised coherent state ``|alpha>``."""
    n = np.arange(dim)
    amps = _coherent_coefficients(complex(alpha), n)
    return normalize(FockState(amps))


def _coherent_coefficients(beta, n):
    # e^{-|b|^2/2} b^n / sqrt(n!) evaluated in log space
    r = abs(beta)
    out = np.zeros(n.shape, dtype=np.complex128)
    if r == 0.0:
        out[n == 0] = 1.0
        return out
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(beta))


def normalize(state):
    norm2 = state.norm2
    if norm2 <= ZERO_NORM:
        raise ZeroNorm(f"cannot normalise a state with norm^2={norm2!r}")
    return FockState(state.amplitudes / math.sqrt(norm2), meta=dict(state.meta))


def inner(a, b):
    """Return ``<a|b>``."""
    if a.dim != b.dim:
        raise DimMismatch(f"inner product of dim {a.dim} and dim {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply_creation(state):
    """Apply the creation operator; the top level falls off into ``leakage``."""
    amps = state.amplitudes
    dim = state.dim
    out = np.zeros(dim, dtype=np.complex128)
    out[1:] = np.sqrt(np.arange(1, dim)) * amps[:-1]
    leak = float(abs(amps[-1]) ** 2 * dim)
    return FockState(out, leakage=leak)


def apply_annihilation(state):
    amps = state.amplitudes
    out = np.zeros(state.dim, dtype=np.complex128)
    out[:-1] = np.sqrt(np.arange(1, state.dim)) * amps[1:]
    return FockState(out)


def apply_attenuation(state, T):
    """Apply ``T**n`` (conditional, non-unitary)."""
    T = check_transmittance(T)
    weights = T ** np.arange(state.dim, dtype=float)
    return FockState(state.amplitudes * weights)


def _laguerre_table(x, size):
    """``L_j^{(k)}(x)`` for ``j, k < size`` as (values, log_scale).

    Three-term recurrence in ``j``, vectorised over ``k``; columns are
    rescaled on the fly so the true value is ``values * exp(log_scale)``.
    """
    k = np.arange(size, dtype=float)
    values = np.empty((size, size))
    log_scale = np.zeros((size, size))
    prev = np.ones(size)
    scale = np.zeros(size)
    values[0] = prev
    if size == 1:
        return values, log_scale
    cur = 1.0 + k - x
    values[1] = cur
    for j in range(1, size - 1):
        nxt = ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            factor = np.abs(cur[big])
            cur[big] /= factor
            prev[big] /= factor
            scale[big] += np.log(factor)
        values[j + 1] = cur
        log_scale[j + 1] = scale
    return values, log_scale


def displacement_matrix(beta, dim):
    """Matrix ``<m|D(beta)|n>`` for ``m, n < dim``.

    Built from the associated-Laguerre closed form; the factorial ratio,
    the power of ``|beta|``, the Gaussian factor and the Laguerre scale
    are combined in log space so large indices neither overflow nor
    underflow prematurely.
    """
    beta = complex(beta)
    if beta == 0:
        return np.eye(dim, dtype=np.complex128)
    x = abs(beta) ** 2
    m, n = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    lo = np.minimum(m, n)
    k = np.abs(m - n)
    values, log_scale = _laguerre_table(x, dim)
    logmag = (
        0.5 * (gammaln(lo + 1) - gammaln(lo + k + 1))
        + k * math.log(abs(beta))
        - 0.5 * x
        + log_scale[lo, k]
    )
    # (-conj(beta))^k above the diagonal, beta^k on and below it
    phase = np.where(m >= n, np.exp(1j * k * np.angle(beta)), (-1.0) ** k * np.exp(-1j * k * np.angle(beta)))
    return np.exp(logmag) * phase * values[lo, k]


def displace(state, beta):
    """Apply ``D(beta)`` inside the workspace.

    Raises
    ------
    TruncationOverflow
        If more than ``LEAKAGE_TOL`` of the (relative) norm leaves the workspace.
    """
    beta = complex(beta)
    if beta == 0:
        return FockState(state.amplitudes)
    out = displacement_matrix(beta, state.dim) @ state.amplitudes
    before = state.norm2
    leak = max(before - float(np.vdot(out, out).real), 0.0)
    if before > 0 and leak > LEAKAGE_TOL * before:
        raise TruncationOverflow(
            f"D({beta:.4g}) leaks {leak / before:.3e} of the norm at dim={state.dim}",
            dim=state.dim,
            beta=[beta.real, beta.imag],
        )
    return FockState(out, leakage=leak)


def coherent_overlap(state, beta):
    """Return ``<beta|psi>``; exact because ``psi`` lives inside the workspace."""
    n = np.arange(state.dim)
    bra = _coherent_coefficients(complex(beta), n)
    return complex(np.vdot(bra, state.amplitudes))


def workspace_dim(n_top, max_displacement):
    """Workspace size for a pipeline whose displacements are at most ``max_displacement``.

    An ``n``-photon component spreads like a coherent amplitude of
    ``sqrt(n)``, so the two are added before allowing six standard
    deviations around the mean photon number.
    """
    b = float(max_displacement) + math.sqrt(n_top)
    return int(n_top) + 1 + math.ceil(b * b + 6.0 * b) + 8


def state_to_dict(state, meta=None):
    payload = {
        "dim": state.dim,
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes],
        "meta": dict(state.meta) if meta is None else meta,
    }
    return payload


def state_from_dict(payload):
    amps = np.array([complex(re, im) for re, im in payload["amplitudes"]], dtype=np.complex128)
    if len(amps) != int(payload["dim"]):
        raise DimMismatch(f"state file declares dim {payload['dim']} but holds {len(amps)} amplitudes")
    return FockState(amps, meta=dict(payload.get("meta", {})))
