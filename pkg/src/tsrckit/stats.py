"""Photon-counting, quadrature, entropy and phase-space observables."""

from dataclasses import dataclass, replace
import math

import numpy as np

from .exceptions import ConfigInvalid, VacuumUndefined
from .fock import _coherent_coefficients
from .tsrc import EnsembleSpec, ensemble_states
from .validation import check_normalized

VACUUM_MEAN = 1e-15
POISSON_DEAD_BAND = 1e-12
SQUEEZING_THRESHOLD = 0.5

OBSERVABLES = ("mean_n", "delta_n", "mandel_q", "g2", "x1_var", "x2_var", "entropy")
SWEEP_COLUMNS = ("n", "realization") + OBSERVABLES
ENSEMBLE_ROW = -1


@dataclass(frozen=True, eq=False)
class StatsReport:
    """Scalar observables of one normalised state.

    ``x1_var`` and ``x2_var`` hold quadrature standard deviations, as does
    ``delta_n`` for the photon number.  ``mandel_q`` and ``g2`` are NaN for
    the vacuum, where both are undefined.
    """

    p: np.ndarray
    mean_n: float
    delta_n: float
    mandel_q: float
    g2: float
    x1_var: float
    x2_var: float
    entropy: float

    @property
    def squeezed(self):
        return min(self.x1_var, self.x2_var) < SQUEEZING_THRESHOLD

    @property
    def statistics(self):
        """'sub-poissonian', 'poissonian' or 'super-poissonian'."""
        if math.isnan(self.mandel_q) or abs(self.mandel_q) <= POISSON_DEAD_BAND:
            return "poissonian"
        return "sub-poissonian" if self.mandel_q < 0 else "super-poissonian"

    def row(self):
        return [getattr(self, name) for name in OBSERVABLES]

    def to_dict(self):
        d = {name: float(getattr(self, name)) for name in OBSERVABLES}
        d["p"] = [float(x) for x in self.p]
        d["squeezed"] = bool(self.squeezed)
        d["statistics"] = self.statistics
        return d


@dataclass(frozen=True, eq=False)
class HusimiGrid:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    resolution: int
    values: np.ndarray  # (resolution, resolution), indexed [im, re]

    @property
    def re_axis(self):
        return np.linspace(self.re_min, self.re_max, self.resolution)

    @property
    def im_axis(self):
        return np.linspace(self.im_min, self.im_max, self.resolution)

    @property
    def cell_area(self):
        steps = max(self.resolution - 1, 1)
        return (self.re_max - self.re_min) / steps * (self.im_max - self.im_min) / steps

    def integral(self):
        return float(self.values.sum() * self.cell_area)

    def rows(self):
        re, im = np.meshgrid(self.re_axis, self.im_axis)
        return zip(re.ravel(), im.ravel(), self.values.ravel())


def _amps(state):
    amps = state.amplitudes
    check_normalized(amps)
    return amps


def _moments(p):
    n = np.arange(p.shape[0], dtype=float)
    mean = float(p @ n)
    second = float(p @ (n * n))
    return mean, second


def photon_distribution(state):
    amps = _amps(state)
    return np.abs(amps) ** 2


def mean_and_variance(state):
    """Return ``(<n>, Delta n)`` with ``Delta n`` the standard deviation."""
    mean, second = _moments(photon_distribution(state))
    return mean, math.sqrt(max(second - mean * mean, 0.0))


def _q_and_g2(mean, second):
    if mean <= VACUUM_MEAN:
        raise VacuumUndefined(f"<n> = {mean!r} is too small for Q or g2(0)")
    var = second - mean * mean
    return (var - mean) / mean, (second - mean) / (mean * mean)


def mandel_q(state):
    return _q_and_g2(*_moments(photon_distribution(state)))[0]


def g2_zero(state):
    return _q_and_g2(*_moments(photon_distribution(state)))[1]


def _ladder_moments(amps):
    # <a> and <a^2> from neighbouring amplitudes
    n = np.arange(1, amps.shape[0], dtype=float)
    a1 = complex(np.vdot(amps[:-1], np.sqrt(n) * amps[1:]))
    if amps.shape[0] > 2:
        pair = np.sqrt(n[:-1] * n[1:])
        a2 = complex(np.vdot(amps[:-2], pair * amps[2:]))
    else:
        a2 = 0j
    return a1, a2


def quadrature_variances(state):
    """Standard deviations of ``X1 = (a + a^+)/2`` and ``X2 = (a - a^+)/2i``."""
    amps = _amps(state)
    mean, _ = _moments(np.abs(amps) ** 2)
    a1, a2 = _ladder_moments(amps)
    x1_sq = (2.0 * a2.real + 2.0 * mean + 1.0) / 4.0
    x2_sq = (-2.0 * a2.real + 2.0 * mean + 1.0) / 4.0
    d1 = max(x1_sq - a1.real**2, 0.0)
    d2 = max(x2_sq - a1.imag**2, 0.0)
    return math.sqrt(d1), math.sqrt(d2)


def quadrature_second_moments(state):
    """``(<X1^2>, <X2^2>)``; their sum is ``<n> + 1/2``."""
    amps = _amps(state)
    mean, _ = _moments(np.abs(amps) ** 2)
    _, a2 = _ladder_moments(amps)
    return (2.0 * a2.real + 2.0 * mean + 1.0) / 4.0, (-2.0 * a2.real + 2.0 * mean + 1.0) / 4.0


def shannon_entropy(state):
    """``S = -sum P_n ln P_n`` over every level, with ``0 ln 0 = 0``."""
    p = photon_distribution(state)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def report(state):
    amps = _amps(state)
    p = np.abs(amps) ** 2
    mean, second = _moments(p)
    delta = math.sqrt(max(second - mean * mean, 0.0))
    try:
        q, g2 = _q_and_g2(mean, second)
    except VacuumUndefined:
        q = g2 = math.nan
    x1, x2 = quadrature_variances(state)
    nz = p[p > 0.0]
    entropy = float(-np.sum(nz * np.log(nz)))
    return StatsReport(p, mean, delta, q, g2, x1, x2, entropy)


def auto_window(state):
    mean, _ = mean_and_variance(state)
    half = 1.5 * (math.sqrt(mean) + 2.0)
    return (-half, half, -half, half)


def husimi(state, window="auto", resolution=101):
    """Evaluate ``Q(beta) = |<beta|psi>|^2 / pi`` on a square grid.

    Parameters
    ----------
    state : FockState
    window : "auto" or (re_min, re_max, im_min, im_max)
        The automatic window is centred on the origin with half-width
        ``1.5 * (sqrt(<n>) + 2)``.
    resolution : int
        Grid points per axis, endpoints included.
    """
    _amps(state)
    if int(resolution) != resolution or resolution < 2:
        raise ConfigInvalid(f"resolution must be an integer >= 2, got {resolution!r}")
    re_min, re_max, im_min, im_max = auto_window(state) if window == "auto" else map(float, window)
    if not (re_min < re_max and im_min < im_max):
        raise ConfigInvalid(f"degenerate husimi window {window!r}")
    re = np.linspace(re_min, re_max, resolution)
    im = np.linspace(im_min, im_max, resolution)
    betas = (re[None, :] + 1j * im[:, None]).ravel()
    n = np.arange(state.dim)
    values = np.empty(betas.shape[0])
    for i, beta in enumerate(betas):
        bra = _coherent_coefficients(beta, n)
        values[i] = abs(np.vdot(bra, state.amplitudes)) ** 2 / math.pi
    return HusimiGrid(re_min, re_max, im_min, im_max, int(resolution), values.reshape(resolution, resolution))


class Welford:
    """Running mean and variance of a fixed-length vector of observables."""

    def __init__(self, size):
        self.count = 0
        self.mean = np.zeros(size)
        self._m2 = np.zeros(size)

    def add(self, values):
        x = np.asarray(values, dtype=float)
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (x - self.mean)

    @property
    def variance(self):
        if self.count < 2:
            return np.zeros_like(self.mean)
        return self._m2 / (self.count - 1)


def ensemble_reports(spec):
    return [report(s) for s in ensemble_states(spec)]


def scaling_sweep(n_values, ensemble):
    """Single-run and ensemble-mean observables for each ``N``.

    Every ``N`` reuses the template's base seed, so realization ``j`` at
    different ``N`` shares the leading part of its random stream.

    Returns
    -------
    list of list
        Rows ordered by ``N``; for each ``N`` the single-run row
        (realization 0) precedes the ensemble-mean row (realization -1).
        Columns follow ``SWEEP_COLUMNS``.
    """
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ConfigInvalid("n_values must not be empty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigInvalid("n_values must be strictly ascending")
    rows = []
    for n in n_values:
        spec = EnsembleSpec(replace(ensemble.base, n=n), ensemble.realizations)
        acc = Welford(len(OBSERVABLES))
        single = None
        for j, rep in enumerate(ensemble_reports(spec)):
            values = rep.row()
            if j == 0:
                single = values
            acc.add(values)
        rows.append([n, 0] + [float(v) for v in single])
        rows.append([n, ENSEMBLE_ROW] + [float(v) for v in acc.mean])
    return rows
