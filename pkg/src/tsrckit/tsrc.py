"""Random-coefficient truncated states and seeded ensembles of them.

A state is ``sum_n r_n exp(i n theta) |n>`` for ``n = 0..N``, normalised,
with moduli ``r_n`` drawn i.i.d. from ``Uniform[0, 1)``.

Seeding
-------
Each spec seeds ``numpy.random.PCG64(SeedSequence(seed))``.  Ensemble
realization ``j`` uses ``derive_seed(seed, j)``: ``seed`` itself for
``j == 0`` and otherwise the first 64-bit word of
``SeedSequence(seed, spawn_key=(j,)).generate_state(1, uint64)``.
"""

from dataclasses import asdict, dataclass, replace
from enum import Enum
import math

import numpy as np

from .exceptions import ConfigInvalid, DegenerateDraw
from .fock import FockState

PRNG_ALGORITHM = f"numpy.random.PCG64/SeedSequence (numpy {np.__version__})"
SEED_DERIVATION = "SeedSequence(seed, spawn_key=(j,)).generate_state(1, uint64)[0]; j=0 -> seed"
DEGENERATE_R = 1e-12


class Distribution(str, Enum):
    UNIFORM_UNIT = "uniform-unit"


@dataclass(frozen=True)
class TsrcSpec:
    n: int
    theta: float = 0.0
    seed: int = 0
    distribution: Distribution = Distribution.UNIFORM_UNIT

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ConfigInvalid(f"N must be a non-negative integer, got {self.n!r}")
        if not math.isfinite(self.theta):
            raise ConfigInvalid(f"theta must be finite, got {self.theta!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigInvalid(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "distribution", Distribution(self.distribution))

    def to_dict(self):
        d = asdict(self)
        d["distribution"] = self.distribution.value
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            n=d["n"],
            theta=float(d.get("theta", 0.0)),
            seed=int(d.get("seed", 0)),
            distribution=d.get("distribution", Distribution.UNIFORM_UNIT.value),
        )


@dataclass(frozen=True)
class EnsembleSpec:
    base: TsrcSpec
    realizations: int = 30

    def __post_init__(self):
        if int(self.realizations) != self.realizations or self.realizations < 1:
            raise ConfigInvalid(f"realizations must be >= 1, got {self.realizations!r}")


def draw_moduli(spec):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    if spec.distribution is Distribution.UNIFORM_UNIT:
        return rng.random(spec.n + 1)
    raise ConfigInvalid(f"unsupported distribution {spec.distribution!r}")  # pragma: no cover


def generate_tsrc(spec, moduli=None):
    """Build the normalised state for ``spec``.

    Parameters
    ----------
    spec : TsrcSpec
    moduli : array-like, optional
        Explicit ``r_n`` values (length ``N + 1``) replacing the PRNG draw,
        e.g. an externally supplied digit sequence.

    Returns
    -------
    FockState
        ``dim == N + 1``; ``meta`` carries the spec, the PRNG id and ``r_N``.
    """
    if moduli is None:
        r = draw_moduli(spec)
        source = PRNG_ALGORITHM
    else:
        r = np.asarray(moduli, dtype=float)
        if r.shape != (spec.n + 1,):
            raise ConfigInvalid(f"expected {spec.n + 1} moduli, got shape {r.shape}")
        if np.any(r < 0) or not np.all(np.isfinite(r)):
            raise ConfigInvalid("moduli must be finite and non-negative")
        source = "explicit"
    if np.all(r < DEGENERATE_R):
        raise DegenerateDraw(f"all {spec.n + 1} moduli below {DEGENERATE_R}", seed=spec.seed)
    n = np.arange(spec.n + 1)
    coeffs = r * np.exp(1j * n * spec.theta)
    amps = coeffs / math.sqrt(float(np.sum(r * r)))
    meta = {"spec": spec.to_dict(), "prng": source, "r_top": float(r[-1])}
    return FockState(amps, meta=meta)


def derive_seed(seed, j):
    if j == 0:
        return int(seed)
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(j),))
    return int(ss.generate_state(1, np.uint64)[0])


def ensemble_specs(spec):
    return [replace(spec.base, seed=derive_seed(spec.base.seed, j)) for j in range(spec.realizations)]


def ensemble_states(spec):
    states = []
    for j, sub in enumerate(ensemble_specs(spec)):
        try:
            states.append(generate_tsrc(sub))
        except DegenerateDraw as exc:
            exc.context["realization"] = j
            raise
    return states
