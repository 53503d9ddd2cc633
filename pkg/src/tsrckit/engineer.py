"""Conditional photon-addition recipes for finite Fock superpositions.

A target ``sum_{n<=N} C_n |n>`` factors as ``prod_k (a^+ - conj(beta_k)) |0>``
up to a constant, where the ``beta_k`` solve
``sum_n conj(C_n) / sqrt(n!) * beta**n = 0``.  The factored form is produced
by the chain

    D(alpha_{N+1}) a^+ T^n D(alpha_N) ... a^+ T^n D(alpha_1) |0>

in which every ``a^+ T^n`` is a beam splitter of amplitude transmittance
``T`` fed by a one-photon ancilla whose output port registers no photon.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .exceptions import (
    ConfigInvalid,
    LeadingCoefficientZero,
    TruncationOverflow,
    VerificationFailed,
    ZeroProbability,
)
from .fock import (
    LEAKAGE_TOL,
    FockState,
    apply_attenuation,
    apply_creation,
    displace,
    normalize,
    vacuum,
    workspace_dim,
)
from .roots import LEADING_TOL, characteristic_roots, polyval
from .validation import check_normalized, check_transmittance

DEFAULT_T_GRID = (0.5, 0.99, 0.001)
MAX_DIM = 600
VERIFY_TOL = 1e-6
ZERO_PROB = 1e-300


@dataclass(frozen=True, eq=False)
class Recipe:
    """Engineering plan for one target state.

    ``alphas[0]`` is the displacement applied to the vacuum first and
    ``alphas[-1]`` the final one, so ``len(alphas) == len(roots) + 1``.
    """

    coeffs: np.ndarray
    roots: np.ndarray
    alphas: np.ndarray
    transmittance: float
    success_prob: float = math.nan
    residual: float = 0.0
    meta: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return len(self.roots)

    @property
    def reflectance(self):
        return math.sqrt(1.0 - self.transmittance**2)

    def max_displacement(self):
        """Largest coherent amplitude the chain passes through.

        Besides the individual ``alpha`` and ``beta`` this tracks the
        running centre ``c <- T c + alpha`` (attenuation shrinks it, the
        next displacement shifts it), which is what sets the workspace.
        """
        mags = [0.0, *np.abs(self.alphas), *np.abs(self.roots)]
        centre = 0.0j
        for k, a in enumerate(self.alphas):
            centre = (self.transmittance * centre if k else 0.0) + a
            mags.append(abs(centre))
        return float(max(mags))

    def workspace(self):
        return workspace_dim(self.n, self.max_displacement())

    def to_dict(self):
        def pairs(z):
            return [[float(v.real), float(v.imag)] for v in z]

        return {
            "coeffs": pairs(self.coeffs),
            "roots": pairs(self.roots),
            "alphas": pairs(self.alphas),
            "transmittance": float(self.transmittance),
            "success_prob": float(self.success_prob),
            "residual": float(self.residual),
        }

    @classmethod
    def from_dict(cls, d):
        def cplx(rows):
            return np.array([complex(re, im) for re, im in rows], dtype=np.complex128)

        recipe = cls(
            coeffs=cplx(d["coeffs"]),
            roots=cplx(d["roots"]),
            alphas=cplx(d["alphas"]),
            transmittance=float(d["transmittance"]),
            success_prob=float(d.get("success_prob", math.nan)),
            residual=float(d.get("residual", 0.0)),
        )
        if len(recipe.alphas) != recipe.n + 1 or len(recipe.coeffs) != recipe.n + 1:
            raise ConfigInvalid("recipe needs N roots, N+1 alphas and N+1 coefficients")
        return recipe


def polynomial_coefficients(coeffs):
    """Coefficients whose roots are the ``beta_k`` of the factored target.

    Scaled to unit max-modulus so the leading-coefficient test is relative.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    n = np.arange(len(c))
    poly = np.conj(c) * np.exp(-0.5 * gammaln(n + 1))
    return poly / np.abs(poly).max()


def displacement_parameters(roots, T):
    """Displacements ``alpha_1 .. alpha_{N+1}`` for roots ``beta_1 .. beta_N``.

    ``alpha_k = T**(N-k+1) (beta_{k-1} - beta_k)`` for ``k = 2..N``,
    ``alpha_{N+1} = beta_N`` and ``alpha_1 = -sum_l T**(-l) alpha_{l+1}``.
    """
    T = check_transmittance(T, allow_one=False)
    beta = np.asarray(roots, dtype=np.complex128)
    N = len(beta)
    alphas = np.zeros(N + 1, dtype=np.complex128)
    if N == 0:
        return alphas
    alphas[N] = beta[N - 1]
    for k in range(2, N + 1):
        alphas[k - 1] = T ** (N - k + 1) * (beta[k - 2] - beta[k - 1])
    alphas[0] = -sum(T ** (-l) * alphas[l] for l in range(1, N + 1))
    return alphas


def product_form(roots, dim):
    """Unnormalised ``prod_k (a^+ - conj(beta_k)) |0>`` built from ladder steps."""
    state = vacuum(dim)
    for beta in roots:
        raised = apply_creation(state)
        state = FockState(raised.amplitudes - np.conj(beta) * state.amplitudes, leakage=raised.leakage)
    return state


def _check_leak(state, before, where):
    if before > 0 and state.leakage > LEAKAGE_TOL * before:
        raise TruncationOverflow(
            f"{where}: {state.leakage / before:.3e} of the norm left the workspace at dim={state.dim}",
            dim=state.dim,
        )


def operator_chain(alphas, T, dim, skip=None):
    """Unnormalised chain ``D(alpha_{N+1}) a^+ T^n ... a^+ T^n D(alpha_1)|0>``.

    No reflectance prefactor is applied.  ``skip`` (1-based, counted from
    the ``D(alpha_1)`` end) omits that step's creation operator.
    """
    alphas = np.asarray(alphas, dtype=np.complex128)
    state = displace(vacuum(dim), alphas[0])
    for k in range(1, len(alphas)):
        state = apply_attenuation(state, T)
        if k != skip:
            before = state.norm2
            state = apply_creation(state)
            _check_leak(state, before, f"creation step {k}")
        state = displace(state, alphas[k])
    return state


@lru_cache(maxsize=64)
def _addition_amplitudes(T, dim):
    """``<n, 0| U |n-1, 1>`` for ``n = 1..dim``, with ``U`` the two-mode
    rotation ``exp(theta (a^+ b - a b^+))`` and ``cos(theta) = T``.

    Each total-photon block is finite, so its exponential is exact.  The
    generator is a real antisymmetric tridiagonal matrix; conjugating by
    ``diag(i**k)`` turns it into ``-i H`` with ``H`` real symmetric, so one
    tridiagonal eigensolve per block gives the entry.
    """
    theta = math.acos(T)
    out = np.empty(dim)
    for n in range(1, dim + 1):
        # basis |k, n-k>, k = signal photons
        k = np.arange(n)
        hop = np.sqrt((k + 1.0) * (n - k))
        lam, vec = eigh_tridiagonal(np.zeros(n + 1), hop)
        entry = 1j * np.sum(vec[n] * vec[n - 1] * np.exp(-1j * theta * lam))
        out[n - 1] = entry.real
    out.setflags(write=False)
    return out


def beam_splitter_addition(state, T):
    """Mix ``state`` with a one-photon ancilla and keep the no-click branch.

    Returns the unnormalised signal state; its squared norm is the
    post-selection probability for a normalised input.
    """
    amps = _addition_amplitudes(float(T), state.dim)
    out = np.zeros(state.dim, dtype=np.complex128)
    out[1:] = amps[:-1] * state.amplitudes[:-1]
    leak = float(abs(amps[-1] * state.amplitudes[-1]) ** 2)
    return FockState(out, leakage=leak)


def simulate_recipe(recipe, dim=None):
    """Run the recipe step by step with an explicit two-mode beam splitter.

    Returns
    -------
    state : FockState
        Normalised conditional output.
    probability : float
        Product of the per-step no-click probabilities.
    """
    dim = recipe.workspace() if dim is None else int(dim)
    T = check_transmittance(recipe.transmittance, allow_one=False) if recipe.n else recipe.transmittance
    state = displace(vacuum(dim), recipe.alphas[0])
    prob = 1.0
    for k in range(1, recipe.n + 1):
        out = beam_splitter_addition(state, T)
        _check_leak(out, state.norm2, f"beam splitter step {k}")
        p_step = out.norm2
        if p_step < ZERO_PROB:
            raise ZeroProbability(f"step {k} post-selection probability {p_step:.3e}", step=k)
        prob *= p_step
        state = displace(normalize(out), recipe.alphas[k])
    return normalize(state), prob


def _taylor_shift(p, a):
    """Coefficients of ``p(z + a)`` (ascending powers)."""
    q = np.array(p, dtype=np.complex128)
    n = len(q) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            q[j] += a * q[j + 1]
    return q


def analytic_chain(alphas, T):
    """Operator chain in the analytic (Bargmann) representation.

    A state ``s p(a^+) exp(c a^+)|0>`` stays in that form: ``D(alpha)``
    shifts ``p(z) -> p(z - conj(alpha))``, adds ``alpha`` to ``c`` and
    multiplies ``s`` by ``exp(-|alpha|^2/2 - c conj(alpha))``; ``T**n``
    rescales ``z -> T z``; ``a^+`` multiplies by ``z``.  With the recipe's
    displacements the final ``c`` vanishes, leaving a polynomial state
    with no truncation at all.

    Returns
    -------
    log_s : complex
        Logarithm of the scalar prefactor.
    poly : ndarray of complex128
        ``p`` in ascending powers; Fock amplitudes are ``s p_n sqrt(n!)``.
    """
    alphas = np.asarray(alphas, dtype=np.complex128)
    log_s = -0.5 * abs(alphas[0]) ** 2
    c = alphas[0]
    poly = np.ones(1, dtype=np.complex128)
    for alpha in alphas[1:]:
        c = T * c
        poly = poly * T ** np.arange(len(poly))
        poly = np.concatenate([[0.0], poly])
        log_s += -0.5 * abs(alpha) ** 2 - c * np.conj(alpha)
        poly = _taylor_shift(poly, -np.conj(alpha))
        c = c + alpha
    scale = 1.0 + float(np.abs(alphas).sum())
    if abs(c) > 1e-9 * scale:
        raise ValueError(f"displacements leave a residual coherent centre {c:.3e}")
    return complex(log_s), poly


def analytic_probability(alphas, T):
    """``R**(2N)`` times the squared norm of the chain, evaluated exactly."""
    log_s, poly = analytic_chain(alphas, T)
    n = np.arange(len(poly))
    mag = np.abs(poly)
    peak = mag.max()
    if peak == 0.0:
        return 0.0
    log_norm2 = 2 * log_s.real + 2 * math.log(peak) + math.log(np.sum((mag / peak) ** 2 * np.exp(gammaln(n + 1))))
    N = len(alphas) - 1
    return math.exp(N * math.log1p(-T * T) + log_norm2)


def chain_probability(recipe, dim=None):
    """Squared norm of ``R**N`` times the operator chain."""
    dim = recipe.workspace() if dim is None else int(dim)
    chain = operator_chain(recipe.alphas, recipe.transmittance, dim)
    return recipe.reflectance ** (2 * recipe.n) * chain.norm2


def success_probability(recipe, dim=None, method="oracle"):
    """Probability that every post-selection in the recipe succeeds.

    ``method="oracle"`` multiplies the two-mode post-selection
    probabilities; ``method="chain"`` evaluates the single-mode operator
    chain with its reflectance prefactor; ``method="analytic"`` evaluates
    the same chain without truncation.  All three agree to rounding.
    """
    if method == "oracle":
        return simulate_recipe(recipe, dim)[1]
    if method == "chain":
        return chain_probability(recipe, dim)
    if method == "analytic":
        return analytic_probability(recipe.alphas, recipe.transmittance)
    raise ConfigInvalid(f"unknown method {method!r}")


def _grow(fn, dim, max_dim):
    while True:
        try:
            return fn(dim)
        except TruncationOverflow:
            if dim >= max_dim:
                raise
            dim = min(max_dim, int(math.ceil(dim * 1.5)))


def _probability_at(roots, coeffs, T, max_dim):
    """Success probability at ``T``; zero when verification would need more than ``max_dim`` levels."""
    alphas = displacement_parameters(roots, T)
    if Recipe(coeffs, roots, alphas, T).workspace() > max_dim:
        return 0.0
    return analytic_probability(alphas, T)


def _parse_grid(t_grid):
    lo, hi, step = (float(v) for v in t_grid)
    if not (0.0 < lo < hi < 1.0) or step <= 0.0:
        raise ConfigInvalid(f"t_grid needs 0 < lo < hi < 1 and step > 0, got {t_grid!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = lo + step * np.arange(count)
    if hi - grid[-1] > 1e-12:
        grid = np.append(grid, hi)
    return grid


def optimize_transmittance(coeffs, t_grid=DEFAULT_T_GRID, max_dim=MAX_DIM, roots=None):
    """Transmittance maximising the success probability.

    A grid scan picks the best point, then a golden-section search inside
    the neighbouring grid cells refines it to ~1e-4 in ``T``.  A best point
    on the grid edge is returned as is.

    Returns
    -------
    (T_opt, P_opt) : tuple of float
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if roots is None:
        roots = characteristic_roots(polynomial_coefficients(c))
    grid = _parse_grid(t_grid)
    probs = np.array([_probability_at(roots, c, float(T), max_dim) for T in grid])
    if not np.any(probs > 0.0):
        raise TruncationOverflow(f"no grid transmittance fits in max_dim={max_dim}")
    best = int(np.argmax(probs))
    if best == 0 or best == len(grid) - 1:
        return float(grid[best]), float(probs[best])

    def cost(T):
        p = _probability_at(roots, c, float(T), max_dim)
        return math.inf if p <= 0.0 else -math.log(p)

    res = minimize_scalar(
        cost,
        bracket=(grid[best - 1], grid[best], grid[best + 1]),
        method="golden",
        options={"xtol": 2e-5},
    )
    if res.fun < cost(grid[best]):
        return float(res.x), float(math.exp(-res.fun))
    return float(grid[best]), float(probs[best])


def plan(target, t_grid=DEFAULT_T_GRID, fixed_t=None, max_dim=MAX_DIM):
    """Build and verify a recipe for ``target``.

    Parameters
    ----------
    target : FockState
        Normalised target; its highest occupied level sets ``N``.
    t_grid : (lo, hi, step)
        Search grid for the transmittance when ``fixed_t`` is None.
    fixed_t : float, optional
        Use this transmittance instead of optimising.
    max_dim : int
        Largest workspace the planner may allocate.

    Raises
    ------
    LeadingCoefficientZero
        If ``|C_N| < 1e-9``.
    VerificationFailed
        If the two-mode simulation misses the target by more than 1e-6.
    """
    check_normalized(target.amplitudes)
    N = target.top_index()
    coeffs = np.array(target.amplitudes[: N + 1])
    if abs(coeffs[-1]) < LEADING_TOL:
        raise LeadingCoefficientZero(f"|C_N| = {abs(coeffs[-1]):.3e} < {LEADING_TOL}", n=N)

    if N == 0:
        T = float(fixed_t) if fixed_t is not None else float(t_grid[0])
        return Recipe(coeffs, np.zeros(0, complex), np.zeros(1, complex), T, 1.0, 0.0, {"fidelity": 1.0})

    poly = polynomial_coefficients(coeffs)
    roots = characteristic_roots(poly)
    residual = float(np.max(np.abs(polyval(poly, roots))))
    if fixed_t is None:
        T, _ = optimize_transmittance(coeffs, t_grid, max_dim, roots=roots)
    else:
        T = check_transmittance(float(fixed_t), allow_one=False)
    alphas = displacement_parameters(roots, T)
    draft = Recipe(coeffs, roots, alphas, T, residual=residual)

    def verify(dim):
        out, prob = simulate_recipe(draft, dim)
        return dim, out, prob

    dim, out, prob = _grow(verify, min(draft.workspace(), max_dim), max_dim)
    ideal = np.zeros(dim, dtype=np.complex128)
    ideal[: N + 1] = coeffs
    fidelity = abs(np.vdot(ideal, out.amplitudes)) ** 2
    if fidelity < 1.0 - VERIFY_TOL:
        raise VerificationFailed(f"two-mode simulation fidelity {fidelity:.12f}", fidelity=fidelity)
    meta = {"fidelity": float(fidelity), "dim": dim}
    return Recipe(coeffs, roots, alphas, T, prob, residual, meta)


def format_table(recipe):
    """Plain-text table of ``k, |beta_k|, phi_beta, |alpha_k|, phi_alpha``.

    Phases are those of ``beta_k`` and ``alpha_k`` themselves, i.e. the
    conjugates read ``|z| exp(-i phi)``.
    """
    lines = [f"{'k':>3}  {'|beta_k|':>9}  {'phi_beta':>9}  {'|alpha_k|':>9}  {'phi_alpha':>9}"]
    for k, alpha in enumerate(recipe.alphas, start=1):
        if k <= recipe.n:
            beta = recipe.roots[k - 1]
            left = f"{abs(beta):9.3f}  {np.angle(beta):9.3f}"
        else:
            left = f"{'':9}  {'':9}"
        lines.append(f"{k:>3}  {left}  {abs(alpha):9.3f}  {np.angle(alpha):9.3f}")
    lines.append(f"T = {recipe.transmittance:.3f}   P = {recipe.success_prob:.3e}")
    return "\n".join(lines)
