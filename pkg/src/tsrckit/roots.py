"""Simultaneous polynomial root finding (Aberth-Ehrlich) with Newton polish."""

import math

import numpy as np

from .exceptions import LeadingCoefficientZero, NoConvergence

LEADING_TOL = 1e-9
RESIDUAL_TOL = 1e-10
MAX_ITER = 500


def polyval(coeffs, z):
    """Evaluate ``sum_n coeffs[n] * z**n`` (ascending order) by Horner's rule."""
    acc = np.zeros_like(np.asarray(z, dtype=np.complex128))
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _polyval_deriv(coeffs, z):
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def root_bound(coeffs):
    """Cauchy bound on root moduli."""
    c = np.asarray(coeffs, dtype=np.complex128)
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1]))) if len(c) > 1 else 0.0


def _initial_guesses(coeffs):
    """Starting points on circles read off the Newton polygon.

    Each edge of the upper convex hull of ``(k, log|c_k|)`` spanning
    ``m`` indices carries ``m`` roots of roughly the same modulus, so
    widely separated root scales each get their own circle.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    degree = len(c) - 1
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(c))
    pts = [k for k in range(degree + 1) if np.isfinite(logs[k])]
    hull = []
    for k in pts:
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j if it lies on or below the chord i -> k
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    guesses = []
    for i, j in zip(hull, hull[1:]):
        m = j - i
        radius = math.exp((logs[i] - logs[j]) / m)
        angles = 2.0 * math.pi * np.arange(m) / m + 0.4 + 0.7 * len(guesses)
        guesses.extend(radius * np.exp(1j * angles))
    return np.array(guesses, dtype=np.complex128)


def _aberth(coeffs):
    z = _initial_guesses(coeffs)
    for _ in range(MAX_ITER):
        with np.errstate(all="ignore"):
            p, dp = _polyval_deriv(coeffs, z)
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= 4e-16 * np.maximum(np.abs(z), 1e-300)):
            break
    if not np.all(np.isfinite(z)):
        raise NoConvergence("Aberth iteration diverged")
    return z


def _polish(coeffs, z, steps=3):
    for _ in range(steps):
        with np.errstate(all="ignore"):
            p, dp = _polyval_deriv(coeffs, z)
            corr = p / dp
        ok = np.isfinite(corr)
        trial = np.where(ok, z - corr, z)
        # keep a Newton step only when it does not worsen the residual
        better = np.abs(polyval(coeffs, trial)) <= np.abs(p)
        z = np.where(better, trial, z)
    return z


def _sort_key(z):
    return (float(f"{abs(z):.9g}"), float(np.angle(z)))


def characteristic_roots(coeffs):
    """Roots of ``sum_n coeffs[n] * beta**n``.

    Parameters
    ----------
    coeffs : array-like of complex
        Coefficients in ascending powers; ``coeffs[-1]`` is the leading one.

    Returns
    -------
    ndarray of complex128
        ``len(coeffs) - 1`` roots sorted by modulus, then phase.

    Raises
    ------
    LeadingCoefficientZero
        If ``|coeffs[-1]| < 1e-9``.
    NoConvergence
        If a root fails the residual bound after polishing.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or len(c) == 0:
        raise ValueError("coeffs must be a non-empty 1D sequence")
    if abs(c[-1]) < LEADING_TOL:
        raise LeadingCoefficientZero(f"|leading coefficient| = {abs(c[-1]):.3e} < {LEADING_TOL}")
    degree = len(c) - 1
    if degree == 0:
        return np.zeros(0, dtype=np.complex128)

    # exact zero roots
    zeros = 0
    while zeros < degree and c[zeros] == 0:
        zeros += 1
    reduced = c[zeros:]
    monic = reduced / reduced[-1]
    found = np.zeros(0, dtype=np.complex128)
    if len(reduced) > 1:
        found = _polish(reduced, _aberth(monic))
    roots = np.concatenate([np.zeros(zeros, dtype=np.complex128), found])

    total = float(np.sum(np.abs(c)))
    resid = np.abs(polyval(c, roots))
    bound = RESIDUAL_TOL * total * np.maximum(1.0, np.abs(roots)) ** degree
    if not np.all(resid <= bound):
        worst = int(np.argmax(resid / bound))
        raise NoConvergence(
            f"root {roots[worst]:.6g} has residual {resid[worst]:.3e} > {bound[worst]:.3e}",
            degree=degree,
        )
    return np.array(sorted(roots, key=_sort_key), dtype=np.complex128)


def reconstruct(leading, roots):
    """Coefficients (ascending) of ``leading * prod_k (beta - roots[k])``."""
    poly = np.array([1.0 + 0j])
    for r in roots:
        poly = np.convolve(poly, np.array([-r, 1.0]))
    return leading * poly
