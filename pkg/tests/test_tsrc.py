import numpy as np
import pytest

from tsrckit.exceptions import ConfigInvalid, DegenerateDraw
from tsrckit.stats import mean_and_variance, report
from tsrckit.tsrc import EnsembleSpec, TsrcSpec, derive_seed, ensemble_states, generate_tsrc


def test_n_zero_is_vacuum():
    for seed in range(5):
        state = generate_tsrc(TsrcSpec(0, theta=0.7, seed=seed))
        np.testing.assert_allclose(state.amplitudes, [1.0], atol=1e-15)


def test_deterministic():
    spec = TsrcSpec(25, theta=0.4, seed=123)
    np.testing.assert_array_equal(generate_tsrc(spec).amplitudes, generate_tsrc(spec).amplitudes)


def test_normalized_with_constant_phase_step():
    state = generate_tsrc(TsrcSpec(12, theta=0.9, seed=5))
    assert abs(state.norm2 - 1.0) <= 1e-12
    ratio = state.amplitudes[1:] / state.amplitudes[:-1]
    np.testing.assert_allclose(np.angle(ratio), np.angle(np.exp(0.9j)), atol=1e-12)


def test_records_top_modulus():
    state = generate_tsrc(TsrcSpec(4, seed=1))
    assert state.meta["r_top"] > 0
    assert state.meta["spec"]["n"] == 4


def test_explicit_moduli():
    state = generate_tsrc(TsrcSpec(2), moduli=[3.0, 0.0, 4.0])
    np.testing.assert_allclose(state.amplitudes, [0.6, 0, 0.8])


def test_degenerate_draw():
    with pytest.raises(DegenerateDraw):
        generate_tsrc(TsrcSpec(2), moduli=[0.0, 1e-13, 0.0])


@pytest.mark.parametrize("kwargs", [{"n": -1}, {"n": 2, "theta": float("inf")}, {"n": 2, "seed": -3}])
def test_bad_spec(kwargs):
    with pytest.raises(ConfigInvalid):
        TsrcSpec(**kwargs)


def test_spec_dict_round_trip():
    spec = TsrcSpec(7, theta=0.25, seed=2**63 + 5)
    assert TsrcSpec.from_dict(spec.to_dict()) == spec


def test_large_n_flat_distribution():
    p = np.abs(generate_tsrc(TsrcSpec(10_000, seed=11)).amplitudes) ** 2
    n = np.arange(p.size)
    slope, intercept = np.polyfit(n, p, 1)
    resid = p - (slope * n + intercept)
    stderr = np.sqrt(resid.var(ddof=2) / np.sum((n - n.mean()) ** 2))
    assert abs(slope) <= 3 * stderr


def test_single_realization_matches_base():
    base = TsrcSpec(8, seed=77)
    (only,) = ensemble_states(EnsembleSpec(base, 1))
    np.testing.assert_array_equal(only.amplitudes, generate_tsrc(base).amplitudes)


def test_realizations_distinct():
    states = ensemble_states(EnsembleSpec(TsrcSpec(6, seed=3), 30))
    vecs = {tuple(np.round(s.amplitudes.real, 15)) for s in states}
    assert len(vecs) == 30


def test_derived_seeds_stable():
    assert derive_seed(7, 0) == 7
    assert derive_seed(7, 1) == derive_seed(7, 1)
    assert derive_seed(7, 1) != derive_seed(7, 2)


def test_ensemble_mean_photon_number():
    # uniform moduli: E<n> = N/2 by the n <-> N-n symmetry of the weights
    states = ensemble_states(EnsembleSpec(TsrcSpec(100, seed=9), 200))
    mean = np.mean([mean_and_variance(s)[0] for s in states])
    assert mean == pytest.approx(50.0, abs=3.0)


def test_theta_invariance_of_number_statistics():
    a = report(generate_tsrc(TsrcSpec(20, theta=0.0, seed=4)))
    b = report(generate_tsrc(TsrcSpec(20, theta=1.3, seed=4)))
    for name in ("mean_n", "delta_n", "mandel_q", "g2", "entropy"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), abs=1e-12)
    np.testing.assert_allclose(a.p, b.p, atol=1e-12)
    assert (a.x1_var, a.x2_var) != pytest.approx((b.x1_var, b.x2_var), abs=1e-6)
