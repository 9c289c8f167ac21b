import math

import numpy as np
import pytest

from shapley_moebius.errors import ConfigurationError, EvaluationError
from shapley_moebius.marginals import DependenceSpec
from shapley_moebius.models import (
    FIRE_SCENARIOS,
    fire_dependence,
    fire_spread,
    get_model,
    ishigami,
    load_oakley_coefficients,
    oakley_ohagan,
    sobol_g,
)
from shapley_moebius.qmc import generate_design

FIRE_MEDIANS = np.array([math.exp(2.19), math.exp(3.31), math.exp(8.48), math.exp(-0.592),
                         1.18, 0.19, 0.049, math.exp(2.9534), 0.38, math.exp(-2.19)])


def test_ishigami_points():
    x = np.array([[0.0, 0.0, 0.0, 5.0], [np.pi / 2, np.pi / 2, 1.0, 0.0]])
    np.testing.assert_allclose(ishigami(x), [0.0, 1.1 + 7.0])


def test_gfunction_points():
    assert sobol_g(np.zeros((1, 8)))[0] == pytest.approx(2.0 * 2.0 * (5 / 4) * (11 / 10) ** 5)
    assert sobol_g(np.full((1, 8), 0.5))[0] == 0.0
    x = np.random.default_rng(0).random((50, 8))
    swapped = x[:, [1, 0, 2, 3, 4, 5, 6, 7]]
    np.testing.assert_array_equal(sobol_g(x), sobol_g(swapped))


def test_oakley_at_origin_is_sum_of_cosine_weights():
    c = load_oakley_coefficients()
    assert oakley_ohagan(np.zeros((1, 15)))[0] == pytest.approx(c.a3.sum())
    assert c.M.shape == (15, 15)


def test_oakley_bad_files(tmp_path):
    p = tmp_path / "short.txt"
    p.write_text("1 2 3\n")
    with pytest.raises(ConfigurationError, match="15 x 18"):
        load_oakley_coefficients(p)
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_oakley_coefficients(tmp_path / "missing.txt")
    p.write_text("a b c\n")
    with pytest.raises(ConfigurationError, match="malformed"):
        load_oakley_coefficients(p)


@pytest.mark.parametrize("name", ["ishigami", "sobol-g", "oakley", "fire-spread"])
def test_rows_equal_block(name):
    m = get_model(name)
    x = m.transform().transform(generate_design(32, m.k, seed=1).block_a)
    block = m.handle(x)
    rows = np.array([m.handle(x[i : i + 1])[0] for i in range(32)])
    np.testing.assert_array_equal(rows, block)


def _fire_scalar(delta_cm, sigma_cm, h_kcal, rho_gcc, ml, md, st, u_kmh, tanphi, p):
    """Line-by-line scalar transcription, imperial units inside."""
    d = delta_cm / 30.48
    s = sigma_cm * 30.48
    h = h_kcal * 1.8
    rp = rho_gcc * 62.42796
    u = u_kmh * 54.68066
    out = {}
    out["w0"] = 0.2048 / (1 + math.exp((15 - 30.48 * d) / 2))
    out["gamma_max"] = s**1.5 / (495 + 0.0594 * s**1.5)
    out["beta_op"] = 3.348 * s ** (-0.8189)
    out["A"] = 133.0 * s ** (-0.7913)
    out["theta_star"] = (301.4 - 305.87 * (ml - md) + 2260 * md) / (2260 * ml)
    out["theta"] = min(1.0, max(out["theta_star"], 0.0))
    out["mu_M"] = math.exp(-7.3 * p * md - (7.3 * out["theta"] + 2.13) * (1 - p) * ml)
    out["mu_S"] = 0.174 * st ** (-0.19)
    out["C"] = 7.47 * math.exp(-0.133 * s**0.55)
    out["B"] = 0.02526 * s**0.54
    out["E"] = 0.715 * math.exp(-3.59e-4 * s)
    out["w_n"] = out["w0"] * (1 - st)
    out["rho_b"] = out["w0"] / d
    out["epsilon"] = math.exp(-138 / s)
    out["Q_ig"] = 130.87 + 1054.43 * md
    out["beta"] = out["rho_b"] / rp
    r = out["beta"] / out["beta_op"]
    out["Gamma"] = out["gamma_max"] * r ** out["A"] * math.exp(out["A"] * (1 - r))
    out["xi"] = math.exp((0.792 + 0.681 * math.sqrt(s)) * (out["beta"] + 0.1)) / (192 + 0.2595 * s)
    out["psi_W"] = out["C"] * u ** out["B"] * r ** (-out["E"])
    out["psi_S"] = 5.275 * out["beta"] ** (-0.3) * tanphi**2
    out["I_R"] = out["Gamma"] * out["w_n"] * h * out["mu_M"] * out["mu_S"]
    rate = out["I_R"] * out["xi"] * (1 + out["psi_W"] + out["psi_S"]) / (
        out["rho_b"] * out["epsilon"] * out["Q_ig"])
    return rate, out


def test_fire_matches_scalar_transcription():
    x = np.vstack([FIRE_MEDIANS, get_model("fire-spread").transform().transform(
        generate_design(16, 10, seed=3).block_a)])
    rate, inter = fire_spread(x, intermediates=True)
    for i, row in enumerate(x):
        r_ref, ref = _fire_scalar(*row)
        assert rate[i] == pytest.approx(r_ref, rel=1e-12)
        for key, val in ref.items():
            assert inter[key][i] == pytest.approx(val, rel=1e-12), key


def test_fire_theta_clamp():
    lo = FIRE_MEDIANS.copy()
    lo[4], lo[5] = 5.0, 0.0  # theta* < 0 would need large m_l and negative numerator
    hi = FIRE_MEDIANS.copy()
    hi[4], hi[5] = 0.05, 0.3
    _, inter = fire_spread(np.vstack([lo, hi]), intermediates=True)
    assert np.all((inter["theta"] >= 0) & (inter["theta"] <= 1))
    assert inter["theta_star"][1] > 1 and inter["theta"][1] == 1


def test_fire_increasing_in_wind():
    x = np.tile(FIRE_MEDIANS, (20, 1))
    x[:, 7] = np.linspace(0.5, 60, 20)
    assert np.all(np.diff(fire_spread(x)) > 0)


def test_fire_invalid_intermediates():
    x = FIRE_MEDIANS.copy()
    x[5] = -0.2  # Q_ig < 0
    with pytest.raises(EvaluationError, match="Q_ig"):
        fire_spread(x[None, :])
    with pytest.raises(ConfigurationError):
        fire_spread(np.zeros((1, 9)))


def test_fire_scenarios():
    assert fire_dependence("none").is_identity
    dep = fire_dependence("strong")
    assert dep.matrix[5, 7] == FIRE_SCENARIOS["strong"] == -0.8
    with pytest.raises(ConfigurationError):
        fire_dependence("medium")
    assert isinstance(dep, DependenceSpec)


def test_fire_samples_evaluate_cleanly():
    m = get_model("fire-spread")
    for sc in FIRE_SCENARIOS:
        t = m.transform(fire_dependence(sc))
        y = m.handle(t.transform(generate_design(1024, 10, seed=2).block_a))
        assert np.all(y > 0)


def test_unknown_model():
    with pytest.raises(ConfigurationError, match="available"):
        get_model("borehole")
