import numpy as np
import pytest
import sympy as sp

from shapley_moebius.errors import DimensionError
from shapley_moebius.moebius import moebius_transform
from shapley_moebius.oracles import (
    AnalyticGame,
    exact_first_total,
    exact_shapley,
    gfunction_game,
    ishigami_anova,
    ishigami_game,
    quadratic_risk,
)


def _sympy_ishigami(a_val=7, b_val=sp.Rational(1, 10)):
    x1, x2, x3 = sp.symbols("x1 x2 x3", real=True)
    a, b = sp.Integer(a_val), b_val
    f = sp.sin(x1) * (1 + b * x3**4) + a * sp.sin(x2) ** 2

    def E(expr, *vars_):
        for v in vars_:
            expr = sp.integrate(expr, (v, -sp.pi, sp.pi)) / (2 * sp.pi)
        return sp.simplify(expr)

    mean = E(f, x1, x2, x3)

    def V(expr, *vars_):
        return sp.simplify(E((expr - mean) ** 2, *vars_))

    v1 = V(E(f, x2, x3), x1)
    v2 = V(E(f, x1, x3), x2)
    v3 = V(E(f, x1, x2), x3)
    v13 = V(E(f, x2), x1, x3) - v1 - v3
    return {1: v1, 2: v2, 4: v3, 5: v13}


def test_ishigami_anova_against_symbolic_integration():
    sym = _sympy_ishigami()
    num = ishigami_anova()
    assert float(sym[4]) == pytest.approx(0.0, abs=1e-14)
    for mask in (1, 2, 5):
        assert num[mask] == pytest.approx(float(sym[mask]), rel=1e-13)
    assert num[5] == pytest.approx(8 * 0.01 * np.pi**8 / 225, rel=1e-14)


def test_ishigami_reference_values():
    phi, owen = exact_shapley(ishigami_game(), owen=[0b101, 0b011, 0b1001])
    # published values are rounded to four places (0.435747 is quoted as 0.4358)
    np.testing.assert_allclose(phi, [0.4358, 0.4424, 0.1218, 0.0], atol=1e-4)
    assert phi[3] == 0.0
    assert owen[0b101] == pytest.approx(0.2437, abs=5e-5)
    assert abs(owen[0b011]) < 1e-15 and owen[0b1001] == 0.0


def test_gfunction_reference_values():
    phi = exact_shapley(gfunction_game())
    np.testing.assert_allclose(phi[:3], [0.469, 0.469, 0.0341], atol=5e-4)
    assert np.all(phi[3:] < 0.01)
    assert phi.sum() == pytest.approx(1.0, abs=1e-14)


def test_gfunction_moebius_is_product_of_variances():
    a = np.array([0.0, 1.0, 4.5])
    g = gfunction_game(a)
    vi = 1 / (3 * (1 + a) ** 2)
    m = moebius_transform(g.values)
    assert m[0b111] == pytest.approx(vi.prod())
    assert m[0b101] == pytest.approx(vi[0] * vi[2])
    with pytest.raises(ValueError):
        gfunction_game([-1.0])


def test_mean_bound_on_analytic_games():
    for game in (ishigami_game(), ishigami_game(a=2.0, b=0.5), gfunction_game(), gfunction_game([0.5] * 6)):
        phi = exact_shapley(game)
        s, t = exact_first_total(game)
        assert np.all(s <= phi + 1e-14)
        assert np.all(phi <= t + 1e-14)
        assert np.all(phi <= (s + t) / 2 + 1e-14)


def test_quadratic_risk():
    assert quadratic_risk([[1.0, 2.0], [1.0, 0.0]], [1.0, 1.0]) == pytest.approx(1.0)


def test_game_validation():
    with pytest.raises(ValueError):
        AnalyticGame(3, np.zeros(4))
    with pytest.raises(DimensionError):
        exact_shapley(AnalyticGame(21, np.ones(1 << 21)))
