import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_game
from shapley_moebius.estimators import ValueTable, popcounts
from shapley_moebius.moebius import (
    first_and_total,
    inclusion_matrix,
    mask_label,
    moebius_invert,
    moebius_sierpinski,
    moebius_submask,
    moebius_transform,
    owen_bounds,
    owen_bounds_from_moebius,
    report_from_moebius,
    shapley_from_moebius,
    shapley_owen_from_moebius,
    zeta_transform,
)


@pytest.mark.parametrize("k", range(2, 9))
def test_butterfly_matches_dense_inverse(k, rng):
    v = random_game(rng, k)
    z = inclusion_matrix(k).astype(float)
    # val = Z^T mob over the non-empty masks
    dense = np.linalg.solve(z.T, v[1:])
    np.testing.assert_allclose(moebius_transform(v)[1:], dense, atol=1e-12, rtol=0)


@pytest.mark.parametrize("k", [1, 3, 6])
def test_alternative_inversions_agree(k, rng):
    v = random_game(rng, k)
    m = moebius_transform(v)
    np.testing.assert_allclose(moebius_submask(v), m, atol=1e-12)
    np.testing.assert_allclose(moebius_sierpinski(v), m, atol=1e-12)


def test_sierpinski_rows_are_pascal_mod_two():
    k = 5
    z = inclusion_matrix(k)
    sel = np.array([True])
    for i in range(1, 1 << k):
        np.testing.assert_array_equal(np.flatnonzero(sel) + 1, np.flatnonzero(z[:, i - 1]) + 1)
        sel = np.logical_xor(np.r_[True, sel], np.r_[sel, False])


def test_inclusion_density():
    for k in range(2, 9):
        z = inclusion_matrix(k, with_empty=True)
        assert z.sum() * 4**k == 3**k * z.size
        z0 = inclusion_matrix(k)
        assert z0.sum() == 3**k - 2**k


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_zeta_reconstructs(k, seed):
    v = random_game(np.random.default_rng(seed), k)
    np.testing.assert_allclose(zeta_transform(moebius_transform(v)), v, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_efficiency(k, seed):
    v = random_game(np.random.default_rng(seed), k)
    phi = shapley_from_moebius(moebius_transform(v))
    assert phi.sum() == pytest.approx(v[-1], abs=1e-12)


def test_null_player_is_exact_zero(rng):
    k = 5
    m = rng.random(1 << k)
    m[0] = 0.0
    masks = np.arange(1 << k)
    m[(masks & 0b1000) != 0] = 0.0
    v = zeta_transform(m)
    phi = shapley_from_moebius(moebius_transform(v))
    assert phi[3] == 0.0


def test_symmetric_inputs_share_value(rng):
    # val depends on the mask only through which of {0,1} it contains (symmetrically) and the rest
    k = 4
    m = rng.random(1 << k)
    m[0] = 0.0
    for mask in range(1 << k):
        swapped = (mask & ~0b11) | ((mask & 1) << 1) | ((mask >> 1) & 1)
        m[swapped] = m[mask] = max(m[mask], m[swapped])
    phi = shapley_from_moebius(m)
    assert phi[0] == pytest.approx(phi[1], abs=1e-14)


def test_owen_of_singleton_is_shapley(rng):
    m = moebius_transform(random_game(rng, 5))
    phi = shapley_from_moebius(m)
    for i in range(5):
        assert shapley_owen_from_moebius(m, 1 << i) == pytest.approx(phi[i], abs=1e-13)


def test_owen_full_group_is_top_mass(rng):
    m = moebius_transform(random_game(rng, 4))
    assert shapley_owen_from_moebius(m, 0b1111) == m[-1]
    with pytest.raises(ValueError):
        shapley_owen_from_moebius(m, 0)


def test_bounds_bracket_nonnegative_games(rng):
    k = 5
    card = popcounts(k)
    for _ in range(20):
        m = rng.random(1 << k)
        m[0] = 0
        for mask in range(1, 1 << k):
            lo, up, sharp = owen_bounds_from_moebius(m, mask)
            val = shapley_owen_from_moebius(m, mask, card)
            assert lo - 1e-12 <= val <= sharp + 1e-12
            assert sharp <= up + 1e-12


def test_first_total_bracket_and_mean_bound(rng):
    for _ in range(20):
        m = rng.random(1 << 6)
        m[0] = 0
        m /= m.sum()
        phi = shapley_from_moebius(m)
        from shapley_moebius.moebius import first_and_total_from_moebius

        s, t = first_and_total_from_moebius(m)
        assert np.all(s <= phi + 1e-14) and np.all(phi <= t + 1e-14)
        assert np.all(phi <= (s + t) / 2 + 1e-14)


def test_superset_row_swaps_first_and_total():
    # additive-plus-interaction game where the dual is known in closed form
    mob = np.zeros(8)
    mob[0b001], mob[0b010], mob[0b101] = 0.5, 0.3, 0.2
    sub = zeta_transform(mob)
    full = 7
    dual = np.array([sub[full] - sub[full ^ m] for m in range(8)])
    table = ValueTable.from_values(sub, dual)
    M = moebius_invert(table)
    s_sub, t_sub = first_and_total(M, "subset")
    s_sup, t_sup = first_and_total(M, "superset")
    np.testing.assert_allclose(s_sub, s_sup, atol=1e-14)
    np.testing.assert_allclose(t_sub, t_sup, atol=1e-14)
    rep = report_from_moebius(M, table, owen_masks=[0b101])
    np.testing.assert_allclose(rep.phi_sub, rep.phi_sup, atol=1e-14)
    assert rep.owen[0b101] == pytest.approx(0.2)
    assert owen_bounds(M, 0b101) == pytest.approx((0.2, 0.2, 0.2))


def test_mask_label():
    assert mask_label(0b101) == "1,3"
    assert mask_label(1 << 9) == "10"


def test_bad_length():
    with pytest.raises(ValueError):
        moebius_transform(np.zeros(6))


def test_negative_estimates_are_flagged_not_clipped():
    sub = np.array([0.0, 0.6, 0.5, 1.0])  # mob(12) = -0.1
    table = ValueTable.from_values(sub)
    M = moebius_invert(table)
    assert not M.all_nonnegative()
    rep = report_from_moebius(M, table, owen_masks=[0b11])
    assert rep.owen[3] == pytest.approx(-0.1)
    assert "owen:3" in rep.negative_flags
