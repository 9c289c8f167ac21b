"""Closed-form value functions for test models and ground-truth Shapley effects."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .estimators import popcounts
from .models import G_COEFFS
from .moebius import (
    first_and_total_from_moebius,
    moebius_transform,
    shapley_from_moebius,
    shapley_owen_from_moebius,
    zeta_transform,
)


@dataclass(frozen=True)
class AnalyticGame:
    """Exact value function ``val(mask)``; ``values[0]`` is the empty set (0)."""

    k: int
    values: np.ndarray
    note: str = ""

    def __post_init__(self):
        if self.values.shape != (1 << self.k,):
            raise ValueError(f"need {1 << self.k} values, got {self.values.shape}")

    @property
    def total(self):
        return float(self.values[-1])

    def normalized(self):
        return self.values / self.total

    def __call__(self, mask):
        return float(self.values[mask])


def gfunction_game(a=G_COEFFS):
    """Value function ``prod_{i in mask} (1 + V_i) - 1`` with ``V_i = 1 / (3 (1 + a_i)^2)``."""
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("g-function coefficients must be nonnegative")
    k = a.size
    vi = 1.0 / (3.0 * (1.0 + a) ** 2)
    prod = np.ones(1 << k)
    for j in range(k):
        prod.reshape(-1, 2, 1 << j)[:, 1, :] *= 1.0 + vi[j]
    return AnalyticGame(k, prod - 1.0, "Sobol' g-function, V[E[Y|X_a]]")


def ishigami_anova(a=7.0, b=0.1):
    """Nonzero ANOVA variance terms of the Ishigami function on ``U(-pi, pi)^3``.

    With ``m_r = E[X^r]`` for ``X ~ U(-pi, pi)`` (``m_4 = pi^4/5``,
    ``m_8 = pi^8/9``) and ``E[sin^2] = 1/2``:

    * ``V_1 = (1 + b m_4)^2 / 2``
    * ``V_2 = a^2 / 8``
    * ``V_13 = b^2 (m_8 - m_4^2) / 2 = 8 b^2 pi^8 / 225``
    """
    m4 = np.pi**4 / 5.0
    m8 = np.pi**8 / 9.0
    return {
        0b001: 0.5 * (1.0 + b * m4) ** 2,
        0b010: a**2 / 8.0,
        0b101: 0.5 * b**2 * (m8 - m4**2),
    }


def ishigami_game(a=7.0, b=0.1, dummy=True):
    """Exact value function of the Ishigami model, with a dummy fourth input by default."""
    k = 4 if dummy else 3
    mob = np.zeros(1 << k)
    for mask, v in ishigami_anova(a, b).items():
        mob[mask] = v
    return AnalyticGame(k, zeta_transform(mob), "Ishigami, V[E[Y|X_a]]")


def exact_shapley(game, owen=()):
    """Normalised Shapley effects of an exact game, plus Shapley-Owen effects for ``owen`` masks."""
    if game.k > 20:
        raise DimensionError(f"exact oracle limited to k <= 20, got {game.k}")
    mob = moebius_transform(game.normalized())
    card = popcounts(game.k)
    phi = shapley_from_moebius(mob, card)
    if not owen:
        return phi
    return phi, {m: shapley_owen_from_moebius(mob, m, card) for m in owen}


def exact_first_total(game):
    """Normalised first-order and total effects of an exact game."""
    return first_and_total_from_moebius(moebius_transform(game.normalized()))


def quadratic_risk(estimates, truth):
    """Mean over replicates of ``sum_m (phi_hat_m - phi_m)^2``."""
    est = np.atleast_2d(np.asarray(estimates, dtype=float))
    truth = np.asarray(truth, dtype=float)
    return float(np.mean(np.sum((est - truth) ** 2, axis=1)))


ORACLES = {
    "ishigami": ishigami_game,
    "sobol-g": gfunction_game,
}
