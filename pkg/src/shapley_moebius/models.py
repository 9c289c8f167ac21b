"""Benchmark simulators with their input distributions.

All models take an ``(n, k)`` array and return ``n`` outputs. Row sums
are written as elementwise products reduced along the last axis rather
than BLAS products, so a block evaluation and a row-by-row evaluation
give bit-identical results.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ConfigurationError, EvaluationError
from .marginals import DependenceSpec, InputTransform, MarginalSpec
from .pickfreeze import ModelHandle

PI = np.pi


def ishigami(x, a=7.0, b=0.1):
    """``sin(x1) (1 + b x3^4) + a sin(x2)^2``; a fourth column, if present, is ignored."""
    x = np.asarray(x, dtype=float)
    return np.sin(x[:, 0]) * (1.0 + b * x[:, 2] ** 4) + a * np.sin(x[:, 1]) ** 2


G_COEFFS = np.array([0.0, 0.0, 3.0, 9.0, 9.0, 9.0, 9.0, 9.0])


def sobol_g(x, a=G_COEFFS):
    """Sobol' g-function ``prod (|4 x_i - 2| + a_i) / (1 + a_i)`` on ``[0, 1]^k``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    return np.prod((np.abs(4.0 * x - 2.0) + a) / (1.0 + a), axis=1)


OAKLEY_FILE = "oakley_ohagan.txt"
OAKLEY_SHA256 = "62bdc56973a26cbcadd085a3bf5c577e809808074cd87f7253e5374d2615784d"


@dataclass(frozen=True)
class OakleyCoefficients:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    M: np.ndarray


def load_oakley_coefficients(path=None, verify=True):
    """Read the 15 x 18 coefficient table ``a1 a2 a3 M[i, :]`` (one input per line).

    The bundled file is checked against :data:`OAKLEY_SHA256`.
    """
    try:
        if path is None:
            raw = resources.files(__package__).joinpath("data", OAKLEY_FILE).read_bytes()
        else:
            with open(path, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read Oakley-O'Hagan coefficients: {exc}") from None
    if path is None and verify and hashlib.sha256(raw).hexdigest() != OAKLEY_SHA256:
        raise ConfigurationError("bundled Oakley-O'Hagan coefficient file fails its checksum")
    try:
        table = np.loadtxt(raw.decode().splitlines(), ndmin=2)
    except ValueError as exc:
        raise ConfigurationError(f"malformed Oakley-O'Hagan coefficient file: {exc}") from None
    if table.shape != (15, 18):
        raise ConfigurationError(f"Oakley-O'Hagan coefficients must be 15 x 18, got {table.shape}")
    return OakleyCoefficients(table[:, 0], table[:, 1], table[:, 2], table[:, 3:].copy())


_OAKLEY = None


def _default_oakley():
    global _OAKLEY
    if _OAKLEY is None:
        _OAKLEY = load_oakley_coefficients()
    return _OAKLEY


def oakley_ohagan(x, coeffs=None):
    """Oakley & O'Hagan (2004) 15-input function ``a1.x + a2.sin x + a3.cos x + x'Mx``."""
    c = _default_oakley() if coeffs is None else coeffs
    x = np.asarray(x, dtype=float)
    if x.shape[1] != 15:
        raise ConfigurationError(f"Oakley-O'Hagan function takes 15 inputs, got {x.shape[1]}")
    lin = (x * c.a1).sum(axis=1) + (np.sin(x) * c.a2).sum(axis=1) + (np.cos(x) * c.a3).sum(axis=1)
    xm = np.einsum("ni,ij->nj", x, c.M)
    return lin + (xm * x).sum(axis=1)


# SI -> imperial factors for the fire-spread formulas
CM_PER_FT = 30.48
LB_FT3_PER_G_CM3 = 62.42796
BTU_LB_PER_KCAL_KG = 1.8
FT_MIN_PER_KM_H = 54.68066

FIRE_INPUTS = ("delta", "sigma", "h", "rho_p", "m_l", "m_d", "S_T", "U", "tan_phi", "P")


def _positive(name, v):
    bad = np.flatnonzero(~(v > 0))
    if bad.size:
        raise EvaluationError(f"fire-spread intermediate {name} is non-positive ({v[bad[0]]!r}) at row {bad[0]}")


def fire_spread(x, intermediates=False):
    """Rothermel rate of spread [ft/min] from SI inputs in :data:`FIRE_INPUTS` order.

    Fuel depth enters in feet; the ``30.48 * delta`` term in the fuel
    loading therefore re-expresses it in centimetres.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[1] != 10:
        raise ConfigurationError(f"fire-spread model takes 10 inputs, got {x.shape[1]}")
    delta = x[:, 0] / CM_PER_FT
    sigma = x[:, 1] * CM_PER_FT
    h = x[:, 2] * BTU_LB_PER_KCAL_KG
    rho_p = x[:, 3] * LB_FT3_PER_G_CM3
    m_l, m_d, s_t = x[:, 4], x[:, 5], x[:, 6]
    u = x[:, 7] * FT_MIN_PER_KM_H
    tan_phi, p = x[:, 8], x[:, 9]
    for name, v in (("delta", delta), ("sigma", sigma), ("rho_P", rho_p), ("m_l", m_l), ("S_T", s_t)):
        _positive(name, v)
    if np.any(u < 0):
        raise EvaluationError("fire-spread wind speed U is negative")

    w0 = 0.2048 / (1.0 + np.exp((15.0 - CM_PER_FT * delta) / 2.0))
    s15 = sigma**1.5
    gamma_max = s15 / (495.0 + 0.0594 * s15)
    beta_op = 3.348 * sigma**-0.8189
    A = 133.0 * sigma**-0.7913
    theta_star = (301.4 - 305.87 * (m_l - m_d) + 2260.0 * m_d) / (2260.0 * m_l)
    theta = np.minimum(1.0, np.maximum(theta_star, 0.0))
    mu_m = np.exp(-7.3 * p * m_d - (7.3 * theta + 2.13) * (1.0 - p) * m_l)
    mu_s = 0.174 * s_t**-0.19
    C = 7.47 * np.exp(-0.133 * sigma**0.55)
    B = 0.02526 * sigma**0.54
    E = 0.715 * np.exp(-3.59e-4 * sigma)
    w_n = w0 * (1.0 - s_t)
    rho_b = w0 / delta
    eps = np.exp(-138.0 / sigma)
    q_ig = 130.87 + 1054.43 * m_d
    _positive("Q_ig", q_ig)
    beta = rho_b / rho_p
    _positive("beta", beta)
    ratio = beta / beta_op
    gamma = gamma_max * ratio**A * np.exp(A * (1.0 - ratio))
    xi = np.exp((0.792 + 0.681 * np.sqrt(sigma)) * (beta + 0.1)) / (192.0 + 0.2595 * sigma)
    psi_w = C * u**B * ratio**-E
    psi_s = 5.275 * beta**-0.3 * tan_phi**2
    i_r = gamma * w_n * h * mu_m * mu_s
    r = i_r * xi * (1.0 + psi_w + psi_s) / (rho_b * eps * q_ig)
    if intermediates:
        return r, {
            "w0": w0, "gamma_max": gamma_max, "beta_op": beta_op, "A": A,
            "theta_star": theta_star, "theta": theta, "mu_M": mu_m, "mu_S": mu_s,
            "C": C, "B": B, "E": E, "w_n": w_n, "rho_b": rho_b, "epsilon": eps,
            "Q_ig": q_ig, "beta": beta, "Gamma": gamma, "xi": xi, "psi_W": psi_w,
            "psi_S": psi_s, "I_R": i_r,
        }
    return r


FIRE_MARGINALS = (
    MarginalSpec.lognormal(2.19, 0.517),                 # delta [cm]
    MarginalSpec.lognormal(3.31, 0.294, lower=3 / 0.6),  # sigma [1/cm]
    MarginalSpec.lognormal(8.48, 0.063),                 # h [kcal/kg]
    MarginalSpec.lognormal(-0.592, 0.219),               # rho_P [g/cm^3]
    MarginalSpec.normal(1.18, 0.377, lower=0.0),         # m_l
    MarginalSpec.normal(0.19, 0.047),                    # m_d
    MarginalSpec.normal(0.049, 0.011, lower=0.0),        # S_T
    MarginalSpec.lognormal(2.9534, 0.5569),              # U [km/h]
    MarginalSpec.normal(0.38, 0.186, lower=0.0),         # tan(phi)
    MarginalSpec.lognormal(-2.19, 0.66, upper=1.0),      # P
)

#: Rank correlation between m_d and U in the three fire-spread scenarios.
FIRE_SCENARIOS = {"none": 0.0, "weak": -0.3, "strong": -0.8}


def fire_dependence(scenario):
    try:
        rho = FIRE_SCENARIOS[scenario]
    except KeyError:
        raise ConfigurationError(
            f"unknown fire-spread scenario {scenario!r}; choose from {sorted(FIRE_SCENARIOS)}"
        ) from None
    return DependenceSpec.pair(10, 5, 7, rho)


@dataclass(frozen=True)
class BenchmarkModel:
    """A registered model: handle, default marginals and input names."""

    handle: ModelHandle
    marginals: tuple
    inputs: tuple
    description: str

    @property
    def name(self):
        return self.handle.name

    @property
    def k(self):
        return self.handle.k

    def transform(self, dependence=None):
        return InputTransform(self.marginals, dependence)


def _uniform(k, lo, hi):
    return tuple(MarginalSpec.uniform(lo, hi) for _ in range(k))


MODELS = {
    "ishigami": BenchmarkModel(
        ModelHandle("ishigami", 4, ishigami),
        _uniform(4, -PI, PI),
        ("X1", "X2", "X3", "X4"),
        "Ishigami function with a dummy fourth input, X_i ~ U(-pi, pi)",
    ),
    "sobol-g": BenchmarkModel(
        ModelHandle("sobol-g", 8, sobol_g),
        _uniform(8, 0.0, 1.0),
        tuple(f"X{i}" for i in range(1, 9)),
        "Sobol' g-function, a = (0, 0, 3, 9, 9, 9, 9, 9), X_i ~ U(0, 1)",
    ),
    "oakley": BenchmarkModel(
        ModelHandle("oakley", 15, oakley_ohagan),
        tuple(MarginalSpec.normal(0.0, 1.0) for _ in range(15)),
        tuple(f"X{i}" for i in range(1, 16)),
        "Oakley & O'Hagan 15-input function, X_i ~ N(0, 1)",
    ),
    "fire-spread": BenchmarkModel(
        ModelHandle("fire-spread", 10, fire_spread),
        FIRE_MARGINALS,
        FIRE_INPUTS,
        "Rothermel fire rate of spread [ft/min], 10 inputs in SI units",
    ),
}


def get_model(name):
    try:
        return MODELS[name]
    except KeyError:
        raise ConfigurationError(f"unknown model {name!r}; available: {', '.join(MODELS)}") from None
