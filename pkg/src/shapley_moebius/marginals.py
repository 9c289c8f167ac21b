"""Marginal distributions and Gaussian-copula dependence.

Uniform design blocks are mapped to physical inputs by inverse CDFs. Rank
dependence is imposed through a Gaussian copula; conditional samples for
pick'n'freeze mixing come from the upper Cholesky root of the correlation
matrix reordered so that the frozen inputs come first (a Rosenblatt map).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats

from .errors import ConfigurationError, DomainError

_FAMILIES = ("uniform", "normal", "lognormal")


@dataclass(frozen=True)
class MarginalSpec:
    """A univariate input distribution, optionally truncated.

    Parameters
    ----------
    family : {"uniform", "normal", "lognormal"}
    a, b : float
        ``(low, high)`` for uniform, ``(mean, std)`` for normal and
        ``(mean_log, std_log)`` for lognormal.
    lower, upper : float, optional
        Truncation bounds on the physical value.
    """

    family: str
    a: float
    b: float
    lower: float | None = None
    upper: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigurationError(f"unknown marginal family {self.family!r}")
        if self.family == "uniform" and not self.a < self.b:
            raise ConfigurationError(f"uniform marginal needs a < b, got ({self.a}, {self.b})")
        if self.family != "uniform" and not self.b > 0:
            raise ConfigurationError(f"{self.family} marginal needs a positive scale, got {self.b}")
        if self._p_lo >= self._p_hi:
            raise ConfigurationError(f"truncation of {self} leaves no probability mass")

    @classmethod
    def uniform(cls, low, high):
        return cls("uniform", low, high)

    @classmethod
    def normal(cls, mean, std, lower=None, upper=None):
        return cls("normal", mean, std, lower, upper)

    @classmethod
    def lognormal(cls, mean_log, std_log, lower=None, upper=None):
        return cls("lognormal", mean_log, std_log, lower, upper)

    @property
    def dist(self):
        if self.family == "uniform":
            return stats.uniform(loc=self.a, scale=self.b - self.a)
        if self.family == "normal":
            return stats.norm(loc=self.a, scale=self.b)
        return stats.lognorm(s=self.b, scale=np.exp(self.a))

    @property
    def _p_lo(self):
        return 0.0 if self.lower is None else float(self.dist.cdf(self.lower))

    @property
    def _p_hi(self):
        return 1.0 if self.upper is None else float(self.dist.cdf(self.upper))

    @property
    def bounded_below(self):
        return self.lower is not None or self.family in ("uniform", "lognormal")

    @property
    def bounded_above(self):
        return self.upper is not None or self.family == "uniform"

    def ppf(self, u):
        """Inverse CDF restricted to the truncation window."""
        u = np.asarray(u, dtype=float)
        p_lo, p_hi = self._p_lo, self._p_hi
        if p_lo == 0.0 and p_hi == 1.0:
            return self.dist.ppf(u)
        return self.dist.ppf(p_lo + u * (p_hi - p_lo))

    def from_standard_normal(self, w):
        """Map standard normal scores to physical values.

        Untruncated normal and lognormal marginals are affine/exponential
        maps of the score. Otherwise upper-tail scores go through survival
        functions so that large scores do not round to probability one.
        """
        w = np.asarray(w, dtype=float)
        if self.lower is None and self.upper is None:
            if self.family == "normal":
                return self.a + self.b * w
            if self.family == "lognormal":
                return np.exp(self.a + self.b * w)
        d = self.dist
        p_lo, p_hi = self._p_lo, self._p_hi
        out = np.empty_like(w)
        low = w <= 0
        out[low] = d.ppf(p_lo + stats.norm.cdf(w[low]) * (p_hi - p_lo))
        q_lo = 1.0 - p_lo if self.lower is None else float(d.sf(self.lower))
        q_hi = 0.0 if self.upper is None else float(d.sf(self.upper))
        high = ~low
        out[high] = d.isf(q_hi + stats.norm.sf(w[high]) * (q_lo - q_hi))
        return out


def spearman_to_pearson(rho_s):
    """Pearson correlation of a Gaussian copula with Spearman correlation ``rho_s``."""
    return 2.0 * np.sin(np.pi * np.asarray(rho_s, dtype=float) / 6.0)


def pearson_to_spearman(rho_p):
    return 6.0 / np.pi * np.arcsin(np.asarray(rho_p, dtype=float) / 2.0)


@dataclass(frozen=True)
class DependenceSpec:
    """Correlation matrix of a Gaussian copula.

    ``kind="spearman"`` (the default) treats ``matrix`` as rank
    correlations and converts it to the copula's Pearson matrix.
    """

    matrix: np.ndarray
    kind: str = "spearman"

    def __post_init__(self):
        r = np.array(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", r)
        if self.kind not in ("spearman", "pearson"):
            raise ConfigurationError(f"unknown correlation kind {self.kind!r}")
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ConfigurationError(f"correlation matrix must be square, got shape {r.shape}")
        if not np.allclose(r, r.T, atol=1e-12, rtol=0):
            raise ConfigurationError("correlation matrix must be symmetric")
        if not np.all(np.diag(r) == 1.0):
            raise ConfigurationError("correlation matrix must have a unit diagonal")
        try:
            np.linalg.cholesky(self.pearson)
        except np.linalg.LinAlgError:
            raise ConfigurationError("copula correlation matrix is not positive definite") from None

    @classmethod
    def independent(cls, k):
        return cls(np.eye(k))

    @classmethod
    def pair(cls, k, i, j, rho, kind="spearman"):
        """Identity matrix except for correlation ``rho`` between inputs ``i`` and ``j``."""
        r = np.eye(k)
        r[i, j] = r[j, i] = rho
        return cls(r, kind)

    @property
    def k(self):
        return self.matrix.shape[0]

    @property
    def pearson(self):
        if self.kind == "pearson":
            return self.matrix
        p = spearman_to_pearson(self.matrix)
        np.fill_diagonal(p, 1.0)
        return p

    @property
    def is_identity(self):
        return bool(np.array_equal(self.matrix, np.eye(self.k)))


@dataclass
class InputTransform:
    """Row-wise map from the unit hypercube to the physical input space."""

    marginals: tuple
    dependence: DependenceSpec | None = None
    _factors: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        self.marginals = tuple(self.marginals)
        if self.dependence is not None and self.dependence.k != self.k:
            raise ConfigurationError(
                f"correlation matrix is {self.dependence.k}x{self.dependence.k} "
                f"but there are {self.k} marginals"
            )
        self._pearson = None if self.independent else self.dependence.pearson
        self._chol = None if self.independent else np.linalg.cholesky(self._pearson)

    @property
    def k(self):
        return len(self.marginals)

    @property
    def independent(self):
        return self.dependence is None or self.dependence.is_identity

    def _check_domain(self, u):
        for j, m in enumerate(self.marginals):
            col = u[:, j]
            bad = np.flatnonzero(
                ((col <= 0.0) & (not m.bounded_below)) | ((col >= 1.0) & (not m.bounded_above))
                | (col < 0.0) | (col > 1.0)
            )
            if bad.size:
                raise DomainError(
                    f"uniform value {col[bad[0]]!r} at row {bad[0]}, column {j} "
                    f"is outside the support of the {m.family} marginal"
                )

    def _from_normals(self, w, columns):
        out = np.empty_like(w)
        for c, j in enumerate(columns):
            out[:, c] = self.marginals[j].from_standard_normal(w[:, c])
        return out

    def normal_scores(self, u):
        """Correlated standard normal scores of a uniform block (natural input order)."""
        z = stats.norm.ppf(u)
        return z @ self._chol.T

    def transform(self, u):
        """Map an n-by-k block of uniforms to physical inputs."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if u.shape[1] != self.k:
            raise ConfigurationError(f"expected {self.k} columns, got {u.shape[1]}")
        self._check_domain(u)
        if self.independent:
            return np.column_stack([m.ppf(u[:, j]) for j, m in enumerate(self.marginals)])
        return self._from_normals(self.normal_scores(u), range(self.k))

    def conditional_factors(self, mask):
        """Blocks of the upper Cholesky root for the ordering (mask inputs, rest).

        Returns ``(frozen, free, gain, root)`` where ``frozen``/``free`` are
        index arrays, ``gain`` maps frozen normal scores to the conditional
        mean of the free ones and ``root`` is the upper triangular root of
        the conditional covariance.
        """
        with self._lock:
            hit = self._factors.get(mask)
        if hit is not None:
            return hit
        frozen = np.array([j for j in range(self.k) if mask >> j & 1], dtype=int)
        free = np.array([j for j in range(self.k) if not mask >> j & 1], dtype=int)
        order = np.concatenate([frozen, free])
        r = self._pearson[np.ix_(order, order)]
        try:
            upper = linalg.cholesky(r, lower=False)
        except linalg.LinAlgError:
            raise ConfigurationError(
                f"reordered correlation matrix for mask {mask:#b} is not positive definite"
            ) from None
        m = frozen.size
        gain = linalg.solve_triangular(upper[:m, :m], upper[:m, m:], lower=False)
        factors = (frozen, free, gain, upper[m:, m:])
        with self._lock:
            self._factors.setdefault(mask, factors)
        return factors

    def conditional_mix(self, u_a, u_b, mask):
        """Freeze the inputs in ``mask`` at their B values, draw the rest given them.

        Works on single rows or on whole blocks. The frozen columns are
        bit-identical to ``transform(u_b)``; the free columns are sampled
        from the copula conditional on them, driven by the A uniforms.
        """
        single = np.ndim(u_a) == 1
        u_a = np.atleast_2d(np.asarray(u_a, dtype=float))
        u_b = np.atleast_2d(np.asarray(u_b, dtype=float))
        if mask <= 0 or mask >= 1 << self.k:
            raise ConfigurationError(f"mask {mask} is not a non-empty subset of {self.k} inputs")
        full = (1 << self.k) - 1
        if self.independent or mask == full:
            x = self.transform(u_a) if mask != full else self.transform(u_b)
            if mask != full:
                cols = [j for j in range(self.k) if mask >> j & 1]
                x[:, cols] = self.transform(u_b)[:, cols]
            return x[0] if single else x
        self._check_domain(u_a)
        self._check_domain(u_b)
        w_b = self.normal_scores(u_b)
        x = np.empty_like(u_a)
        frozen = np.array([j for j in range(self.k) if mask >> j & 1], dtype=int)
        x[:, frozen] = self._from_normals(w_b[:, frozen], frozen)
        self.fill_conditional(x, w_b, stats.norm.ppf(u_a), mask)
        return x[0] if single else x

    def fill_conditional(self, x, w_b, z_a, mask):
        """Overwrite the free columns of ``x`` with draws conditional on the frozen B scores.

        ``w_b`` are the correlated normal scores of the B block and ``z_a``
        the independent normal scores of the A uniforms.
        """
        frozen, free, gain, root = self.conditional_factors(mask)
        w_free = w_b[:, frozen] @ gain + z_a[:, free] @ root
        x[:, free] = self._from_normals(w_free, free)
        return x
