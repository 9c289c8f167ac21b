"""Pick'n'freeze sample blocks and model-evaluation bookkeeping."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from .errors import ConfigurationError, EvaluationError
from .marginals import InputTransform
from .qmc import UniformDesign


@dataclass(frozen=True)
class ModelHandle:
    """A vectorised simulator: maps an ``(n, k)`` block to ``n`` outputs."""

    name: str
    k: int
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.k:
            raise ConfigurationError(f"{self.name} expects (n, {self.k}) inputs, got {x.shape}")
        y = np.asarray(self.evaluator(x), dtype=float).reshape(-1)
        if y.shape[0] != x.shape[0]:
            raise EvaluationError(f"{self.name} returned {y.shape[0]} outputs for {x.shape[0]} rows")
        bad = np.flatnonzero(~np.isfinite(y))
        if bad.size:
            raise EvaluationError(
                f"{self.name} produced a non-finite output {y[bad[0]]!r} at row {bad[0]}"
            )
        return y


class EvalCounter:
    """Thread-safe running count of model evaluations."""

    def __init__(self, start=0):
        self._value = start
        self._lock = threading.Lock()

    def add(self, n):
        with self._lock:
            self._value += n

    @property
    def value(self):
        return self._value


@dataclass
class EvaluatedDesign:
    model: ModelHandle
    transform: InputTransform
    design: UniformDesign
    xa: np.ndarray
    xb: np.ndarray
    ya: np.ndarray
    yb: np.ndarray
    counter: EvalCounter = field(default_factory=EvalCounter)
    full_set_shortcut: bool = True
    _scores: tuple | None = field(default=None, repr=False)

    def scores(self):
        """``(w_b, z_a)``: correlated normal scores of B, independent scores of A."""
        if self._scores is None:
            self._scores = (
                self.transform.normal_scores(self.design.block_b),
                stats.norm.ppf(self.design.block_a),
            )
        return self._scores

    @property
    def n(self):
        return self.design.n

    @property
    def k(self):
        return self.design.k

    @property
    def evals(self):
        return self.counter.value


def evaluate_base(model, design, transform, full_set_shortcut=True):
    """Transform both uniform blocks and run the model on them (``2n`` evaluations)."""
    if model.k != design.k:
        raise ConfigurationError(f"model {model.name} has k={model.k}, design has k={design.k}")
    if transform.k != design.k:
        raise ConfigurationError(f"transform has k={transform.k}, design has k={design.k}")
    xa = transform.transform(design.block_a)
    xb = transform.transform(design.block_b)
    ya = model(xa)
    yb = model(xb)
    return EvaluatedDesign(
        model, transform, design, xa, xb, ya, yb,
        counter=EvalCounter(2 * design.n), full_set_shortcut=full_set_shortcut,
    )


def mask_columns(mask, k):
    return np.array([j for j in range(k) if mask >> j & 1], dtype=int)


def mixed_inputs(d, mask):
    """Inputs of the mixed block for ``mask`` (no model evaluation)."""
    k = d.k
    if mask <= 0 or mask >= 1 << k:
        raise ConfigurationError(f"mask {mask} is not a non-empty subset of {k} inputs")
    if mask == (1 << k) - 1:
        return d.xb
    if d.transform.independent:
        xi = d.xa.copy()
        cols = mask_columns(mask, k)
        xi[:, cols] = d.xb[:, cols]
        return xi
    # frozen columns are copied from xb, which the copula built from the same scores
    w_b, z_a = d.scores()
    return d.transform.fill_conditional(d.xb.copy(), w_b, z_a, mask)


def mixed_block(d, mask):
    """Mixed block for ``mask`` and its model output.

    The full mask reuses ``(xb, yb)`` when the shortcut is enabled; every
    other mask costs ``n`` model evaluations.
    """
    xi = mixed_inputs(d, mask)
    if mask == (1 << d.k) - 1 and d.full_set_shortcut:
        return xi, d.yb
    yi = d.model(xi)
    d.counter.add(d.n)
    return xi, yi
