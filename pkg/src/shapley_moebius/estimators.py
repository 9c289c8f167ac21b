"""Value-function estimates for every input subset from one pick'n'freeze design.

Two estimates are produced per mask ``i`` with mixed output ``yi``:

* subset importance (Sobol'/Saltelli): ``yb . (yi - ya) / n``, which
  estimates ``V[E[Y | X_i]]``;
* superset importance (Jansen): ``mean((yi - ya)**2) / 2``, which
  estimates the dual value ``E[V[Y | X_~i]]``.

Under input dependence the Jansen form is invalid. It is replaced by
``yb . (yb - yi) / n`` read off at the complementary mask.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .pickfreeze import mixed_block

#: Largest supported input dimension for full subset tables.
MAX_K = 25


def popcounts(k):
    """Cardinality of every mask ``0 .. 2**k - 1``."""
    card = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        card[1 << j : 1 << (j + 1)] = card[: 1 << j] + 1
    return card


def check_dimension(k):
    if k > MAX_K:
        raise DimensionError(
            f"k = {k} exceeds the subset-table guard k <= {MAX_K} "
            "(the reference code warns 'Precision (and patience) may be lost.')"
        )
    if k < 1:
        raise DimensionError(f"k must be positive, got {k}")


@dataclass
class ValueTable:
    """Per-mask value estimates, indexed directly by mask (slot 0 is the empty set).

    Attributes
    ----------
    h_sup, h_sub : ndarray, shape (2**k,)
        Superset (dual) and subset value estimates, unnormalised.
    h_jansen : ndarray
        Raw Jansen values; equal to ``h_sup`` unless the dependent
        substitute replaced them.
    var_y : float
        Unbiased sample variance of the B-block outputs.
    """

    k: int
    h_sup: np.ndarray
    h_sub: np.ndarray
    card: np.ndarray
    var_y: float
    dependent: bool = False
    substituted: bool = False
    h_jansen: np.ndarray | None = None

    @property
    def full(self):
        return (1 << self.k) - 1

    @property
    def total_sub(self):
        return float(self.h_sub[self.full])

    @property
    def total_sup(self):
        return float(self.h_sup[self.full])

    def normalized(self):
        """Both rows divided by their own full-mask value, so each totals one."""
        return self.h_sub / self.total_sub, self.h_sup / self.total_sup

    @classmethod
    def from_values(cls, sub, sup=None, var_y=None):
        """Wrap exact or hand-made value tables (``sub[0]`` must be 0)."""
        sub = np.asarray(sub, dtype=float)
        k = int(sub.size).bit_length() - 1
        if sub.size != 1 << k:
            raise ValueError(f"table length {sub.size} is not a power of two")
        sup = sub.copy() if sup is None else np.asarray(sup, dtype=float)
        return cls(k, sup, sub, popcounts(k), float(sub[-1] if var_y is None else var_y))


def mask_estimates(d, mask):
    """``(jansen, sobol_saltelli, complement_raw)`` for one mask."""
    _, yi = mixed_block(d, mask)
    diff = yi - d.ya
    n = d.n
    jansen = float(np.mean(diff * diff) / 2.0)
    sobol = float(d.yb @ diff / n)
    raw = float(d.yb @ (d.yb - yi) / n)
    return jansen, sobol, raw


def substitute_superset(h_raw, var_y):
    """Remap ``yb . (yb - yi) / n`` values to superset estimates of the complement.

    ``h_sup[i] = h_raw[2**k - 1 - i]`` for every proper mask; the full
    mask (whose complement is empty) gets ``var_y``.
    """
    h_raw = np.asarray(h_raw, dtype=float)
    full = h_raw.size - 1
    out = np.empty_like(h_raw)
    out[1:full] = h_raw[full - np.arange(1, full)]
    out[0] = 0.0
    out[full] = var_y
    return out


def build_value_table(d, substitute=True, workers=1):
    """Estimate both value functions for all ``2**k - 1`` masks of a design.

    Parameters
    ----------
    d : EvaluatedDesign
    substitute : bool
        Under dependence, replace the Jansen row by the complement
        substitute. ``False`` keeps the (biased) Jansen values, which is
        only useful to exhibit their breakdown.
    workers : int
        Threads used to evaluate masks concurrently.
    """
    k = d.k
    check_dimension(k)
    size = 1 << k
    masks = range(1, size)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda m: mask_estimates(d, m), masks))
    else:
        rows = [mask_estimates(d, m) for m in masks]
    est = np.zeros((3, size))
    est[:, 1:] = np.array(rows).T
    jansen, sobol, raw = est
    var_y = float(np.var(d.yb, ddof=1))
    dependent = not d.transform.independent
    h_sup = jansen
    if dependent and substitute:
        h_sup = substitute_superset(raw, var_y)
    return ValueTable(
        k=k, h_sup=h_sup, h_sub=sobol, card=popcounts(k), var_y=var_y,
        dependent=dependent, substituted=dependent and substitute, h_jansen=jansen,
    )
