"""Shapley effects as averages of marginal contributions over all permutations.

This is the slow route, kept as an independent check on the Möbius
inversion. Permutations come from Heap's algorithm one at a time and value
functions are memoised per mask, so at most ``2**k - 1`` mixed blocks
are ever evaluated although the walk requests ``k! * k`` marginals.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError
from .estimators import mask_estimates
from .moebius import ShapleyReport

#: Largest k accepted by the permutation walk.
MAX_PERMUTATION_K = 10


def heap_permutations(k):
    """Yield all permutations of ``range(k)`` iteratively (Heap, 1963).

    Consecutive permutations differ by a single swap.
    """
    a = list(range(k))
    c = [0] * k
    yield tuple(a)
    i = 1
    while i < k:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            a[j], a[i] = a[i], a[j]
            yield tuple(a)
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


class ValueMemo:
    """Mask-keyed cache of ``(jansen, sobol_saltelli, complement_raw)`` estimates."""

    def __init__(self, d):
        self.d = d
        self.store = {}
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self.store)

    def get(self, mask):
        try:
            v = self.store[mask]
        except KeyError:
            self.misses += 1
            v = self.store[mask] = mask_estimates(self.d, mask)
            return v
        self.hits += 1
        return v


def _walk(k, values):
    """Average marginal contributions over every permutation path.

    ``values(mask)`` returns the ``(subset, superset)`` value pair; it is
    called once per path step, ``k! * k`` times in total.
    """
    shap_sub = [0.0] * k
    shap_sup = [0.0] * k
    for perm in heap_permutations(k):
        mask = 0
        val_sub = val_sup = 0.0
        for q in perm:
            mask |= 1 << q
            nval_sub, nval_sup = values(mask)
            shap_sub[q] += nval_sub - val_sub
            shap_sup[q] += nval_sup - val_sup
            val_sub, val_sup = nval_sub, nval_sup
    f = math.factorial(k)
    return np.array(shap_sub) / f, np.array(shap_sup) / f


def _report(k, sub, sup, **meta):
    """Assemble a report from normalised value callables evaluated after the walk."""
    full = (1 << k) - 1
    phi_sub, phi_sup = meta.pop("phi")
    single = [sub(1 << i) for i in range(k)]
    drop = [sub(full) - sub(full ^ (1 << i)) for i in range(k)]
    single_sup = [sup(1 << i) for i in range(k)]
    drop_sup = [sup(full) - sup(full ^ (1 << i)) for i in range(k)]
    return ShapleyReport(
        k=k, phi_sub=phi_sub, phi_sup=phi_sup,
        s_first_sub=np.array(single), t_total_sub=np.array(drop),
        # the dual game swaps the roles of first-order and total effects
        s_first_sup=np.array(drop_sup), t_total_sup=np.array(single_sup),
        algorithm="permutation", **meta,
    )


def permutation_shapley_table(table):
    """Permutation-route Shapley effects from a prebuilt :class:`ValueTable`."""
    k = table.k
    _guard(k)
    sub, sup = table.normalized()
    sub_l, sup_l = sub.tolist(), sup.tolist()
    pairs = list(zip(sub_l, sup_l))
    phi = _walk(k, pairs.__getitem__)
    return _report(
        k, sub_l.__getitem__, sup_l.__getitem__, phi=phi,
        var_y=table.var_y, scale_sub=table.total_sub, scale_sup=table.total_sup,
        dependent=table.dependent, substituted=table.substituted,
    )


def permutation_shapley(d, table=None, substitute=True):
    """Shapley effects of an evaluated design by the permutation route.

    With ``table`` the walk reads values from it. Otherwise values are
    computed on first request along the permutation paths and memoised;
    the memo is attached to the returned report as ``report.memo``.
    """
    if table is not None:
        rep = permutation_shapley_table(table)
        rep.evals = d.evals
        rep.model, rep.n, rep.seed = d.model.name, d.n, d.design.seed
        return rep
    k = d.k
    _guard(k)
    full = (1 << k) - 1
    memo = ValueMemo(d)
    var_y = float(np.var(d.yb, ddof=1))
    dependent = not d.transform.independent
    substituted = dependent and substitute

    def values(mask):
        jansen, sobol, _ = memo.get(mask)
        if not substituted:
            return sobol, jansen
        return sobol, var_y if mask == full else memo.get(full ^ mask)[2]

    phi_sub, phi_sup = _walk(k, values)
    hits, misses = memo.hits, memo.misses

    def sub(mask):
        return memo.get(mask)[1]

    def sup(mask):
        return values(mask)[1]

    scale_sub, scale_sup = sub(full), sup(full)
    rep = _report(
        k,
        lambda m: sub(m) / scale_sub,
        lambda m: sup(m) / scale_sup,
        phi=(phi_sub / scale_sub, phi_sup / scale_sup),
        var_y=var_y, scale_sub=scale_sub, scale_sup=scale_sup,
        dependent=dependent, substituted=substituted,
        evals=d.evals, model=d.model.name, n=d.n, seed=d.design.seed,
    )
    memo.hits, memo.misses = hits, misses
    rep.memo = memo
    return rep


def _guard(k):
    if k > MAX_PERMUTATION_K:
        raise DimensionError(
            f"k = {k} needs {math.factorial(k)} permutations; the permutation route is "
            f"limited to k <= {MAX_PERMUTATION_K}, use the Möbius route instead"
        )
