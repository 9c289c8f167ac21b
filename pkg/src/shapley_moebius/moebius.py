"""Möbius inversion on the subset lattice and the effects derived from it.

Masks use the binary coding where bit ``j`` (value ``2**j``) stands for
input ``j`` (zero based), so the least significant bit is the first input.
All tables are indexed by mask and have length ``2**k``; slot 0 is the
empty set and always holds zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimators import ValueTable, popcounts


def moebius_transform(values):
    """Möbius inverse of a set function given as a mask-indexed array.

    Uses the in-place butterfly over bits: after processing bit ``j``,
    every entry with bit ``j`` set has the entry without it subtracted.
    Works along the last axis, so several rows can be inverted at once.
    Cost is ``k * 2**k``; no inclusion matrix is formed.
    """
    f = np.array(values, dtype=float, copy=True)
    size = f.shape[-1]
    k = size.bit_length() - 1
    if size != 1 << k:
        raise ValueError(f"table length {size} is not a power of two")
    lead = f.shape[:-1]
    for j in range(k):
        v = f.reshape(*lead, -1, 2, 1 << j)
        v[..., 1, :] -= v[..., 0, :]
    return f


def zeta_transform(mob):
    """Inverse of :func:`moebius_transform`: ``val(a) = sum of mob(b) for b in a``."""
    f = np.array(mob, dtype=float, copy=True)
    size = f.shape[-1]
    k = size.bit_length() - 1
    lead = f.shape[:-1]
    for j in range(k):
        v = f.reshape(*lead, -1, 2, 1 << j)
        v[..., 1, :] += v[..., 0, :]
    return f


def moebius_submask(values):
    """Möbius inverse by walking ``sub = (sub - 1) & mask`` for every mask (O(3**k))."""
    values = np.asarray(values, dtype=float)
    card = popcounts(values.size.bit_length() - 1)
    out = np.zeros_like(values)
    for mask in range(1, values.size):
        acc = 0.0
        sub = mask
        while sub:
            acc += -values[sub] if (card[mask] - card[sub]) & 1 else values[sub]
            sub = (sub - 1) & mask
        out[mask] = acc
    return out


def moebius_sierpinski(values):
    """Möbius inverse using XOR-generated rows of Pascal's triangle modulo 2.

    Row ``i`` of the subset-inclusion pattern is obtained from row ``i-1``
    as ``xor([1, sel], [sel, 0])``; its nonzero positions are the
    non-empty submasks of ``i``.
    """
    values = np.asarray(values, dtype=float)
    size = values.size
    card = popcounts(size.bit_length() - 1)
    out = np.zeros_like(values)
    sel = np.array([True])
    for i in range(1, size):
        ii = np.flatnonzero(sel) + 1
        signs = np.where((card[i] + card[ii]) & 1, -1.0, 1.0)
        out[i] = values[ii] @ signs
        sel = np.logical_xor(np.concatenate([[True], sel]), np.concatenate([sel, [False]]))
    return out


def inclusion_matrix(k, with_empty=False):
    """Dense 0/1 matrix ``Z[j, l] = 1`` iff mask ``j`` is a subset of mask ``l``.

    Without the empty set the matrix is ``(2**k - 1)``-square (rows and
    columns are masks ``1 .. 2**k - 1``).
    """
    masks = np.arange(0 if with_empty else 1, 1 << k)
    return ((masks[:, None] & masks[None, :]) == masks[:, None]).astype(np.int8)


def shapley_from_moebius(mob, card=None):
    """Shapley values ``phi_i = sum over masks containing i of mob / |mask|``."""
    mob = np.asarray(mob, dtype=float)
    k = mob.size.bit_length() - 1
    card = popcounts(k) if card is None else card
    w = np.zeros_like(mob)
    w[1:] = mob[1:] / card[1:]
    return np.array([w.reshape(-1, 2, 1 << i)[:, 1, :].sum() for i in range(k)])


def supersets(mask, k):
    m = np.arange(1 << k)
    return m[(m & mask) == mask]


def shapley_owen_from_moebius(mob, mask, card=None):
    """Shapley-Owen effect of the group ``mask``: ``sum mob(b) / (|b| - |mask| + 1)`` over ``b >= mask``."""
    mob = np.asarray(mob, dtype=float)
    k = mob.size.bit_length() - 1
    card = popcounts(k) if card is None else card
    if mask <= 0 or mask >= 1 << k:
        raise ValueError(f"mask {mask} is not a non-empty subset of {k} inputs")
    sup = supersets(mask, k)
    return float(np.sum(mob[sup] / (card[sup] - card[mask] + 1)))


def first_and_total_from_moebius(mob):
    """Singleton Möbius masses and, per input, the sum of masses containing it."""
    mob = np.asarray(mob, dtype=float)
    k = mob.size.bit_length() - 1
    first = np.array([mob[1 << i] for i in range(k)])
    total = np.array([mob.reshape(-1, 2, 1 << i)[:, 1, :].sum() for i in range(k)])
    return first, total


def owen_bounds_from_moebius(mob, mask):
    """``(mob(mask), superset importance, sharpened upper bound)``.

    The bracket ``mob <= Shapley-Owen <= sharpened <= superset`` is only
    guaranteed when every Möbius mass is nonnegative.
    """
    mob = np.asarray(mob, dtype=float)
    k = mob.size.bit_length() - 1
    lower = float(mob[mask])
    upper = float(mob[supersets(mask, k)].sum())
    return lower, upper, 0.5 * (lower + upper)


@dataclass
class MoebiusTable:
    """Möbius inverses of both value rows, normalised so each row totals one.

    ``scale_sub``/``scale_sup`` are the full-mask values used for the
    normalisation, so ``m * scale`` recovers absolute variance shares.
    """

    k: int
    m_sup: np.ndarray
    m_sub: np.ndarray
    card: np.ndarray
    scale_sub: float = 1.0
    scale_sup: float = 1.0

    def row(self, estimator):
        if estimator == "subset":
            return self.m_sub
        if estimator == "superset":
            return self.m_sup
        raise ValueError(f"estimator must be 'subset' or 'superset', got {estimator!r}")

    def all_nonnegative(self, estimator="subset"):
        return bool(np.all(self.row(estimator)[1:] >= 0))


def moebius_invert(table: ValueTable) -> MoebiusTable:
    """Normalise both rows of a value table and take their Möbius inverses."""
    sub, sup = table.normalized()
    m = moebius_transform(np.vstack([sub, sup]))
    return MoebiusTable(table.k, m[1], m[0], table.card, table.total_sub, table.total_sup)


def shapley_effects(M: MoebiusTable, estimator="subset"):
    return shapley_from_moebius(M.row(estimator), M.card)


def shapley_owen(M: MoebiusTable, mask, estimator="subset"):
    return shapley_owen_from_moebius(M.row(estimator), mask, M.card)


def first_and_total(M: MoebiusTable, estimator="subset"):
    """First-order and total effects from one row.

    The superset row holds the dual game ``E[V[Y | X_~a]]``, whose
    singleton masses are total effects and whose per-input mass sums are
    first-order effects, so the two outputs are swapped for that row.
    """
    first, total = first_and_total_from_moebius(M.row(estimator))
    if estimator == "superset":
        return total, first
    return first, total


def owen_bounds(M: MoebiusTable, mask, estimator="subset"):
    return owen_bounds_from_moebius(M.row(estimator), mask)


@dataclass
class ShapleyReport:
    """Effects for one design, both estimator rows, normalised to a grand total of one.

    ``owen`` maps group masks to Shapley-Owen effects of the subset row.
    ``var_y`` is the B-block sample variance; ``scale_sub``/``scale_sup``
    are the full-mask values each row was normalised by.
    """

    k: int
    phi_sub: np.ndarray
    phi_sup: np.ndarray
    s_first_sub: np.ndarray
    t_total_sub: np.ndarray
    s_first_sup: np.ndarray
    t_total_sup: np.ndarray
    var_y: float
    scale_sub: float
    scale_sup: float
    evals: int = 0
    owen: dict = field(default_factory=dict)
    dependent: bool = False
    substituted: bool = False
    algorithm: str = "moebius"
    model: str = ""
    seed: int = 0
    n: int = 0
    moebius: MoebiusTable | None = None
    memo: object = None

    @property
    def phi(self):
        return self.phi_sub

    @property
    def s_first(self):
        return self.s_first_sub

    @property
    def t_total(self):
        return self.t_total_sub

    @property
    def superset_label(self):
        if self.substituted:
            return "superset (dependent substitute)"
        if self.dependent:
            return "superset (Jansen, invalid under dependence)"
        return "superset"

    def absolute(self, estimator="subset"):
        """Shapley effects as absolute variance contributions."""
        if estimator == "subset":
            return self.phi_sub * self.scale_sub
        return self.phi_sup * self.scale_sup

    @property
    def negative_flags(self):
        """Names of reported quantities with negative entries (estimation noise)."""
        out = []
        for name in ("phi_sub", "phi_sup", "s_first_sub", "t_total_sub", "s_first_sup", "t_total_sup"):
            if np.any(getattr(self, name) < 0):
                out.append(name)
        out += [f"owen:{m}" for m, v in self.owen.items() if v < 0]
        return out

    def to_dict(self, include_moebius=False):
        d = {
            "model": self.model,
            "algorithm": self.algorithm,
            "n": self.n,
            "seed": self.seed,
            "k": self.k,
            "evals": self.evals,
            "dependent": self.dependent,
            "superset_label": self.superset_label,
            "var_y": self.var_y,
            "scale_sub": self.scale_sub,
            "scale_sup": self.scale_sup,
            "subset": {
                "phi": self.phi_sub.tolist(),
                "phi_abs": self.absolute("subset").tolist(),
                "first": self.s_first_sub.tolist(),
                "total": self.t_total_sub.tolist(),
            },
            "superset": {
                "phi": self.phi_sup.tolist(),
                "phi_abs": self.absolute("superset").tolist(),
                "first": self.s_first_sup.tolist(),
                "total": self.t_total_sup.tolist(),
            },
            "owen": {mask_label(m): v for m, v in sorted(self.owen.items())},
            "negative": self.negative_flags,
        }
        if include_moebius and self.moebius is not None:
            d["moebius"] = {
                "subset": self.moebius.m_sub[1:].tolist(),
                "superset": self.moebius.m_sup[1:].tolist(),
            }
        return d


def mask_label(mask):
    """1-based input list of a mask, e.g. ``0b101 -> "1,3"``."""
    return ",".join(str(j + 1) for j in range(mask.bit_length()) if mask >> j & 1)


def report_from_moebius(M: MoebiusTable, table: ValueTable, owen_masks=(), **meta):
    s_sub, t_sub = first_and_total(M, "subset")
    s_sup, t_sup = first_and_total(M, "superset")
    return ShapleyReport(
        k=M.k,
        phi_sub=shapley_effects(M, "subset"),
        phi_sup=shapley_effects(M, "superset"),
        s_first_sub=s_sub,
        t_total_sub=t_sub,
        s_first_sup=s_sup,
        t_total_sup=t_sup,
        var_y=table.var_y,
        scale_sub=M.scale_sub,
        scale_sup=M.scale_sup,
        owen={int(m): shapley_owen(M, int(m)) for m in owen_masks},
        dependent=table.dependent,
        substituted=table.substituted,
        moebius=M,
        **meta,
    )
