"""End-to-end drivers: design, evaluation, value table, effects."""
from __future__ import annotations

from itertools import combinations

from .estimators import build_value_table, check_dimension
from .models import BenchmarkModel
from .moebius import moebius_invert, report_from_moebius
from .permutation import permutation_shapley
from .pickfreeze import evaluate_base
from .qmc import generate_design


def all_pairs(k):
    """Masks of every pair of inputs, in lexicographic order of the pair."""
    return [(1 << i) | (1 << j) for i, j in combinations(range(k), 2)]


def _resolve(model, transform):
    if isinstance(model, BenchmarkModel):
        return model.handle, transform if transform is not None else model.transform()
    if transform is None:
        raise ValueError("an InputTransform is required for a bare ModelHandle")
    return model, transform


def evaluate(model, transform=None, n=1024, seed=0, full_set_shortcut=True):
    """Draw the Sobol' design for ``model`` and evaluate the two base blocks."""
    handle, transform = _resolve(model, transform)
    check_dimension(handle.k)
    design = generate_design(n, handle.k, seed)
    return evaluate_base(handle, design, transform, full_set_shortcut)


def shapley_moebius(model, transform=None, n=1024, seed=0, owen=(), substitute=True,
                    full_set_shortcut=True, workers=1):
    """Shapley and Shapley-Owen effects by Möbius inversion of all subset values.

    Costs ``2n + (2**k - 1) n`` model runs, ``n`` fewer with the full-set
    shortcut.

    Examples
    --------
    >>> from shapley_moebius.models import get_model
    >>> rep = shapley_moebius(get_model("ishigami"), n=1024, owen=[0b101])
    >>> rep.phi.round(2)
    array([0.43, 0.45, 0.12, 0.  ])
    """
    d = evaluate(model, transform, n, seed, full_set_shortcut)
    table = build_value_table(d, substitute=substitute, workers=workers)
    return report_from_moebius(
        moebius_invert(table), table, owen_masks=owen,
        evals=d.evals, model=d.model.name, n=n, seed=seed,
    )


def shapley_permutation(model, transform=None, n=1024, seed=0, substitute=True,
                        full_set_shortcut=True):
    """Shapley effects by the memoised permutation walk (``k <= 10``)."""
    d = evaluate(model, transform, n, seed, full_set_shortcut)
    return permutation_shapley(d, substitute=substitute)
