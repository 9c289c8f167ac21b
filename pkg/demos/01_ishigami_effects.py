"""Shapley effects of the Ishigami function from one pick'n'freeze design.

A fourth input that the function ignores is added to show that a dummy
variable gets an effect of exactly zero, not just a small number.
"""
# %%
import numpy as np

from shapley_moebius import get_model, shapley_moebius
from shapley_moebius.analysis import all_pairs
from shapley_moebius.moebius import mask_label, owen_bounds
from shapley_moebius.oracles import exact_shapley, ishigami_game

model = get_model("ishigami")
rep = shapley_moebius(model, n=1024, seed=0, owen=all_pairs(4))

# %% Estimated and exact Shapley effects
truth = exact_shapley(ishigami_game())
print("input   estimate   exact    first    total")
for i, name in enumerate(model.inputs):
    print(f"{name:5s} {rep.phi[i]:9.4f} {truth[i]:8.4f} {rep.s_first[i]:8.4f} {rep.t_total[i]:8.4f}")
print(f"model runs: {rep.evals}  (2n + 14n with n = 1024)")

# %% Shapley-Owen effects of every pair, with their Möbius bounds
for mask, value in rep.owen.items():
    lo, up, sharp = owen_bounds(rep.moebius, mask)
    print(f"{{{mask_label(mask)}}}: {value:+.4f}   bounds [{lo:+.4f}, {sharp:+.4f}]  superset {up:+.4f}")

# %% Absolute variance shares add up to the output variance
print("absolute effects:", np.round(rep.absolute(), 3), "sum", round(rep.absolute().sum(), 3))
