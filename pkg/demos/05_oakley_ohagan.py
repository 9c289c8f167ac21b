"""Fifteen inputs: all 32767 subset values from one design.

With n = 2048 this takes under a minute. The first-order and total effect
sums show how much of the output variance is due to interactions.
"""
# %%
import numpy as np

from shapley_moebius import get_model, shapley_moebius

rep = shapley_moebius(get_model("oakley"), n=2048)
print("input  S_i     phi(subset)  phi(superset)  T_i")
for i in range(15):
    print(f"X{i + 1:<4d} {rep.s_first_sub[i]:.4f}  {rep.phi_sub[i]:.4f}       {rep.phi_sup[i]:.4f}"
          f"         {rep.t_total_sup[i]:.4f}")
print(f"sum S = {rep.s_first_sub.sum():.4f}, sum T = {rep.t_total_sup.sum():.4f}, runs = {rep.evals}")
