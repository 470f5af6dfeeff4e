"""Orbit distance from one-dimensional projections, and how many templates it needs."""

import numpy as np

from irep import (bound_k, concentration_experiment, ks_distance, make_cyclic_group,
                  sample_templates, sliced_distance)

# exact KS distance between two samples, no binning
print("KS({0, 1}, {0.5, 1}) =", ks_distance(np.array([0.0, 1.0]), np.array([0.5, 1.0])))

group, action = make_cyclic_group(8)
bank = sample_templates(8, 64, seed=7, action=action)
a = np.arange(1.0, 9.0)
b = np.array([1.0, 3, 2, 4, 5, 6, 8, 7])
print("\nd_hat(a, b)       =", sliced_distance(a, b, bank).d_hat)
print("d_hat(a, shift a) =", sliced_distance(a, action.act(3, a), bank).d_hat)

# Hoeffding plus a union bound over pairs gives the template count
k = bound_k(n=20, epsilon=0.1, delta=0.1)
print("\ntemplates needed for n=20, eps=delta=0.1:", k)

# a smaller run of the concentration experiment (the full one uses k=1060)
report = concentration_experiment(n=10, k=200, epsilon=0.1, delta=0.1, k_ref=4000, seed=3)
print(f"k={report.k}: fraction of pairs off by more than eps = {report.violation_fraction}, "
      f"largest deviation {report.max_deviation:.4f}")
