"""How many labelled images a linear classifier needs, with and without invariance.

Takes about 15 seconds.
"""

from irep.experiments import run_sample_complexity

report = run_sample_complexity(p=16, k_obj=4, noise=0.1, trials=20, seed=11)

print(f"{'n':>6} {'raw':>8} {'oracle':>8} {'invariant':>10}")
for i, n in enumerate(report.n_grid):
    row = [report.mean_accuracy(name)[i] for name in ("raw", "oracle", "invariant")]
    print(f"{n:>6} {row[0]:>8.3f} {row[1]:>8.3f} {row[2]:>10.3f}")

for name in ("raw", "oracle", "invariant"):
    print(f"examples to reach {report.target:.0%} with {name}: {report.n_star(name)}")
print("raw / oracle:", report.ratio_raw_over_oracle, "| idealized count:", report.ideal_ratio)
