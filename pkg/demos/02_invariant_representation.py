"""Invariant CDF and moment representations from a bank of random templates.

Every template is expanded into its orbit once. A signal is projected on
all transformed templates and the resulting multiset of numbers is pooled.
Transforming the signal only reorders that multiset.
"""

import numpy as np

from irep import (PoolingConfig, make_cyclic_group, orbit_equivalent, represent,
                  sample_templates)

group, action = make_cyclic_group(16)
bank = sample_templates(16, 64, seed=1, action=action)
rng = np.random.default_rng(2)
signal = rng.standard_normal(16)

cdf = PoolingConfig(kind="cdf", bins=64)
moments = PoolingConfig(kind="moments", moments=6)

rep = represent(signal, bank, cdf)
print("representation shape (templates x thresholds):", rep.values.shape)
print("first row:", np.round(rep.values[0, ::8], 3))

# invariance: every shift of the signal gives the same matrix, bit for bit
worst = max(np.max(np.abs(represent(action.act(g, signal), bank, cdf).values - rep.values))
            for g in range(group.order))
print("\nmax change over all 16 shifts:", worst)

# selectivity: a signal outside the orbit gives a different matrix
other = signal.copy()
other[3] += 0.2
print("\nsame orbit?", orbit_equivalent(signal / np.linalg.norm(signal),
                                        other / np.linalg.norm(other), action))
gap = np.max(np.abs(represent(other, bank, cdf).values - rep.values))
print("largest CDF difference:", gap)

m = represent(signal, bank, moments).values
print("\nmoments m_1..m_6 for template 0:", np.round(m[0], 4))

# representations export to JSON and CSV
print("\nCSV header:", rep.to_csv().splitlines()[0][:60], "...")
