"""A second layer on top of local CDFs, and kernels between projection laws."""

import numpy as np

from irep import (DistributionKernel, Nonlinearity, embed_layer1, kernel_eval,
                  make_cyclic_group, make_layer2_templates, sample_templates,
                  second_layer_measurement)
from irep.hierarchy import layer2_responses, min_gram_eigenvalue
from irep.pog import full_window, shift_window
from irep.pooling import BinGrid

group, action = make_cyclic_group(8)
bank = sample_templates(8, 8, seed=0, action=action)
grid = BinGrid.uniform(16)
w1 = shift_window(group, 3)
w2 = full_window(group)

rng = np.random.default_rng(1)
signal = rng.standard_normal(8)
layer1 = embed_layer1(signal, bank, w1, grid)
print("layer-1 output shape:", layer1.values.shape, "norm:", round(layer1.norm, 4))

# second-layer templates are normalized layer-1 outputs of sample signals
taus = make_layer2_templates(2, 3, bank, w1, grid, rng.standard_normal((6, 8)))
# center the sigmoid on the typical response so the output is informative
b = float(np.median(layer2_responses(layer1, taus[0], w2)))
eta = Nonlinearity.sigmoid(b, 20.0)
values = [second_layer_measurement(action.act(g, signal), bank, w1, w2, taus[0], eta, grid)
          for g in range(8)]
print("second-layer value under all 8 shifts:", np.round(values, 12))

# kernels between laws: Gaussian mean embedding and Hellinger on histograms
laws = [rng.uniform(-1, 1, 16) for _ in range(30)]
gauss = DistributionKernel.mean_embedding(0.2)
hell = DistributionKernel.hellinger(grid)
print("\nK(law0, law1) gaussian:", round(kernel_eval(gauss, laws[0], laws[1]), 4))
print("smallest Gram eigenvalues:", min_gram_eigenvalue(gauss, laws), min_gram_eigenvalue(hell, laws))
