"""Pooling over part of the group: local invariance and covariance."""

import numpy as np

from irep import (Nonlinearity, covariance_check, localization_check, make_cyclic_group,
                  pog_measurement, pog_represent, sample_templates, shift_window)
from irep.pooling import BinGrid

group, action = make_cyclic_group(16)
window = shift_window(group, 11)  # the local average sees shifts 0..10 only

# a short bump and a short template, far from the window edges
signal = np.zeros(16)
signal[4:7] = [0.5, 1.0, 0.5]
template = np.zeros(16)
template[0:3] = [1.0, 0.5, 0.25]
eta = Nonlinearity.identity()

check = localization_check(signal, template, action, window, 1, eta)
print("responses vanish where the windows differ:", check.satisfied)
before = pog_measurement(signal, template, action, window, eta)
after = pog_measurement(action.act(1, signal), template, action, window, eta)
print("local average before / after shifting the input:", before, after)

# a large shift moves the bump out of the field, and the measurement changes
big = pog_measurement(action.act(8, signal), template, action, window, eta)
print("after a shift of 8:", big,
      "| condition holds?", localization_check(signal, template, action, window, 8, eta).satisfied)

# the tensor over all base points moves with the input instead of staying fixed
bank = sample_templates(16, 4, seed=0, action=action)
grid = BinGrid.uniform(16)
tensor = pog_represent(signal, bank, shift_window(group, 3), grid)
print("\nlocal CDF tensor shape (base point, template, threshold):", tensor.values.shape)
print("covariance error for a shift of 5:",
      covariance_check(signal, 5, bank, shift_window(group, 3), grid)["max_error"])
