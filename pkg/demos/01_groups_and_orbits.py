"""Finite shift groups acting on signals by permuting coordinates."""

import numpy as np

from irep import make_cyclic_group, make_torus_group, torus_element

# Z_6 acting on R^6 by circular shifts
group, action = make_cyclic_group(6)
print("Cayley table of Z_6:")
print(group.cayley)
print("inverse of 2:", group.inv(2))
print("axioms:", group.check_axioms())

signal = np.array([1.0, 2.0, 3.0, 0.0, 0.0, 0.0])
print("\nsignal        ", signal)
print("shifted by 1  ", action.act(1, signal))
print("shifted by 5  ", action.act(5, signal))

# the orbit lists g·I for every element, in element order
print("\norbit of a one-hot vector in Z_3:")
print(make_cyclic_group(3)[1].orbit(np.array([1.0, 0.0, 0.0])))

# 2D translations on a 4x4 torus; images are flattened row-major
tgroup, taction = make_torus_group(4)
image = np.zeros((4, 4))
image[0, 0] = 1.0
moved = taction.act(torus_element(4, 1, 2), image.ravel()).reshape(4, 4)
print("\none-hot pixel moved by (1, 2):")
print(moved)

# a permutation never changes the Euclidean norm
rng = np.random.default_rng(0)
x = rng.standard_normal(16)
print("\nnorm before / after:", np.linalg.norm(x), np.linalg.norm(taction.act(7, x)))
