"""Invariant and selective representations for finite group actions."""

from .groups import (FiniteGroup, GroupAction, act, make_cyclic_group, make_group,
                     make_torus_group, orbit, torus_element, trivial_action)
from .hierarchy import (DistributionKernel, EmbeddedRep, SecondLayerTemplate, embed_layer1,
                        kernel_eval, kernel_pseudometric, make_layer2_templates,
                        second_layer_measurement)
from .metrics import (bound_k, concentration_experiment, ks_distance, pseudo_metric_check,
                      sliced_distance)
from .pog import (PogWindow, covariance_check, full_window, local_invariance_theorem_check,
                  localization_check, pog_measurement, pog_represent, rect_window, shift_window)
from .pooling import BinGrid, Nonlinearity, apply, cdf_vector, moment_vector
from .representations import (OrbitProjection, PoolingConfig, RepMatrix, TemplateBank,
                              orbit_equivalent, project_orbit, represent, represent_many,
                              sample_templates)

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "GroupAction", "act", "make_cyclic_group", "make_group", "make_torus_group",
    "orbit", "torus_element", "trivial_action",
    "DistributionKernel", "EmbeddedRep", "SecondLayerTemplate", "embed_layer1", "kernel_eval",
    "kernel_pseudometric", "make_layer2_templates", "second_layer_measurement",
    "bound_k", "concentration_experiment", "ks_distance", "pseudo_metric_check", "sliced_distance",
    "PogWindow", "covariance_check", "full_window", "local_invariance_theorem_check",
    "localization_check", "pog_measurement", "pog_represent", "rect_window", "shift_window",
    "BinGrid", "Nonlinearity", "apply", "cdf_vector", "moment_vector",
    "OrbitProjection", "PoolingConfig", "RepMatrix", "TemplateBank", "orbit_equivalent",
    "project_orbit", "represent", "represent_many", "sample_templates",
]
