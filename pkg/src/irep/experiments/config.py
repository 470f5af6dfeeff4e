"""Experiment configuration, validated on load.

Every section has defaults matching the desk-scale acceptance settings, so
``{}`` is a complete config. Unknown keys are rejected at every level.
"""

import json
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

from ..errors import ConfigError
from .sample_complexity import DEFAULT_N_GRID

SCHEMA_VERSION = 1


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GroupSpec(_Section):
    kind: Literal["cyclic", "torus"] = "cyclic"
    p: PositiveInt = 16


class InvarianceConfig(_Section):
    groups: List[GroupSpec] = [GroupSpec(kind="cyclic", p=16), GroupSpec(kind="torus", p=4)]
    signals: PositiveInt = 100
    k: PositiveInt = 32
    bins: PositiveInt = 32
    range: PositiveFloat = 1.0
    slope: PositiveFloat = 50.0
    moments: PositiveInt = 6
    sigmoid_tol: PositiveFloat = 1e-9


class SelectivityConfig(_Section):
    group: GroupSpec = GroupSpec(kind="cyclic", p=16)
    pairs: PositiveInt = 200
    k: Optional[PositiveInt] = None  # defaults to 4 * dimension
    bins: PositiveInt = 64
    range: PositiveFloat = 1.0
    moments: PositiveInt = 6
    perturbation: PositiveFloat = 0.25
    tol: PositiveFloat = 1e-9
    max_moment_confusions: int = Field(2, ge=0)
    max_order: PositiveInt = 1024


class ConcentrationConfig(_Section):
    group: GroupSpec = GroupSpec(kind="cyclic", p=16)
    n: int = Field(20, ge=2)
    epsilon: PositiveFloat = 0.1
    delta: PositiveFloat = 0.1
    c: PositiveFloat = 1.0
    k: Optional[PositiveInt] = None  # defaults to the bound
    k_ref_factor: float = Field(50.0, gt=1.0)
    chunk: PositiveInt = 2048


class PogConfig(_Section):
    groups: List[GroupSpec] = [GroupSpec(kind="cyclic", p=8), GroupSpec(kind="torus", p=4)]
    k: PositiveInt = 8
    bins: PositiveInt = 32
    width: PositiveInt = 3  # shift range on cyclic groups, square side on tori
    g_tilde: Optional[int] = Field(None, ge=0)  # None checks every group element
    signals: PositiveInt = 5
    localized_triples: PositiveInt = 50
    corpus_order: PositiveInt = 32
    tol: PositiveFloat = 1e-12


class HierarchyConfig(_Section):
    group: GroupSpec = GroupSpec(kind="cyclic", p=8)
    k: PositiveInt = 8
    bins: PositiveInt = 16
    width: PositiveInt = 3
    signals: PositiveInt = 20
    templates: PositiveInt = 5
    laws: PositiveInt = 30
    triples: PositiveInt = 50
    sigma: PositiveFloat = 0.2
    slope: PositiveFloat = 20.0
    tol: PositiveFloat = 1e-12
    sigmoid_tol: PositiveFloat = 1e-9
    psd_tol: PositiveFloat = 1e-9


class SampleComplexityConfig(_Section):
    p: PositiveInt = 16
    k_obj: PositiveInt = 4
    noise: float = Field(0.1, ge=0.0)
    trials: PositiveInt = 20
    n_grid: List[PositiveInt] = list(DEFAULT_N_GRID)
    test_size: PositiveInt = 300
    lam: PositiveFloat = 1e-3
    target: float = Field(0.9, gt=0.0, le=1.0)
    templates: PositiveInt = 16
    template_support: Literal["patch", "sphere"] = "patch"
    bins: PositiveInt = 32
    range: PositiveFloat = 1.0
    patches: Optional[List[List[List[float]]]] = None
    min_ratio: PositiveFloat = 4.0
    max_invariant_over_oracle: PositiveFloat = 2.0


class ExperimentConfig(_Section):
    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    seed: int = 0
    invariance: InvarianceConfig = InvarianceConfig()
    selectivity: SelectivityConfig = SelectivityConfig()
    concentration: ConcentrationConfig = ConcentrationConfig()
    pog: PogConfig = PogConfig()
    hierarchy: HierarchyConfig = HierarchyConfig()
    sample_complexity: SampleComplexityConfig = SampleComplexityConfig()

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    def with_seed(self, seed):
        return self.model_copy(update={"seed": int(seed)})

    def dump(self):
        return self.model_dump(mode="json", by_alias=True)


def parse_config(data):
    """Validate a config mapping; raise :class:`ConfigError` on any problem."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid config:\n{exc}") from exc


def load_config(path=None):
    if path is None:
        return ExperimentConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return parse_config(data)
