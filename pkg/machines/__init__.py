from __future__ import annotations

from machines.io import dump_machine, load_machine, load_srtm, machine_from_dict, machine_to_dict
from machines.model import (
    DEFAULT_BLANK,
    SRTM,
    Computation,
    Configuration,
    Transition,
    WeightedTM,
    build_machine,
)
from machines.simulator import (
    behavior,
    computations,
    exact_length_behavior,
    exact_length_computations,
    initial_configuration,
    space_meter,
    step,
    time_meter,
)
from machines.transforms import is_deterministic, pad_machine, rename_states, srtm_to_wtm

__all__ = [
    "Computation",
    "Configuration",
    "DEFAULT_BLANK",
    "SRTM",
    "Transition",
    "WeightedTM",
    "behavior",
    "build_machine",
    "computations",
    "dump_machine",
    "exact_length_behavior",
    "exact_length_computations",
    "initial_configuration",
    "is_deterministic",
    "load_machine",
    "load_srtm",
    "machine_from_dict",
    "machine_to_dict",
    "pad_machine",
    "rename_states",
    "space_meter",
    "srtm_to_wtm",
    "step",
    "time_meter",
]
