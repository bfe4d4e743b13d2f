"""Independent numerical oracles for the closed-form hulls."""

import sys

from .bands import band_compare, inclusion_compare
from .biconjugate import (
    DualRect,
    PenaltySpec,
    biconjugate,
    biconjugate_array,
    biconjugate_grid,
    eval_penalty,
    kernel_field,
    make_penalty,
    sup_lagrangian,
    sup_lagrangian_sampled,
    translation_check,
)
from .campaign import CampaignConfig, oracle_report, property_campaign
from .generators import GENERATORS, generate
from .grid import BaryGrid, GridField
from .lamination import lamination_fixed_point

__all__ = [name for name, obj in list(globals().items()) if not name.startswith("_") and not isinstance(obj, type(sys))]
