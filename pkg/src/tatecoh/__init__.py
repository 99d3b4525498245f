"""Exact Tate cohomology of finite groups, splitting modules of group
extensions, and a census harness for the groups they realize."""

from .cohomology import (CapExceeded, Cocycle2, H2Description, cyclic_tate_oracle, h2,
                         is_coboundary, is_cohomologically_trivial, tate)
from .exactla import AbelianInvariants, IntMatrix, snf
from .extensions import (GroupExtensionData, ModuleExtensionData, dagger, middle_group,
                         p_quotient, roundtrip_check, roundtrip_check_module, splitting_module, star)
from .gmodules import (GModule, ModuleMap, augmentation_ideal, direct_sum, group_ring,
                       group_ring_mod, trivial_module)
from .groups import FiniteGroup, builtin, cyclic, direct_product, from_table
from .theorems import (census_run, find_h_minus2_vanisher, h0_realization_witness,
                       h2_realization_witness, h_minus2_realization_witness)

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants", "CapExceeded", "Cocycle2", "FiniteGroup", "GModule",
    "GroupExtensionData", "H2Description", "IntMatrix", "ModuleExtensionData", "ModuleMap",
    "augmentation_ideal", "builtin", "census_run", "cyclic", "cyclic_tate_oracle", "dagger",
    "direct_product", "direct_sum", "find_h_minus2_vanisher", "from_table", "group_ring",
    "group_ring_mod", "h0_realization_witness", "h2", "h2_realization_witness",
    "h_minus2_realization_witness", "is_coboundary", "is_cohomologically_trivial",
    "middle_group", "p_quotient", "roundtrip_check", "roundtrip_check_module", "snf",
    "splitting_module", "star", "tate", "trivial_module",
]
