from .baselines import (
    build_cgc_full,
    build_frc,
    build_uncoded_forget_s,
    frc_alpha,
    frc_group_count,
    frc_slot_size,
)
from .combinatorial import build_balanced, build_combinatorial, designated_representatives
from .cyclic import (
    build_cyclic1,
    build_cyclic2,
    cyclic_all_ones,
    cyclic_prefix_length,
    cyclic_width,
    cyclic_window,
    naive_load_bound,
)
from .intermediate import (
    IntermediateParams,
    build_intermediate,
    default_gammas,
    delta_star,
    enumerate_lists,
    intermediate_loads,
    intermediate_unrecovered_fraction,
)
from .tdesign import (
    BUILTIN_DESIGNS,
    TDesign,
    build_from_tdesign,
    design_from_blocks,
    dump_design,
    hadamard_design,
    load_design,
    tdesign_alpha,
)

__all__ = [
    "build_cgc_full",
    "build_frc",
    "build_uncoded_forget_s",
    "frc_alpha",
    "frc_group_count",
    "frc_slot_size",
    "build_balanced",
    "build_combinatorial",
    "designated_representatives",
    "build_cyclic1",
    "build_cyclic2",
    "cyclic_all_ones",
    "cyclic_prefix_length",
    "cyclic_width",
    "cyclic_window",
    "naive_load_bound",
    "IntermediateParams",
    "build_intermediate",
    "default_gammas",
    "delta_star",
    "enumerate_lists",
    "intermediate_loads",
    "intermediate_unrecovered_fraction",
    "BUILTIN_DESIGNS",
    "TDesign",
    "build_from_tdesign",
    "design_from_blocks",
    "dump_design",
    "hadamard_design",
    "load_design",
    "tdesign_alpha",
]
