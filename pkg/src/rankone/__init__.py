"""Rank-one cutting-and-stacking systems as explicit finite data.

The package turns a stage schedule (cut counts and spacer runs) into
symbolic blocks, an adic path space with a successor map, telescoped and
spacer-replaced models, and a finite-depth isomorphism verifier between
a system and its expansive rebuild.
"""

from .blocks import (
    DEFAULT_SYMBOL_BUDGET,
    KALIKOW_BOUNDED,
    KALIKOW_UNBOUNDED,
    BlockBudgetError,
    KalikowReport,
    Occurrences,
    build_block,
    detect_period,
    kalikow_sup_condition,
    occurrence_spacing,
    pea_condition,
    period_doubling_prefix,
    symbol_frequency,
)
from .diagram import (
    DOWN,
    ROOT_NONSPACER,
    ROOT_SPACER,
    SPACER,
    TOWER,
    AdicPath,
    Edge,
    LevelIndices,
    MeasureBracket,
    OrbitCoding,
    Overflow,
    PathError,
    code_orbit,
    cylinder_measure_bounds,
    export_dot,
    from_tower_coordinates,
    level_indices,
    maximal_path,
    minimal_path,
    path_from_json_dict,
    path_to_json_dict,
    predecessor,
    successor,
    validate_path,
)
from .isomorphism import (
    IsoContext,
    IsoFailure,
    IsoReport,
    MappingRangeError,
    exceptional_index,
    in_exceptional,
    to_source,
    to_target,
    verify_isomorphism,
)
from .schedules import (
    PROVED_CONVERGENT,
    PROVED_DIVERGENT,
    UNKNOWN_AT_DEPTH,
    DepthError,
    ParamSchedule,
    RatioSumReport,
    ScheduleError,
    Stage,
    ValidityReport,
    choose_telescoping_levels,
    heights,
    spacer_ratio_sum,
    tail_diverges,
    tail_mass_bound,
    validate,
)
from .telescoping import (
    ExpansiveModel,
    ReplacedStage,
    SpacerReplacementError,
    TelescopedSchedule,
    build_expansive,
    digit_decomposition,
    expansive_replace,
    one_tower_variant,
    telescope,
)

__version__ = "0.1.0"

__all__ = [
    "AdicPath",
    "BlockBudgetError",
    "DEFAULT_SYMBOL_BUDGET",
    "DOWN",
    "DepthError",
    "Edge",
    "ExpansiveModel",
    "IsoContext",
    "IsoFailure",
    "IsoReport",
    "KALIKOW_BOUNDED",
    "KALIKOW_UNBOUNDED",
    "KalikowReport",
    "LevelIndices",
    "MappingRangeError",
    "MeasureBracket",
    "Occurrences",
    "OrbitCoding",
    "Overflow",
    "PROVED_CONVERGENT",
    "PROVED_DIVERGENT",
    "ParamSchedule",
    "PathError",
    "RatioSumReport",
    "ROOT_NONSPACER",
    "ROOT_SPACER",
    "ReplacedStage",
    "SPACER",
    "ScheduleError",
    "SpacerReplacementError",
    "Stage",
    "TOWER",
    "TelescopedSchedule",
    "UNKNOWN_AT_DEPTH",
    "ValidityReport",
    "build_block",
    "build_expansive",
    "choose_telescoping_levels",
    "code_orbit",
    "cylinder_measure_bounds",
    "detect_period",
    "digit_decomposition",
    "exceptional_index",
    "expansive_replace",
    "export_dot",
    "from_tower_coordinates",
    "heights",
    "in_exceptional",
    "kalikow_sup_condition",
    "level_indices",
    "maximal_path",
    "minimal_path",
    "occurrence_spacing",
    "one_tower_variant",
    "path_from_json_dict",
    "path_to_json_dict",
    "pea_condition",
    "period_doubling_prefix",
    "predecessor",
    "spacer_ratio_sum",
    "successor",
    "symbol_frequency",
    "tail_diverges",
    "tail_mass_bound",
    "telescope",
    "to_source",
    "to_target",
    "validate",
    "validate_path",
    "verify_isomorphism",
    "__version__",
]
