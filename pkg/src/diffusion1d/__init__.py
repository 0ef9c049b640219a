"""Symmetric one-dimensional diffusions through their Dirichlet-form data:
effective intervals, adapted scale functions, speed and killing measures,
closability and smooth-core decisions, merging, and Monte Carlo checks."""

from .cantorsets import ConstantRemoval, GeometricRemoval
from .dirichlet import (
    BoundaryVerdict,
    DiffusionSpec,
    EffectiveInterval,
    TestFunction,
    boundary_classification,
    energy,
    extend_to_open,
    hitting_probability,
    in_domain,
    is_dirichlet_subspace,
    linear_in_x_function,
    scale_linear_function,
    validate,
)
from .gapsystems import GapFamily, build_gap_system
from .measures import (
    Atom,
    CantorComplementDensity,
    CantorComponent,
    CantorTower,
    ConstDensity,
    ExpRecipDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
    default_base_point,
)
from .scale import ScaleFunction, is_adapted
from .simulate import (
    EmbeddedChain,
    SimConfig,
    build_chain,
    estimate_hitting,
    mass_share_right,
    occupation_profile,
    trap_check,
)
from .smoothcore import (
    HamzaDensity,
    MergeResult,
    cinf_merge,
    connection_classes,
    contains_smooth,
    hamza_closable,
    intervals_from_density,
    is_special_standard_core,
    regular_set,
    scale_connected,
)

__version__ = "0.1.0"
