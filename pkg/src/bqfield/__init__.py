"""Biquaternionic electro-gravimagnetic field dynamics on periodic grids.

The package models a complex field strength A = sqrt(eps) E + i sqrt(mu) H and
a complex charge-current Theta = i rho + J as parts of biquaternions, evolves
them with the gradient operators D+- = d/dtau +- i nabla, and measures the
conservation laws the continuous model promises: charge balance, the Poynting
law, the current-energy first law, interaction energy exchange, integral
identities over sub-boxes, and jump relations on light-speed fronts.
"""

from .biquaternion import (
    Biquaternion,
    basis_vector,
    ccross,
    cdot,
    from_scalar,
    from_vector,
    one,
)
from .fields import (
    AField,
    ChargeCurrent,
    Grid,
    Medium,
    PowerForce,
    assemble_afield,
    assemble_theta,
    decompose_afield,
    decompose_force,
    decompose_theta,
    velocity_current,
)
from .operators import Nabla, apply_box, apply_dminus, apply_dplus
from .evolution import (
    MODES,
    NumericalAbort,
    SimState,
    StepperConfig,
    field_totals,
    interaction_rhs,
    maxwell_rhs,
    free_theta_rhs,
    state_rhs,
    step_rk4,
    united_field,
)
from .diagnostics import (
    BoxRegion,
    CurrentEnergy,
    DiagnosticsEngine,
    EnergyMomentum,
    FluxSurface,
    IntegralLawAccumulator,
    InteractionEnergy,
    ResidualSeries,
    box_rho_residual,
    charge_conservation_residual,
    cumulative_integral,
    current_energy,
    energy_momentum,
    first_law_residual,
    integral_laws,
    interaction_energy,
    power_force,
    poynting_residual,
    reciprocity_residual,
)
from .shock import (
    FrontData,
    admissible_jump,
    afield_jump_energy,
    afield_jump_residual,
    characteristic_determinant,
    characteristic_matrix,
    characteristic_roots,
    theta_jump_residual,
)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .runner import RunReport, build_state, run_scenario
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "Biquaternion",
    "basis_vector",
    "cdot",
    "ccross",
    "from_scalar",
    "from_vector",
    "one",
    "AField",
    "ChargeCurrent",
    "Grid",
    "Medium",
    "PowerForce",
    "assemble_afield",
    "assemble_theta",
    "decompose_afield",
    "decompose_force",
    "decompose_theta",
    "velocity_current",
    "Nabla",
    "apply_box",
    "apply_dminus",
    "apply_dplus",
    "MODES",
    "NumericalAbort",
    "SimState",
    "StepperConfig",
    "field_totals",
    "interaction_rhs",
    "maxwell_rhs",
    "free_theta_rhs",
    "state_rhs",
    "step_rk4",
    "united_field",
    "BoxRegion",
    "CurrentEnergy",
    "DiagnosticsEngine",
    "EnergyMomentum",
    "FluxSurface",
    "IntegralLawAccumulator",
    "InteractionEnergy",
    "ResidualSeries",
    "box_rho_residual",
    "charge_conservation_residual",
    "cumulative_integral",
    "current_energy",
    "energy_momentum",
    "first_law_residual",
    "integral_laws",
    "interaction_energy",
    "power_force",
    "poynting_residual",
    "reciprocity_residual",
    "FrontData",
    "admissible_jump",
    "afield_jump_energy",
    "afield_jump_residual",
    "characteristic_determinant",
    "characteristic_matrix",
    "characteristic_roots",
    "theta_jump_residual",
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "parse_scenario",
    "RunReport",
    "build_state",
    "run_scenario",
    "run_selftest",
    "__version__",
]
