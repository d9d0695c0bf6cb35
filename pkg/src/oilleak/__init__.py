"""oilleak: source terms for oil leaking from a breached ship tank.

Three model families over one scenario description:

* quick estimators (inventory balance, film observation, optical flux);
* Bernoulli orifice models (constant-head volume, pressurized rate,
  quasi-steady tank draining, flow-regime discharge coefficients);
* two-stage submerged discharge (linear decay to hydrostatic balance,
  then wave-driven oscillatory exchange);
* a desk-scale 2D two-phase VOF solver with pressure projection.

See the CLI (``oilleak --help``) for the comparison harness.
"""

from .estimators import (FilmObservation, SourceTerm, film_volume,
                         inventory_balance, optical_flux,
                         reduce_to_source_term, thickness_from_appearance)
from .orifice import (FlowRegime, NoOutflow, above_waterline_volume,
                      classify_regime, drain_transient, orifice_mass_rate)
from .runner import RunOptions, RunResult, compare, export, run
from .scenario import (Breach, Environment, OilProperties, Scenario,
                       ScenarioError, TankGeometry, load_scenario, serialize,
                       validate)
from .series import LeakTimeSeries
from .two_stage import (EquilibriumReached, TwoStageState, WaveForcing,
                        initial_velocity, phase1_duration, phase1_velocity,
                        phase2_velocity, simulate_two_stage, wave_parameters)

__version__ = "0.1.0"

__all__ = [
    "FilmObservation", "SourceTerm", "film_volume", "inventory_balance",
    "optical_flux", "reduce_to_source_term", "thickness_from_appearance",
    "FlowRegime", "NoOutflow", "above_waterline_volume", "classify_regime",
    "drain_transient", "orifice_mass_rate",
    "RunOptions", "RunResult", "compare", "export", "run",
    "Breach", "Environment", "OilProperties", "Scenario", "ScenarioError",
    "TankGeometry", "load_scenario", "serialize", "validate",
    "LeakTimeSeries",
    "EquilibriumReached", "TwoStageState", "WaveForcing", "initial_velocity",
    "phase1_duration", "phase1_velocity", "phase2_velocity",
    "simulate_two_stage", "wave_parameters",
    "__version__",
]
