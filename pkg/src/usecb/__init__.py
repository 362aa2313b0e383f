"""usecb: microgrid load management with a thermal-mass comfort objective.

Library layers:

* :mod:`usecb.grid` -- admittance assembly, linear sensitivities, losses,
  radial flows.
* :mod:`usecb.thermal` -- building dynamics, comfort utility, the balanced
  profit and its convex objective.
* :mod:`usecb.feasible` -- power box and voltage band with Euclidean
  projection.
* :mod:`usecb.mirror` -- online stochastic mirror descent, step sizing,
  regret accounting.
* :mod:`usecb.sim` -- scenarios, observation noise, closed-loop runs.
* :mod:`usecb.experiments` -- replication experiments (regret growth,
  scheme comparison).
* :mod:`usecb.cli` -- the ``usecb`` command.
"""

from .errors import (AssumptionError, ConfigError, FeasibilityError,
                     IngestionError, ModelError, ProjectionError, UsecbError)
from .feasible import FeasibleSet, build_feasible
from .grid import (GridModel, Line, SensitivityBlocks, build_admittance,
                   compute_sensitivity, decompose_blocks, full_power_loss,
                   grid_intake, grounded_impedance, load_network_csv,
                   power_loss, radial_line_flows, voltage_approx)
from .mirror import (BregmanGeometry, IterateTrace, MdConfig,
                     bregman_divergence, estimate_bounds, euclidean_geometry,
                     md_step, minimize_projected, regret, run_online,
                     step_size)
from .sim import (NoiseConfig, RunResult, Scenario, build_ieee37_scenario,
                  load_scenario, metrics, observe, run_scheme)
from .thermal import (BuildingParams, ObjectiveParams, ThermalState, grad_f,
                      objective_coefficients, objective_f, satisfaction,
                      thermal_step, usecb_profit)
from .timeseries import TimeSeries, load_timeseries

__version__ = "0.1.0"

__all__ = [
    "AssumptionError", "ConfigError", "FeasibilityError", "IngestionError",
    "ModelError", "ProjectionError", "UsecbError",
    "FeasibleSet", "build_feasible",
    "GridModel", "Line", "SensitivityBlocks", "build_admittance",
    "compute_sensitivity", "decompose_blocks", "full_power_loss",
    "grid_intake", "grounded_impedance", "load_network_csv", "power_loss",
    "radial_line_flows", "voltage_approx",
    "BregmanGeometry", "IterateTrace", "MdConfig", "bregman_divergence",
    "estimate_bounds", "euclidean_geometry", "md_step", "minimize_projected",
    "regret", "run_online", "step_size",
    "NoiseConfig", "RunResult", "Scenario", "build_ieee37_scenario",
    "load_scenario", "metrics", "observe", "run_scheme",
    "BuildingParams", "ObjectiveParams", "ThermalState", "grad_f",
    "objective_coefficients", "objective_f", "satisfaction", "thermal_step",
    "usecb_profit",
    "TimeSeries", "load_timeseries",
    "__version__",
]
