"""Building thermal dynamics and the balanced profit objective.

Each load bus hosts one building with a first-order thermal model: the room
temperature moves toward the outdoor temperature at rate alpha1 and is
pulled down by AC power at rate alpha2.  Comfort is worth
-beta * (predicted temperature - set point)^2 per building per slot; power
drawn at the PCC costs lambda per unit.  Profit is comfort minus energy
cost.  Maximizing profit equals minimizing the convex quadratic ``f`` whose
coefficients :func:`objective_coefficients` assembles; the identity
``profit + lambda * f == const`` ties the two code paths together and is
enforced by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError

__all__ = [
    "BuildingParams",
    "ThermalState",
    "ObjectiveParams",
    "thermal_step",
    "satisfaction",
    "usecb_profit",
    "objective_f",
    "grad_f",
    "objective_coefficients",
]


@dataclass
class BuildingParams:
    """Per-building thermal and comfort parameters (vectors over load buses).

    alpha1: heat-exchange rate with the outdoors, 1/time.
    alpha2: cooling gain, degrees per unit power per unit time.
    beta:   comfort weight, currency per squared degree.
    c_set:  set-point temperature per building.
    dt:     slot length.
    """

    alpha1: np.ndarray
    alpha2: np.ndarray
    beta: np.ndarray
    c_set: np.ndarray
    dt: float

    def __post_init__(self):
        n = np.size(self.c_set)
        for name in ("alpha1", "alpha2", "beta", "c_set"):
            setattr(self, name, np.broadcast_to(
                np.asarray(getattr(self, name), dtype=float), (n,)).copy())
        if self.dt <= 0:
            raise ModelError("slot length must be positive")
        if np.any(self.alpha1 < 0):
            raise ModelError("alpha1 must be nonnegative")
        if np.any(self.alpha2 <= 0):
            raise ModelError("alpha2 must be positive")
        if np.any(self.beta <= 0):
            raise ModelError("beta must be positive")

    @property
    def n(self):
        return self.c_set.shape[0]


@dataclass
class ThermalState:
    """Indoor and outdoor temperatures per building."""

    c_in: np.ndarray
    c_out: np.ndarray

    def __post_init__(self):
        self.c_in = np.atleast_1d(np.asarray(self.c_in, dtype=float))
        self.c_out = np.broadcast_to(
            np.asarray(self.c_out, dtype=float), self.c_in.shape).copy()
        if not (np.all(np.isfinite(self.c_in)) and np.all(np.isfinite(self.c_out))):
            raise ModelError("temperatures must be finite")


def thermal_step(state, p_c, params):
    """Predicted indoor temperature after one slot of AC power ``p_c >= 0``."""
    p_c = np.asarray(p_c, dtype=float)
    dt = params.dt
    return (state.c_in
            + params.alpha1 * (state.c_out - state.c_in) * dt
            - params.alpha2 * p_c * dt)


def satisfaction(state, p_c, params):
    """Per-building comfort utility; zero at the set point, negative elsewhere."""
    predicted = thermal_step(state, p_c, params)
    dev = predicted - params.c_set
    return -params.beta * dev * dev


@dataclass
class ObjectiveParams:
    """Everything the per-slot objective needs besides the control vector.

    ``blocks`` supplies the M/N/Q sensitivities, ``p_g`` the current
    generation, ``p_fixed`` the inflexible consumption riding on the same
    buses.  Set ``validate=False`` to skip the convexity check when the
    same buildings/blocks pair was already validated (hot loop).
    """

    lambda_price: float
    buildings: BuildingParams
    blocks: object
    U_N: float
    p_g: np.ndarray
    p_fixed: np.ndarray = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.p_g = np.asarray(self.p_g, dtype=float)
        n = self.buildings.n
        if self.p_fixed is None:
            self.p_fixed = np.zeros(n)
        else:
            self.p_fixed = np.broadcast_to(
                np.asarray(self.p_fixed, dtype=float), (n,)).copy()
        if self.lambda_price <= 0:
            raise ModelError("electricity price must be positive")
        if self.validate:
            hess = self.hessian()
            if np.min(np.linalg.eigvalsh(0.5 * (hess + hess.T))) <= 0:
                raise ModelError("objective Hessian is not positive definite")

    def hessian(self):
        b = self.buildings
        m = b.alpha2 * b.dt
        lam = self.lambda_price
        return (2.0 * np.diag(b.beta * m * m)
                + 2.0 * lam * np.real(self.blocks.Q) / (self.U_N ** 2)) / lam


def objective_coefficients(state, objp):
    """Coefficients (A, b) of f(p) = p' A p + b' p for the current slot.

    Derived by expanding profit = sum of comfort utilities - lambda * intake
    and dropping every control-independent term.
    """
    bld = objp.buildings
    lam = objp.lambda_price
    dt = bld.dt
    m = bld.alpha2 * dt
    drive = state.c_in + bld.alpha1 * (state.c_out - state.c_in) * dt - bld.c_set
    u2 = objp.U_N ** 2
    Q = np.real(objp.blocks.Q)
    Nblk = np.real(objp.blocks.N)
    A = np.diag(bld.beta * m * m) / lam + Q / u2
    b = (np.ones(bld.n)
         - 2.0 * bld.beta * m * drive / lam
         - 2.0 * (Nblk.T @ objp.p_g) / u2
         + 2.0 * (Q @ objp.p_fixed) / u2)
    return A, b


def usecb_profit(state, p_c, objp):
    """Net profit: comfort revenue minus priced grid intake.

    Evaluated through the physical path (thermal step, loss, intake) so it
    stays an independent check on the expanded quadratic.
    """
    from .grid import grid_intake, power_loss

    p_c = np.asarray(p_c, dtype=float)
    comfort = float(np.sum(satisfaction(state, p_c, objp.buildings)))
    cons = p_c + objp.p_fixed
    loss = power_loss(np.real(objp.blocks.M), np.real(objp.blocks.N),
                      np.real(objp.blocks.Q), objp.p_g, cons, objp.U_N)
    p_0 = grid_intake(objp.p_g, cons, loss)
    return comfort - objp.lambda_price * p_0


def objective_f(state, p_c, objp):
    """Convex quadratic whose minimizer maximizes profit."""
    p_c = np.asarray(p_c, dtype=float)
    A, b = objective_coefficients(state, objp)
    return float(p_c @ A @ p_c + b @ p_c)


def grad_f(state, p_c, objp):
    """Analytic gradient of :func:`objective_f`."""
    p_c = np.asarray(p_c, dtype=float)
    A, b = objective_coefficients(state, objp)
    return 2.0 * (A @ p_c) + b
