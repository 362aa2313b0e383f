"""Slot-by-slot closed-loop simulation.

A scenario bundles the network, building fleet, profiles, noise model and
horizon.  ``run_scheme`` drives one of three controllers through it:

* ``stochastic``: one projected mirror-descent step per slot on noisy
  observations,
* ``exact``: a full deterministic minimization each slot, still on noisy
  observations,
* ``oracle``: the same minimization on the true data (lower-bound trace).

Thermal states always advance with the true physics and the applied
control.  Static scenarios freeze the inputs (and the indoor temperatures)
so that the per-slot objective is stationary; the constraint set is then
built once from the true generation.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ConfigError
from .feasible import build_feasible
from .grid import GridModel, grid_intake, load_network_csv, power_loss
from .mirror import estimate_bounds, minimize_projected, step_size
from .thermal import BuildingParams, ObjectiveParams, ThermalState, thermal_step
from .timeseries import load_timeseries

__all__ = [
    "NoiseConfig",
    "Scenario",
    "RunResult",
    "observe",
    "run_scheme",
    "build_ieee37_scenario",
    "load_scenario",
    "metrics",
    "write_run_csv",
    "write_json",
    "data_path",
]

SCHEMES = ("stochastic", "exact", "oracle")

# Sub-stream ids for per-slot noise and scenario-level draws.
STREAM_GEN = 0
STREAM_COUT = 1
STREAM_CIN = 2
STREAM_BOUNDS = 3
STREAM_INIT = 10
STREAM_GAINS = 11
STREAM_REP = 12

_EXACT_TOL = 1e-8
_EXACT_CAP = 100_000


def data_path(name):
    """Path to a bundled fixture file."""
    return resources.files("usecb").joinpath("data", name)


@dataclass
class NoiseConfig:
    """Observation noise: Gaussian per entry, deterministic per (seed, t)."""

    sigma_temp: float = 0.0
    sigma_gen: float = 0.0
    gen_mode: str = "relative"

    def __post_init__(self):
        if self.sigma_temp < 0 or self.sigma_gen < 0:
            raise ConfigError("noise sigmas must be nonnegative")
        if self.gen_mode not in ("relative", "absolute"):
            raise ConfigError(f"unknown gen noise mode {self.gen_mode!r}")


def observe(true_values, noise, t, seed, stream=0, relative=False, floor=None):
    """Noisy reading of ``true_values``: value + N(0, sigma^2) per entry.

    Draws are a pure function of (seed, t, stream, entry index).  With
    ``relative`` the sigma scales with the absolute true value.  ``floor``
    clamps the result from below (negative power readings are unphysical).
    """
    values = np.atleast_1d(np.asarray(true_values, dtype=float))
    sigma = float(noise)
    if sigma == 0.0:
        out = values.copy()
    else:
        rng = np.random.default_rng(
            np.random.SeedSequence((int(seed), int(t), int(stream))))
        scale = sigma * np.abs(values) if relative else sigma
        out = values + scale * rng.standard_normal(values.shape)
    if floor is not None:
        np.maximum(out, floor, out=out)
    return out


@dataclass
class Scenario:
    """Fully resolved simulation inputs (profiles sampled, draws frozen)."""

    name: str
    kind: str
    model: GridModel
    buildings: BuildingParams
    bounds: dict
    noise: NoiseConfig
    horizon: int
    dt: float
    lambda_price: float
    seed: int
    p_g_true: np.ndarray
    c_out_true: np.ndarray
    c_in_init: np.ndarray
    p_fixed: np.ndarray
    s_base_mva: float = 1.0
    bus_names: list = None
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in ("static", "dynamic"):
            raise ConfigError(f"unknown scenario kind {self.kind!r}")
        if self.horizon < 1 or self.dt <= 0:
            raise ConfigError("horizon and dt must be positive")
        if self.p_g_true.shape != (self.horizon, len(self.model.gen_buses)):
            raise ConfigError("generation profile does not cover the horizon")
        if self.c_out_true.shape != (self.horizon,):
            raise ConfigError("temperature profile does not cover the horizon")

    @property
    def is_static(self):
        return self.kind == "static"

    @property
    def n_loads(self):
        return len(self.model.load_buses)

    def bus_label(self, idx):
        if self.bus_names and idx < len(self.bus_names):
            return str(self.bus_names[idx])
        return str(idx)

    def env_feasible_set(self, p_g=None):
        """Constraint set from a generation vector (true slot-0 by default)."""
        return build_feasible(
            self.model.blocks,
            self.p_g_true[0] if p_g is None else p_g,
            self.model.U_N,
            self.bounds,
            p_fixed=self.p_fixed,
            include_gen_buses=self.bounds.get("include_gen_buses", True),
        )

    def true_objective(self, slot=0, validate=False):
        """(state, params) for the true inputs of one slot."""
        state = ThermalState(self.c_in_init.copy(),
                             np.full(self.n_loads, self.c_out_true[slot]))
        objp = ObjectiveParams(self.lambda_price, self.buildings,
                               self.model.blocks, self.model.U_N,
                               self.p_g_true[slot], self.p_fixed,
                               validate=validate)
        return state, objp


class _QuadObjective:
    """Per-slot quadratic f(p) = p'Ap + b'p with A fixed by the topology.

    Only the linear term depends on observations, so the simulator rebuilds
    just ``b`` each slot.  Must agree with thermal.objective_coefficients;
    a unit test pins the two together.
    """

    def __init__(self, scenario):
        bld = scenario.buildings
        blocks = scenario.model.blocks
        lam = scenario.lambda_price
        u2 = scenario.model.U_N ** 2
        self.lam = lam
        self.bld = bld
        self.m = bld.alpha2 * bld.dt
        self.A = np.diag(bld.beta * self.m * self.m) / lam + np.real(blocks.Q) / u2
        self.H2 = 2.0 * self.A
        self.base_b = np.ones(bld.n) + 2.0 * (np.real(blocks.Q) @ scenario.p_fixed) / u2
        self.NT2 = 2.0 * np.real(blocks.N).T / u2
        self.comfort_w = 2.0 * bld.beta * self.m / lam

    def linear_term(self, c_in, c_out, p_g):
        drive = (c_in + self.bld.alpha1 * (c_out - c_in) * self.bld.dt
                 - self.bld.c_set)
        return self.base_b - self.comfort_w * drive - self.NT2 @ p_g

    def value(self, x, b):
        return float(x @ self.A @ x + b @ x)

    def grad(self, x, b):
        return self.H2 @ x + b


def scenario_gradient_oracle(scenario, seed, quad=None, slot_of=None):
    """Stochastic gradient closure over per-slot observations.

    ``oracle(t, x)`` observes the slot inputs under (seed, t) noise and
    returns the gradient of the observed objective at x.  For static
    scenarios the true inputs are the frozen slot-0 values; ``slot_of``
    overrides the step-to-slot mapping (used by bound sampling).
    """
    quad = _QuadObjective(scenario) if quad is None else quad
    noise = scenario.noise
    n_c = scenario.n_loads
    c_in_true = scenario.c_in_init
    if slot_of is None:
        if scenario.is_static:
            slot_of = lambda t: 0
        else:
            slot_of = lambda t: min(t - 1, scenario.horizon - 1)

    def oracle(t, x):
        slot = slot_of(t)
        pg = observe(scenario.p_g_true[slot], noise.sigma_gen, t, seed,
                     stream=STREAM_GEN,
                     relative=noise.gen_mode == "relative", floor=0.0)
        cout = observe(np.full(n_c, scenario.c_out_true[slot]),
                       noise.sigma_temp, t, seed, stream=STREAM_COUT)
        cin = observe(c_in_true, noise.sigma_temp, t, seed, stream=STREAM_CIN)
        return quad.grad(x, quad.linear_term(cin, cout, pg))

    return oracle


def md_bounds(scenario, seed, fset=None, quad=None, samples=64):
    """(D, G*) for the step rule, sampled from the stochastic oracle.

    Noise-free scenarios sample the true gradient instead.  Deterministic
    under (scenario.seed-independent) run ``seed``.
    """
    quad = _QuadObjective(scenario) if quad is None else quad
    fset = scenario.env_feasible_set() if fset is None else fset
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), STREAM_BOUNDS)))
    noisy = scenario.noise.sigma_temp > 0 or scenario.noise.sigma_gen > 0
    if noisy:
        # Cycle the sampled contexts across the horizon so a drifting
        # scenario contributes its whole gradient range to G*.
        probe_slots = np.unique(np.linspace(0, scenario.horizon - 1, 8,
                                            dtype=int))
        oracle = scenario_gradient_oracle(
            scenario, seed, quad,
            slot_of=lambda t: int(probe_slots[t % probe_slots.size]))
        counter = [0]

        def sample_grad(x):
            counter[0] += 1
            # Offset slot index keeps bound-sampling noise streams disjoint
            # from the run's per-slot streams.
            return oracle(1_000_000_000 + counter[0], x)
    else:
        state, objp = scenario.true_objective()
        b0 = quad.linear_term(state.c_in, state.c_out, objp.p_g)

        def sample_grad(x):
            return quad.grad(x, b0)

    return estimate_bounds(fset, sample_grad, samples=samples, rng=rng)


@dataclass
class RunResult:
    """Arrays over the horizon for one (scheme, seed) run."""

    scheme: str
    seed: int
    scenario: Scenario = field(repr=False)
    p_c: np.ndarray = None
    p_0: np.ndarray = None
    loss: np.ndarray = None
    f_true: np.ndarray = None
    feasible: np.ndarray = None
    p_g_true: np.ndarray = None
    p_g_obs: np.ndarray = None
    c_out_true: np.ndarray = None
    c_out_obs: np.ndarray = None
    c_in_true: np.ndarray = None
    c_in_obs: np.ndarray = None
    c_in_after: np.ndarray = None


def run_scheme(scenario, scheme, seed=None):
    """Simulate one control scheme over the scenario horizon."""
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; pick one of {SCHEMES}")
    seed = scenario.seed if seed is None else int(seed)
    model = scenario.model
    blocks = model.blocks
    bld = scenario.buildings
    noise = scenario.noise
    T = scenario.horizon
    n_c = scenario.n_loads
    quad = _QuadObjective(scenario)
    include_gen = scenario.bounds.get("include_gen_buses", True)

    env_set = scenario.env_feasible_set()
    if scheme == "stochastic":
        D, g_star = md_bounds(scenario, seed, fset=env_set, quad=quad)

    out = RunResult(scheme, seed, scenario)
    out.p_c = np.empty((T, n_c))
    out.p_0 = np.empty(T)
    out.loss = np.empty(T)
    out.f_true = np.empty(T)
    out.feasible = np.empty(T, dtype=bool)
    out.p_g_true = scenario.p_g_true.copy()
    out.p_g_obs = np.empty_like(scenario.p_g_true)
    out.c_out_true = scenario.c_out_true.copy()
    out.c_out_obs = np.empty((T, n_c))
    out.c_in_true = np.empty((T, n_c))
    out.c_in_obs = np.empty((T, n_c))
    out.c_in_after = np.empty((T, n_c))

    c_in = scenario.c_in_init.copy()
    a = env_set.project(env_set.midpoint())

    for t in range(T):
        pg_t = scenario.p_g_true[t]
        cout_t = np.full(n_c, scenario.c_out_true[t])
        out.c_in_true[t] = c_in

        if scheme == "oracle":
            pg_view, cout_view, cin_view = pg_t, cout_t, c_in
        else:
            pg_view = observe(pg_t, noise.sigma_gen, t, seed, stream=STREAM_GEN,
                              relative=noise.gen_mode == "relative", floor=0.0)
            cout_view = observe(cout_t, noise.sigma_temp, t, seed,
                                stream=STREAM_COUT)
            cin_view = observe(c_in, noise.sigma_temp, t, seed, stream=STREAM_CIN)
        out.p_g_obs[t] = pg_view
        out.c_out_obs[t] = cout_view
        out.c_in_obs[t] = cin_view

        if scenario.is_static:
            fset_t = env_set
        else:
            fset_t = build_feasible(blocks, pg_view, model.U_N, scenario.bounds,
                                    p_fixed=scenario.p_fixed,
                                    include_gen_buses=include_gen)

        b_ctrl = quad.linear_term(cin_view, cout_view, pg_view)
        if scheme == "stochastic":
            g = quad.grad(a, b_ctrl)
            eta = step_size(t + 1, D, g_star, 1.0)
            a = fset_t.project(a - eta * g)
        else:
            a = minimize_projected(lambda x: quad.grad(x, b_ctrl), fset_t,
                                   x0=a, tol=_EXACT_TOL, max_iter=_EXACT_CAP,
                                   f_fn=lambda x: quad.value(x, b_ctrl))

        # Bookkeeping against the true physics.
        cons = a + scenario.p_fixed
        loss_t = power_loss(blocks.M, blocks.N, blocks.Q, pg_t, cons, model.U_N)
        out.p_c[t] = a
        out.loss[t] = loss_t
        out.p_0[t] = grid_intake(pg_t, cons, loss_t)
        b_true = quad.linear_term(c_in, cout_t, pg_t)
        out.f_true[t] = quad.value(a, b_true)
        out.feasible[t] = fset_t.contains(a)

        true_state = ThermalState(c_in, cout_t)
        stepped = thermal_step(true_state, a, bld)
        if scenario.is_static:
            out.c_in_after[t] = c_in
        else:
            out.c_in_after[t] = stepped
            c_in = stepped
    return out


def metrics(run, trailing_window=100):
    """Aggregate metrics for one run, including the conservation residual."""
    scn = run.scenario
    cons = run.p_c + scn.p_fixed
    residual = run.p_0 - (cons.sum(axis=1) - run.p_g_true.sum(axis=1) + run.loss)
    dev = np.abs(run.c_in_after - scn.buildings.c_set)
    w = min(trailing_window, run.f_true.shape[0])
    return {
        "scheme": run.scheme,
        "seed": run.seed,
        "slots": int(run.f_true.shape[0]),
        "loss_total": float(run.loss.sum()),
        "loss_mean": float(run.loss.mean()),
        "intake_total": float(run.p_0.sum()),
        "intake_mean": float(run.p_0.mean()),
        "objective_mean": float(run.f_true.mean()),
        "objective_final": float(run.f_true[-1]),
        "objective_trailing_variance": float(np.var(run.f_true[-w:])),
        "mean_temp_deviation": float(dev.mean()),
        "all_feasible": bool(run.feasible.all()),
        "conservation_max_residual": float(np.max(np.abs(residual))),
    }


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_run_csv(run, path):
    """Per-slot wide CSV, floats at 17 significant digits, atomic replace."""
    scn = run.scenario
    load_labels = [scn.bus_label(b) for b in scn.model.load_buses]
    gen_labels = [scn.bus_label(b) for b in scn.model.gen_buses]
    cols = ["t", "p_0", "loss", "objective", "feasible", "c_out_true"]
    cols += [f"pg_true_{g}" for g in gen_labels]
    cols += [f"pg_obs_{g}" for g in gen_labels]
    for tag in ("pc", "cin_true", "cin_obs", "cout_obs", "cin_after"):
        cols += [f"{tag}_{b}" for b in load_labels]

    tmp = str(path) + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for t in range(run.f_true.shape[0]):
            row = [t, run.p_0[t], run.loss[t], run.f_true[t],
                   run.feasible[t], run.c_out_true[t]]
            row += list(run.p_g_true[t]) + list(run.p_g_obs[t])
            row += list(run.p_c[t]) + list(run.c_in_true[t])
            row += list(run.c_in_obs[t]) + list(run.c_out_obs[t])
            row += list(run.c_in_after[t])
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    os.replace(tmp, path)


def write_json(obj, path):
    """Deterministic JSON dump (sorted keys, 17 significant digits)."""

    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        if isinstance(o, (np.floating, float)):
            return float(format(float(o), ".17g"))
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, np.ndarray):
            return [clean(v) for v in o.tolist()]
        if isinstance(o, (np.bool_,)):
            return bool(o)
        return o

    tmp = str(path) + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(clean(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _resolve(name, base_dir):
    cand = os.path.join(base_dir, name) if base_dir else name
    if os.path.exists(cand):
        return cand
    packaged = data_path(name)
    if packaged.is_file():
        return str(packaged)
    raise ConfigError(f"cannot locate referenced file {name!r}")


def _deep_merge(base, override):
    out = dict(base)
    for key, val in (override or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def scenario_from_config(cfg, base_dir=""):
    """Build a Scenario from a parsed config document."""
    if cfg.get("schema_version") != 1:
        raise ConfigError("config must declare schema_version: 1")
    kind = cfg.get("kind", "static")
    if kind == "flows":
        raise ConfigError("flows configs describe radial cases, not scenarios")
    s_base = float(cfg.get("s_base_mva", 1.0))
    seed = int(cfg.get("seed", 0))
    if seed < 0:
        raise ConfigError("seed must be a nonnegative integer")

    lines, n_buses = load_network_csv(_resolve(cfg["network"], base_dir))
    bus_names = cfg.get("bus_names")
    if bus_names is not None and len(bus_names) != n_buses:
        raise ConfigError("bus_names length does not match the network")
    name_to_idx = {str(n): i for i, n in enumerate(bus_names or [])}

    gen_cfg = cfg["generation"]
    gen_idx = []
    for b in gen_cfg["buses"]:
        key = str(b)
        if key in name_to_idx:
            gen_idx.append(name_to_idx[key])
        else:
            gen_idx.append(int(b))
    gen_idx = sorted(gen_idx)
    load_idx = sorted(set(range(1, n_buses)) - set(gen_idx))
    model = GridModel.build(lines, n_buses, gen_idx, load_idx, U_N=1.0)

    horizon = int(cfg["horizon"])
    dt = float(cfg.get("dt_s", 48.0))
    start = float(cfg.get("start_s", 0.0))
    if kind == "static":
        times = np.full(horizon, start)
    else:
        times = start + dt * np.arange(horizon)

    pv = load_timeseries(_resolve(gen_cfg["profile"], base_dir))
    norm = pv.resample(times)
    cap = np.asarray(gen_cfg["capacity_mw"], dtype=float)
    cap = np.broadcast_to(cap, (len(gen_idx),)) / s_base
    p_g_true = norm[:, None] * cap[None, :]

    temp = load_timeseries(_resolve(cfg["temperature_profile"], base_dir))
    c_out_true = temp.resample(times)

    n_c = len(load_idx)
    ind = cfg.get("indoor_init", {"mean": 70.0, "std": 0.0})
    rng_init = np.random.default_rng(np.random.SeedSequence((seed, STREAM_INIT)))
    c_in_init = float(ind["mean"]) + float(ind.get("std", 0.0)) \
        * rng_init.standard_normal(n_c)

    load_cfg = cfg["load"]
    p_fixed = np.full(n_c, float(load_cfg.get("fixed_mw", 0.0)) / s_base)
    p_min = float(load_cfg.get("ac_min_mw", 0.0)) / s_base
    p_max = float(load_cfg["ac_max_mw"]) / s_base

    bcfg = cfg["buildings"]
    rng_gain = np.random.default_rng(np.random.SeedSequence((seed, STREAM_GAINS)))
    gains = rng_gain.normal(float(bcfg.get("cooling_gain_mean", 1.0)),
                            float(bcfg.get("cooling_gain_std", 0.0)), n_c)
    for _ in range(100):
        bad = gains <= 0
        if not bad.any():
            break
        gains[bad] = rng_gain.normal(float(bcfg.get("cooling_gain_mean", 1.0)),
                                     float(bcfg.get("cooling_gain_std", 0.0)),
                                     int(bad.sum()))
    alpha2 = gains / (p_max * dt)
    alpha1 = np.full(n_c, float(bcfg.get("alpha1_per_s", 0.0)))
    beta = np.full(n_c, float(bcfg["beta"]))

    sp = bcfg.get("set_point", {"mode": "common", "value": 70.0})
    lam = float(cfg.get("lambda_price", 1.0))
    if sp["mode"] == "common":
        c_set = np.full(n_c, float(sp["value"]))
    elif sp["mode"] == "tracking":
        # Position each building's unconstrained optimum at a fraction of the
        # AC range: solve grad f(target) = 0 for the set point, coupling
        # included.  Keeps the stationary-noise experiment's optimizer
        # strictly interior.
        frac = float(sp.get("target_fraction", 0.5))
        target = np.full(n_c, p_min + frac * (p_max - p_min))
        m = alpha2 * dt
        u2 = model.U_N ** 2
        Q = np.real(model.blocks.Q)
        Nblk = np.real(model.blocks.N)
        A = np.diag(beta * m * m) / lam + Q / u2
        kappa = (np.ones(n_c) - 2.0 * (Nblk.T @ p_g_true[0]) / u2
                 + 2.0 * (Q @ p_fixed) / u2)
        drive = lam * (2.0 * (A @ target) + kappa) / (2.0 * beta * m)
        a1dt = alpha1 * dt
        c_set = c_in_init + a1dt * (c_out_true[0] - c_in_init) - drive
    else:
        raise ConfigError(f"unknown set_point mode {sp['mode']!r}")

    buildings = BuildingParams(alpha1, alpha2, beta, c_set, dt)
    vb = cfg.get("voltage_band", {})
    bounds = {
        "p_min": p_min,
        "p_max": p_max,
        "v_min": float(vb.get("v_min", -np.inf)),
        "v_max": float(vb.get("v_max", np.inf)),
        "include_gen_buses": bool(vb.get("include_gen_buses", True)),
    }
    ncfg = cfg.get("noise", {})
    noise = NoiseConfig(sigma_temp=float(ncfg.get("sigma_temp", 0.0)),
                        sigma_gen=float(ncfg.get("sigma_gen", 0.0)),
                        gen_mode=str(ncfg.get("gen_mode", "relative")))

    scenario = Scenario(
        name=str(cfg.get("name", "scenario")),
        kind=kind,
        model=model,
        buildings=buildings,
        bounds=bounds,
        noise=noise,
        horizon=horizon,
        dt=dt,
        lambda_price=lam,
        seed=seed,
        p_g_true=p_g_true,
        c_out_true=c_out_true,
        c_in_init=c_in_init,
        p_fixed=p_fixed,
        s_base_mva=s_base,
        bus_names=bus_names,
        meta={"config": cfg},
    )
    # Fail-fast validation: objective convexity and nonempty constraint set.
    scenario.true_objective(validate=True)
    scenario.env_feasible_set()
    return scenario


def load_scenario(path, overrides=None):
    """Load a scenario JSON document, optionally merging overrides."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    cfg = _deep_merge(cfg, overrides)
    return scenario_from_config(cfg, base_dir=os.path.dirname(os.path.abspath(path)))


def build_ieee37_scenario(overrides=None, variant="static"):
    """Bundled IEEE-37 feeder scenario; overrides deep-merge into the config."""
    fname = {
        "static": "ieee37_static.json",
        "dynamic": "ieee37_dynamic.json",
        "regret": "ieee37_regret.json",
    }.get(variant)
    if fname is None:
        raise ConfigError(f"unknown variant {variant!r}")
    path = data_path(fname)
    if not path.is_file():
        raise ConfigError(f"missing bundled fixture {fname}")
    with path.open() as fh:
        cfg = json.load(fh)
    cfg = _deep_merge(cfg, overrides)
    return scenario_from_config(cfg, base_dir="")


def replication_seed(base_seed, rep):
    """Stable derived seed for replication ``rep`` of a base seed."""
    ss = np.random.SeedSequence((int(base_seed), STREAM_REP, int(rep)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
