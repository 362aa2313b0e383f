"""Replication experiments built on the simulator and the online solver.

Everything here is deterministic under (config, seed): replication seeds
derive from the base seed, noise streams are keyed by (seed, slot), and
results merge by sorted job keys regardless of executor scheduling.
Replications fan out over processes (the per-slot work is many small numpy
calls, so threads would serialize on the interpreter lock); job functions
and their arguments stay picklable for that reason.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import AssumptionError
from .mirror import (MdConfig, euclidean_geometry, minimize_projected,
                     regret, run_online)
from .sim import (_QuadObjective, md_bounds, metrics, replication_seed,
                  run_scheme, scenario_gradient_oracle)

__all__ = [
    "static_problem",
    "run_regret_experiment",
    "run_static_comparison",
    "map_replications",
    "default_workers",
]


def default_workers():
    return max(1, min(4, os.cpu_count() or 1))


def map_replications(fn, jobs, workers=None):
    """Run ``fn(*args)`` for every ``key -> args`` entry in ``jobs``.

    Returns ``{key: result}`` with keys processed in sorted order.  With
    more than one worker the jobs run in separate processes, so ``fn`` and
    all arguments must be picklable.
    """
    keys = sorted(jobs)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(keys) <= 1:
        return {k: fn(*jobs[k]) for k in keys}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *jobs[k]) for k in keys]
        return {k: fut.result() for k, fut in zip(keys, futures)}


def _frozen_quadratic(scenario):
    quad = _QuadObjective(scenario)
    state, objp = scenario.true_objective()
    b_true = quad.linear_term(state.c_in, state.c_out, objp.p_g)
    return quad, b_true


def static_problem(scenario):
    """Frozen-objective pieces of a static scenario.

    Returns (fset, f_true, grad_true, a_star, f_star).  a_star is pinned by
    deterministic projected gradient descent to 1e-10.
    """
    if not scenario.is_static:
        raise AssumptionError("stationary objective requires a static scenario")
    quad, b_true = _frozen_quadratic(scenario)
    fset = scenario.env_feasible_set()

    def f_true(x):
        return quad.value(np.asarray(x, dtype=float), b_true)

    def grad_true(x):
        return quad.grad(np.asarray(x, dtype=float), b_true)

    a_star = minimize_projected(grad_true, fset, tol=1e-10, f_fn=f_true)
    return fset, f_true, grad_true, a_star, f_true(a_star)


def run_scheme_job(scenario, scheme, seed):
    """Picklable wrapper for one simulator run."""
    return run_scheme(scenario, scheme, seed=seed)


def _regret_job(scenario, T, seed, D, g_star, a_star):
    quad, b_true = _frozen_quadratic(scenario)
    fset = scenario.env_feasible_set()
    cfg = MdConfig(D=D, G_star=g_star, initial_point=fset.midpoint())
    oracle = scenario_gradient_oracle(scenario, seed, quad)
    trace = run_online(euclidean_geometry(), cfg, fset, oracle, T)
    total, _ = regret(trace, lambda x: quad.value(np.asarray(x, float), b_true),
                      a_star)
    return total


def run_regret_experiment(scenario, horizons=(100, 1000, 10000),
                          replications=20, base_seed=None, workers=None):
    """Mean regret growth over horizons plus a concentration tail check.

    Fits the least-squares slope of log mean R_T against log T and counts
    how often R_T exceeds 2 D G* sqrt(T/alpha) + eps with
    eps = 2 D G* sqrt(T/alpha); the comparison bound is the concentration
    expression exp(-alpha eps^2 / (16 T D^2 G*^2)), which evaluates to
    exp(-1/4) at that eps.
    """
    base_seed = scenario.seed if base_seed is None else int(base_seed)
    fset, _, _, a_star, f_star = static_problem(scenario)
    D, g_star = md_bounds(scenario, base_seed, fset=fset)
    alpha = 1.0

    horizons = sorted(int(t) for t in horizons)
    jobs = {(T, rep): (scenario, T, replication_seed(base_seed, rep),
                       D, g_star, a_star)
            for T in horizons for rep in range(replications)}
    totals = map_replications(_regret_job, jobs, workers=workers)

    per_T = {}
    for T in horizons:
        vals = np.array([totals[(T, rep)] for rep in range(replications)])
        envelope = 2.0 * D * g_star * math.sqrt(T / alpha)
        threshold = envelope + envelope
        per_T[T] = {
            "mean_regret": float(vals.mean()),
            "std_regret": float(vals.std()) if replications > 1 else None,
            "tail_frequency": float(np.mean(vals >= threshold)),
            "tail_bound": float(math.exp(-0.25)),
            "envelope": float(envelope),
        }

    logt = np.log([float(T) for T in horizons])
    logr = np.log([per_T[T]["mean_regret"] for T in horizons])
    slope = float(np.polyfit(logt, logr, 1)[0]) if len(horizons) > 1 else None

    return {
        "horizons": horizons,
        "replications": replications,
        "base_seed": base_seed,
        "D": float(D),
        "G_star": float(g_star),
        "alpha": alpha,
        "f_star": float(f_star),
        "slope": slope,
        "per_horizon": {str(T): per_T[T] for T in horizons},
        "max_tail_frequency": float(max(per_T[T]["tail_frequency"]
                                        for T in horizons)),
    }


def _comparison_job(scenario, scheme, seed, window):
    run = run_scheme(scenario, scheme, seed=seed)
    w = min(window, run.f_true.shape[0])
    return {
        "final": float(run.f_true[-1]),
        "minimum": float(run.f_true.min()),
        "trailing_variance": float(np.var(run.f_true[-w:])),
        "all_feasible": bool(run.feasible.all()),
        "metrics": metrics(run, trailing_window=w),
    }


def run_static_comparison(scenario, replications=50, base_seed=None,
                          window=100, rel_tol=0.01, workers=None):
    """Stochastic vs exact scheme over seeded replications of a static run.

    Per replication: does the stochastic scheme's final true objective land
    within ``rel_tol`` of the oracle optimum, and is its trailing-window
    objective variance strictly below the exact scheme's?
    """
    base_seed = scenario.seed if base_seed is None else int(base_seed)
    _, _, _, _, f_star = static_problem(scenario)

    jobs = {(scheme, rep): (scenario, scheme,
                            replication_seed(base_seed, rep), window)
            for scheme in ("stochastic", "exact") for rep in range(replications)}
    results = map_replications(_comparison_job, jobs, workers=workers)

    tol = rel_tol * abs(f_star)
    converged = []
    var_lower = []
    for rep in range(replications):
        st = results[("stochastic", rep)]
        ex = results[("exact", rep)]
        converged.append(st["final"] - f_star <= tol)
        var_lower.append(st["trailing_variance"] < ex["trailing_variance"])

    return {
        "replications": replications,
        "base_seed": base_seed,
        "f_star": float(f_star),
        "tolerance": float(tol),
        "converged_fraction": float(np.mean(converged)),
        "variance_lower_fraction": float(np.mean(var_lower)),
        "all_feasible": bool(all(results[k]["all_feasible"] for k in results)),
        "stochastic_trailing_variance_mean": float(np.mean(
            [results[("stochastic", r)]["trailing_variance"]
             for r in range(replications)])),
        "exact_trailing_variance_mean": float(np.mean(
            [results[("exact", r)]["trailing_variance"]
             for r in range(replications)])),
    }
