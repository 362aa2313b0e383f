"""Convex constraint set for the controllable load vector.

The set is a power box [p_min, p_max] intersected with the linear voltage
band: each constrained bus contributes one slab
``v_min <= offset_k + (A_volt @ p)_k <= v_max``.  All pieces have
closed-form Euclidean projections, so Dykstra's alternating scheme handles
the intersection; when the box clamp already satisfies every slab it is
itself the projection and is returned directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FeasibilityError, ProjectionError
from .grid import voltage_approx

__all__ = ["FeasibleSet", "build_feasible"]

_SWEEP_CAP = 10_000
_SWEEP_TOL = 1e-10


@dataclass
class FeasibleSet:
    """Box plus affine voltage band, with membership test and projection."""

    p_min: np.ndarray
    p_max: np.ndarray
    A_volt: np.ndarray = None
    offset: np.ndarray = None
    v_min: float = -np.inf
    v_max: float = np.inf
    _row_norm2: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.p_min = np.atleast_1d(np.asarray(self.p_min, dtype=float))
        self.p_max = np.broadcast_to(
            np.asarray(self.p_max, dtype=float), self.p_min.shape).copy()
        if np.any(self.p_min > self.p_max):
            raise FeasibilityError("box bounds cross: p_min > p_max")
        if self.A_volt is not None:
            self.A_volt = np.asarray(self.A_volt, dtype=float)
            self.offset = np.asarray(self.offset, dtype=float)
            rows = self.A_volt.shape[0]
            self.v_min = np.broadcast_to(
                np.asarray(self.v_min, dtype=float), (rows,)).copy()
            self.v_max = np.broadcast_to(
                np.asarray(self.v_max, dtype=float), (rows,)).copy()
            self._row_norm2 = np.einsum("ij,ij->i", self.A_volt, self.A_volt)
            # Rows with no control leverage are plain constants: either they
            # already violate the band (empty set) or they can be dropped.
            dead = self._row_norm2 < 1e-30
            if dead.any():
                bad = dead & ((self.offset < self.v_min) | (self.offset > self.v_max))
                if bad.any():
                    worst = float(np.max(np.maximum(
                        self.v_min[bad] - self.offset[bad],
                        self.offset[bad] - self.v_max[bad])))
                    raise FeasibilityError(
                        "empty feasible set (constant band row out of range "
                        f"by {worst:.3e})", max_violation=worst)
                keep = ~dead
                self.A_volt = self.A_volt[keep]
                self.offset = self.offset[keep]
                self.v_min = self.v_min[keep]
                self.v_max = self.v_max[keep]
                self._row_norm2 = self._row_norm2[keep]
        # Construction-time certification: the projected box midpoint must land
        # inside, otherwise the intersection is empty for practical purposes.
        mid = 0.5 * (self.p_min + self.p_max)
        try:
            probe = self.project(mid)
        except ProjectionError as exc:
            raise FeasibilityError(
                "empty feasible set (midpoint projection stalled with "
                f"violation {exc.residual:.3e})",
                max_violation=exc.residual,
            ) from exc
        if not self.contains(probe):
            raise FeasibilityError(
                "empty feasible set (projected box midpoint still violates "
                f"constraints by {self._max_violation(probe):.3e})",
                max_violation=self._max_violation(probe),
            )

    @property
    def dim(self):
        return self.p_min.shape[0]

    def midpoint(self):
        return 0.5 * (self.p_min + self.p_max)

    def _band_values(self, p):
        return self.offset + self.A_volt @ p

    def _max_violation(self, p):
        v = np.max(np.concatenate([self.p_min - p, p - self.p_max]))
        if self.A_volt is not None and self.A_volt.size:
            band = self._band_values(p)
            v = max(v, np.max(self.v_min - band), np.max(band - self.v_max))
        return float(v)

    def contains(self, p, tol=1e-9):
        p = np.asarray(p, dtype=float)
        return self._max_violation(p) <= tol

    def project(self, x):
        """Euclidean projection via box clamp, then Dykstra if the band binds."""
        x = np.asarray(x, dtype=float)
        clamped = np.clip(x, self.p_min, self.p_max)
        if self.A_volt is None or not self.A_volt.size:
            return clamped
        band = self._band_values(clamped)
        if np.all(band >= self.v_min) and np.all(band <= self.v_max):
            return clamped
        return self._dykstra(x)

    def _project_slab(self, p, k):
        val = self.offset[k] + self.A_volt[k] @ p
        if val < self.v_min[k]:
            target = self.v_min[k]
        elif val > self.v_max[k]:
            target = self.v_max[k]
        else:
            return p
        return p + ((target - val) / self._row_norm2[k]) * self.A_volt[k]

    def _dykstra(self, x):
        n_sets = 1 + self.A_volt.shape[0]
        corrections = [np.zeros_like(x) for _ in range(n_sets)]
        p = x.copy()
        for _ in range(_SWEEP_CAP):
            # The iterate alone can stall (feasible or not) while the
            # correction terms keep evolving, so convergence is measured on
            # the corrections: their total change per sweep vanishes exactly
            # at the projection.
            drift = 0.0
            y = p + corrections[0]
            p = np.clip(y, self.p_min, self.p_max)
            new = y - p
            drift += float(np.sum((new - corrections[0]) ** 2))
            corrections[0] = new
            for k in range(self.A_volt.shape[0]):
                y = p + corrections[k + 1]
                p = self._project_slab(y, k)
                new = y - p
                drift += float(np.sum((new - corrections[k + 1]) ** 2))
                corrections[k + 1] = new
            if np.sqrt(drift) <= _SWEEP_TOL * (1.0 + np.linalg.norm(p)) \
                    and self._max_violation(p) <= 1e-9:
                return p
        raise ProjectionError(
            f"projection did not converge within {_SWEEP_CAP} sweeps "
            f"(residual {self._max_violation(p):.3e})",
            residual=self._max_violation(p),
        )


def build_feasible(blocks, p_g, U_N, bounds, p_fixed=None, include_gen_buses=True):
    """Instantiate the constraint set for the current generation vector.

    ``bounds`` is a mapping with keys p_min, p_max, v_min, v_max.  Voltage
    rows cover every non-PCC bus by default; set ``include_gen_buses``
    False to constrain load buses only.  The inflexible load ``p_fixed``
    shifts the voltage offsets, the controllable part enters through
    A_volt.
    """
    p_g = np.asarray(p_g, dtype=float)
    n_c = len(blocks.load_buses)
    p_fixed = np.zeros(n_c) if p_fixed is None else np.asarray(p_fixed, dtype=float)
    v_min = float(bounds.get("v_min", -np.inf))
    v_max = float(bounds.get("v_max", np.inf))

    A_volt = None
    offset = None
    if np.isfinite(v_min) or np.isfinite(v_max):
        # Stacked first-order voltages: gen rows use M and N, load rows use
        # N' and Q; the controllable load enters with a minus sign.
        top = np.hstack([np.real(blocks.M), np.real(blocks.N)])
        bot = np.hstack([np.real(blocks.N).T, np.real(blocks.Q)])
        sens = np.vstack([top, bot])
        n_g = len(blocks.gen_buses)
        load_part = sens[:, n_g:]
        base = np.concatenate([p_g, -p_fixed])
        offset_all = voltage_approx(sens, base, U_N)
        A_all = -load_part / U_N
        if include_gen_buses:
            A_volt, offset = A_all, offset_all
        else:
            A_volt, offset = A_all[n_g:], offset_all[n_g:]

    return FeasibleSet(
        p_min=np.broadcast_to(np.asarray(bounds["p_min"], dtype=float), (n_c,)).copy(),
        p_max=np.broadcast_to(np.asarray(bounds["p_max"], dtype=float), (n_c,)).copy(),
        A_volt=A_volt,
        offset=offset,
        v_min=v_min,
        v_max=v_max,
    )
