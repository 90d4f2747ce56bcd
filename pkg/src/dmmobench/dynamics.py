"""Environmental change engine: the eight change modes and the rotation
machinery that moves optima between environments.

Scalar parameters (local peak heights, widths) step according to the
active change mode.  Position sets and rotation matrices evolve through
a single rotation angle per parameter: the angle follows the same scalar
change rules, and each new environment rotates the frozen initial
parameter by the current angle over a fixed random pairing of
dimensions.  Driving matrices through an angle state keeps the
recurrent modes exactly periodic and stops sixty successive changes
from compounding floating-point drift.

Change modes:
  C1  small steps          C5  recurrent (sinusoidal)
  C2  large steps          C6  recurrent with noise
  C3  additive Gaussian    C7  optimum count sweeps 2..max and back
  C4  chaotic (logistic)   C8  optimum count drawn uniformly in [2, max]
Under C7/C8 every other parameter keeps changing in small steps.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import BenchmarkSettings
from .core import (
    DOMAIN_HIGH,
    DOMAIN_LOW,
    MIN_PEAK_DISTANCE,
    PlacementError,
)
from .core import reflect_into_domain
from .df import LOCAL_HEIGHT_HIGH, LOCAL_HEIGHT_LOW, WIDTH_HIGH, WIDTH_LOW

#: Total single moves allowed while repairing optimum spacing after one
#: change; exceeding it means the configuration is pathological.
REPAIR_MOVE_CAP = 10_000

#: Rotation-angle bounds: a narrow arc under the recurrent modes (their
#: level is an absolute function of time, so a full circle would swing
#: optima wildly), the full circle otherwise.
RECURRENT_ANGLE_RANGE = (0.0, math.pi / 6.0)
FULL_ANGLE_RANGE = (-math.pi, math.pi)


@dataclass
class ScalarChangeParams:
    """Bounds, severity, and mode constants for one changing scalar."""

    e_min: float
    e_max: float
    severity: float
    alpha: float = 0.04
    alpha_max: float = 0.01
    chaos_factor: float = 3.67
    period: int = 12
    noise_severity: float = 0.8
    phase: float = 0.0

    @property
    def e_range(self):
        return self.e_max - self.e_min


def _recurrent_level(t, params):
    # reducing t first makes recurrence bit-exact: t and t + period
    # produce the same sine argument, not two arguments 2*pi apart
    wave = math.sin(
        2.0 * math.pi * (t % params.period) / params.period + params.phase)
    return params.e_min + params.e_range * (wave + 1.0) / 2.0


def apply_scalar_change(mode, value, t, params, rng):
    """One scalar update under the given change mode, clamped to bounds.

    `t` is the index of the environment being left.  The recurrent
    modes depend only on t (not on the current value), so they revisit
    the same level every `period` changes exactly.
    """
    if mode in ("C7", "C8"):
        mode = "C1"
    if mode == "C1":
        shift = rng.uniform(-1.0, 1.0)
        value = value + params.alpha * params.e_range * shift * params.severity
    elif mode == "C2":
        shift = rng.uniform(-1.0, 1.0)
        step = (params.alpha * float(np.sign(shift))
                + (params.alpha_max - params.alpha) * shift)
        value = value + params.e_range * step * params.severity
    elif mode == "C3":
        value = value + params.severity * rng.normal()
    elif mode == "C4":
        offset = value - params.e_min
        value = (params.e_min
                 + params.chaos_factor * offset * (1.0 - offset / params.e_range))
    elif mode == "C5":
        value = _recurrent_level(t, params)
    elif mode == "C6":
        value = _recurrent_level(t, params) + params.noise_severity * rng.normal()
    else:
        raise ValueError(f"unknown change mode {mode!r}")
    return min(max(value, params.e_min), params.e_max)


def random_pairing(dim, rng):
    """Disjoint random dimension pairs; odd dims leave one axis out."""
    order = rng.index_permutation(dim)
    n_pairs = dim // 2
    return order[:2 * n_pairs].reshape(n_pairs, 2)


def rotation_from_pairs(dim, pairs, angles):
    """Orthogonal matrix rotating each listed coordinate plane.

    `angles` is one shared angle or one angle per pair.  Axes that
    appear in no pair are left fixed.
    """
    rotation = np.eye(dim)
    angles = np.broadcast_to(np.asarray(angles, dtype=float), (len(pairs),))
    for (a, b), angle in zip(pairs, angles):
        c = math.cos(angle)
        s = math.sin(angle)
        rotation[a, a] = c
        rotation[a, b] = s
        rotation[b, a] = -s
        rotation[b, b] = c
    return rotation


def build_rotation(dim, theta, rng):
    """Rotation by one shared angle over a freshly drawn random pairing."""
    if dim < 2:
        raise ValueError("rotation needs dim >= 2")
    return rotation_from_pairs(dim, random_pairing(dim, rng), theta)


def random_rotation(dim, rng):
    """Orthogonal matrix with an independent random angle per plane."""
    if dim < 2:
        raise ValueError("rotation needs dim >= 2")
    pairs = random_pairing(dim, rng)
    angles = rng.uniform_vector(-math.pi, math.pi, len(pairs))
    return rotation_from_pairs(dim, pairs, angles)


def enforce_min_distance(positions, rng, min_dist=MIN_PEAK_DISTANCE,
                         low=DOMAIN_LOW, high=DOMAIN_HIGH):
    """Repair a point set until every pairwise distance reaches `min_dist`.

    A violating point is nudged by exactly `min_dist` in a uniformly
    random direction (then clamped to the box), as many times as it
    takes; the total move budget guards against pathological layouts.
    """
    points = np.array(positions, dtype=float)
    dim = points.shape[1]
    moves = 0
    while True:
        culprit = _first_violation(points, min_dist)
        if culprit is None:
            return points
        if moves >= REPAIR_MOVE_CAP:
            raise PlacementError(
                f"spacing repair exceeded {REPAIR_MOVE_CAP} moves")
        moves += 1
        direction = rng.normal_vector(dim)
        norm = float(np.sqrt((direction * direction).sum()))
        if norm == 0.0:
            continue
        points[culprit] = np.clip(
            points[culprit] + direction * (min_dist / norm), low, high)


def _first_violation(points, min_dist):
    for j in range(1, len(points)):
        gaps = np.sqrt(((points[:j] - points[j]) ** 2).sum(1))
        if gaps.min() < min_dist:
            return j
    return None


class ChangeState:
    """Mutable per-run dynamics state.

    Each rotated parameter ("positions" for cone landscapes, "shifts"
    and "rotations" for compositions) keeps its frozen initial value in
    `bases`, a frozen dimension pairing, a phase, and the current angle.
    `t` is the index of the current environment, starting at 1.
    """

    def __init__(self, mode, g_max):
        self.mode = mode
        self.t = 1
        self.g_max = g_max
        self.g = g_max
        self.direction = 1
        self.angles = {}
        self.pairings = {}
        self.bases = {}
        self.angle_phases = {}
        self.scalar_phases = {}


def init_change_state(landscape, mode, rng):
    """Draw the frozen randomness of a run's dynamics.

    The draw sequence is identical for every change mode, so a given
    seed yields the same initial environment no matter which mode later
    perturbs it.  Order: per rotated parameter its pairing then its
    phase; then height phases; then width phases.
    """
    state = ChangeState(mode, _count_capacity(landscape))
    if landscape.kind == "df":
        rotated = ("positions",)
    else:
        rotated = ("shifts", "rotations")
    for name in rotated:
        state.pairings[name] = random_pairing(landscape.dim, rng)
        state.angle_phases[name] = rng.uniform(0.0, 2.0 * math.pi)
        state.angles[name] = 0.0
    if landscape.kind == "df":
        state.bases["positions"] = landscape.positions.copy()
        state.scalar_phases["heights"] = rng.uniform_vector(
            0.0, 2.0 * math.pi, landscape.n_local)
        state.scalar_phases["widths"] = rng.uniform_vector(
            0.0, 2.0 * math.pi, landscape.n_peaks)
    else:
        state.bases["shifts"] = landscape.shifts.copy()
        state.bases["rotations"] = landscape.rotations.copy()
    return state


def _count_capacity(landscape):
    if landscape.kind == "df":
        return landscape.n_global
    return landscape.n_components


def update_active_count(mode, state, rng):
    """Step the active-optimum count for the two count-varying modes.

    The sweep mode reverses direction when it reaches either end before
    stepping, so from the ceiling it walks down to 2 and back up.
    """
    if mode == "C7":
        if state.g == state.g_max:
            state.direction = 1
        elif state.g == 2:
            state.direction = 2
        state.g += 1 if state.direction == 2 else -1
    elif mode == "C8":
        state.g = rng.randint(2, state.g_max)
    else:
        raise ValueError(f"mode {mode!r} does not vary the optimum count")
    return state


def apply_matrix_change(mode, name, state, params, rng):
    """Advance the named rotated parameter and return its new value.

    The stored angle steps like any scalar; the result is the frozen
    initial parameter rotated by the whole current angle, about the
    domain center, rather than a cumulative product of sixty
    slightly-off incremental rotations.
    """
    state.angles[name] = apply_scalar_change(
        mode, state.angles[name], state.t, params, rng)
    base = state.bases[name]
    rotation = rotation_from_pairs(
        base.shape[-1], state.pairings[name], state.angles[name])
    return base @ rotation


def _scalar_params(settings, e_min, e_max, severity, phase):
    return ScalarChangeParams(
        e_min, e_max, severity,
        alpha=settings.alpha, alpha_max=settings.alpha_max,
        chaos_factor=settings.chaos_factor, period=settings.period,
        noise_severity=settings.noise_severity, phase=phase)


def _angle_params(mode, settings, phase):
    low, high = (RECURRENT_ANGLE_RANGE if mode in ("C5", "C6")
                 else FULL_ANGLE_RANGE)
    return _scalar_params(settings, low, high, settings.rotation_severity, phase)


def advance_environment(landscape, state, rng, settings=None):
    """Mutate the landscape and state into the next environment.

    Draw order is part of the reproducibility contract: the
    active-count update (C7/C8 only), then scalars in storage order,
    then each rotated parameter, with spacing repair last.
    """
    settings = settings if settings is not None else BenchmarkSettings()
    if state.mode in ("C7", "C8"):
        update_active_count(state.mode, state, rng)
    if landscape.kind == "df":
        _advance_df(landscape, state, rng, settings)
    else:
        _advance_composition(landscape, state, rng, settings)
    landscape.set_active_count(state.g)
    state.t += 1


def _advance_df(landscape, state, rng, settings):
    mode = state.mode
    t = state.t
    first_local = landscape.n_global
    height_phases = state.scalar_phases["heights"]
    for k in range(landscape.n_local):
        params = _scalar_params(settings, LOCAL_HEIGHT_LOW, LOCAL_HEIGHT_HIGH,
                                settings.height_severity, height_phases[k])
        landscape.heights[first_local + k] = apply_scalar_change(
            mode, landscape.heights[first_local + k], t, params, rng)
    width_phases = state.scalar_phases["widths"]
    for k in range(landscape.n_peaks):
        params = _scalar_params(settings, WIDTH_LOW, WIDTH_HIGH,
                                settings.width_severity, width_phases[k])
        landscape.widths[k] = apply_scalar_change(
            mode, landscape.widths[k], t, params, rng)
    angle = _angle_params(mode, settings, state.angle_phases["positions"])
    moved = apply_matrix_change(mode, "positions", state, angle, rng)
    moved = reflect_into_domain(moved)
    landscape.positions = enforce_min_distance(
        moved, rng, min_dist=settings.min_peak_distance)


def _advance_composition(landscape, state, rng, settings):
    mode = state.mode
    angle = _angle_params(mode, settings, state.angle_phases["shifts"])
    moved = apply_matrix_change(mode, "shifts", state, angle, rng)
    moved = reflect_into_domain(moved)
    landscape.shifts = enforce_min_distance(
        moved, rng, min_dist=settings.min_peak_distance)
    angle = _angle_params(mode, settings, state.angle_phases["rotations"])
    landscape.rotations = apply_matrix_change(
        mode, "rotations", state, angle, rng)
    landscape.refresh_normalization()
