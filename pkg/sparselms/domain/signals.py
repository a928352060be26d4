"""
Input processes, observation noise and (time-varying) sparse systems.

Every random quantity of a trial comes from its own stream: a Philox
generator keyed by (master_seed, trial_index, role), so that filters compared
within a trial see identical realizations and trials can run in any order.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from sparselms.domain.models import (
    InputKind,
    InputProcess,
    NoiseProcess,
    SystemKind,
    SystemSpec,
    TrackingEvent,
    TrackingEventKind,
)
from sparselms.exceptions import DimensionError

Seed = Union[int, np.random.Generator, None]

STREAM_ROLES = {"system": 0, "input": 1, "noise": 2, "events": 3}


def make_stream(master_seed: int, trial_index: int, role: str) -> np.random.Generator:
    """Independent counter-based stream for one (trial, role) pair."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(trial_index, STREAM_ROLES[role]))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass
class TrialStreams:
    system: np.random.Generator
    input: np.random.Generator
    noise: np.random.Generator
    events: np.random.Generator

    @classmethod
    def for_trial(cls, master_seed: int, trial_index: int) -> "TrialStreams":
        return cls(**{role: make_stream(master_seed, trial_index, role) for role in STREAM_ROLES})


@dataclass
class SystemModel:
    """True impulse response plus the tracking events still to come."""
    w: np.ndarray
    events: List[TrackingEvent] = field(default_factory=list)

    @property
    def n_taps(self) -> int:
        return self.w.shape[0]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.w)

    def events_at(self, iteration: int) -> List[TrackingEvent]:
        return [event for event in self.events if event.iteration == iteration]


def make_general_sparse_system(
    n_taps: int, k: int, seed: Seed = None, events: Sequence[TrackingEvent] = ()
) -> SystemModel:
    """k standard-Gaussian coefficients at uniformly random distinct taps."""
    if k < 0 or k > n_taps:
        raise ValueError(f"sparsity {k} must be in [0, {n_taps}]")
    rng = np.random.default_rng(seed)
    w = np.zeros(n_taps)
    support = rng.choice(n_taps, size=k, replace=False)
    w[support] = rng.standard_normal(k)
    return SystemModel(w=w, events=list(events))


def make_group_sparse_system(
    n_taps: int, blocks: Sequence[Tuple[int, int]], seed: Seed = None, events: Sequence[TrackingEvent] = ()
) -> SystemModel:
    """Standard-Gaussian coefficients on the union of (start, length) blocks, zeros elsewhere."""
    active = np.zeros(n_taps, dtype=bool)
    for start, length in blocks:
        if start < 0 or length < 0 or start + length > n_taps:
            raise ValueError(f"block ({start}, {length}) is outside [0, {n_taps})")
        if active[start:start + length].any():
            raise ValueError(f"block ({start}, {length}) overlaps another block")
        active[start:start + length] = True
    rng = np.random.default_rng(seed)
    w = np.zeros(n_taps)
    w[active] = rng.standard_normal(int(active.sum()))
    return SystemModel(w=w, events=list(events))


def build_system(spec: SystemSpec, n_taps: int, seed: Seed = None) -> SystemModel:
    if spec.kind == SystemKind.GENERAL:
        return make_general_sparse_system(n_taps, spec.sparsity, seed, spec.events)
    if spec.kind == SystemKind.GROUP:
        return make_group_sparse_system(n_taps, spec.blocks, seed, spec.events)
    if len(spec.coefficients) != n_taps:
        raise DimensionError("coefficients", n_taps, len(spec.coefficients))
    return SystemModel(w=np.array(spec.coefficients, dtype=float), events=list(spec.events))


def step_signal(
    proc: InputProcess, state: Optional[float], rng: np.random.Generator
) -> Tuple[float, Optional[float]]:
    """Emit one input sample.

    ``state`` is the previous unscaled AR(1) value (None before the first
    sample, in which case it is drawn from the stationary distribution).
    Normalized AR(1) output is scaled by sqrt(1 - a^2) to unit variance.
    """
    if proc.kind == InputKind.WHITE:
        return float(np.sqrt(proc.white_variance) * rng.standard_normal()), None

    a = proc.a
    gain = np.sqrt(1.0 - a * a)
    if state is None:
        raw = rng.standard_normal() / gain
    else:
        raw = a * state + rng.standard_normal()
    sample = raw * gain if proc.normalize else raw
    return float(sample), float(raw)


def sample_signal(proc: InputProcess, length: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty(length)
    state = None
    for n in range(length):
        out[n], state = step_signal(proc, state, rng)
    return out


def desired_output(system: SystemModel, x: np.ndarray, noise: NoiseProcess, rng: np.random.Generator) -> float:
    """y = w' x + v with v ~ N(0, sigma_v^2) from the noise stream."""
    if x.shape != system.w.shape:
        raise DimensionError("regressor", system.n_taps, x.size)
    v = np.sqrt(noise.variance) * rng.standard_normal()
    return float(system.w @ x + v)


def apply_event(system: SystemModel, event: TrackingEvent, seed: Seed = None) -> SystemModel:
    """Shift (clipping at the boundaries) or redraw the active coefficients."""
    w = system.w
    n = system.n_taps
    shifted = np.zeros(n)
    if event.kind == TrackingEventKind.SHIFT_LEFT:
        if event.taps < n:
            shifted[:n - event.taps] = w[event.taps:]
    elif event.kind == TrackingEventKind.SHIFT_RIGHT:
        if event.taps < n:
            shifted[event.taps:] = w[:n - event.taps]
    else:
        rng = np.random.default_rng(seed)
        support = system.support
        shifted = w.copy()
        shifted[support] = rng.standard_normal(support.size)
    return SystemModel(w=shifted, events=system.events)
