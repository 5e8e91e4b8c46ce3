"""Phasor states and their global observables.

A phasor state is a vector of N complex values, one per computation thread.
States built from phase angles sit on the unit circle per thread; interference
gates may move individual magnitudes off the circle while the global l2 norm
is conserved. Phase angles are canonicalized to (-pi, pi] throughout.

All types here are immutable values and all functions are pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_phase(phases: np.ndarray | float) -> np.ndarray | float:
    """Map angles onto the canonical branch (-pi, pi]."""
    wrapped = np.mod(phases, TWO_PI)
    return np.where(wrapped > np.pi, wrapped - TWO_PI, wrapped)


@dataclass(frozen=True)
class PhaseVector:
    """Per-thread phase angles in radians, with zero-magnitude threads flagged.

    `undefined` lists threads whose source value was exactly zero: their phase
    is reported as 0 by convention rather than aborting, because destructive
    interference legitimately produces exact zeros.
    """

    phases: np.ndarray
    undefined: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.phases, dtype=np.float64))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("phases must be a non-empty 1-D vector")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "phases", arr)
        object.__setattr__(self, "undefined", tuple(int(i) for i in self.undefined))

    def __len__(self) -> int:
        return self.phases.size


@dataclass(frozen=True, eq=False)
class PhasorState:
    """Complex state vector over N threads (N >= 1)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.values, dtype=np.complex128))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("state must be a non-empty 1-D complex vector")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_threads(self) -> int:
        return self.values.size

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)


def zero_phase_state(n_threads: int) -> PhasorState:
    """The default initial state: all threads at phase 0 (value 1)."""
    if n_threads < 1:
        raise ValueError("n_threads must be >= 1")
    return PhasorState(np.ones(n_threads, dtype=np.complex128))


def from_phases(phases: PhaseVector | np.ndarray | list[float]) -> PhasorState:
    """Build the unit-magnitude state (cos phi_k, sin phi_k) from phase angles."""
    arr = phases.phases if isinstance(phases, PhaseVector) else np.atleast_1d(
        np.asarray(phases, dtype=np.float64))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("phases must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("phases must be finite")
    return PhasorState(np.cos(arr) + 1j * np.sin(arr))


def phases_of(state: PhasorState) -> PhaseVector:
    """Extract per-thread phases in (-pi, pi]; zero-magnitude threads flagged."""
    values = state.values
    zero = np.abs(values) == 0.0
    phases = np.angle(values)
    # np.angle can return -pi for values with a negative-zero imaginary part.
    phases[phases == -np.pi] = np.pi
    phases[zero] = 0.0
    return PhaseVector(phases, tuple(int(i) for i in np.flatnonzero(zero)))


def coherence(state: PhasorState) -> float:
    """Normalized magnitude of the mean value: (1/N) |sum_k z_k|.

    Lies in [0, 1] for unit-magnitude states; 1 when all phases align, 0 under
    perfect destructive cancellation.
    """
    return float(np.abs(np.mean(state.values)))


def l2_norm(state: PhasorState) -> float:
    """Euclidean norm of the complex state vector (sqrt(N) on the torus)."""
    return float(np.linalg.norm(state.values))
