"""The 22-gate library: pure state-to-state transforms over phasor threads.

Categories: standard unitary (shift, invert, mix, dft, permute, reverse,
accumulate, grid_propagate), non-linear (threshold, saturate, normalize,
log_compress, cross_correlate, convolve), neuromorphic (kuramoto, hebbian,
ising, synaptic, asymmetric_couple), and encoding (encode_phase,
encode_amplitude). `measure` is a circuit instruction, not a gate; it is
listed here only so instruction validation covers the full wire format.

Linear gates also expose their N x N matrix via `gate_matrix` for composition
and unitarity testing. Neuromorphic gates update extracted phases and re-emit
unit-magnitude states; they deliberately break unitarity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core import PhasorState, from_phases

SQRT2_INV = 1.0 / np.sqrt(2.0)

# 2x2 beam-splitter block and its conjugate transpose.
MIX_BLOCK = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128) * SQRT2_INV

GATE_NAMES = (
    "shift", "invert", "mix", "dft", "permute", "reverse", "accumulate",
    "grid_propagate", "threshold", "saturate", "normalize", "log_compress",
    "cross_correlate", "convolve", "kuramoto", "hebbian", "ising", "synaptic",
    "asymmetric_couple", "encode_phase", "encode_amplitude", "measure",
)

LINEAR_GATES = ("shift", "invert", "mix", "dft", "permute", "accumulate")
UNITARY_GATES = ("shift", "invert", "mix", "dft", "permute")


@dataclass(frozen=True)
class GridShape:
    """2-D lattice layout for grid propagation; rows*cols must equal N."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid shape must have positive rows and cols")


# ---------------------------------------------------------------------------
# standard unitary gates


def apply_shift(state: PhasorState, k: int, theta: float) -> PhasorState:
    """Rotate thread k by angle theta: z_k -> z_k * e^(i theta)."""
    _check_index(state, k)
    out = state.values.copy()
    out[k] *= np.exp(1j * float(theta))
    return PhasorState(out)


def apply_invert(state: PhasorState, k: int) -> PhasorState:
    """Reflect thread k across the origin: z_k -> -z_k (a shift by pi)."""
    _check_index(state, k)
    out = state.values.copy()
    out[k] = -out[k]
    return PhasorState(out)


def apply_mix(state: PhasorState, j: int, k: int) -> PhasorState:
    """50/50 beam splitter on threads (j, k):
    (z_j, z_k) -> ((z_j + i z_k)/sqrt2, (i z_j + z_k)/sqrt2).
    """
    _check_index(state, j)
    _check_index(state, k)
    if j == k:
        raise ValueError("mix requires two distinct threads")
    out = state.values.copy()
    zj, zk = out[j], out[k]
    out[j] = (zj + 1j * zk) * SQRT2_INV
    out[k] = (1j * zj + zk) * SQRT2_INV
    return PhasorState(out)


def apply_dft(state: PhasorState) -> PhasorState:
    """Unitary DFT over all threads: z'_k = (1/sqrt N) sum_n z_n w^(kn),
    w = e^(-2 pi i / N).
    """
    n = state.n_threads
    return PhasorState(np.fft.fft(state.values) / np.sqrt(n))


def apply_permute(state: PhasorState, order: list[int] | tuple[int, ...]) -> PhasorState:
    """Reorder threads: out[k] = in[order[k]]."""
    idx = np.asarray(order, dtype=np.intp)
    n = state.n_threads
    if idx.shape != (n,) or not np.array_equal(np.sort(idx), np.arange(n)):
        raise ValueError("order must be a permutation of 0..N-1")
    return PhasorState(state.values[idx])


def apply_reverse(state: PhasorState) -> PhasorState:
    """Time-reversal: conjugate every component (anti-unitary, norm-preserving)."""
    return PhasorState(np.conj(state.values))


def apply_accumulate(state: PhasorState) -> PhasorState:
    """Prefix sums: out[k] = sum_{j <= k} in[j]. Linear but not unitary."""
    return PhasorState(np.cumsum(state.values))


def apply_grid_propagate(state: PhasorState, shape: GridShape) -> PhasorState:
    """One wavefront sweep on a rows x cols lattice (row-major thread layout):
    out[r,c] = in[r-1,c] + in[r,c-1], out-of-bounds neighbors contribute 0.
    The seed cell (0,0) is left unchanged so a wavefront source persists.
    """
    if shape.rows * shape.cols != state.n_threads:
        raise ValueError("grid shape does not match thread count")
    grid = state.values.reshape(shape.rows, shape.cols)
    out = np.zeros_like(grid)
    out[1:, :] += grid[:-1, :]
    out[:, 1:] += grid[:, :-1]
    out[0, 0] = grid[0, 0]
    return PhasorState(out.reshape(-1))


# ---------------------------------------------------------------------------
# non-linear gates


def apply_threshold(state: PhasorState, tau: float) -> PhasorState:
    """Amplitude gate: z -> z/|z| if |z| >= tau else 0. Zero stays zero."""
    if tau < 0:
        raise ValueError("threshold tau must be >= 0")
    v = state.values
    mag = np.abs(v)
    keep = (mag >= tau) & (mag > 0.0)
    out = np.zeros_like(v)
    out[keep] = v[keep] / mag[keep]
    return PhasorState(out)


def apply_saturate(state: PhasorState, levels: int) -> PhasorState:
    """Snap each phase to the nearest of L anchors spaced 2 pi / L apart.

    Exact midpoints round toward the larger level index. Output magnitudes
    are unit; L=2 yields the binary (+1, -1) states.
    """
    if levels < 2:
        raise ValueError("saturate requires at least 2 levels")
    step = 2.0 * np.pi / levels
    idx = np.floor(np.angle(state.values) / step + 0.5)
    return from_phases(idx * step)


def apply_normalize(state: PhasorState) -> PhasorState:
    """Pull every component rigidly back to the unit circle: z -> z/|z|.

    Zero components stay zero (their phase is undefined; see `phases_of`).
    """
    v = state.values
    mag = np.abs(v)
    out = np.divide(v, mag, out=np.zeros_like(v), where=mag > 0.0)
    return PhasorState(out)


def apply_log_compress(state: PhasorState, mu: float) -> PhasorState:
    """Mu-law amplitude compression: |z| -> ln(1 + mu |z|) / ln(1 + mu),
    phases preserved. Fixed points at magnitude 0 and 1.
    """
    if mu <= 0:
        raise ValueError("log_compress mu must be > 0")
    v = state.values
    mag = np.abs(v)
    compressed = np.log1p(mu * mag) / np.log1p(mu)
    scale = np.divide(compressed, mag, out=np.zeros_like(mag), where=mag > 0.0)
    return PhasorState(v * scale)


def apply_cross_correlate(state: PhasorState, pattern: np.ndarray) -> PhasorState:
    """Normalized circular correlation against a pattern of length P <= N:
    out[k] = (1/P) sum_{j<P} in[(k+j) mod N] * conj(pattern[j]).
    """
    pat = np.atleast_1d(np.asarray(pattern, dtype=np.complex128))
    n, p = state.n_threads, pat.size
    if p < 1 or p > n:
        raise ValueError("pattern length must be in 1..N")
    idx = (np.arange(n)[:, None] + np.arange(p)[None, :]) % n
    return PhasorState(state.values[idx] @ np.conj(pat) / p)


def apply_convolve(state: PhasorState, kernel: np.ndarray) -> PhasorState:
    """Circular convolution with a kernel of length P <= N:
    out[k] = sum_{j<P} kernel[j] * in[(k-j) mod N].
    """
    ker = np.atleast_1d(np.asarray(kernel, dtype=np.complex128))
    n, p = state.n_threads, ker.size
    if p < 1 or p > n:
        raise ValueError("kernel length must be in 1..N")
    idx = (np.arange(n)[:, None] - np.arange(p)[None, :]) % n
    return PhasorState(state.values[idx] @ ker)


# ---------------------------------------------------------------------------
# neuromorphic gates (phase dynamics; magnitudes reset to 1)


def apply_kuramoto(state: PhasorState, k: float, dt: float) -> PhasorState:
    """One mean-field synchronization step:
    phi_k += K dt r sin(psi - phi_k), with r e^(i psi) the mean phasor.
    Equivalent to all-to-all (1/N) sum_j sin(phi_j - phi_k) coupling.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    phi = np.angle(state.values)
    mean = np.mean(np.cos(phi) + 1j * np.sin(phi))
    r, psi = np.abs(mean), np.angle(mean)
    return from_phases(phi + k * dt * r * np.sin(psi - phi))


def apply_hebbian_pull(state: PhasorState, eta: float) -> PhasorState:
    """Nearest-neighbor phase pull on an open chain:
    phi_k += eta [sin(phi_{k-1} - phi_k) + sin(phi_{k+1} - phi_k)],
    with chain ends using only their existing neighbor.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    phi = np.angle(state.values)
    pull = np.zeros_like(phi)
    pull[1:] += np.sin(phi[:-1] - phi[1:])
    pull[:-1] += np.sin(phi[1:] - phi[:-1])
    return from_phases(phi + eta * pull)


def apply_ising(state: PhasorState, k: float, dt: float) -> PhasorState:
    """Anti-ferromagnetic nearest-neighbor step on an open chain:
    phi_k -= K dt sum_{j in nn(k)} sin(phi_j - phi_k).
    Drives toward the bi-modal alternating (0, pi) pattern.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    phi = np.angle(state.values)
    drive = np.zeros_like(phi)
    drive[1:] += np.sin(phi[:-1] - phi[1:])
    drive[:-1] += np.sin(phi[1:] - phi[:-1])
    return from_phases(phi - k * dt * drive)


def apply_synaptic(state: PhasorState, src: int, dst: int, eta: float) -> PhasorState:
    """Directed phase drag: phi_dst += eta sin(phi_src - phi_dst); src unchanged."""
    _check_index(state, src)
    _check_index(state, dst)
    if src == dst:
        raise ValueError("synaptic requires distinct source and destination")
    phi = np.angle(state.values)
    phi[dst] += eta * np.sin(phi[src] - phi[dst])
    return from_phases(phi)


def apply_asymmetric_couple(state: PhasorState, matrix: np.ndarray, dt: float) -> PhasorState:
    """Directed (not necessarily reciprocal) coupling step:
    phi_k += dt sum_j A[k][j] sin(phi_j - phi_k).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    a = np.asarray(matrix, dtype=np.float64)
    n = state.n_threads
    if a.shape != (n, n):
        raise ValueError("coupling matrix must be N x N")
    if not np.all(np.isfinite(a)):
        raise ValueError("coupling matrix must be finite")
    phi = np.angle(state.values)
    drive = np.sum(a * np.sin(phi[None, :] - phi[:, None]), axis=1)
    return from_phases(phi + dt * drive)


# ---------------------------------------------------------------------------
# encoding gates


def encode_phase(values: np.ndarray, mode: str = "direct") -> PhasorState:
    """Map real values onto thread phases and build the unit state.

    direct: phi_k = values[k]; tanh: phi_k = pi * tanh(values[k]);
    linear: min-max map of the values onto [0, 2 pi).
    """
    arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ValueError("values must be non-empty and finite")
    if mode == "direct":
        phi = arr
    elif mode == "tanh":
        phi = np.pi * np.tanh(arr)
    elif mode == "linear":
        lo, hi = arr.min(), arr.max()
        if hi == lo:
            raise ValueError("linear encoding requires non-constant values")
        phi = 2.0 * np.pi * (arr - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown encoding mode {mode!r}")
    return from_phases(phi)


def encode_amplitude(state: PhasorState, magnitudes: np.ndarray) -> PhasorState:
    """Replace per-thread magnitudes, preserving phases:
    out[k] = magnitudes[k] * e^(i arg(in[k])).
    """
    mags = np.atleast_1d(np.asarray(magnitudes, dtype=np.float64))
    if mags.shape != (state.n_threads,):
        raise ValueError("magnitudes length must match thread count")
    if np.any(mags < 0) or not np.all(np.isfinite(mags)):
        raise ValueError("magnitudes must be finite and >= 0")
    phi = np.angle(state.values)
    return PhasorState(mags * (np.cos(phi) + 1j * np.sin(phi)))


# ---------------------------------------------------------------------------
# matrices for the linear gates


def gate_matrix(kind: str, n_threads: int, targets: tuple[int, ...] = (),
                params: dict[str, Any] | None = None) -> np.ndarray:
    """N x N complex matrix M with apply(state) = M @ state.values.

    Only the linear gates have one: shift, invert, mix, dft, permute, and
    accumulate (linear but not unitary; exposed for testing).
    """
    params = params or {}
    n = n_threads
    if kind == "shift":
        m = np.eye(n, dtype=np.complex128)
        m[targets[0], targets[0]] = np.exp(1j * float(params["theta"]))
        return m
    if kind == "invert":
        m = np.eye(n, dtype=np.complex128)
        m[targets[0], targets[0]] = -1.0
        return m
    if kind == "mix":
        m = np.eye(n, dtype=np.complex128)
        j, k = targets
        m[j, j] = m[k, k] = SQRT2_INV
        m[j, k] = m[k, j] = 1j * SQRT2_INV
        return m
    if kind == "dft":
        grid = np.arange(n)
        omega = np.exp(-2j * np.pi / n)
        return omega ** (grid[:, None] * grid[None, :]) / np.sqrt(n)
    if kind == "permute":
        idx = np.asarray(params["order"], dtype=np.intp)
        m = np.zeros((n, n), dtype=np.complex128)
        m[np.arange(n), idx] = 1.0
        return m
    if kind == "accumulate":
        return np.tril(np.ones((n, n), dtype=np.complex128))
    raise ValueError(f"gate {kind!r} has no matrix form")


# ---------------------------------------------------------------------------
# instructions (the circuit wire format)

_REQUIRED_PARAMS = {
    "shift": ("theta",),
    "threshold": ("tau",),
    "saturate": ("levels",),
    "log_compress": ("mu",),
    "kuramoto": ("k", "dt"),
    "ising": ("k", "dt"),
    "hebbian": ("eta",),
    "synaptic": ("eta",),
    "asymmetric_couple": ("matrix", "dt"),
    "permute": ("order",),
    "grid_propagate": ("rows", "cols"),
    "convolve": ("kernel",),
    "cross_correlate": ("kernel",),
    "encode_phase": ("values", "mode"),
    "encode_amplitude": ("values",),
    "measure": ("name",),
}

_N_TARGETS = {"shift": 1, "invert": 1, "mix": 2, "synaptic": 2}


@dataclass(frozen=True)
class Instruction:
    """One gate application: kind, target threads, and named parameters.

    Parameters are stored in the circuit JSON schema types (numbers, strings,
    nested tuples) so instructions compare and serialize exactly.
    """

    gate: str
    targets: tuple[int, ...] = ()
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", dict(self.params))


def validate_instruction(inst: Instruction, n_threads: int) -> None:
    """Check an instruction against a thread count; raises ValueError/IndexError."""
    if inst.gate not in GATE_NAMES:
        raise ValueError(f"unknown gate {inst.gate!r}")
    want = _N_TARGETS.get(inst.gate, 0)
    if len(inst.targets) != want:
        raise ValueError(f"{inst.gate} takes {want} target(s), got {len(inst.targets)}")
    for t in inst.targets:
        if not 0 <= t < n_threads:
            raise IndexError(f"{inst.gate} target {t} out of range for {n_threads} threads")
    if want == 2 and inst.targets[0] == inst.targets[1]:
        raise ValueError(f"{inst.gate} targets must be distinct")
    for key in _REQUIRED_PARAMS.get(inst.gate, ()):
        if key not in inst.params:
            raise ValueError(f"{inst.gate} requires parameter {key!r}")
    p = inst.params
    if inst.gate == "shift":
        _check_finite_scalar(p["theta"], "theta")
    elif inst.gate == "threshold":
        if not np.isfinite(p["tau"]) or p["tau"] < 0:
            raise ValueError("threshold tau must be finite and >= 0")
    elif inst.gate == "saturate":
        if int(p["levels"]) < 2:
            raise ValueError("saturate requires at least 2 levels")
    elif inst.gate == "log_compress":
        if not np.isfinite(p["mu"]) or p["mu"] <= 0:
            raise ValueError("log_compress mu must be finite and > 0")
    elif inst.gate in ("kuramoto", "ising"):
        _check_finite_scalar(p["k"], "k")
        if not np.isfinite(p["dt"]) or p["dt"] <= 0:
            raise ValueError("dt must be finite and > 0")
    elif inst.gate in ("hebbian", "synaptic"):
        _check_finite_scalar(p["eta"], "eta")
    elif inst.gate == "asymmetric_couple":
        a = np.asarray(p["matrix"], dtype=np.float64)
        if a.shape != (n_threads, n_threads) or not np.all(np.isfinite(a)):
            raise ValueError("asymmetric_couple matrix must be finite and N x N")
        if not np.isfinite(p["dt"]) or p["dt"] <= 0:
            raise ValueError("dt must be finite and > 0")
    elif inst.gate == "permute":
        idx = np.asarray(p["order"], dtype=np.intp)
        if idx.shape != (n_threads,) or not np.array_equal(np.sort(idx), np.arange(n_threads)):
            raise ValueError("order must be a permutation of 0..N-1")
    elif inst.gate == "grid_propagate":
        if int(p["rows"]) * int(p["cols"]) != n_threads:
            raise ValueError("grid rows*cols must equal the thread count")
    elif inst.gate in ("convolve", "cross_correlate"):
        ker = _kernel_array(p["kernel"])
        if ker.size < 1 or ker.size > n_threads:
            raise ValueError("kernel length must be in 1..N")
    elif inst.gate == "encode_phase":
        vals = np.asarray(p["values"], dtype=np.float64)
        if vals.shape != (n_threads,) or not np.all(np.isfinite(vals)):
            raise ValueError("encode_phase values must be finite and length N")
        if p["mode"] not in ("direct", "tanh", "linear"):
            raise ValueError(f"unknown encoding mode {p['mode']!r}")
        if p["mode"] == "linear" and vals.max() == vals.min():
            raise ValueError("linear encoding requires non-constant values")
    elif inst.gate == "encode_amplitude":
        vals = np.asarray(p["values"], dtype=np.float64)
        if vals.shape != (n_threads,) or np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("encode_amplitude values must be finite, >= 0, length N")
    elif inst.gate == "measure":
        if not isinstance(p["name"], str) or not p["name"]:
            raise ValueError("measure requires a non-empty name")


def apply_instruction(state: PhasorState, inst: Instruction) -> PhasorState:
    """Apply one (non-measure) instruction to a state."""
    g, t, p = inst.gate, inst.targets, inst.params
    if g == "shift":
        return apply_shift(state, t[0], p["theta"])
    if g == "invert":
        return apply_invert(state, t[0])
    if g == "mix":
        return apply_mix(state, t[0], t[1])
    if g == "dft":
        return apply_dft(state)
    if g == "permute":
        return apply_permute(state, p["order"])
    if g == "reverse":
        return apply_reverse(state)
    if g == "accumulate":
        return apply_accumulate(state)
    if g == "grid_propagate":
        return apply_grid_propagate(state, GridShape(int(p["rows"]), int(p["cols"])))
    if g == "threshold":
        return apply_threshold(state, p["tau"])
    if g == "saturate":
        return apply_saturate(state, int(p["levels"]))
    if g == "normalize":
        return apply_normalize(state)
    if g == "log_compress":
        return apply_log_compress(state, p["mu"])
    if g == "cross_correlate":
        return apply_cross_correlate(state, _kernel_array(p["kernel"]))
    if g == "convolve":
        return apply_convolve(state, _kernel_array(p["kernel"]))
    if g == "kuramoto":
        return apply_kuramoto(state, p["k"], p["dt"])
    if g == "hebbian":
        return apply_hebbian_pull(state, p["eta"])
    if g == "ising":
        return apply_ising(state, p["k"], p["dt"])
    if g == "synaptic":
        return apply_synaptic(state, t[0], t[1], p["eta"])
    if g == "asymmetric_couple":
        return apply_asymmetric_couple(state, np.asarray(p["matrix"], dtype=np.float64), p["dt"])
    if g == "encode_phase":
        return encode_phase(np.asarray(p["values"], dtype=np.float64), p["mode"])
    if g == "encode_amplitude":
        return encode_amplitude(state, np.asarray(p["values"], dtype=np.float64))
    raise ValueError(f"instruction {g!r} is not a state transform")


def _kernel_array(kernel: Any) -> np.ndarray:
    """Decode a [[re, im], ...] kernel into a complex vector."""
    arr = np.asarray(kernel, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or not np.all(np.isfinite(arr)):
        raise ValueError("kernel must be a finite [[re, im], ...] list")
    return arr[:, 0] + 1j * arr[:, 1]


def _check_index(state: PhasorState, k: int) -> None:
    if not 0 <= k < state.n_threads:
        raise IndexError(f"thread {k} out of range for {state.n_threads} threads")


def _check_finite_scalar(x: Any, name: str) -> None:
    if not np.isfinite(x):
        raise ValueError(f"{name} must be finite")
