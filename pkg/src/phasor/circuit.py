"""Circuit construction and the deferred analytic execution engine.

A circuit is an ordered list of instructions over N threads. Building is
purely declarative: validation happens eagerly at append time, execution is
deferred to `run`, which walks the list sequentially. `measure` instructions
take non-destructive named snapshots; nothing collapses.

Execution is deterministic: two runs with identical inputs produce
bitwise-identical results. Circuits are immutable once built (the builder
mutates only during construction) and `run` is a pure function, so the same
circuit may execute concurrently on many inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import PhasorState, coherence, phases_of, zero_phase_state
from .gates import (Instruction, UNITARY_GATES, apply_instruction, gate_matrix,
                    validate_instruction)


class UnsupportedCompositionError(ValueError):
    """A composite unitary was requested for a circuit with non-linear gates."""


@dataclass(frozen=True)
class Snapshot:
    """State captured at a measurement point, with derived observables."""

    state: PhasorState
    phases: np.ndarray
    magnitudes: np.ndarray
    coherence: float
    undefined: tuple[int, ...]


@dataclass(frozen=True)
class ExecutionResult:
    """Final state plus the named snapshots taken during a run."""

    final_state: PhasorState
    snapshots: dict[str, Snapshot]

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "threads": self.final_state.n_threads,
            "final": _snapshot_dict(_snapshot(self.final_state)),
            "snapshots": {name: _snapshot_dict(s) for name, s in self.snapshots.items()},
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


class Circuit:
    """Ordered instruction list over n_threads, with named measurement points.

    Builder methods validate eagerly, append, and return the circuit for
    chaining. Treat the circuit as frozen once handed to `run`.
    """

    def __init__(self, n_threads: int):
        if n_threads < 1:
            raise ValueError("n_threads must be >= 1")
        self.n_threads = int(n_threads)
        self._instructions: list[Instruction] = []
        self._measure_names: set[str] = set()

    @property
    def instructions(self) -> tuple[Instruction, ...]:
        return tuple(self._instructions)

    @property
    def measurements(self) -> tuple[tuple[str, int], ...]:
        """(name, position-in-list) pairs for every measure instruction."""
        return tuple((inst.params["name"], i)
                     for i, inst in enumerate(self._instructions)
                     if inst.gate == "measure")

    def append(self, inst: Instruction) -> "Circuit":
        idx = len(self._instructions)
        try:
            validate_instruction(inst, self.n_threads)
            if inst.gate == "measure" and inst.params["name"] in self._measure_names:
                raise ValueError(f"duplicate measurement name {inst.params['name']!r}")
        except (ValueError, IndexError) as exc:
            raise type(exc)(f"instruction {idx}: {exc}") from None
        if inst.gate == "measure":
            self._measure_names.add(inst.params["name"])
        self._instructions.append(inst)
        return self

    # -- per-gate builder shorthand -----------------------------------------

    def shift(self, k: int, theta: float) -> "Circuit":
        return self.append(Instruction("shift", (k,), {"theta": float(theta)}))

    def invert(self, k: int) -> "Circuit":
        return self.append(Instruction("invert", (k,)))

    def mix(self, j: int, k: int) -> "Circuit":
        return self.append(Instruction("mix", (j, k)))

    def dft(self) -> "Circuit":
        return self.append(Instruction("dft"))

    def permute(self, order: list[int] | tuple[int, ...]) -> "Circuit":
        return self.append(Instruction("permute", (), {"order": [int(i) for i in order]}))

    def reverse(self) -> "Circuit":
        return self.append(Instruction("reverse"))

    def accumulate(self) -> "Circuit":
        return self.append(Instruction("accumulate"))

    def grid_propagate(self, rows: int, cols: int) -> "Circuit":
        return self.append(Instruction("grid_propagate", (), {"rows": int(rows), "cols": int(cols)}))

    def threshold(self, tau: float) -> "Circuit":
        return self.append(Instruction("threshold", (), {"tau": float(tau)}))

    def saturate(self, levels: int) -> "Circuit":
        return self.append(Instruction("saturate", (), {"levels": int(levels)}))

    def normalize(self) -> "Circuit":
        return self.append(Instruction("normalize"))

    def log_compress(self, mu: float) -> "Circuit":
        return self.append(Instruction("log_compress", (), {"mu": float(mu)}))

    def cross_correlate(self, pattern: np.ndarray) -> "Circuit":
        return self.append(Instruction("cross_correlate", (), {"kernel": _kernel_pairs(pattern)}))

    def convolve(self, kernel: np.ndarray) -> "Circuit":
        return self.append(Instruction("convolve", (), {"kernel": _kernel_pairs(kernel)}))

    def kuramoto(self, k: float, dt: float) -> "Circuit":
        return self.append(Instruction("kuramoto", (), {"k": float(k), "dt": float(dt)}))

    def hebbian(self, eta: float) -> "Circuit":
        return self.append(Instruction("hebbian", (), {"eta": float(eta)}))

    def ising(self, k: float, dt: float) -> "Circuit":
        return self.append(Instruction("ising", (), {"k": float(k), "dt": float(dt)}))

    def synaptic(self, src: int, dst: int, eta: float) -> "Circuit":
        return self.append(Instruction("synaptic", (src, dst), {"eta": float(eta)}))

    def asymmetric_couple(self, matrix: np.ndarray, dt: float) -> "Circuit":
        rows = [[float(x) for x in row] for row in np.asarray(matrix)]
        return self.append(Instruction("asymmetric_couple", (), {"matrix": rows, "dt": float(dt)}))

    def encode_phase(self, values: np.ndarray, mode: str = "direct") -> "Circuit":
        vals = [float(x) for x in np.asarray(values)]
        return self.append(Instruction("encode_phase", (), {"values": vals, "mode": mode}))

    def encode_amplitude(self, values: np.ndarray) -> "Circuit":
        vals = [float(x) for x in np.asarray(values)]
        return self.append(Instruction("encode_amplitude", (), {"values": vals}))

    def measure(self, name: str) -> "Circuit":
        return self.append(Instruction("measure", (), {"name": name}))


def build(n_threads: int) -> Circuit:
    """Start an empty circuit over n_threads."""
    return Circuit(n_threads)


def run(circuit: Circuit, initial: PhasorState | None = None) -> ExecutionResult:
    """Execute the circuit sequentially from `initial` (default: all-ones)."""
    if initial is None:
        state = zero_phase_state(circuit.n_threads)
    else:
        if initial.n_threads != circuit.n_threads:
            raise ValueError("initial state thread count does not match circuit")
        state = initial
    snapshots: dict[str, Snapshot] = {}
    for inst in circuit.instructions:
        if inst.gate == "measure":
            snapshots[inst.params["name"]] = _snapshot(state)
        else:
            state = apply_instruction(state, inst)
    return ExecutionResult(state, snapshots)


def composite_unitary(circuit: Circuit) -> np.ndarray:
    """Product G_M ... G_1 of the circuit's gate matrices.

    Only defined when every instruction is a linear unitary gate (shift,
    invert, mix, dft, permute); measurements are skipped.
    """
    n = circuit.n_threads
    u = np.eye(n, dtype=np.complex128)
    for i, inst in enumerate(circuit.instructions):
        if inst.gate == "measure":
            continue
        if inst.gate not in UNITARY_GATES:
            raise UnsupportedCompositionError(
                f"instruction {i} ({inst.gate}) is not a linear unitary gate")
        u = gate_matrix(inst.gate, n, inst.targets, inst.params) @ u
    return u


# ---------------------------------------------------------------------------
# plain-text rendering

_GATE_CODES = {
    "shift": "S", "invert": "I", "mix": "M", "dft": "F", "permute": "P",
    "reverse": "R", "accumulate": "A", "grid_propagate": "G", "threshold": "T",
    "saturate": "Q", "normalize": "N", "log_compress": "L",
    "cross_correlate": "X", "convolve": "C", "kuramoto": "K", "hebbian": "H",
    "ising": "Z", "synaptic": "Y", "asymmetric_couple": "W",
    "encode_phase": "E", "encode_amplitude": "B", "measure": "D",
}

# gates drawn on every rail
_GLOBAL_GATES = {"dft", "permute", "reverse", "accumulate", "grid_propagate",
                 "threshold", "saturate", "normalize", "log_compress",
                 "cross_correlate", "convolve", "kuramoto", "hebbian", "ising",
                 "asymmetric_couple", "encode_phase", "encode_amplitude",
                 "measure"}


def render_text(circuit: Circuit) -> str:
    """One rail per thread, one column per instruction; stable for goldens."""
    n = circuit.n_threads
    label_w = len(str(n - 1))
    columns: list[list[str]] = []
    for inst in circuit.instructions:
        col = ["-"] * n
        if inst.gate in _GLOBAL_GATES:
            rows: list[int] = list(range(n))
        else:
            rows = list(inst.targets)
        for r in rows:
            col[r] = _GATE_CODES[inst.gate]
        if len(rows) > 1:
            lo, hi = min(rows), max(rows)
            for r in range(lo + 1, hi):
                if col[r] == "-":
                    col[r] = "|"
        columns.append(col)
    lines = []
    for k in range(n):
        cells = "".join(f"-{col[k]}-" for col in columns)
        lines.append(f"{k:>{label_w}}: --{cells}--")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# circuit JSON wire format


def circuit_to_json_dict(circuit: Circuit) -> dict[str, Any]:
    return {
        "threads": circuit.n_threads,
        "instructions": [
            {"gate": inst.gate, "targets": list(inst.targets), "params": inst.params}
            for inst in circuit.instructions
        ],
    }


def circuit_to_json(circuit: Circuit) -> str:
    return json.dumps(circuit_to_json_dict(circuit))


def circuit_from_json(source: str | dict[str, Any]) -> Circuit:
    doc = json.loads(source) if isinstance(source, str) else source
    circuit = Circuit(int(doc["threads"]))
    for entry in doc.get("instructions", []):
        circuit.append(Instruction(entry["gate"], tuple(entry.get("targets", ())),
                                   dict(entry.get("params", {}))))
    return circuit


def _snapshot(state: PhasorState) -> Snapshot:
    pv = phases_of(state)
    return Snapshot(state, pv.phases, state.magnitudes(), coherence(state), pv.undefined)


def _snapshot_dict(s: Snapshot) -> dict[str, Any]:
    return {
        "phases": [float(x) for x in s.phases],
        "magnitudes": [float(x) for x in s.magnitudes],
        "coherence": s.coherence,
        "undefined_phase": list(s.undefined),
    }


def _kernel_pairs(kernel: np.ndarray) -> list[list[float]]:
    arr = np.atleast_1d(np.asarray(kernel, dtype=np.complex128))
    return [[float(c.real), float(c.imag)] for c in arr]
