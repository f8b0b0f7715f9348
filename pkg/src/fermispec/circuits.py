"""Gate-level circuit IR shared by the compiler, optimizers and simulators.

Gates are value types over a closed gate set.  Angle-carrying kinds (RZ,
GIVENS) compare with a 1e-12 tolerance; everything else is exact.  GIVENS(theta)
denotes exp(i*(X_a X_b + Y_a Y_b)*theta/2), so on the span{|01>,|10>} it acts as
[[cos t, i sin t], [i sin t, cos t]].  A GIVENS costs two native two-qubit gates
on hardware and is counted as such by `two_qubit_count` / `two_qubit_depth`.

BARRIER takes no qubits and cuts commutation-based layering globally; in the
text format it is a blank line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

ANGLE_TOL = 1e-12


class GateKind(Enum):
    CZ = "CZ"
    CX = "CX"
    CY = "CY"
    SWAP = "SWAP"
    FSWAP = "FSWAP"
    X = "X"
    Z = "Z"
    S = "S"
    SDG = "SDG"
    RZ = "RZ"
    GIVENS = "GIVENS"
    BARRIER = "BARRIER"


TWO_QUBIT_KINDS = frozenset({
    GateKind.CZ, GateKind.CX, GateKind.CY, GateKind.SWAP, GateKind.FSWAP,
    GateKind.GIVENS,
})
PARAMETRIC_KINDS = frozenset({GateKind.RZ, GateKind.GIVENS})
# diagonal in the computational basis
DIAGONAL_KINDS = frozenset({GateKind.CZ, GateKind.Z, GateKind.S, GateKind.SDG,
                            GateKind.RZ, GateKind.BARRIER})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        nq = len(self.qubits)
        if self.kind is GateKind.BARRIER:
            if nq != 0:
                raise ValueError("BARRIER takes no qubit operands")
        elif self.kind in TWO_QUBIT_KINDS:
            if nq != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind.value} needs two distinct qubits")
        else:
            if nq != 1:
                raise ValueError(f"{self.kind.value} is a single-qubit gate")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be nonnegative")
        if (self.angle is not None) != (self.kind in PARAMETRIC_KINDS):
            raise ValueError(f"angle mismatch for {self.kind.value}")

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if self.kind is not other.kind or self.qubits != other.qubits:
            return False
        if self.angle is None:
            return other.angle is None
        return other.angle is not None and abs(self.angle - other.angle) <= ANGLE_TOL

    def __hash__(self):
        return hash((self.kind, self.qubits))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CX, (control, target))


def cy(control: int, target: int) -> Gate:
    """Controlled-iY; equals CZ composed after CX on the same pair."""
    return Gate(GateKind.CY, (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def fswap(a: int, b: int) -> Gate:
    """Fermionic swap: SWAP followed by CZ on the pair."""
    return Gate(GateKind.FSWAP, (a, b))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def z(q: int) -> Gate:
    return Gate(GateKind.Z, (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (q,))


def rz(angle: float, q: int) -> Gate:
    """diag(e^{-i angle/2}, e^{+i angle/2}) on qubit q."""
    return Gate(GateKind.RZ, (q,), float(angle))


def givens(angle: float, a: int, b: int) -> Gate:
    return Gate(GateKind.GIVENS, (a, b), float(angle))


def barrier() -> Gate:
    return Gate(GateKind.BARRIER, ())


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on `num_qubits` qubits; first gate applies first."""
    num_qubits: int
    gates: tuple[Gate, ...]
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.num_qubits for q in g.qubits):
                raise ValueError(f"gate {g} out of range for {self.num_qubits} qubits")

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def with_meta(self, **kv) -> "Circuit":
        meta = dict(self.meta)
        meta.update(kv)
        return Circuit(self.num_qubits, self.gates, meta)


def native_two_qubit_cost(gate: Gate) -> int:
    """Two-qubit gate cost in native gates; a GIVENS rotation costs two."""
    if gate.kind not in TWO_QUBIT_KINDS:
        return 0
    return 2 if gate.kind is GateKind.GIVENS else 1


def two_qubit_count(circuit: Circuit) -> int:
    """Total native two-qubit gate cost, barriers excluded."""
    return sum(native_two_qubit_cost(g) for g in circuit.gates)


def two_qubit_depth(circuit: Circuit) -> int:
    """Greedy left-to-right layering of two-qubit gates.

    Single-qubit gates are free; a barrier flushes every qubit to the current
    maximum layer.
    """
    depth = [0] * circuit.num_qubits
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            cut = max(depth, default=0)
            depth = [cut] * circuit.num_qubits
        elif g.kind in TWO_QUBIT_KINDS:
            a, b = g.qubits
            lvl = max(depth[a], depth[b]) + native_two_qubit_cost(g)
            depth[a] = depth[b] = lvl
    return max(depth, default=0)


_SELF_INVERSE = frozenset({GateKind.CZ, GateKind.CX, GateKind.SWAP,
                           GateKind.FSWAP, GateKind.X, GateKind.Z,
                           GateKind.BARRIER})


def _gate_inverse(g: Gate) -> tuple[Gate, ...]:
    if g.kind in _SELF_INVERSE:
        return (g,)
    if g.kind is GateKind.S:
        return (Gate(GateKind.SDG, g.qubits),)
    if g.kind is GateKind.SDG:
        return (Gate(GateKind.S, g.qubits),)
    if g.kind in PARAMETRIC_KINDS:
        return (Gate(g.kind, g.qubits, -g.angle),)
    if g.kind is GateKind.CY:
        # CY^2 = Z on the control, so CY^-1 = CY . Z_control
        return (g, Gate(GateKind.Z, (g.qubits[0],)))
    raise AssertionError(f"no inverse rule for {g.kind}")


def invert(circuit: Circuit) -> Circuit:
    """Reversed gate order with each gate replaced by its inverse."""
    gates: list[Gate] = []
    for g in reversed(circuit.gates):
        gates.extend(_gate_inverse(g))
    return Circuit(circuit.num_qubits, tuple(gates))


def concat(*circuits: Circuit, num_qubits: int | None = None) -> Circuit:
    n = num_qubits if num_qubits is not None else max(c.num_qubits for c in circuits)
    gates: list[Gate] = []
    for c in circuits:
        gates.extend(c.gates)
    return Circuit(n, tuple(gates))


def remap(circuit: Circuit, qubit_map: Sequence[int], num_qubits: int) -> Circuit:
    """Relabel qubit indices through `qubit_map` (old index -> new index)."""
    gates = [Gate(g.kind, tuple(qubit_map[q] for q in g.qubits), g.angle)
             for g in circuit.gates]
    return Circuit(num_qubits, tuple(gates))


# ---------------------------------------------------------------------------
# line-oriented text format:  one gate per line, angle first for RZ/GIVENS,
# blank line = barrier, '#' starts a comment.
# ---------------------------------------------------------------------------

_GATE_RE = re.compile(r"([A-Za-z]+)\s*\(([^()]*)\)")


def format_circuit(circuit: Circuit) -> str:
    lines = [f"# qubits: {circuit.num_qubits}"]
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            lines.append("")
        elif g.kind in PARAMETRIC_KINDS:
            args = ",".join([repr(g.angle)] + [str(q) for q in g.qubits])
            lines.append(f"{g.kind.value}({args})")
        else:
            lines.append(f"{g.kind.value}({','.join(str(q) for q in g.qubits)})")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str, num_qubits: int | None = None) -> Circuit:
    """Parse the text format; accepts several gate tokens on one line.

    Interior blank lines become barriers (matching the layer separators of
    shipped gate listings); leading/trailing blank lines are ignored.
    """
    gates: list[Gate] = []
    declared = num_qubits
    pending_blank = False
    seen_any = False
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            m = re.search(r"qubits:\s*(\d+)", line)
            if m and declared is None:
                declared = int(m.group(1))
            continue
        if not line:
            if seen_any:
                pending_blank = True
            continue
        if pending_blank:
            gates.append(barrier())
            pending_blank = False
        for name, args in _GATE_RE.findall(line):
            kind = GateKind(name.upper())
            parts = [p.strip() for p in args.split(",") if p.strip()]
            if kind in PARAMETRIC_KINDS:
                angle = float(parts[0])
                qubits = tuple(int(p) for p in parts[1:])
                gates.append(Gate(kind, qubits, angle))
            elif kind is GateKind.BARRIER:
                gates.append(barrier())
            else:
                gates.append(Gate(kind, tuple(int(p) for p in parts)))
            seen_any = True
    n = declared
    if n is None:
        n = 1 + max((q for g in gates for q in g.qubits), default=-1)
        n = max(n, 1)
    return Circuit(n, tuple(gates))


def write_circuit(circuit: Circuit, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_circuit(circuit))


def read_circuit(path, num_qubits: int | None = None) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh.read(), num_qubits)
