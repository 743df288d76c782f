"""Gate model, statevector simulation and a line-oriented text format.

Qubit 0 is the most significant bit of a basis index. Any gate may carry
control qubits; it then acts only on the subspace where all controls are 1.

Text format, one gate per line::

    KIND [angle] target [target ...] [| control [control ...]]

Blank lines and lines starting with ``#`` are ignored. The first
non-comment line may be ``WIDTH n``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

MAX_WIDTH = 7


class GateKind(str, enum.Enum):
    ROT_Y = "RotY"
    ROT_Z = "RotZ"
    HADAMARD = "Hadamard"
    NOT = "NotGate"
    CNOT = "CNot"
    CSWAP = "CSwap"
    CROT_Y = "ControlledRotY"


_ROTATIONS = {GateKind.ROT_Y, GateKind.ROT_Z, GateKind.CROT_Y}


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
SWAP_MAT = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: tuple
    controls: tuple = ()
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        need_t = 2 if self.kind is GateKind.CSWAP else 1
        if len(self.targets) != need_t:
            raise IndexError(f"{self.kind.value} needs {need_t} target(s), got {self.targets}")
        if self.kind is GateKind.CNOT and len(self.controls) != 1:
            raise IndexError("CNot needs exactly one control")
        if self.kind is GateKind.CROT_Y and not self.controls:
            raise IndexError("ControlledRotY needs at least one control")
        if self.kind in _ROTATIONS:
            if self.angle is None or not np.isfinite(self.angle):
                raise ValueError(f"{self.kind.value} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")
        qs = self.targets + self.controls
        if len(set(qs)) != len(qs):
            raise IndexError(f"repeated qubit in {qs}")
        if min(qs) < 0:
            raise IndexError(f"negative qubit index in {qs}")

    @property
    def qubits(self):
        return self.targets + self.controls

    def base_matrix(self):
        """Matrix on the targets, without controls."""
        k = self.kind
        if k in (GateKind.ROT_Y, GateKind.CROT_Y):
            return ry(self.angle)
        if k is GateKind.ROT_Z:
            return rz(self.angle)
        if k is GateKind.HADAMARD:
            return H_MAT
        if k in (GateKind.NOT, GateKind.CNOT):
            return X_MAT
        return SWAP_MAT

    def matrix(self):
        """Full matrix on (controls..., targets...), controls most significant."""
        u = self.base_matrix()
        dim = 2 ** (len(self.controls) + len(self.targets))
        full = np.eye(dim, dtype=complex)
        full[dim - u.shape[0]:, dim - u.shape[0]:] = u
        return full


@dataclass
class Circuit:
    width: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        for g in self.gates:
            self._check(g)

    def _check(self, g):
        if max(g.qubits) >= self.width:
            raise IndexError(f"gate {g} exceeds width {self.width}")

    def add(self, kind, targets, controls=(), angle=None):
        g = Gate(kind, tuple(np.atleast_1d(targets)), tuple(np.atleast_1d(controls)) if
                 np.size(controls) else (), angle)
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, other):
        if other.width > self.width:
            raise IndexError("appended circuit is wider")
        self.gates.extend(other.gates)
        return self

    def copy(self):
        return Circuit(self.width, list(self.gates))

    def __len__(self):
        return len(self.gates)


def apply_gate(psi, g, width):
    """Apply one gate to a statevector of the given width."""
    for q in g.qubits:
        if not 0 <= q < width:
            raise IndexError(f"qubit {q} outside width {width}")
    t = psi.reshape((2,) * width)
    idx = [slice(None)] * width
    for q in g.controls:
        idx[q] = 1
    idx = tuple(idx)
    sub = t[idx]
    # remaining axes after integer indexing keep their relative order
    free = [q for q in range(width) if q not in g.controls]
    axes = [free.index(q) for q in g.targets]
    u = g.base_matrix().reshape((2,) * (2 * len(g.targets)))
    moved = np.moveaxis(sub, axes, list(range(len(axes))))
    nt = len(axes)
    out = np.tensordot(u, moved, axes=(list(range(nt, 2 * nt)), list(range(nt))))
    t = t.copy()
    t[idx] = np.moveaxis(out, list(range(nt)), axes)
    return t.reshape(-1)


def statevector_run(c, initial=None):
    """Final statevector of ``c`` applied to |0...0> (or ``initial``)."""
    if initial is None:
        psi = np.zeros(2 ** c.width, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.asarray(initial, dtype=complex).copy()
    for g in c.gates:
        psi = apply_gate(psi, g, c.width)
    return psi


def reduced_density(psi, keep):
    """Density matrix of the qubits in ``keep``, ordered as listed."""
    keep = tuple(int(q) for q in keep)
    n = int(round(np.log2(psi.size)))
    if 2 ** n != psi.size:
        raise ValueError(f"statevector length {psi.size} is not a power of 2")
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise IndexError(f"bad keep set {keep} for {n} qubits")
    rest = [q for q in range(n) if q not in keep]
    t = np.transpose(psi.reshape((2,) * n), list(keep) + rest)
    m = t.reshape(2 ** len(keep), -1)
    return m @ m.conj().T


def unitary(c):
    """Full 2^n x 2^n unitary of a circuit (column k = image of basis state k)."""
    dim = 2 ** c.width
    cols = [statevector_run(c, np.eye(dim, dtype=complex)[k]) for k in range(dim)]
    return np.stack(cols, axis=1)


def unitarity_residual(g):
    u = g.matrix()
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def to_text(c):
    lines = [f"WIDTH {c.width}"]
    for g in c.gates:
        parts = [g.kind.value]
        if g.angle is not None:
            parts.append(f"{g.angle:.17g}")
        parts += [str(q) for q in g.targets]
        if g.controls:
            parts.append("|")
            parts += [str(q) for q in g.controls]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text, width=None):
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition("|")
        toks = head.split()
        if toks[0] == "WIDTH":
            width = int(toks[1])
            continue
        try:
            kind = GateKind(toks[0])
        except ValueError:
            raise ValueError(f"line {lineno}: unknown gate {toks[0]!r}") from None
        angle = None
        rest = toks[1:]
        if kind in _ROTATIONS:
            angle, rest = float(rest[0]), rest[1:]
        controls = tuple(int(q) for q in tail.split())
        gates.append(Gate(kind, tuple(int(q) for q in rest), controls, angle))
    if width is None:
        width = max((max(g.qubits) for g in gates), default=0) + 1
    return Circuit(width, gates)
