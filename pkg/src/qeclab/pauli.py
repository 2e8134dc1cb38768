"""Phase-free Pauli strings over n qubits, stored as X/Z bit-vectors.

Global phases are discarded everywhere: products compose letter-wise and
only the symplectic commutation parity is observable downstream.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

LETTERS = "IZXY"  # index = 2*x_bit + z_bit


class WeightCounts(NamedTuple):
    n_x: int
    n_y: int
    n_z: int


class PauliString:
    """An n-qubit Pauli operator without phase, as paired X/Z bit-vectors.

    Instances are immutable; the underlying arrays are marked read-only so
    they can be shared freely between workers.
    """

    __slots__ = ("x", "z")

    def __init__(self, x: np.ndarray, z: np.ndarray):
        x = np.ascontiguousarray(x, dtype=np.uint8) & 1
        z = np.ascontiguousarray(z, dtype=np.uint8) & 1
        if x.ndim != 1 or x.shape != z.shape:
            raise ValueError("x and z bit-vectors must be 1-d and equal length")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    def __setattr__(self, name, value):
        raise AttributeError("PauliString is immutable")

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_text(cls, text: str) -> PauliString:
        """Parse a string over the alphabet {I, X, Y, Z} (row-major site order)."""
        bad = set(text) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters: {sorted(bad)}")
        x = np.frombuffer(text.encode(), dtype=np.uint8)
        return cls((x == ord("X")) | (x == ord("Y")), (x == ord("Z")) | (x == ord("Y")))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def letter_indices(self) -> np.ndarray:
        """Per-site letter index 2*x + z (0=I, 1=Z, 2=X, 3=Y)."""
        return 2 * self.x + self.z

    def to_text(self) -> str:
        return "".join(LETTERS[i] for i in self.letter_indices)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliString({self.to_text()!r})"


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Letter-wise product with the global phase discarded."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return PauliString(a.x ^ b.x, a.z ^ b.z)


def commutes(a: PauliString, b: PauliString) -> bool:
    """Symplectic commutation test: parity of sites with distinct non-I letters."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    overlap = np.count_nonzero(a.x & b.z) + np.count_nonzero(a.z & b.x)
    return overlap % 2 == 0


def weight_counts(a: PauliString) -> WeightCounts:
    """Counts of X, Y and Z letters."""
    n_y = int((a.x & a.z).sum())
    return WeightCounts(int(a.x.sum()) - n_y, n_y, int(a.z.sum()) - n_y)
