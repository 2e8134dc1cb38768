"""Disordered-Ising representation of coset probabilities, with exact oracles.

One Ising spin per check, plus spins pinned to +1 at the boundary corner
positions that carry no stabilizer.  Each qubit contributes two two-spin
terms (one per diagonal pair of adjacent corners) and one four-spin term;
the parent chain's letters flip coupling signs site by site.  Hamiltonians
are normalized so the all-up configuration has zero energy, making
exp(log_partition) * pi_parent exactly the class coset sum.

A 2x2 transfer-matrix evaluator covers the one-dimensional chains the
models decouple into at the special point p = p_s, and yields the
closed-form failure rates there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .codes import CodeFamily, CodeSpec
from .noise import NoiseParams
from .pauli import PauliString


class Couplings(NamedTuple):
    k_x: float
    k_y: float
    k_z: float


def couplings(noise: NoiseParams) -> Couplings:
    """Coupling constants K_w = -1/4 ln(p_w (1-p) / product of the other two)."""
    p_i, p_x, p_y, p_z = noise.p_i, noise.p_x, noise.p_y, noise.p_z
    if min(p_i, p_x, p_y, p_z) <= 0.0:
        raise ValueError("couplings need all four rates strictly positive "
                         "(use the special-point oracle for eta = inf)")
    k_x = -0.25 * math.log(p_x * p_i / (p_y * p_z))
    k_y = -0.25 * math.log(p_y * p_i / (p_x * p_z))
    k_z = -0.25 * math.log(p_z * p_i / (p_x * p_y))
    return Couplings(k_x, k_y, k_z)


@dataclass
class IsingModel:
    """Spin model whose partition function is a coset sum up to pi_parent.

    Spins are integer ids; `fixed` marks ids pinned to +1 (boundary corner
    positions without a check).  `energy_offset` is added to every
    configuration's energy; builders use it to zero the all-up energy.
    """

    n_spins: int
    fixed: np.ndarray  # bool per spin id
    two_spin_terms: list[tuple[int, int, float]] = field(default_factory=list)
    four_spin_terms: list[tuple[int, int, int, int, float]] = field(default_factory=list)
    energy_offset: float = 0.0

    @property
    def free_ids(self) -> np.ndarray:
        return np.nonzero(~self.fixed)[0]

    def energy(self, spins: np.ndarray) -> float:
        """H for a full +/-1 spin assignment (fixed ids must be +1)."""
        e = self.energy_offset
        for a, b, k in self.two_spin_terms:
            e += k * spins[a] * spins[b]
        for a, b, c, dd, k in self.four_spin_terms:
            e += k * spins[a] * spins[b] * spins[c] * spins[dd]
        return e


# letter index (2x+z): 0=I, 1=Z, 2=X, 3=Y; third_letter[p][q] = letter pq
_THIRD = {(1, 2): 3, (2, 1): 3, (1, 3): 2, (3, 1): 2, (2, 3): 1, (3, 2): 1}


def build_ising(code: CodeSpec, parent: PauliString, noise: NoiseParams) -> IsingModel:
    """The disordered Ising model of the parent chain's equivalence class."""
    if code.family not in (CodeFamily.XZZX, CodeFamily.XY, CodeFamily.XZ):
        raise ValueError(f"no Ising mapping for family {code.family}")
    if parent.n != code.n:
        raise ValueError("parent chain length mismatch")
    ks = couplings(noise)
    by_letter = {1: ks.k_z, 2: ks.k_x, 3: ks.k_y}  # K indexed by its own letter
    d = code.d
    lat = code.lattice
    n_spins = (d + 1) * (d + 1)
    fixed = np.ones(n_spins, dtype=bool)
    for (i, j) in lat.check_corners:
        fixed[i * (d + 1) + j] = False
    # Corner ids never adjacent to a qubit do not occur in any term, but the
    # four grid corners and boundary positions all touch qubits, so every
    # fixed id is a genuine pinned boundary spin.
    model = IsingModel(n_spins, fixed)

    sid = lambda i, j: i * (d + 1) + j  # noqa: E731
    parent_letters = parent.letter_indices.reshape(d, d)
    two, four = [], []
    offset = 0.0
    for r in range(d):
        for c in range(d):
            # corner legs in codes.py order: tl=(r,c) tr=(r,c+1) bl=(r+1,c) br=(r+1,c+1)
            lets = lat.qubit_corner_letters[r, c]
            tl, tr, bl, br = sid(r, c), sid(r, c + 1), sid(r + 1, c), sid(r + 1, c + 1)
            # diagonal pairs act with one letter each: (tl, br) and (tr, bl)
            p_letter, q_letter = int(lets[0]), int(lets[1])
            assert lets[3] == p_letter and lets[2] == q_letter
            t_letter = _THIRD[(p_letter, q_letter)]
            ell = int(parent_letters[r, c])

            def signed(k_letter: int) -> float:
                k = by_letter[k_letter]
                return -k if (ell != 0 and k_letter != ell) else k

            k1 = signed(q_letter)   # pair acting with P couples through K_Q
            k2 = signed(p_letter)
            k4 = signed(t_letter)
            two.append((tl, br, k1))
            two.append((tr, bl, k2))
            four.append((tl, tr, bl, br, k4))
            offset += k1 + k2 + k4
    model.two_spin_terms = two
    model.four_spin_terms = four
    model.energy_offset = -offset  # all-up configuration has zero energy
    return model


def brute_force_log_partition(model: IsingModel) -> float:
    """ln sum over free-spin assignments of exp(-H), fixed spins at +1."""
    free = model.free_ids
    if free.size > 26:
        raise ValueError(f"{free.size} free spins exceeds the enumeration bound of 26")
    spins = np.ones((2 ** free.size, model.n_spins), dtype=np.int8)
    if free.size:
        m = 2 ** free.size
        cols = ((np.arange(m)[:, None] >> np.arange(free.size)[None, :]) & 1).astype(np.int8)
        spins[:, free] = 1 - 2 * cols
    energies = np.full(spins.shape[0], model.energy_offset)
    for a, b, k in model.two_spin_terms:
        energies += k * (spins[:, a] * spins[:, b])
    for a, b, c, dd, k in model.four_spin_terms:
        energies += k * (spins[:, a] * spins[:, b] * spins[:, c] * spins[:, dd])
    mx = float(np.max(-energies))
    return mx + math.log(np.exp(-energies - mx).sum())


Boundary = Literal["open", "one-fixed", "both-fixed", "periodic"]


@dataclass(frozen=True)
class TransferSpec:
    """1D Ising chain H = sum_j K_j s_{j-1} s_j over n bonds."""

    n: int
    couplings: tuple[float, ...]
    boundary: Boundary = "both-fixed"

    def __post_init__(self):
        if self.n < 1 or len(self.couplings) != self.n:
            raise ValueError("need n >= 1 couplings")


def transfer_log_partition(spec: TransferSpec) -> float:
    """ln Z of the 1D chain via rescaled 2x2 transfer-matrix products.

    Fixed ends are pinned to +1.  The both-fixed value equals half the
    periodic value for the same couplings; open and one-fixed values are
    invariant under any coupling sign flips.
    """
    prod = np.eye(2)
    log_scale = 0.0
    for k in spec.couplings:
        a = abs(k)
        t = np.array([[math.exp(-k - a), math.exp(k - a)],
                      [math.exp(k - a), math.exp(-k - a)]])
        prod = prod @ t
        log_scale += a
        m = prod.max()
        if m > 1e250:
            prod /= m
            log_scale += math.log(m)
    if spec.boundary == "both-fixed":
        val = prod[0, 0]
    elif spec.boundary == "one-fixed":
        val = prod[0, 0] + prod[0, 1]
    elif spec.boundary == "open":
        val = prod.sum()
    elif spec.boundary == "periodic":
        val = prod[0, 0] + prod[1, 1]
    else:
        raise ValueError(f"unknown boundary {spec.boundary!r}")
    if val <= 0.0:
        return -math.inf
    return math.log(val) + log_scale


def special_point_class_ratio(d_z: int, eta: float) -> float:
    """Relative class probability P_X / P_I at p = p_s: tanh(d_z artanh(1/2 eta))."""
    if d_z < 1:
        raise ValueError(f"d_z must be >= 1, got {d_z}")
    if math.isinf(eta):
        return 0.0
    if eta < 0.5:
        raise ValueError(f"bias must be >= 1/2 or inf, got {eta}")
    if eta == 0.5:
        return 1.0  # artanh(1) diverges; tanh saturates
    return math.tanh(d_z * math.atanh(1.0 / (2.0 * eta)))


def special_point_failure_rates(
    family: CodeFamily | str, d: int, eta: float
) -> tuple[float, float, float, float]:
    """(P_fX, P_fZ, P_fY, P_f) under optimal decoding at p = p_s.

    P_fX = P_fY = 1/2; P_fZ = (1 - e^{-2 d_z artanh(1/2 eta)}) / 2 and
    P_f = 3/4 - e^{-2 d_z artanh(1/2 eta)} / 4, with d_z = d for xzzx and
    d^2 for xy.
    """
    family = CodeFamily(family)
    if family not in (CodeFamily.XZZX, CodeFamily.XY):
        raise ValueError(f"special-point rates exist only for xzzx/xy, not {family}")
    if d <= 0 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and positive, got {d}")
    d_z = d if family is CodeFamily.XZZX else d * d
    if math.isinf(eta):
        decay = 1.0
    elif eta == 0.5:
        decay = 0.0
    else:
        if eta < 0.5:
            raise ValueError(f"bias must be >= 1/2 or inf, got {eta}")
        decay = math.exp(-2.0 * d_z * math.atanh(1.0 / (2.0 * eta)))
    p_fz = 0.5 - 0.5 * decay
    p_f = 0.75 - 0.25 * decay
    return (0.5, p_fz, 0.5, p_f)
