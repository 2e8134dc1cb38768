"""Rotated XZZX / XY / XZ surface codes and the phase-flip repetition code.

Lattice conventions
-------------------
Qubits sit on a d x d grid, enumerated row-major from the top left,
q = r*d + c with r, c in 0..d-1.  Stabilizers live on the corner grid
(i, j), i, j in 0..d: corner (i, j) touches qubits (i-1, j-1) [its NW
qubit], (i-1, j) [NE], (i, j-1) [SW] and (i, j) [SE] where those exist.
All (d-1)^2 interior corners carry weight-4 checks; boundary corners
carry weight-2 checks on alternating positions (top edge: odd j, bottom:
even j, left: even i, right: odd i), for d^2 - 1 checks in total.  The
remaining boundary corners are the "missing" stabilizers that become
fixed spins in the statistical-mechanics mapping and pinned legs in the
tensor-network decoder.

Per-family plaquette letters (what the check at a corner applies to each
of its qubits, by the qubit's position within the plaquette):

* xzzx: X on the NW/SE qubits, Z on the NE/SW qubits.
* xy:   X^4 on even-parity corners (i+j even), Y^4 on odd.
* xz:   X^4 on even-parity corners, Z^4 on odd.

Logical operators: X_L is X along the anti-diagonal for xzzx/xy and X on
the top row for xz; Z_L is Z along the main diagonal (xzzx), Z on every
qubit (xy), or Z on the left column (xz).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString, commutes, multiply, weight_counts

Syndrome = np.ndarray  # uint8 bit-vector, one bit per check


class CodeFamily(str, enum.Enum):
    XZZX = "xzzx"
    XY = "xy"
    XZ = "xz"
    REPETITION = "repetition"

    def __str__(self) -> str:
        return self.value


class EquivClass(enum.IntEnum):
    """Logical coset of an error chain; values compose by XOR (Klein group)."""

    I = 0  # noqa: E741 - the paper-facing class names are I, X, Z, Y
    X = 1
    Z = 2
    Y = 3

    @staticmethod
    def from_bits(anti_zl: int, anti_xl: int) -> "EquivClass":
        return EquivClass(anti_zl + 2 * anti_xl)


CLASS_ORDER = (EquivClass.I, EquivClass.X, EquivClass.Z, EquivClass.Y)

_ROLES = ("NW", "NE", "SW", "SE")


def _corner_letter(family: CodeFamily, i: int, j: int, role: str) -> int:
    """Letter index (2x+z) the plaquette at corner (i, j) applies to a qubit."""
    if family is CodeFamily.XZZX:
        return 2 if role in ("NW", "SE") else 1  # X : Z
    even = (i + j) % 2 == 0
    if family is CodeFamily.XY:
        return 2 if even else 3  # X^4 : Y^4
    if family is CodeFamily.XZ:
        return 2 if even else 1  # X^4 : Z^4
    raise ValueError(f"no plaquettes for family {family}")


def _has_check(d: int, i: int, j: int) -> bool:
    if 1 <= i <= d - 1 and 1 <= j <= d - 1:
        return True
    if i == 0 and 1 <= j <= d - 1:
        return j % 2 == 1
    if i == d and 1 <= j <= d - 1:
        return j % 2 == 0
    if j == 0 and 1 <= i <= d - 1:
        return i % 2 == 0
    if j == d and 1 <= i <= d - 1:
        return i % 2 == 1
    return False


@dataclass(frozen=True)
class SurfaceLattice:
    """Corner-grid geometry shared by the decoder and the Ising mapping."""

    d: int
    check_mask: np.ndarray  # (d+1, d+1) bool, True where a check exists
    check_index: np.ndarray  # (d+1, d+1) int, -1 where no check
    check_corners: list[tuple[int, int]]  # corner of checks[k]
    qubit_corner_letters: np.ndarray  # (d, d, 4) letter idx per corner of a qubit
    base_letter_grid: np.ndarray  # (d, d, 2, 2, 2, 2) letter idx per corner bits

    @property
    def n_checks(self) -> int:
        return len(self.check_corners)


def _build_lattice(family: CodeFamily, d: int) -> SurfaceLattice:
    mask = np.zeros((d + 1, d + 1), dtype=bool)
    index = np.full((d + 1, d + 1), -1, dtype=np.int64)
    corners: list[tuple[int, int]] = []
    for i in range(d + 1):
        for j in range(d + 1):
            if _has_check(d, i, j):
                mask[i, j] = True
                index[i, j] = len(corners)
                corners.append((i, j))

    # Corner legs of qubit (r, c), in tensor order tl, tr, bl, br: the qubit
    # is the SE, SW, NE, NW qubit of those corners respectively.
    letters = np.zeros((d, d, 4), dtype=np.uint8)
    for r in range(d):
        for c in range(d):
            for k, ((i, j), role) in enumerate(
                [((r, c), "SE"), ((r, c + 1), "SW"), ((r + 1, c), "NE"), ((r + 1, c + 1), "NW")]
            ):
                letters[r, c, k] = _corner_letter(family, i, j, role)

    base = np.zeros((d, d, 2, 2, 2, 2), dtype=np.uint8)
    for tl in range(2):
        for tr in range(2):
            for bl in range(2):
                for br in range(2):
                    acc = np.zeros((d, d), dtype=np.uint8)
                    for bit, k in zip((tl, tr, bl, br), range(4)):
                        if bit:
                            acc ^= letters[:, :, k]
                    base[:, :, tl, tr, bl, br] = acc
    return SurfaceLattice(d, mask, index, corners, letters, base)


@dataclass
class CodeSpec:
    """A code instance: checks, logical pair and distance metadata.

    Treat instances as immutable after construction; the `_cache` dict only
    memoizes derived matrices (check bit-matrices, GF(2) solvers).
    """

    family: CodeFamily
    d: int
    n: int
    checks: list[PauliString]
    logical_x: PauliString
    logical_z: PauliString
    d_z: int
    lattice: SurfaceLattice | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_checks(self) -> int:
        return len(self.checks)

    def check_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Stacked X/Z bit-matrices of the checks, shape (n_checks, n)."""
        if "gxgz" not in self._cache:
            gx = np.array([c.x for c in self.checks], dtype=np.uint8)
            gz = np.array([c.z for c in self.checks], dtype=np.uint8)
            self._cache["gxgz"] = (gx, gz)
        return self._cache["gxgz"]

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state


def build_code(family: CodeFamily | str, d: int) -> CodeSpec:
    """Construct a code instance for the given family and odd distance d."""
    family = CodeFamily(family)
    if d <= 0 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and positive, got {d}")
    if family is CodeFamily.REPETITION:
        return _build_repetition(d)
    if d < 3:
        raise ValueError(f"surface codes need d >= 3, got {d}")
    return _build_surface(family, d)


def _build_repetition(d: int) -> CodeSpec:
    checks = []
    for i in range(d - 1):
        x = np.zeros(d, dtype=np.uint8)
        x[i] = x[i + 1] = 1
        checks.append(PauliString(x, np.zeros(d, dtype=np.uint8)))
    logical_z = PauliString(np.zeros(d, dtype=np.uint8), np.ones(d, dtype=np.uint8))
    lx = np.zeros(d, dtype=np.uint8)
    lx[0] = 1
    logical_x = PauliString(lx, np.zeros(d, dtype=np.uint8))
    return CodeSpec(CodeFamily.REPETITION, d, d, checks, logical_x, logical_z, d)


def _build_surface(family: CodeFamily, d: int) -> CodeSpec:
    lattice = _build_lattice(family, d)
    n = d * d
    checks = []
    for (i, j) in lattice.check_corners:
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for role, (r, c) in zip(_ROLES, ((i - 1, j - 1), (i - 1, j), (i, j - 1), (i, j))):
            if 0 <= r < d and 0 <= c < d:
                letter = _corner_letter(family, i, j, role)
                x[r * d + c] ^= letter >> 1
                z[r * d + c] ^= letter & 1
        checks.append(PauliString(x, z))

    lx = np.zeros(n, dtype=np.uint8)
    lz = np.zeros(n, dtype=np.uint8)
    if family in (CodeFamily.XZZX, CodeFamily.XY):
        for i in range(d):
            lx[i * d + (d - 1 - i)] = 1
        if family is CodeFamily.XZZX:
            for i in range(d):
                lz[i * d + i] = 1
            d_z = d
        else:
            lz[:] = 1
            d_z = d * d
    else:  # XZ: X along the top row, Z along the left column
        lx[0:d] = 1
        for r in range(d):
            lz[r * d] = 1
        d_z = d
    logical_x = PauliString(lx, np.zeros(n, dtype=np.uint8))
    logical_z = PauliString(np.zeros(n, dtype=np.uint8), lz)
    return CodeSpec(family, d, n, checks, logical_x, logical_z, d_z, lattice)


def syndrome(code: CodeSpec, chain: PauliString) -> Syndrome:
    """Syndrome bits: bit i = 1 iff checks[i] anticommutes with the chain."""
    if chain.n != code.n:
        raise ValueError(f"chain length {chain.n} != qubit count {code.n}")
    gx, gz = code.check_matrices()
    return ((gx.astype(np.int64) @ chain.z + gz.astype(np.int64) @ chain.x) % 2).astype(np.uint8)


def equivalence_class(code: CodeSpec, chain: PauliString) -> EquivClass:
    """Logical coset of the chain from its commutation with Z_L and X_L."""
    if chain.n != code.n:
        raise ValueError(f"chain length {chain.n} != qubit count {code.n}")
    anti_zl = 0 if commutes(chain, code.logical_z) else 1
    anti_xl = 0 if commutes(chain, code.logical_x) else 1
    return EquivClass.from_bits(anti_zl, anti_xl)


# ---------------------------------------------------------------------------
# GF(2) linear solvers for representative chains


def _gf2_solver(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce [A | I]; returns the reduced matrix and pivot columns.

    For an onto map A (rows = syndrome bits, cols = unknown bits) this lets
    each syndrome be solved in O(rows^2): x[pivot[r]] = (reduced_I @ s)[r].
    """
    rows, cols = a.shape
    m = np.concatenate([a % 2, np.eye(rows, dtype=np.uint8)], axis=1)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        if hit[0] != 0:
            sw = r + hit[0]
            m[[r, sw]] = m[[sw, r]]
        elim = np.nonzero(m[:, c])[0]
        for k in elim:
            if k != r:
                m[k] ^= m[r]
        pivots.append(c)
        r += 1
    if r != rows:
        raise ValueError("syndrome map is not onto; representative solve impossible")
    return m[:, cols:], pivots


def _solve_gf2(solver: tuple[np.ndarray, list[int]], ncols: int, s: np.ndarray) -> np.ndarray:
    red, pivots = solver
    rhs = (red.astype(np.int64) @ s) % 2
    out = np.zeros(ncols, dtype=np.uint8)
    for r, c in enumerate(pivots):
        out[c] = rhs[r]
    return out


def pure_z_representative(code: CodeSpec, s: Syndrome) -> PauliString:
    """The canonical Z/I chain with syndrome s (the pair member commuting with X_L)."""
    if code.family not in (CodeFamily.XZZX, CodeFamily.XY):
        raise ValueError(f"pure-Z representatives exist only for xzzx/xy, not {code.family}")
    if len(s) != code.n_checks:
        raise ValueError("syndrome length mismatch")
    if "purez" not in code._cache:
        gx, _ = code.check_matrices()
        code._cache["purez"] = _gf2_solver(gx)  # syndrome of Z-chain z is gx @ z
    z = _solve_gf2(code._cache["purez"], code.n, np.asarray(s, dtype=np.uint8))
    chain = PauliString(np.zeros(code.n, dtype=np.uint8), z)
    # logical_z is the pure-Z logical for both families; the two pair members
    # differ by it, and exactly one commutes with X_L.
    if not commutes(chain, code.logical_x):
        chain = multiply(chain, code.logical_z)
    return chain


def class_i_representative(code: CodeSpec, s: Syndrome) -> PauliString:
    """Any class-I chain with syndrome s; works for every family."""
    s = np.asarray(s, dtype=np.uint8)
    if len(s) != code.n_checks:
        raise ValueError("syndrome length mismatch")
    if code.family in (CodeFamily.XZZX, CodeFamily.XY):
        return pure_z_representative(code, s)
    if code.family is CodeFamily.REPETITION:
        z = np.zeros(code.n, dtype=np.uint8)
        for i in range(code.n - 1):
            z[i + 1] = z[i] ^ s[i]
        return PauliString(np.zeros(code.n, dtype=np.uint8), z)
    # XZ: solve the full symplectic system for any matching chain, then move
    # it into class I with the logicals.
    if "symplectic" not in code._cache:
        gx, gz = code.check_matrices()
        a = np.concatenate([gz, gx], axis=1)  # unknown = (x bits | z bits)
        code._cache["symplectic"] = _gf2_solver(a)
    v = _solve_gf2(code._cache["symplectic"], 2 * code.n, s)
    chain = PauliString(v[: code.n], v[code.n:])
    cls = equivalence_class(code, chain)
    if cls & 1:  # anticommutes with Z_L: compose with X_L (class X) to clear
        chain = multiply(chain, code.logical_x)
    if cls & 2:  # anticommutes with X_L: compose with Z_L (class Z) to clear
        chain = multiply(chain, code.logical_z)
    return chain


def single_minority_logical(code: CodeSpec, site: int, letter: str) -> PauliString:
    """A logical bit-flip operator with exactly one X or Y (minority) letter.

    Built as the product of the single-letter chain at `site` with the
    matched pure-Z chain of the same syndrome, picking the pair member that
    commutes with X_L.  Valid sites lie on the pure-Z logical's support.
    """
    if code.family not in (CodeFamily.XZZX, CodeFamily.XY):
        raise ValueError(f"single-minority construction needs xzzx/xy, not {code.family}")
    if letter not in ("X", "Y"):
        raise ValueError(f"minority letter must be X or Y, got {letter!r}")
    if not 0 <= site < code.n:
        raise ValueError(f"site {site} out of range")
    if code.family is CodeFamily.XZZX and site % code.d != site // code.d:
        raise ValueError(f"site {site} is not on the main diagonal")
    x = np.zeros(code.n, dtype=np.uint8)
    z = np.zeros(code.n, dtype=np.uint8)
    x[site] = 1
    z[site] = 1 if letter == "Y" else 0
    seed = PauliString(x, z)
    rep = pure_z_representative(code, syndrome(code, seed))
    out = multiply(seed, rep)
    if not commutes(out, code.logical_x):
        out = multiply(out, code.logical_z)  # switch to the other pure-Z pair member
    return out


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    entries: list[tuple[str, bool, str]]

    @property
    def all_ok(self) -> bool:
        return all(ok for _, ok, _ in self.entries)

    def __str__(self) -> str:
        lines = [f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
                 for name, ok, detail in self.entries]
        return "\n".join(lines)


def _gf2_rank(mat: np.ndarray) -> int:
    m = (mat % 2).astype(np.uint8)
    rank = 0
    for c in range(m.shape[1]):
        hit = np.nonzero(m[rank:, c])[0]
        if hit.size == 0:
            continue
        sw = rank + hit[0]
        m[[rank, sw]] = m[[sw, rank]]
        elim = np.nonzero(m[:, c])[0]
        for k in elim:
            if k != rank:
                m[k] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def validate_code(code: CodeSpec) -> ValidationReport:
    """Run every CodeSpec invariant and report pass/fail per invariant."""
    entries: list[tuple[str, bool, str]] = []

    def add(name: str, ok: bool, detail: str = ""):
        entries.append((name, bool(ok), detail))

    add("check count is n - 1", code.n_checks == code.n - 1,
        f"{code.n_checks} checks, n = {code.n}")

    bad = [(a, b) for a in range(code.n_checks) for b in range(a + 1, code.n_checks)
           if not commutes(code.checks[a], code.checks[b])]
    add("all pairs of checks commute", not bad, f"{len(bad)} anticommuting pairs" if bad else "")

    bad_l = [k for k, c in enumerate(code.checks)
             if not (commutes(c, code.logical_x) and commutes(c, code.logical_z))]
    add("checks commute with both logicals", not bad_l,
        f"violations at checks {bad_l[:5]}" if bad_l else "")

    add("logicals anticommute", not commutes(code.logical_x, code.logical_z))

    gx, gz = code.check_matrices()
    rank = _gf2_rank(np.concatenate([gx, gz], axis=1))
    add("checks are independent", rank == code.n_checks, f"GF(2) rank {rank}")

    if code.family in (CodeFamily.XZZX, CodeFamily.XY):
        d = code.d
        anti = np.zeros(code.n, dtype=np.uint8)
        for i in range(d):
            anti[i * d + (d - 1 - i)] = 1
        wc = weight_counts(code.logical_x)
        add("X_L is X^d on the anti-diagonal",
            np.array_equal(code.logical_x.x, anti) and code.logical_x.z.sum() == 0
            and wc.n_x == d)
        if code.family is CodeFamily.XZZX:
            main = np.zeros(code.n, dtype=np.uint8)
            for i in range(d):
                main[i * d + i] = 1
            add("Z_L is Z^d on the main diagonal",
                np.array_equal(code.logical_z.z, main) and code.logical_z.x.sum() == 0)
            add("d_z equals d", code.d_z == d)
        else:
            add("Z_L is Z on all qubits",
                bool(code.logical_z.z.all()) and code.logical_z.x.sum() == 0)
            add("d_z equals d^2", code.d_z == d * d)
    return ValidationReport(entries)
