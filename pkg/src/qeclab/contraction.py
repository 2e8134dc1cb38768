"""Boundary-MPS contraction of coset tensor networks.

The network lives on the (d+1) x (d+1) corner grid: one binary variable
per stabilizer, boundary corners without a check pinned to 0.  Qubit
(r, c) contributes a weight tensor connecting its four corner variables;
sweeping row by row, each qubit row acts as an MPO of bond dimension 4 on
the boundary MPS over corner columns, which is then recompressed to bond
dimension chi by truncated SVD.  Per-sweep norms are split off into a log
accumulator so deep grids cannot underflow.

Two interchangeable backends implement the sweep: a pure-numpy one (this
module) and a Cython kernel (`qeclab._contract`) selected automatically at
import when available.  Both run the identical algorithm: QR
left-orthogonalization followed by a right-to-left truncated-SVD pass.

Weight layout: `w4` has shape (d, d, 4, 2, 2) with w4[r, c, 2*tl + bl,
tr, br] = weight of qubit (r, c) given its left corner pair (tl, bl) and
right corner pair (tr, br).
"""
from __future__ import annotations

import math

import numpy as np

try:
    from . import _contract as _compiled
except ImportError:  # pragma: no cover - build-dependent
    _compiled = None

HAVE_COMPILED = _compiled is not None


def contract_grid(
    w4: np.ndarray,
    check_mask: np.ndarray,
    chi: int,
    cutoff: float = 1e-16,
    backend: str | None = None,
) -> float:
    """Log of the full network contraction (-inf if it vanishes)."""
    if chi < 1:
        raise ValueError(f"bond dimension must be >= 1, got {chi}")
    if not 0.0 <= cutoff < 1.0:
        raise ValueError(f"svd cutoff must be in [0, 1), got {cutoff}")
    if backend is None:
        backend = "compiled" if HAVE_COMPILED else "python"
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled contraction kernel is not available")
        return _compiled.contract_grid(
            np.ascontiguousarray(w4, dtype=np.float64),
            np.ascontiguousarray(check_mask, dtype=np.uint8),
            int(chi),
            float(cutoff),
        )
    if backend == "python":
        return _contract_grid_py(w4, check_mask, chi, cutoff)
    raise ValueError(f"unknown backend {backend!r}")


def _contract_grid_py(w4, check_mask, chi, cutoff) -> float:
    d = w4.shape[0]
    nsite = d + 1
    mps = []
    for j in range(nsite):
        vec = np.array([1.0, 1.0]) if check_mask[0, j] else np.array([1.0, 0.0])
        mps.append(vec.reshape(1, 2, 1))
    log_acc = 0.0
    for r in range(d):
        mps = _apply_row(mps, w4[r])
        for j in (0, nsite - 1):
            if not check_mask[r + 1, j]:
                mps[j][:, 1, :] = 0.0
        if r == d - 1:
            for j in range(nsite):
                if not check_mask[d, j]:
                    mps[j][:, 1, :] = 0.0
        lognorm = _compress(mps, chi, cutoff)
        if lognorm is None:
            return -math.inf
        log_acc += lognorm
    vec = np.ones((1, 1))
    for j in range(nsite):
        vec = vec @ mps[j].sum(axis=1)
    val = float(vec[0, 0])
    if not val > 0.0:
        return -math.inf
    return math.log(val) + log_acc


def _apply_row(mps, w_row):
    """Apply one qubit row as an MPO; qubit c sits between sites c and c+1."""
    nsite = len(mps)
    out = []
    a = mps[0]  # (1, 2, R)
    r_dim = a.shape[2]
    b6 = np.zeros((1, 2, 2, 2, r_dim))
    b6[0, 0, :, 0, :] = a[0]
    b6[0, 1, :, 1, :] = a[0]
    out.append(b6.reshape(1, 2, 4 * r_dim))
    for j in range(1, nsite):
        a = mps[j]
        l_dim, _, r_dim = a.shape
        w = w_row[j - 1]  # (4, 2, 2): [left pair, t_j, b_j]
        if j < nsite - 1:
            b5 = np.einsum("atb,ltr->albtr", w, a)  # (4, L, 2, 2, R)
            b6 = np.zeros((4, l_dim, 2, 2, 2, r_dim))
            b6[:, :, 0, :, 0, :] = b5[:, :, 0, :, :]
            b6[:, :, 1, :, 1, :] = b5[:, :, 1, :, :]
            out.append(b6.reshape(4 * l_dim, 2, 4 * r_dim))
        else:
            b = np.einsum("atb,ltr->albr", w, a)
            out.append(b.reshape(4 * l_dim, 2, r_dim))
    return out


def _compress(mps, chi, cutoff):
    """In-place canonicalize + truncate; returns the log norm or None if zero.

    Left-to-right SVD sweep (no truncation) to orthogonalize, then a
    right-to-left truncated sweep.  The compiled kernel runs the identical
    sequence so both backends agree to rounding.
    """
    nsite = len(mps)
    for j in range(nsite - 1):
        l_dim, p, r_dim = mps[j].shape
        u, s, vh = np.linalg.svd(mps[j].reshape(l_dim * p, r_dim), full_matrices=False)
        k = s.shape[0]
        mps[j] = u.reshape(l_dim, p, k)
        mps[j + 1] = np.tensordot(s[:, None] * vh, mps[j + 1], axes=(1, 0))
    norm = float(np.linalg.norm(mps[-1]))
    if norm == 0.0 or not math.isfinite(norm):
        return None
    mps[-1] = mps[-1] / norm
    for j in range(nsite - 1, 0, -1):
        l_dim, p, r_dim = mps[j].shape
        u, s, vh = np.linalg.svd(mps[j].reshape(l_dim, p * r_dim), full_matrices=False)
        keep = _keep_count(s, chi, cutoff)
        mps[j] = vh[:keep].reshape(keep, p, r_dim)
        mps[j - 1] = np.tensordot(mps[j - 1], u[:, :keep] * s[:keep], axes=(2, 0))
    return math.log(norm)


def _keep_count(s, chi, cutoff) -> int:
    if s.size == 0 or s[0] <= 0.0:
        return 1
    keep = int(np.count_nonzero(s >= cutoff * s[0]))
    return max(1, min(chi, keep))
