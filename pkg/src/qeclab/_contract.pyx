# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled boundary-MPS contraction kernel.

Mirrors qeclab.contraction._contract_grid_py step for step: row MPO
application, left-to-right SVD orthogonalization, right-to-left truncated
SVD, log-norm accumulation.  Small matrix work goes straight to BLAS and
LAPACK through scipy's Cython bindings, which removes the per-call numpy
overhead that dominates at these tensor sizes.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, isfinite, log, sqrt
from libc.string cimport memcpy, memset
from scipy.linalg.cython_blas cimport dgemm
from scipy.linalg.cython_lapack cimport dgesdd

cnp.import_array()


cdef inline int _imin(int a, int b) nogil:
    return a if a < b else b


cdef int _svd_c(double* a, int m, int n, double* u, double* s, double* vh,
                double* work, int lwork, int* iwork) nogil:
    """SVD of a C-order (m, n) matrix: a = u (m,k) @ diag(s) @ vh (k,n).

    Implemented as LAPACK dgesdd on the transposed (Fortran) view; `a` is
    destroyed.  u and vh land in C order.
    """
    cdef int info = 0
    cdef int mf = n, nf = m, k = _imin(m, n)
    cdef char jobz = b'S'
    # F-view of `a` is a^T (n, m); its U (n,k) is our vh^T, its VT (k,m) is our u^T
    dgesdd(&jobz, &mf, &nf, a, &mf, s, vh, &mf, u, &k, work, &lwork, iwork, &info)
    return info


cdef void _gemm_c(double* a, double* b, double* c, int m, int k, int n) nogil:
    """C-order product c (m,n) = a (m,k) @ b (k,n) via transposed dgemm."""
    cdef double one = 1.0, zero = 0.0
    cdef char nt = b'N'
    dgemm(&nt, &nt, &n, &m, &k, &one, b, &n, a, &k, &zero, c, &n)


def contract_grid(cnp.ndarray[cnp.float64_t, ndim=5, mode="c"] w4,
                  cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] mask,
                  int chi, double cutoff):
    """Log of the network contraction; -inf if it vanishes. See contraction.py."""
    cdef int d = w4.shape[0]
    cdef int ns = d + 1
    if chi < 1:
        raise ValueError("chi must be >= 1")
    if chi > 4096:
        raise ValueError("chi too large for the compiled kernel")
    cdef int cap_bond = 4 * chi
    cdef long cap = <long> cap_bond * 2 * cap_bond
    # ping-pong tensor arenas, tensor j is (L[j], 2, R[j]) row-major
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] arena_a = np.zeros((ns, cap))
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] arena_b = np.zeros((ns, cap))
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode="c"] ldim = np.ones(ns, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode="c"] rdim = np.ones(ns, dtype=np.int32)
    # scratch for svd/gemm
    cdef int mmax = 2 * cap_bond
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] scratch = np.empty(<long> mmax * cap_bond * 2)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] u_buf = np.empty(<long> mmax * cap_bond)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] vh_buf = np.empty(<long> mmax * cap_bond)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] s_buf = np.empty(cap_bond)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] carry = np.empty(<long> cap_bond * cap_bond)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode="c"] iwork = np.empty(8 * cap_bond, dtype=np.int32)
    # workspace query at the largest shapes seen in either sweep
    cdef double wsize = 0.0
    cdef int lwork = -1, info = 0, k_ = _imin(mmax, cap_bond)
    cdef int mf = cap_bond, nf = mmax
    cdef char jobz = b'S'
    dgesdd(&jobz, &mf, &nf, <double*> scratch.data, &mf, <double*> s_buf.data,
           <double*> vh_buf.data, &mf, <double*> u_buf.data, &k_,
           &wsize, &lwork, <int*> iwork.data, &info)
    lwork = <int> wsize
    dgesdd(&jobz, &nf, &mf, <double*> scratch.data, &nf, <double*> s_buf.data,
           <double*> vh_buf.data, &nf, <double*> u_buf.data, &k_,
           &wsize, &lwork, <int*> iwork.data, &info)
    if <int> wsize > lwork:
        lwork = <int> wsize
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] work = np.empty(lwork)

    cdef double* cur = <double*> arena_a.data
    cdef double* nxt = <double*> arena_b.data
    cdef double* tmp_swap
    cdef double* wrow = <double*> w4.data
    cdef unsigned char* mk = <unsigned char*> mask.data
    cdef int* ld = <int*> ldim.data
    cdef int* rd = <int*> rdim.data

    cdef int r, j, ap, t, b, l, rr, ll, keep, k, m, n, pinned_j
    cdef double log_acc = 0.0, norm, val, coef
    cdef double* a_ptr
    cdef double* b_ptr
    cdef double* w_ptr
    cdef int L, R

    # initial MPS: corner-row-0 vectors (1,1) where a check exists, else (1,0)
    for j in range(ns):
        cur[j * cap + 0] = 1.0
        cur[j * cap + 1] = 1.0 if mk[j] else 0.0
        ld[j] = 1
        rd[j] = 1

    for r in range(d):
        # --- apply the row-r MPO into the other arena ---
        # site 0: B[0, b, (2t+b)*R + rr] = A[0, t, rr]
        R = rd[0]
        a_ptr = cur
        b_ptr = nxt
        memset(b_ptr, 0, <size_t> (2 * 4 * R) * sizeof(double))
        for b in range(2):
            for t in range(2):
                for rr in range(R):
                    b_ptr[b * (4 * R) + (2 * t + b) * R + rr] = a_ptr[t * R + rr]
        ld[0] = 1
        rd[0] = 4 * R
        for j in range(1, ns):
            L = ld[j]
            R = rd[j]
            a_ptr = cur + j * cap
            b_ptr = nxt + j * cap
            w_ptr = wrow + ((<long> r * d + (j - 1)) * 16)
            if j < ns - 1:
                memset(b_ptr, 0, <size_t> (4 * L * 2 * 4 * R) * sizeof(double))
                for ap in range(4):
                    for t in range(2):
                        for b in range(2):
                            coef = w_ptr[ap * 4 + t * 2 + b]
                            if coef == 0.0:
                                continue
                            for l in range(L):
                                for rr in range(R):
                                    b_ptr[(ap * L + l) * (8 * R) + b * (4 * R)
                                          + (2 * t + b) * R + rr] = \
                                        coef * a_ptr[l * (2 * R) + t * R + rr]
                ld[j] = 4 * L
                rd[j] = 4 * R
            else:
                memset(b_ptr, 0, <size_t> (4 * L * 2 * R) * sizeof(double))
                for ap in range(4):
                    for t in range(2):
                        for b in range(2):
                            coef = w_ptr[ap * 4 + t * 2 + b]
                            if coef == 0.0:
                                continue
                            for l in range(L):
                                for rr in range(R):
                                    b_ptr[(ap * L + l) * (2 * R) + b * R + rr] += \
                                        coef * a_ptr[l * (2 * R) + t * R + rr]
                ld[j] = 4 * L
                rd[j] = R
        tmp_swap = cur
        cur = nxt
        nxt = tmp_swap
        # update left dims from right dims of neighbours (bond consistency)
        # (rd[j-1] == ld[j] holds by construction above except site boundaries)
        # --- pins: zero the value-1 physical slice where no check exists ---
        for j in range(ns):
            pinned_j = 0
            if (j == 0 or j == ns - 1) and mk[(r + 1) * ns + j] == 0:
                pinned_j = 1
            if r == d - 1 and mk[d * ns + j] == 0:
                pinned_j = 1
            if pinned_j:
                a_ptr = cur + j * cap
                L = ld[j]
                R = rd[j]
                for l in range(L):
                    memset(a_ptr + l * (2 * R) + R, 0, <size_t> R * sizeof(double))
        # --- compress: left-to-right SVD sweep (no truncation) ---
        for j in range(ns - 1):
            L = ld[j]
            R = rd[j]
            m = 2 * L
            n = R
            k = _imin(m, n)
            a_ptr = cur + j * cap
            memcpy(<double*> scratch.data, a_ptr, <size_t> (m * n) * sizeof(double))
            info = _svd_c(<double*> scratch.data, m, n, <double*> u_buf.data,
                          <double*> s_buf.data, <double*> vh_buf.data,
                          <double*> work.data, lwork, <int*> iwork.data)
            if info != 0:
                raise RuntimeError(f"dgesdd failed with info={info}")
            memcpy(a_ptr, <double*> u_buf.data, <size_t> (m * k) * sizeof(double))
            rd[j] = k
            # carry = diag(s) @ vh, then next = carry @ next
            for l in range(k):
                for rr in range(n):
                    carry[l * n + rr] = s_buf[l] * vh_buf[l * n + rr]
            L = ld[j + 1]
            R = rd[j + 1]
            b_ptr = cur + (j + 1) * cap
            memcpy(<double*> scratch.data, b_ptr, <size_t> (L * 2 * R) * sizeof(double))
            _gemm_c(<double*> carry.data, <double*> scratch.data, b_ptr, k, n, 2 * R)
            ld[j + 1] = k
        # --- norm off the last site ---
        L = ld[ns - 1]
        R = rd[ns - 1]
        a_ptr = cur + (ns - 1) * cap
        norm = 0.0
        for l in range(L * 2 * R):
            norm += a_ptr[l] * a_ptr[l]
        norm = sqrt(norm)
        if norm == 0.0 or not isfinite(norm):
            return -INFINITY
        val = 1.0 / norm
        for l in range(L * 2 * R):
            a_ptr[l] *= val
        log_acc += log(norm)
        # --- right-to-left truncated SVD sweep ---
        for j in range(ns - 1, 0, -1):
            L = ld[j]
            R = rd[j]
            m = L
            n = 2 * R
            k = _imin(m, n)
            a_ptr = cur + j * cap
            memcpy(<double*> scratch.data, a_ptr, <size_t> (m * n) * sizeof(double))
            info = _svd_c(<double*> scratch.data, m, n, <double*> u_buf.data,
                          <double*> s_buf.data, <double*> vh_buf.data,
                          <double*> work.data, lwork, <int*> iwork.data)
            if info != 0:
                raise RuntimeError(f"dgesdd failed with info={info}")
            keep = 0
            if s_buf[0] > 0.0:
                for l in range(k):
                    if s_buf[l] >= cutoff * s_buf[0]:
                        keep += 1
            if keep < 1:
                keep = 1
            if keep > chi:
                keep = chi
            memcpy(a_ptr, <double*> vh_buf.data, <size_t> (keep * n) * sizeof(double))
            ld[j] = keep
            # carry = u[:, :keep] * s[:keep]  (m, keep)
            for l in range(m):
                for rr in range(keep):
                    carry[l * keep + rr] = u_buf[l * k + rr] * s_buf[rr]
            L = ld[j - 1]
            R = rd[j - 1]
            b_ptr = cur + (j - 1) * cap
            memcpy(<double*> scratch.data, b_ptr, <size_t> (L * 2 * R) * sizeof(double))
            _gemm_c(<double*> scratch.data, <double*> carry.data, b_ptr, L * 2, m, keep)
            rd[j - 1] = keep

    # --- closure: contract every physical leg with (1, 1) ---
    # row vector v over the current left bond, starting at site 0 (L=1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] vec = np.zeros(cap_bond)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] vec2 = np.zeros(cap_bond)
    cdef double* v = <double*> vec.data
    cdef double* v2 = <double*> vec2.data
    v[0] = 1.0
    cdef int vlen = 1
    for j in range(ns):
        L = ld[j]
        R = rd[j]
        a_ptr = cur + j * cap
        for rr in range(R):
            v2[rr] = 0.0
        for l in range(L):
            coef = v[l]
            if coef == 0.0:
                continue
            for rr in range(R):
                v2[rr] += coef * (a_ptr[l * (2 * R) + rr] + a_ptr[l * (2 * R) + R + rr])
        tmp_swap = v
        v = v2
        v2 = tmp_swap
        vlen = R
    val = v[0]
    if not val > 0.0:
        return -INFINITY
    return log(val) + log_acc
