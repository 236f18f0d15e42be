# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: Metropolis annealing and exhaustive QUBO enumeration.

Every routine here has a NumPy twin in ``_pykernels.py`` that consumes the
random streams in exactly the same order. Keep the two in lockstep.

Conventions shared with the fallback:

* ``w`` is the full symmetric coupling matrix with zero diagonal, ``v`` the
  linear coefficients; the local field of qubit ``a`` is
  ``v[a] + sum_k w[a, k] q[k]`` and flipping ``a`` changes the energy by
  ``(1 - 2 q[a]) * field[a]``.
* Enumeration runs in counting order with qubit 0 as the most significant
  bit, which is lexicographic order of the bit strings.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport exp
from libc.stdint cimport uint64_t, int64_t, uint8_t

cnp.import_array()

cdef enum:
    RESYNC = 4096


cdef inline uint64_t _next_u64(uint64_t *state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _next_double(uint64_t *state) noexcept nogil:
    return <double>(_next_u64(state) >> 11) * (1.0 / 9007199254740992.0)


cdef void _anneal_read(const double[:, ::1] w, const double[::1] v,
                       const double[::1] betas, uint64_t seed,
                       uint8_t[::1] q, double[::1] field, int64_t[::1] perm) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t n_sweeps = betas.shape[0]
    cdef Py_ssize_t a, k, t, i, jdx
    cdef int64_t tmp
    cdef uint64_t state = seed
    cdef double beta, delta, u, dq

    for a in range(n):
        q[a] = <uint8_t>(_next_u64(&state) >> 63)
    for a in range(n):
        field[a] = v[a]
    for k in range(n):
        if q[k]:
            for a in range(n):
                field[a] += w[a, k]

    for t in range(n_sweeps):
        beta = betas[t]
        for a in range(n):
            perm[a] = a
        for i in range(n - 1, 0, -1):
            jdx = <Py_ssize_t>(_next_double(&state) * (i + 1))
            tmp = perm[i]
            perm[i] = perm[jdx]
            perm[jdx] = tmp
        for k in range(n):
            a = perm[k]
            dq = 1.0 - 2.0 * q[a]
            delta = dq * field[a]
            u = _next_double(&state)
            if delta <= 0.0 or u < exp(-(beta * delta)):
                q[a] ^= 1
                for i in range(n):
                    field[i] += dq * w[a, i]


def anneal(const double[:, ::1] w, const double[::1] v, const double[::1] betas,
           uint64_t seed, Py_ssize_t reads, int n_threads=1):
    """Final states of ``reads`` independent chains, shape (reads, n)."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t r
    out = np.zeros((reads, n), dtype=np.uint8)
    fields = np.zeros((reads, n), dtype=np.float64)
    perms = np.zeros((reads, n), dtype=np.int64)
    cdef uint8_t[:, ::1] q = out
    cdef double[:, ::1] f = fields
    cdef int64_t[:, ::1] pm = perms
    if n == 0:
        return out
    if n_threads < 1:
        n_threads = 1
    for r in prange(reads, nogil=True, schedule="dynamic", num_threads=n_threads):
        _anneal_read(w, v, betas, seed ^ <uint64_t>r, q[r], f[r], pm[r])
    return out


cdef double _resync(const double[:, ::1] w, const double[::1] v,
                    uint64_t idx, Py_ssize_t n, uint8_t[::1] q,
                    double[::1] field) noexcept nogil:
    """Set q to the bits of idx and recompute fields and energy from scratch."""
    cdef Py_ssize_t a, k
    cdef double e = 0.0
    for a in range(n):
        q[a] = (idx >> (n - 1 - a)) & 1
    for a in range(n):
        field[a] = v[a]
    for k in range(n):
        if q[k]:
            for a in range(n):
                field[a] += w[a, k]
    for a in range(n):
        if q[a]:
            e += v[a] + 0.5 * (field[a] - v[a])
    return e


cdef inline double _flip(const double[:, ::1] w, Py_ssize_t a, Py_ssize_t n,
                         uint8_t[::1] q, double[::1] field) noexcept nogil:
    cdef double dq = 1.0 - 2.0 * q[a]
    cdef double delta = dq * field[a]
    cdef Py_ssize_t i
    q[a] ^= 1
    for i in range(n):
        field[i] += dq * w[a, i]
    return delta


cdef double _scan(const double[:, ::1] w, const double[::1] v, Py_ssize_t n,
                  double threshold, int64_t *hit, uint8_t[::1] q,
                  double[::1] field) noexcept nogil:
    """Walk all states in counting order.

    With ``hit == NULL`` return the minimum energy; otherwise store the first
    index whose energy is ``<= threshold`` and return that energy.
    """
    cdef uint64_t total = (<uint64_t>1) << n
    cdef uint64_t idx
    cdef Py_ssize_t a
    cdef double e = 0.0, best = 0.0
    for idx in range(total):
        if idx % RESYNC == 0:
            e = _resync(w, v, idx, n, q, field)
        else:
            # idx - 1 -> idx: trailing ones clear, next bit sets
            a = n - 1
            while q[a]:
                e += _flip(w, a, n, q, field)
                a -= 1
            e += _flip(w, a, n, q, field)
        if hit != NULL:
            if e <= threshold:
                hit[0] = <int64_t>idx
                return e
        elif idx == 0 or e < best:
            best = e
    return best


def exhaustive_min(const double[:, ::1] w, const double[::1] v, double tol):
    """(index, energy) of the lexicographically first state within tol of the minimum."""
    cdef Py_ssize_t n = v.shape[0]
    cdef int64_t hit = -1
    cdef double emin, e
    q_arr = np.zeros(max(n, 1), dtype=np.uint8)
    f_arr = np.zeros(max(n, 1), dtype=np.float64)
    cdef uint8_t[::1] q = q_arr
    cdef double[::1] field = f_arr
    if n == 0:
        return 0, 0.0
    with nogil:
        emin = _scan(w, v, n, 0.0, NULL, q, field)
        e = _scan(w, v, n, emin + tol, &hit, q, field)
    return int(hit), float(e)


def all_energies(const double[:, ::1] w, const double[::1] v):
    """Energy of every state, in counting order."""
    cdef Py_ssize_t n = v.shape[0]
    cdef uint64_t total = (<uint64_t>1) << n
    cdef uint64_t idx
    cdef Py_ssize_t a
    cdef double e = 0.0
    out_arr = np.zeros(total, dtype=np.float64)
    q_arr = np.zeros(max(n, 1), dtype=np.uint8)
    f_arr = np.zeros(max(n, 1), dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef uint8_t[::1] q = q_arr
    cdef double[::1] field = f_arr
    if n == 0:
        return out_arr
    with nogil:
        for idx in range(total):
            if idx % RESYNC == 0:
                e = _resync(w, v, idx, n, q, field)
            else:
                a = n - 1
                while q[a]:
                    e += _flip(w, a, n, q, field)
                    a -= 1
                e += _flip(w, a, n, q, field)
            out[idx] = e
    return out_arr
