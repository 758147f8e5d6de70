# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python kernels.

The contract (enumeration order, arithmetic order, threshold semantics) is
documented in _pure.py; results must match it bit for bit.
"""

from libc.math cimport log2
from libc.stdlib cimport calloc, free
from libc.stdint cimport uint64_t, uint8_t, int64_t

BACKEND = "c"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
_TWO64 = 1 << 64
_MASK = _TWO64 - 1


cdef inline uint64_t _draw(uint64_t seed, uint64_t counter) noexcept nogil:
    cdef uint64_t z = seed + (counter + 1) * GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef void _visit(int i, int k, int n, uint64_t* adj, double* w,
                 unsigned char* rgs, uint64_t* bmask, double* bw,
                 double keep, double* best, list out):
    cdef int b
    cdef double h, ww
    cdef uint64_t bit, a
    if i == n:
        h = 0.0
        for b in range(k):
            ww = bw[b]
            if ww > 0.0:
                h += -ww * log2(ww)
        if h <= best[0] + keep:
            if h < best[0]:
                best[0] = h
                out[:] = [c for c in out if <double> c[0] <= best[0] + keep]
            out.append((h, (<char*> rgs)[:n]))
        return
    bit = (<uint64_t> 1) << i
    a = adj[i]
    for b in range(k):
        if bmask[b] & a:
            continue
        rgs[i] = <unsigned char> b
        bmask[b] |= bit
        bw[b] += w[i]
        _visit(i + 1, k, n, adj, w, rgs, bmask, bw, keep, best, out)
        bw[b] -= w[i]
        bmask[b] &= ~bit
    rgs[i] = <unsigned char> k
    bmask[k] = bit
    bw[k] = w[i]
    _visit(i + 1, k + 1, n, adj, w, rgs, bmask, bw, keep, best, out)
    bw[k] = 0.0
    bmask[k] = 0


def min_entropy_partitions(adj, weights, double keep=1e-9):
    cdef int n = len(adj)
    if n == 0:
        return [(0.0, b"")]
    if n > 64:
        raise ValueError("kernel supports at most 64 vertices")
    cdef uint64_t c_adj[64]
    cdef double c_w[64]
    cdef unsigned char rgs[64]
    cdef uint64_t bmask[64]
    cdef double bw[64]
    cdef double best = float("inf")
    cdef int i
    for i in range(n):
        c_adj[i] = <uint64_t> adj[i]
        c_w[i] = <double> weights[i]
        bmask[i] = 0
        bw[i] = 0.0
        rgs[i] = 0
    out = []
    _visit(0, 0, n, c_adj, c_w, rgs, bmask, bw, keep, &best, out)
    return out


cdef inline int _pick(uint64_t u, uint64_t* lo, uint8_t* hi, int off, int m) noexcept nogil:
    cdef int j
    for j in range(m):
        if hi[off + j] or u < lo[off + j]:
            return j
    return m - 1


cdef int _load(object ks, uint64_t* lo, uint8_t* hi, int off) except -1:
    cdef int j = 0
    for k in ks:
        if k >= _TWO64:
            hi[off + j] = 1
            lo[off + j] = 0
        else:
            hi[off + j] = 0
            lo[off + j] = <uint64_t> k
        j += 1
    return 0


def simulate_counts(object seed, long long n, int nx, int ny, int nu, int nz,
                    kxy, ku, kz):
    cdef uint64_t s = <uint64_t> (int(seed) & _MASK)
    cdef int m_xy = nx * ny
    cdef int m_u = nx * nu
    cdef int m_z = nu * ny * nz
    cdef int total = nx * ny * nu * nz
    cdef uint64_t* lo = <uint64_t*> calloc(m_xy + m_u + m_z, sizeof(uint64_t))
    cdef uint8_t* hi = <uint8_t*> calloc(m_xy + m_u + m_z, sizeof(uint8_t))
    cdef int64_t* counts = <int64_t*> calloc(total, sizeof(int64_t))
    if lo == NULL or hi == NULL or counts == NULL:
        free(lo); free(hi); free(counts)
        raise MemoryError()
    cdef int x, y, u, z, j
    cdef long long i
    cdef uint64_t r
    try:
        _load(kxy, lo, hi, 0)
        for x in range(nx):
            _load(ku[x], lo, hi, m_xy + x * nu)
        for j in range(nu * ny):
            _load(kz[j], lo, hi, m_xy + m_u + j * nz)
        with nogil:
            for i in range(n):
                r = _draw(s, 3 * i)
                j = _pick(r, lo, hi, 0, m_xy)
                x = j // ny
                y = j - x * ny
                r = _draw(s, 3 * i + 1)
                u = _pick(r, lo, hi, m_xy + x * nu, nu)
                r = _draw(s, 3 * i + 2)
                z = _pick(r, lo, hi, m_xy + m_u + (u * ny + y) * nz, nz)
                counts[((x * ny + y) * nu + u) * nz + z] += 1
        return [counts[j] for j in range(total)]
    finally:
        free(lo)
        free(hi)
        free(counts)
