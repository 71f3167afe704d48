# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Signatures mirror ``permsum._fallback``."""

from libc.stdint cimport uint64_t

from libc.stdlib cimport free, malloc

cdef extern from "<math.h>" nogil:
    void sincos(double x, double *s, double *c)

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

DEF MAX_ORDER = 64


def ryser_range(const double complex[:, ::1] a, unsigned long long start,
                unsigned long long stop):
    """Signed Ryser partial sum over Gray-code indices ``start <= k < stop``.

    Returns sum of (-1)^{|S_k|} prod_i rowsum_{S_k}(i); the caller applies
    the overall (-1)^n.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex rs[MAX_ORDER]
    cdef double complex prod
    cdef double complex total = 0
    cdef unsigned long long k, g, bit
    if n > MAX_ORDER:
        raise ValueError("order too large for the compiled kernel")
    if stop <= start:
        return 0j
    with nogil:
        g = start ^ (start >> 1)
        for i in range(n):
            rs[i] = 0
            for j in range(n):
                if (g >> j) & 1:
                    rs[i] = rs[i] + a[i, j]
        if g != 0:
            prod = 1
            for i in range(n):
                prod = prod * rs[i]
            if __builtin_popcountll(g) & 1:
                total = total - prod
            else:
                total = total + prod
        k = start + 1
        while k < stop:
            j = __builtin_ctzll(k)
            bit = (<unsigned long long>1) << j
            g = g ^ bit
            if g & bit:
                for i in range(n):
                    rs[i] = rs[i] + a[i, j]
            else:
                for i in range(n):
                    rs[i] = rs[i] - a[i, j]
            prod = 1
            for i in range(n):
                prod = prod * rs[i]
            if __builtin_popcountll(g) & 1:
                total = total - prod
            else:
                total = total + prod
            k += 1
    return total


def exp_sum_range(const uint64_t[::1] masks, const double[::1] thetas,
                  unsigned long long start, unsigned long long stop):
    """Sum of exp(i * phase(x)) over the assignments with Gray index ``start <= k < stop``.

    Gray order visits the same set as ``start <= x < stop`` when both ends
    are multiples of the chunk size. Flipping bit j only revisits clauses
    that contain j.
    """
    cdef Py_ssize_t c, nc = masks.shape[0]
    cdef Py_ssize_t j, t
    cdef unsigned long long k, g, bit
    cdef uint64_t m, rest
    cdef double phase, sv, cv
    cdef double re = 0.0, im = 0.0
    cdef Py_ssize_t start_of[MAX_ORDER + 1]
    cdef Py_ssize_t *members
    if stop <= start:
        return 0j
    members = <Py_ssize_t *> malloc((nc * MAX_ORDER + 1) * sizeof(Py_ssize_t))
    if members == NULL:
        raise MemoryError()
    try:
        with nogil:
            t = 0
            for j in range(MAX_ORDER):
                start_of[j] = t
                for c in range(nc):
                    if (masks[c] >> j) & 1:
                        members[t] = c
                        t += 1
            start_of[MAX_ORDER] = t
            g = start ^ (start >> 1)
            phase = 0.0
            for c in range(nc):
                m = masks[c]
                phase += thetas[c] * ((g & m) == m)
            sincos(phase, &sv, &cv)
            re += cv
            im += sv
            k = start + 1
            while k < stop:
                j = __builtin_ctzll(k)
                bit = (<unsigned long long>1) << j
                g = g ^ bit
                for t in range(start_of[j], start_of[j + 1]):
                    c = members[t]
                    rest = masks[c] & ~bit
                    if (g & rest) == rest:
                        if g & bit:
                            phase += thetas[c]
                        else:
                            phase -= thetas[c]
                sincos(phase, &sv, &cv)
                re += cv
                im += sv
                k += 1
    finally:
        free(members)
    return complex(re, im)
