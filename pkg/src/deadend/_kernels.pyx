# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled sieve kernels: tight C loops over byte buffers.

Same contract as _kernels_py (one byte per integer, value 0 or 1); selected
at import time by deadend.kernels when the extension built successfully.
"""

from cpython.bytearray cimport PyByteArray_AS_STRING
from libc.string cimport memset

BACKEND_NAME = "cython"


def squarefree_flags(long long lo, long long hi, primes):
    """Byte flags for [lo, hi): 1 where the integer is square-free."""
    cdef Py_ssize_t n = hi - lo if hi > lo else 0
    out = bytearray(n)
    if n == 0:
        return out
    cdef unsigned char *f = <unsigned char *> PyByteArray_AS_STRING(out)
    memset(f, 1, n)
    cdef long long p, q, start
    cdef Py_ssize_t j, first
    for p in primes:
        q = p * p
        if q >= hi:
            break
        start = ((lo + q - 1) // q) * q
        first = <Py_ssize_t> (start - lo)
        with nogil:
            j = first
            while j < n:
                f[j] = 0
                j += q
    return out


def dead_end_mask(const unsigned char[::1] parent, const unsigned char[::1] child, int base):
    """Byte mask over the parent range: 1 where parent[i] is square-free and
    every child value base*i + d is non-square-free."""
    cdef Py_ssize_t length = parent.shape[0]
    if child.shape[0] < base * length:
        raise ValueError("child buffer too short for parent range")
    out = bytearray(length)
    if length == 0:
        return out
    cdef unsigned char *o = <unsigned char *> PyByteArray_AS_STRING(out)
    cdef Py_ssize_t i, row
    cdef int d, dead
    with nogil:
        for i in range(length):
            if parent[i]:
                dead = 1
                row = base * i
                for d in range(base):
                    if child[row + d]:
                        dead = 0
                        break
                o[i] = dead
    return out


def subset_mask(const unsigned char[::1] parent, const unsigned char[::1] child, int base, long long digit_mask):
    """Byte mask over the parent range: 1 where parent[i] is square-free and
    the child base*i + d is square-free for every digit d in digit_mask."""
    cdef Py_ssize_t length = parent.shape[0]
    if child.shape[0] < base * length:
        raise ValueError("child buffer too short for parent range")
    out = bytearray(length)
    if length == 0:
        return out
    cdef unsigned char *o = <unsigned char *> PyByteArray_AS_STRING(out)
    cdef Py_ssize_t i, row
    cdef int d, good
    with nogil:
        for i in range(length):
            if parent[i]:
                good = 1
                row = base * i
                for d in range(base):
                    if (digit_mask >> d) & 1 and not child[row + d]:
                        good = 0
                        break
                o[i] = good
    return out
