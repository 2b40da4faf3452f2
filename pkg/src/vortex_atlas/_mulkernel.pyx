# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernel for the truncated series product (scalar coefficients)."""


def mul_into(const double complex[::1] a,
             const double complex[::1] b,
             double complex[::1] out,
             const int[::1] ii,
             const int[::1] jj,
             const int[::1] kk):
    cdef Py_ssize_t t
    cdef Py_ssize_t n = ii.shape[0]
    for t in range(n):
        out[kk[t]] = out[kk[t]] + a[ii[t]] * b[jj[t]]
