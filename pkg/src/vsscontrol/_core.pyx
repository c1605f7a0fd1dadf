# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_pure``.

Field arithmetic assumes p < 2**31 so every product fits in 64 bits.
``gf2_rref`` packs a row into one machine word and therefore requires
``ncols <= 63``; callers fall back to ``_pure`` above that.
"""

from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64
ctypedef long long i64


cdef inline i64 _powmod(i64 base, i64 exp, i64 p):
    cdef i64 result = 1
    base %= p
    while exp > 0:
        if exp & 1:
            result = result * base % p
        base = base * base % p
        exp >>= 1
    return result


def horner(coeffs, i64 x, i64 p):
    cdef i64 acc = 0
    cdef Py_ssize_t k
    cdef Py_ssize_t n = len(coeffs)
    x %= p
    for k in range(n - 1, -1, -1):
        acc = (acc * x + <i64>coeffs[k]) % p
    return acc


def lagrange_at_zero(xs, ys, i64 p):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t i, j
    cdef i64 total = 0, num, den, xi, xj
    cdef i64 *cx = <i64 *>malloc(n * sizeof(i64))
    cdef i64 *cy = <i64 *>malloc(n * sizeof(i64))
    if cx == NULL or cy == NULL:
        free(cx)
        free(cy)
        raise MemoryError()
    try:
        for i in range(n):
            cx[i] = (<i64>xs[i]) % p
            cy[i] = (<i64>ys[i]) % p
        for i in range(n):
            num = 1
            den = 1
            xi = cx[i]
            for j in range(n):
                if j != i:
                    xj = cx[j]
                    num = num * xj % p
                    den = den * ((xj - xi + p) % p) % p
            total = (total + cy[i] * num % p * _powmod(den, p - 2, p)) % p
        return total
    finally:
        free(cx)
        free(cy)


def gf2_rref(rows, int ncols):
    if ncols > 63:
        raise ValueError("compiled gf2_rref supports at most 63 unknowns")
    cdef Py_ssize_t nrows = len(rows)
    cdef u64 mask = ((<u64>1) << ncols) - 1
    cdef u64 *basis = <u64 *>malloc((nrows + 1) * sizeof(u64))
    cdef int *piv = <int *>malloc((nrows + 1) * sizeof(int))
    cdef Py_ssize_t nb = 0, r, k
    cdef u64 row, coeff
    cdef int pc
    cdef Py_ssize_t bad = -1
    if basis == NULL or piv == NULL:
        free(basis)
        free(piv)
        raise MemoryError()
    try:
        for r in range(nrows):
            row = <u64>rows[r]
            for k in range(nb):
                if (row >> piv[k]) & 1:
                    row ^= basis[k]
            coeff = row & mask
            if coeff == 0:
                if row != 0:
                    bad = r
                    break
                continue
            pc = 0
            while not ((coeff >> pc) & 1):
                pc += 1
            for k in range(nb):
                if (basis[k] >> pc) & 1:
                    basis[k] ^= row
            basis[nb] = row
            piv[nb] = pc
            nb += 1
        return [basis[k] for k in range(nb)], [piv[k] for k in range(nb)], bad
    finally:
        free(basis)
        free(piv)


def walsh_spectrum(outputs):
    cdef Py_ssize_t n = len(outputs)
    cdef Py_ssize_t h = 1, i, j
    cdef i64 a, b
    cdef i64 *w = <i64 *>malloc(n * sizeof(i64)) if n else NULL
    if n and w == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            w[i] = 1 - 2 * <i64>outputs[i]
        while h < n:
            for i in range(0, n, h * 2):
                for j in range(i, i + h):
                    a = w[j]
                    b = w[j + h]
                    w[j] = a + b
                    w[j + h] = a - b
            h *= 2
        return [w[i] for i in range(n)]
    finally:
        if w != NULL:
            free(w)
