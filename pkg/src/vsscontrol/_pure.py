"""Pure-Python kernels.

Reference implementation of the hot loops. ``_core.pyx`` mirrors these
signatures exactly; :mod:`vsscontrol._kernels` picks one at import time.

GF(2) rows are packed into Python ints: bit ``j`` (``j < ncols``) is the
coefficient of unknown ``j`` and bit ``ncols`` is the right-hand side.
"""


def horner(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def lagrange_at_zero(xs, ys, p):
    total = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = 1
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * xj % p
                den = den * (xj - xi) % p
        total = (total + yi * num * pow(den, p - 2, p)) % p
    return total


def gf2_rref(rows, ncols):
    """Incremental Gauss-Jordan elimination over GF(2).

    Returns ``(basis, pivots, bad)``. ``basis`` is fully reduced: each pivot
    column is set in exactly one basis row. ``bad`` is -1 when the rows are
    consistent, else the index of the first row that reduces to ``0 = 1``
    (elimination stops there).
    """
    mask = (1 << ncols) - 1
    basis = []
    pivots = []
    for r, row in enumerate(rows):
        for b, pc in zip(basis, pivots):
            if row >> pc & 1:
                row ^= b
        coeff = row & mask
        if not coeff:
            if row:
                return basis, pivots, r
            continue
        pc = (coeff & -coeff).bit_length() - 1
        for k in range(len(basis)):
            if basis[k] >> pc & 1:
                basis[k] ^= row
        basis.append(row)
        pivots.append(pc)
    return basis, pivots, -1


def walsh_spectrum(outputs):
    """Walsh-Hadamard spectrum of a truth table given as a 0/1 sequence."""
    w = [1 - 2 * b for b in outputs]
    n = len(w)
    h = 1
    while h < n:
        for i in range(0, n, h * 2):
            for j in range(i, i + h):
                a, b = w[j], w[j + h]
                w[j] = a + b
                w[j + h] = a - b
        h *= 2
    return w
