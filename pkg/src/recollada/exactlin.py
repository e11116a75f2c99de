"""Dense linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays whose entries are kept reduced
modulo the session prime.  Vectors are rows unless a function says
otherwise; ``kernel_basis`` and ``solve`` follow the usual column
convention ``m @ v = 0`` / ``m @ x = b``.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_PRIME = 101

Mat = np.ndarray

_prime = int(os.environ.get("RECOLLADA_PRIME", DEFAULT_PRIME))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def set_prime(p: int) -> None:
    """Change the session prime.  Existing objects are not re-reduced."""
    global _prime
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    # products of two reduced entries summed over a few thousand terms must fit
    if p > 46337:
        raise ValueError("prime too large for int64 accumulation")
    _prime = p


def prime() -> int:
    return _prime


if not _is_prime(_prime):
    raise ValueError(f"RECOLLADA_PRIME={_prime} is not prime")


def mat(entries, p: int | None = None) -> Mat:
    """Build a reduced matrix (or vector) from nested sequences."""
    return np.asarray(entries, dtype=np.int64) % (p or _prime)


def zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> Mat:
    return np.eye(n, dtype=np.int64)


def inv_scalar(x: int) -> int:
    x = int(x) % _prime
    if x == 0:
        raise ZeroDivisionError("zero has no inverse in F_p")
    return pow(x, _prime - 2, _prime)


def mul(a: Mat, b: Mat) -> Mat:
    return (a @ b) % _prime


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    """Reduced row echelon form; returns ``(R, pivot_columns, rank)``."""
    p = _prime
    r = np.array(m, dtype=np.int64) % p
    if r.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_scalar(r[row, col])) % p
        factors = r[:, col].copy()
        factors[row] = 0
        nzr = np.nonzero(factors)[0]
        if nzr.size:
            r[nzr] = (r[nzr] - np.outer(factors[nzr], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots, len(pivots)


def rank(m: Mat) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m)[2]


def kernel_basis(m: Mat) -> list[Mat]:
    """Basis of ``{v : m @ v = 0}`` as a list of column vectors (1-d arrays)."""
    return list(kernel_rows(m))


def kernel_rows(m: Mat) -> Mat:
    """Kernel basis of ``m`` (column convention), stacked as rows."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return identity(cols)
    r, pivots, rk = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, f]) % _prime
    return basis


def left_kernel(m: Mat) -> Mat:
    """Rows ``v`` with ``v @ m = 0``, stacked."""
    m = np.asarray(m, dtype=np.int64)
    return kernel_rows(m.T)


def row_space(m: Mat) -> Mat:
    """Reduced basis of the row space."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return m.reshape(0, m.shape[1])
    r, _, rk = rref(m)
    return r[:rk]


def solve(m: Mat, b) -> Mat | None:
    """Some ``x`` with ``m @ x = b``, or ``None`` when the system is inconsistent."""
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if m.ndim != 2 or b.shape[0] != m.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} vs rhs of length {b.shape[0]}")
    aug = np.concatenate([m % _prime, (b % _prime)[:, None]], axis=1)
    r, pivots, rk = rref(aug)
    cols = m.shape[1]
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def solve_rows(basis: Mat, targets: Mat) -> Mat | None:
    """Coefficients ``c`` with ``c @ basis = targets`` (row convention), or None."""
    basis = np.asarray(basis, dtype=np.int64)
    targets = np.atleast_2d(np.asarray(targets, dtype=np.int64))
    k = basis.shape[0]
    if k == 0:
        return zeros(targets.shape[0], 0) if not targets.any() else None
    aug = np.concatenate([basis.T % _prime, targets.T % _prime], axis=1)
    r, pivots, rk = rref(aug)
    if pivots and pivots[-1] >= k:
        return None
    out = zeros(k, targets.shape[0])
    for i, pc in enumerate(pivots):
        out[pc] = r[i, k:]
    return out.T


def inverse(m: Mat) -> Mat:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, pivots, rk = rref(np.concatenate([m, identity(n)], axis=1))
    if rk < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def is_invertible(m: Mat) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and rank(m) == m.shape[0]


def complement_columns(rows: Mat, dim: int) -> list[int]:
    """Coordinates spanning a complement of the row space (the non-pivot columns)."""
    if rows.shape[0] == 0:
        return list(range(dim))
    _, pivots, _ = rref(rows)
    ps = set(pivots)
    return [c for c in range(dim) if c not in ps]


def quotient_projection(sub: Mat, dim: int) -> tuple[Mat, list[int]]:
    """Projection ``V -> V/U`` in row convention.

    Returns ``(Q, keep)`` where ``v @ Q`` are coordinates of the class of ``v``
    in the basis given by the images of the unit vectors at ``keep``.
    """
    sub = np.asarray(sub, dtype=np.int64)
    if sub.size == 0:
        return identity(dim), list(range(dim))
    sub = sub.reshape(-1, dim)
    r, pivots, rk = rref(sub)
    r = r[:rk]
    ps = set(pivots)
    keep = [c for c in range(dim) if c not in ps]
    q = zeros(dim, len(keep))
    for j, c in enumerate(keep):
        q[c, j] = 1
    for i, pc in enumerate(pivots):
        q[pc] = (-r[i, keep]) % _prime
    return q, keep


def extend_basis(sub: Mat, space: Mat) -> Mat:
    """Rows of ``space`` (a spanning set) that extend ``span(sub)`` to ``span(space)``."""
    space = np.asarray(space, dtype=np.int64)
    dim = space.shape[1]
    sub = row_space(np.asarray(sub, dtype=np.int64).reshape(-1, dim))
    if space.shape[0] == 0:
        return zeros(0, dim)
    stacked = np.vstack([sub, space])
    _, pivots, _ = rref(stacked.T)
    k = sub.shape[0]
    # greedy left-to-right: pivot columns past the sub block are new directions
    picks = [c - k for c in pivots if c >= k]
    return space[picks] % _prime


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> Mat:
    return rng.integers(0, _prime, size=(rows, cols), dtype=np.int64)
