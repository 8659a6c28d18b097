"""Exact dense linear algebra over prime fields GF(p).

``Matrix`` wraps a numpy array of residues mod p and is treated as
immutable after construction.  Row reduction over GF(2) runs on
bit-packed uint64 words; a vectorised elimination covers the other
primes.  Every echelon form returned is fully reduced, so two row
spaces are equal iff their canonical (rref) matrices are equal.

Convention used throughout the package: vectors are rows, maps act on
the right, and ``nullspace_basis(m)`` returns rows ``v`` with
``m @ v.T == 0``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Matrix",
    "eye",
    "zeros",
    "from_rows",
    "hstack",
    "vstack",
    "kron",
    "rref",
    "rank",
    "nullspace_basis",
    "solve_right",
    "solve_left",
]


def _check_prime(p) -> None:
    if not isinstance(p, (int, np.integer)):
        raise TypeError(f"characteristic must be an int, got {type(p).__name__}")
    p = int(p)
    if p < 2 or (p > 2 and p % 2 == 0):
        raise ValueError(f"{p} is not prime")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"{p} is not prime")
        d += 2


def _dtype_for(p: int):
    return np.uint8 if p == 2 else np.int64


class Matrix:
    """Dense matrix over GF(p).  Never mutate ``.a`` (it is write-locked)."""

    __slots__ = ("p", "a", "_rref")

    def __init__(self, p, data, _reduce: bool = True):
        _check_prime(p)
        a = np.array(data, dtype=_dtype_for(p))
        if a.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if _reduce:
            np.remainder(a, p, out=a)
        a.setflags(write=False)
        self.p = int(p)
        self.a = a
        self._rref = None

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def is_zero(self) -> bool:
        return not self.a.any()

    def transpose(self) -> "Matrix":
        return Matrix(self.p, np.ascontiguousarray(self.a.T), _reduce=False)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def copy_rows(self, idx) -> "Matrix":
        return Matrix(self.p, self.a[idx, :], _reduce=False)

    def copy_cols(self, idx) -> "Matrix":
        return Matrix(self.p, self.a[:, idx], _reduce=False)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return zeros(self.p, self.rows, other.cols)
        # float64 accumulation is exact while inner*(p-1)^2 < 2^53
        if self.cols * (self.p - 1) ** 2 >= 2**53:
            raise OverflowError("matrix product too large for exact float accumulation")
        prod = (self.a.astype(np.float64) @ other.a.astype(np.float64)) % self.p
        return Matrix(self.p, prod.astype(_dtype_for(self.p)), _reduce=False)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.p, (self.a.astype(np.int64) + other.a) % self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.p, (self.a.astype(np.int64) - other.a) % self.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, (-self.a.astype(np.int64)) % self.p)

    def __rmul__(self, c: int) -> "Matrix":
        return Matrix(self.p, (int(c) % self.p) * self.a.astype(np.int64))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.a, other.a)
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix(GF({self.p}), {self.rows}x{self.cols})"

    def to_lists(self):
        return self.a.tolist()

    def _same_field(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix) or other.p != self.p:
            raise ValueError("operands live over different fields")


def eye(p: int, n: int) -> Matrix:
    return Matrix(p, np.eye(n, dtype=_dtype_for(p)), _reduce=False)


def zeros(p: int, r: int, c: int) -> Matrix:
    return Matrix(p, np.zeros((r, c), dtype=_dtype_for(p)), _reduce=False)


def from_rows(p: int, rows) -> Matrix:
    """Build a matrix from an iterable of equal-length row vectors."""
    rows = list(rows)
    if not rows:
        return zeros(p, 0, 0)
    return Matrix(p, np.array(rows))


def hstack(mats) -> Matrix:
    mats = list(mats)
    p = mats[0].p
    return Matrix(p, np.hstack([m.a for m in mats]), _reduce=False)


def vstack(mats) -> Matrix:
    mats = list(mats)
    p = mats[0].p
    return Matrix(p, np.vstack([m.a for m in mats]), _reduce=False)


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._same_field(b)
    return Matrix(a.p, np.kron(a.a.astype(np.int64), b.a.astype(np.int64)) % a.p, _reduce=False)


# ----------------------------------------------------------------------
# row reduction kernels
# ----------------------------------------------------------------------

def _pack_gf2(a: np.ndarray) -> np.ndarray:
    """Pack a uint8 0/1 array (r, c) into uint64 words (r, ceil(c/64))."""
    r, c = a.shape
    if c == 0:
        return np.zeros((r, 0), dtype=np.uint64)
    nbytes = ((c + 63) // 64) * 8
    packed = np.packbits(a, axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        packed = np.pad(packed, ((0, 0), (0, nbytes - packed.shape[1])))
    return np.ascontiguousarray(packed).view(np.uint64)


def _unpack_gf2(words: np.ndarray, c: int) -> np.ndarray:
    r = words.shape[0]
    if c == 0:
        return np.zeros((r, 0), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return np.ascontiguousarray(bits[:, :c])


def _rref_gf2(a: np.ndarray):
    """rref over GF(2) on packed words; returns (uint8 array, pivot list)."""
    r, c = a.shape
    w = _pack_gf2(a)
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        wi, bi = divmod(col, 64)
        colbits = (w[row:, wi] >> np.uint64(bi)) & np.uint64(1)
        nz = np.nonzero(colbits)[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            w[[row, piv]] = w[[piv, row]]
        hits = np.nonzero((w[:, wi] >> np.uint64(bi)) & np.uint64(1))[0]
        hits = hits[hits != row]
        if hits.size:
            w[hits] ^= w[row]
        pivots.append(col)
        row += 1
    return _unpack_gf2(w, c), pivots


def _rref_modp(a: np.ndarray, p: int):
    """Generic rref mod p; returns (int64 array, pivot list)."""
    m = a.astype(np.int64, copy=True)
    r, c = m.shape
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
        inv = pow(int(m[row, col]), p - 2, p)
        m[row] = (m[row] * inv) % p
        colvals = m[:, col].copy()
        colvals[row] = 0
        nzr = np.nonzero(colvals)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(colvals[nzr], m[row])) % p
        pivots.append(col)
        row += 1
    return m, pivots


def rref(m: Matrix):
    """Reduced row echelon form and pivot columns; idempotent and canonical."""
    if m._rref is not None:
        return m._rref
    if m.p == 2:
        arr, piv = _rref_gf2(m.a)
    else:
        arr, piv = _rref_modp(m.a, m.p)
    out = (Matrix(m.p, arr, _reduce=False), tuple(piv))
    m._rref = out
    return out


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def row_space(m: Matrix) -> Matrix:
    """Canonical basis of the row space: nonzero rows of the rref."""
    r, piv = rref(m)
    return r.copy_rows(range(len(piv)))


def nullspace_basis(m: Matrix) -> Matrix:
    """Canonical row basis of the right kernel {v : m @ v.T == 0}."""
    r, piv = rref(m)
    c = m.cols
    pivset = set(piv)
    free = [j for j in range(c) if j not in pivset]
    basis = np.zeros((len(free), c), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-int(r.a[i, j])) % m.p
    return Matrix(m.p, basis)


def solve_right(a: Matrix, b: Matrix):
    """Solve a @ x = b; returns a deterministic particular solution or None.

    Free variables are set to zero, so the answer only depends on the
    inputs.  a.rows must equal b.rows.
    """
    a._same_field(b)
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    aug, piv = rref(hstack([a, b]))
    nc = a.cols
    if any(pc >= nc for pc in piv):
        return None
    x = np.zeros((nc, b.cols), dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc, :] = aug.a[i, nc:]
    return Matrix(a.p, x)


def solve_left(a: Matrix, b: Matrix):
    """Solve x @ a = b (rows of b expressed over the rows of a), or None."""
    res = solve_right(a.T, b.T)
    return None if res is None else res.T
