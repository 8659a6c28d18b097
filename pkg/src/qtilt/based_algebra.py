"""Finite-dimensional algebras given by structure constants over GF(p).

Jacobson radicals are computed by the characteristic-p chain of
coefficient forms: starting from the trace form, the space is cut down
level by level with the maps x |-> c_{p^j}(x y), where c_k is the k-th
characteristic polynomial coefficient in the right regular
representation.  Over the prime field these maps are linear, and the
chain reaches the radical after at most floor(log_p dim) + 1 levels; a
verified nilpotent-ideal test exits early whenever the current space
already is the radical.

Primitive idempotents are obtained by peeling: split a non-trivial
idempotent off the semisimple quotient of a corner (central splitting
via the Frobenius-fixed part of the centre, then minimal-polynomial
splitting inside a simple factor), lift it along the radical by
iterated p-th powers, and recurse on the complementary corners.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import Matrix
from .qspec import Quiver

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap if not (args and callable(args[0])) else args[0]


__all__ = [
    "BasedAlgebra",
    "BlockData",
    "Generator",
    "NonSplitError",
    "from_quotient_algebra",
    "radical_basis",
    "primitive_idempotents",
    "is_local",
    "opposite_based",
    "quotient_by_ideal",
]


class NonSplitError(RuntimeError):
    """A simple factor of the semisimple quotient is not a matrix algebra over GF(p)."""


@dataclass(frozen=True)
class Generator:
    source: int
    target: int
    vec: np.ndarray
    label: str


@dataclass
class BlockData:
    """Block structure used for module theory.

    ``idempotents`` is a complete orthogonal family refining the
    distinguished one; every basis element must satisfy
    e_src * b * e_tgt == b.  ``generators`` generate the radical as an
    ideal; together with the block idempotents they generate the
    algebra.
    """

    idempotents: tuple[np.ndarray, ...]
    src: np.ndarray
    tgt: np.ndarray
    generators: tuple[Generator, ...]


class BasedAlgebra:
    """Algebra with basis labels, structure constants and distinguished idempotents."""

    def __init__(
        self,
        p: int,
        labels,
        mul: np.ndarray,
        unit: np.ndarray,
        idempotents,
        blocks: BlockData | None = None,
        quiver: Quiver | None = None,
        validate: bool = True,
    ):
        self.p = int(p)
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.mul = np.ascontiguousarray(mul, dtype=np.int64) % p
        self.unit = np.asarray(unit, dtype=np.int64) % p
        self.idempotents = tuple(np.asarray(e, dtype=np.int64) % p for e in idempotents)
        self.blocks = blocks
        self.quiver = quiver
        self._radical = None
        self._prims = None
        self._opposite = None
        self._span = None
        self._proj_cache = {}
        if validate:
            self._validate()

    # -- elementary operations ----------------------------------------

    def mult(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u % self.p, v % self.p, self.mul) % self.p

    def power(self, u: np.ndarray, k: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(k):
            out = self.mult(out, u)
        return out

    def right_regular(self, x: np.ndarray) -> np.ndarray:
        """Matrix of v |-> v*x on row vectors."""
        return np.einsum("i,jik->jk", x % self.p, self.mul) % self.p

    def left_mul_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix whose row j is x*b_j."""
        return np.einsum("i,ijk->jk", x % self.p, self.mul) % self.p

    def num_blocks(self) -> int:
        return len(self.blocks.idempotents)

    def block_elements(self, s: int, t: int) -> list[int]:
        b = self.blocks
        return [m for m in range(self.dim) if b.src[m] == s and b.tgt[m] == t]

    # -- validation ----------------------------------------------------

    def _validate(self) -> None:
        n, p = self.dim, self.p
        if self.mul.shape != (n, n, n):
            raise ValueError("structure constant array has wrong shape")
        left = np.einsum("i,ijk->jk", self.unit, self.mul) % p
        right = np.einsum("j,ijk->ik", self.unit, self.mul) % p
        if not (np.array_equal(left, np.eye(n, dtype=np.int64)) and np.array_equal(right, np.eye(n, dtype=np.int64))):
            raise ValueError("unit does not act as identity")
        total = np.zeros(n, dtype=np.int64)
        for a in self.idempotents:
            if not np.array_equal(self.mult(a, a), a % p):
                raise ValueError("distinguished element is not idempotent")
            total = (total + a) % p
        for i, a in enumerate(self.idempotents):
            for b in self.idempotents[i + 1 :]:
                if self.mult(a, b).any() or self.mult(b, a).any():
                    raise ValueError("distinguished idempotents are not orthogonal")
        if not np.array_equal(total, self.unit):
            raise ValueError("distinguished idempotents do not sum to the unit")
        self._check_associativity()
        if self.blocks is not None:
            self._check_blocks()

    def _check_associativity(self) -> None:
        n, p = self.dim, self.p
        if n <= 64:
            t1 = np.einsum("ijm,mkl->ijkl", self.mul, self.mul) % p
            t2 = np.einsum("jkm,iml->ijkl", self.mul, self.mul) % p
            if not np.array_equal(t1, t2):
                raise ValueError("structure constants are not associative")
        else:
            rng = np.random.default_rng(0)
            idx = rng.integers(0, n, size=(4000, 3))
            left = np.einsum("sm,sml->sl", self.mul[idx[:, 0], idx[:, 1]], self.mul[:, idx[:, 2], :].transpose(1, 0, 2)) % p
            right = np.einsum("sm,sml->sl", self.mul[idx[:, 1], idx[:, 2]], self.mul[idx[:, 0], :, :]) % p
            if not np.array_equal(left, right):
                raise ValueError("structure constants are not associative (sampled)")

    def _check_blocks(self) -> None:
        b = self.blocks
        for m in range(self.dim):
            e_s = b.idempotents[b.src[m]]
            e_t = b.idempotents[b.tgt[m]]
            basis_vec = np.zeros(self.dim, dtype=np.int64)
            basis_vec[m] = 1
            if not np.array_equal(self.mult(e_s, basis_vec), basis_vec):
                raise ValueError(f"basis element {m} is not homogeneous on the left")
            if not np.array_equal(self.mult(basis_vec, e_t), basis_vec):
                raise ValueError(f"basis element {m} is not homogeneous on the right")

    # -- derived structure ----------------------------------------------

    def radical(self) -> Matrix:
        if self._radical is None:
            self._radical = _radical_chain(self)
        return self._radical

    def opposite(self) -> "BasedAlgebra":
        if self._opposite is None:
            blocks = None
            if self.blocks is not None:
                blocks = BlockData(
                    idempotents=self.blocks.idempotents,
                    src=self.blocks.tgt.copy(),
                    tgt=self.blocks.src.copy(),
                    generators=tuple(
                        Generator(g.target, g.source, g.vec, g.label) for g in self.blocks.generators
                    ),
                )
            op = BasedAlgebra(
                self.p,
                self.labels,
                np.ascontiguousarray(self.mul.transpose(1, 0, 2)),
                self.unit,
                self.idempotents,
                blocks=blocks,
                quiver=self.quiver.reversed() if self.quiver is not None else None,
                validate=False,
            )
            # the radical is the same subspace on both sides
            op._radical = self._radical
            op._opposite = self
            self._opposite = op
        return self._opposite

    def word_span(self) -> "_WordSpan":
        if self._span is None:
            self._span = _build_word_span(self)
        return self._span

    def __repr__(self) -> str:
        return f"BasedAlgebra(GF({self.p}), dim {self.dim})"


def from_quotient_algebra(qa) -> BasedAlgebra:
    """Structure-constants form of a completed quotient path algebra."""
    n = qa.dimension
    p = qa.p
    words = qa.normal_words
    index = {w: i for i, w in enumerate(words)}
    mul = np.zeros((n, n, n), dtype=np.int64)
    from .path_algebra import _concat, _reduce

    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            if wi.target != wj.source:
                continue
            reduced = _reduce({_concat(wi, wj): 1}, qa._rules, p)
            for w, c in reduced.items():
                mul[i, j, index[w]] = c
    nv = qa.quiver.num_vertices
    idems = []
    for v in range(nv):
        e = np.zeros(n, dtype=np.int64)
        e[index[next(w for w in words if len(w) == 0 and w.source == v)]] = 1
        idems.append(e)
    unit = np.sum(idems, axis=0) % p
    src = np.array([w.source for w in words])
    tgt = np.array([w.target for w in words])
    gens = []
    for k, a in enumerate(qa.quiver.arrows):
        vec = np.zeros(n, dtype=np.int64)
        from .qspec import Word

        vec[index[Word(a.source, a.target, (k,))]] = 1
        gens.append(Generator(a.source, a.target, vec, a.label))
    blocks = BlockData(tuple(idems), src, tgt, tuple(gens))
    return BasedAlgebra(p, qa.basis_labels(), mul, unit, idems, blocks=blocks, quiver=qa.quiver)


# ----------------------------------------------------------------------
# radical
# ----------------------------------------------------------------------

def radical_basis(alg: BasedAlgebra) -> Matrix:
    """Canonical row basis of the Jacobson radical."""
    return alg.radical()


def is_local(alg: BasedAlgebra) -> bool:
    """True iff the semisimple quotient is one-dimensional."""
    return alg.dim - alg.radical().rows == 1


def _radical_chain(alg: BasedAlgebra) -> Matrix:
    n, p = alg.dim, alg.p
    space = linalg.eye(p, n)
    level = 0
    while p**level <= n:
        if _is_nilpotent_ideal(alg, space):
            return space
        phi = _level_form(alg, space, level)
        xi = linalg.nullspace_basis(phi.T)
        space = linalg.row_space(xi @ space)
        level += 1
    if not _is_nilpotent_ideal(alg, space):
        raise AssertionError("coefficient-form chain did not reach a nilpotent ideal")
    return space


def _is_nilpotent_ideal(alg: BasedAlgebra, rows: Matrix) -> bool:
    if rows.rows == 0:
        return True
    p = alg.p
    s = rows.a.astype(np.int64)
    left = np.einsum("si,jik->jsk", s, alg.mul).reshape(-1, alg.dim) % p
    right = np.einsum("si,ijk->sjk", s, alg.mul).reshape(-1, alg.dim) % p
    stacked = linalg.vstack([rows, Matrix(p, left, _reduce=False), Matrix(p, right, _reduce=False)])
    if linalg.rank(stacked) != rows.rows:
        return False
    power = rows
    for _ in range(alg.dim + 1):
        if power.rows == 0:
            return True
        prods = np.einsum("ti,sj,ijk->tsk", power.a.astype(np.int64), s, alg.mul).reshape(-1, alg.dim) % p
        nxt = linalg.row_space(Matrix(p, prods, _reduce=False))
        if nxt.rows == power.rows:
            return False
        power = nxt
    return power.rows == 0


def _level_form(alg: BasedAlgebra, space: Matrix, level: int) -> Matrix:
    """phi[s, t] = c_{p^level} of the regular matrix of x_s * y_t."""
    n, p = alg.dim, alg.p
    rows = space.a.astype(np.int64)
    d = space.rows
    regs = np.einsum("si,jik->sjk", rows, alg.mul) % p
    if level == 0:
        phi = np.einsum("aij,bji->ab", regs, regs) % p
        return Matrix(p, phi)
    k = p**level
    phi = np.zeros((d, d), dtype=np.int64)
    regs_f = regs.astype(np.float64)
    stacked = regs_f.transpose(1, 0, 2).reshape(n, d * n)
    inv = _inverse_table(p)
    for a in range(d):
        prods = ((regs_f[a] @ stacked) % p).reshape(n, d, n).transpose(1, 0, 2)
        if p == 2 and level == 1:
            z = prods.astype(np.int64)
            s1 = np.einsum("bii->b", z)
            r = np.einsum("bij,bji->b", z, z)
            phi[a, :] = ((s1 * s1 - r) // 2) % 2
        else:
            for b in range(d):
                phi[a, b] = _charpoly_coeff(np.ascontiguousarray(prods[b].astype(np.int64)), p, inv, k)
    return Matrix(p, phi)


_INV_TABLES: dict[int, np.ndarray] = {}


def _inverse_table(p: int) -> np.ndarray:
    if p not in _INV_TABLES:
        inv = np.zeros(p, dtype=np.int64)
        for x in range(1, p):
            inv[x] = pow(x, p - 2, p)
        _INV_TABLES[p] = inv
    return _INV_TABLES[p]


@njit(cache=True)
def _charpoly_coeff(h, p, inv, k):
    """Coefficient of lambda^(n-k) in det(lambda*I - h) over GF(p), up to sign."""
    n = h.shape[0]
    # similarity reduction to upper Hessenberg form
    for m in range(n - 2):
        piv = -1
        for i in range(m + 1, n):
            if h[i, m] != 0:
                piv = i
                break
        if piv == -1:
            continue
        if piv != m + 1:
            for j in range(n):
                tmp = h[piv, j]
                h[piv, j] = h[m + 1, j]
                h[m + 1, j] = tmp
            for i in range(n):
                tmp = h[i, piv]
                h[i, piv] = h[i, m + 1]
                h[i, m + 1] = tmp
        ip = inv[h[m + 1, m]]
        for i in range(m + 2, n):
            f = (h[i, m] * ip) % p
            if f != 0:
                for j in range(m, n):
                    h[i, j] = (h[i, j] - f * h[m + 1, j]) % p
                for i2 in range(n):
                    h[i2, m + 1] = (h[i2, m + 1] + f * h[i2, i]) % p
    # char poly recurrence on leading principal minors of (lambda*I - h)
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        for j in range(m):
            polys[m, j + 1] = polys[m - 1, j]
        hm = h[m - 1, m - 1] % p
        for j in range(m):
            polys[m, j] = (polys[m, j] - hm * polys[m - 1, j]) % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = (prod * h[i, i - 1]) % p
            coeff = (h[i - 1, m - 1] * prod) % p
            if coeff != 0:
                for j in range(i):
                    polys[m, j] = (polys[m, j] - coeff * polys[i - 1, j]) % p
    return polys[n, n - k] % p


# ----------------------------------------------------------------------
# quotients and corners
# ----------------------------------------------------------------------

def quotient_by_ideal(alg: BasedAlgebra, rows: Matrix):
    """Quotient algebra with the projection and a section of representatives.

    Returns (quotient, proj, rep): proj is (dim x q) acting on row
    vectors, rep is (q x dim) with proj a left inverse of rep.
    """
    p, n = alg.p, alg.dim
    red, piv = linalg.rref(rows)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    q = len(free)
    elim = np.zeros((n, n), dtype=np.int64)
    for i, pc in enumerate(piv):
        elim[pc, :] = red.a[i, :]
    proj_full = (np.eye(n, dtype=np.int64) - elim) % p
    proj = np.ascontiguousarray(proj_full[:, free])
    rep = np.zeros((q, n), dtype=np.int64)
    for k, j in enumerate(free):
        rep[k, j] = 1
    mul_q = np.einsum("ri,sj,ijk,kl->rsl", rep, rep, alg.mul, proj) % p
    unit_q = (alg.unit @ proj) % p
    idems_q = [(e @ proj) % p for e in alg.idempotents]
    quot = BasedAlgebra(
        p,
        [f"q{k}" for k in range(q)],
        mul_q,
        unit_q,
        idems_q,
        validate=False,
    )
    return quot, Matrix(p, proj, _reduce=False), Matrix(p, rep, _reduce=False)


def _corner(alg: BasedAlgebra, e: np.ndarray):
    """Corner algebra e*alg*e with its row basis and coordinate solver."""
    p, n = alg.p, alg.dim
    le = alg.left_mul_matrix(e)
    re = alg.right_regular(e)
    spanned = (le @ re) % p  # row m = e * b_m * e
    basis = linalg.row_space(Matrix(p, spanned, _reduce=False))
    k = basis.rows
    rows = basis.a.astype(np.int64)
    prods = np.einsum("ri,sj,ijk->rsk", rows, rows, alg.mul).reshape(k * k, n) % p
    coords = linalg.solve_left(basis, Matrix(p, prods, _reduce=False))
    mul_c = coords.a.reshape(k, k, k)
    unit_c = linalg.solve_left(basis, Matrix(p, e.reshape(1, -1))).a[0]
    corner = BasedAlgebra(
        p,
        [f"c{j}" for j in range(k)],
        mul_c,
        unit_c,
        [unit_c],
        validate=False,
    )
    return corner, basis


# ----------------------------------------------------------------------
# idempotents
# ----------------------------------------------------------------------

def primitive_idempotents(alg: BasedAlgebra) -> list[np.ndarray]:
    """Complete orthogonal primitive set refining the distinguished idempotents."""
    if alg._prims is not None:
        return list(alg._prims)
    result = []
    for e in alg.idempotents:
        result.extend(_peel_primitives(alg, e))
    alg._prims = tuple(result)
    return list(result)


def _peel_primitives(alg: BasedAlgebra, start: np.ndarray) -> list[np.ndarray]:
    p = alg.p
    rad = alg.radical()
    out = []
    stack = [start % p]
    while stack:
        f = stack.pop()
        if not f.any():
            continue
        corner, basis = _corner(alg, f)
        rad_corner = _restrict_ideal(alg, rad, f, basis)
        quot, _, rep = quotient_by_ideal(corner, rad_corner)
        if quot.dim == 1:
            out.append(f)
            continue
        ebar = _nontrivial_idempotent(quot)
        e = _lift_idempotent(alg, basis, rep, ebar)
        stack.append(e)
        stack.append((f - e) % p)
    return out


def _restrict_ideal(alg: BasedAlgebra, rows: Matrix, f: np.ndarray, basis: Matrix) -> Matrix:
    """f*rows*f expressed in corner coordinates."""
    p = alg.p
    le = alg.left_mul_matrix(f)
    re = alg.right_regular(f)
    conj = (rows.a.astype(np.int64) @ ((le @ re) % p)) % p
    sub = linalg.row_space(Matrix(p, conj, _reduce=False))
    if sub.rows == 0:
        return linalg.zeros(p, 0, basis.rows)
    coords = linalg.solve_left(basis, sub)
    return linalg.row_space(coords)


def _lift_idempotent(alg: BasedAlgebra, basis: Matrix, rep: Matrix, ebar: np.ndarray) -> np.ndarray:
    """Lift an idempotent of corner/radical to the corner by p-th powers."""
    p = alg.p
    corner_coords = (ebar % p) @ rep.a.astype(np.int64) % p
    x = (corner_coords @ basis.a.astype(np.int64)) % p
    for _ in range(2 * alg.dim + 2):
        if np.array_equal(alg.mult(x, x), x):
            return x
        x = alg.power(x, p)
    raise AssertionError("idempotent lifting did not converge")


def _center_rows(alg: BasedAlgebra) -> Matrix:
    n, p = alg.dim, alg.p
    cols = []
    for i in range(n):
        a_i = alg.mul[:, i, :]  # z*b_i
        b_i = alg.mul[i, :, :]  # b_i*z
        cols.append((a_i - b_i) % p)
    big = np.hstack(cols) % p
    return linalg.nullspace_basis(Matrix(p, big, _reduce=False).T)


def _nontrivial_idempotent(alg: BasedAlgebra) -> np.ndarray:
    """Some idempotent e with 0 != e != 1 in a split semisimple algebra."""
    p = alg.p
    centrals = _central_primitive_idempotents(alg)
    if len(centrals) > 1:
        return centrals[0]
    # single simple factor: split iff the centre is one-dimensional
    return _split_simple_idempotent(alg)


def _central_primitive_idempotents(alg: BasedAlgebra) -> list[np.ndarray]:
    p = alg.p
    z = _center_rows(alg)
    zr = z.a.astype(np.int64)
    # frobenius fixed part of the centre (linear over the prime field)
    pow_rows = np.array([alg.power(row, p) for row in zr], dtype=np.int64)
    coords = linalg.solve_left(z, Matrix(p, pow_rows % p, _reduce=False))
    fix = linalg.nullspace_basis((coords - linalg.eye(p, z.rows)).T)
    fix_elems = (fix.a.astype(np.int64) @ zr) % p
    idems = [alg.unit.copy()]
    for row in fix_elems:
        refined = []
        for e in idems:
            for lam in range(p):
                q = e.copy()
                for mu in range(p):
                    if mu == lam:
                        continue
                    factor = (row - mu * alg.unit) % p
                    scale = pow((lam - mu) % p, p - 2, p)
                    q = alg.mult(q, (scale * factor) % p)
                if q.any():
                    refined.append(q)
        idems = refined
    for e in idems:
        corner, _ = _corner(alg, e)
        zdim = _center_rows(corner).rows
        if zdim != 1:
            raise NonSplitError(
                f"non-split semisimple quotient: a simple factor has centre of dimension {zdim}"
            )
    return idems


def _split_simple_idempotent(alg: BasedAlgebra) -> np.ndarray:
    """Non-trivial idempotent of a split simple algebra M_k(GF(p)), k >= 2."""
    p, n = alg.p, alg.dim
    k = math.isqrt(n)
    if k * k != n:
        raise NonSplitError("non-split semisimple quotient: simple factor of non-square dimension")
    candidates = []
    basis = np.eye(n, dtype=np.int64)
    candidates.extend(basis)
    for i in range(n):
        for j in range(i + 1, n):
            candidates.append((basis[i] + basis[j]) % p)
    rng = np.random.default_rng(0)
    for _ in range(200):
        candidates.append(rng.integers(0, p, size=n))
    for z in candidates:
        e = _idempotent_from_element(alg, np.asarray(z, dtype=np.int64) % p)
        if e is not None:
            return e
    raise AssertionError("failed to split a simple factor")


def _idempotent_from_element(alg: BasedAlgebra, z: np.ndarray):
    p = alg.p
    mu = _min_poly(alg, z)
    factors = _factor_poly(mu, p)
    if len(factors) < 2:
        return None
    f0, m0 = factors[0]
    part1 = _poly_pow(f0, m0, p)
    part2 = mu
    for _ in range(m0):
        part2 = _poly_divexact(part2, f0, p)
    g, u, v = _poly_xgcd(part1, part2, p)
    if len(g) != 1:
        return None
    scale = pow(g[0], p - 2, p)
    uf = _poly_mul([c * scale % p for c in u], part1, p)
    e = _poly_eval(alg, uf, z)
    if not e.any() or np.array_equal(e, alg.unit):
        return None
    if not np.array_equal(alg.mult(e, e), e):
        return None
    return e


def _min_poly(alg: BasedAlgebra, z: np.ndarray) -> list[int]:
    p = alg.p
    rows = [alg.unit.copy()]
    cur = alg.unit.copy()
    while True:
        cur = alg.mult(cur, z)
        mat = Matrix(p, np.array(rows, dtype=np.int64))
        sol = linalg.solve_left(mat, Matrix(p, cur.reshape(1, -1)))
        if sol is not None:
            coeffs = [(-int(c)) % p for c in sol.a[0]] + [1]
            return coeffs
        rows.append(cur.copy())


def _poly_eval(alg: BasedAlgebra, poly, z: np.ndarray) -> np.ndarray:
    out = np.zeros(alg.dim, dtype=np.int64)
    power = alg.unit.copy()
    for c in poly:
        if c:
            out = (out + c * power) % alg.p
        power = alg.mult(power, z)
    return out


# dense coefficient lists, lowest degree first, normalised (no top zeros)

def _poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _poly_mod(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, p - 2, p)
    while len(a) - 1 >= db and any(a):
        shift = len(a) - 1 - db
        c = a[-1] * inv % p
        for i, cb in enumerate(b):
            a[shift + i] = (a[shift + i] - c * cb) % p
        a = _poly_trim(a)
        if len(a) - 1 < db:
            break
    return _poly_trim(a)


def _poly_divexact(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, p - 2, p)
    out = [0] * (len(a) - db)
    while len(a) - 1 >= db and any(a):
        shift = len(a) - 1 - db
        c = a[-1] * inv % p
        out[shift] = c
        for i, cb in enumerate(b):
            a[shift + i] = (a[shift + i] - c * cb) % p
        a = _poly_trim(a)
        if not any(a):
            break
    return _poly_trim(out)


def _poly_gcd(a, b, p):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while any(b):
        a, b = b, _poly_mod(a, b, p)
    lc = a[-1]
    inv = pow(lc, p - 2, p)
    return _poly_trim([c * inv % p for c in a])


def _poly_xgcd(a, b, p):
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while any(r1):
        q = _poly_divexact_with_rem(r0, r1, p)
        r0, r1 = r1, _poly_trim(_poly_sub(r0, _poly_mul(q, r1, p), p))
        s0, s1 = s1, _poly_trim(_poly_sub(s0, _poly_mul(q, s1, p), p))
        t0, t1 = t1, _poly_trim(_poly_sub(t0, _poly_mul(q, t1, p), p))
    return r0, s0, t0


def _poly_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return out


def _poly_divexact_with_rem(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, p - 2, p)
    out = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and any(a):
        shift = len(a) - 1 - db
        c = a[-1] * inv % p
        out[shift] = c
        for i, cb in enumerate(b):
            a[shift + i] = (a[shift + i] - c * cb) % p
        a = _poly_trim(a)
        if not any(a):
            break
    return _poly_trim(out)


def _poly_pow(a, k, p):
    out = [1]
    for _ in range(k):
        out = _poly_mul(out, a, p)
    return out


def _irreducibles(p, max_deg):
    """Monic irreducible polynomials over GF(p) up to max_deg, by degree."""
    irred = []
    for deg in range(1, max_deg + 1):
        for idx in range(p**deg):
            coeffs = []
            t = idx
            for _ in range(deg):
                coeffs.append(t % p)
                t //= p
            poly = _poly_trim(coeffs + [1])
            if len(poly) - 1 != deg:
                continue
            reducible = False
            for q in irred:
                if len(q) - 1 > deg // 2:
                    break
                rem = _poly_mod(poly, q, p)
                if not any(rem):
                    reducible = True
                    break
            if not reducible:
                irred.append(poly)
    return irred


def _factor_poly(a, p):
    """Full factorisation into (irreducible, multiplicity) pairs, by trial division."""
    a = _poly_trim(list(a))
    lc = a[-1]
    if lc != 1:
        inv = pow(lc, p - 2, p)
        a = [c * inv % p for c in a]
    factors = []
    for q in _irreducibles(p, len(a) - 1):
        mult = 0
        while len(a) > 1:
            rem = _poly_mod(a, q, p)
            if any(rem):
                break
            a = _poly_divexact(a, q, p)
            mult += 1
        if mult:
            factors.append((q, mult))
        if len(a) == 1:
            break
    return factors


# ----------------------------------------------------------------------
# word span: expressing basis elements through idempotents and generators
# ----------------------------------------------------------------------

@dataclass
class _WordSpan:
    words: list  # (start_block, gen_sequence, end_block)
    raw: Matrix  # spanning rows, one per word
    coords: Matrix  # coords @ raw == identity on the algebra


def _build_word_span(alg: BasedAlgebra) -> _WordSpan:
    if alg.blocks is None:
        raise ValueError("algebra has no block data; module theory is unavailable")
    p, n = alg.p, alg.dim
    words = []
    vecs = []
    queue = deque()
    for i, e in enumerate(alg.blocks.idempotents):
        words.append((i, (), i))
        vecs.append(e % p)
        queue.append((len(words) - 1, e % p))
    stack = Matrix(p, np.array(vecs, dtype=np.int64))
    current_rank = linalg.rank(stack)
    while queue and current_rank < n:
        widx, vec = queue.popleft()
        start, seq, end = words[widx]
        for gidx, g in enumerate(alg.blocks.generators):
            if g.source != end:
                continue
            nv = alg.mult(vec, g.vec)
            if not nv.any():
                continue
            cand = linalg.vstack([stack, Matrix(p, nv.reshape(1, -1), _reduce=False)])
            r = linalg.rank(cand)
            if r > current_rank:
                words.append((start, seq + (gidx,), g.target))
                vecs.append(nv)
                stack = cand
                current_rank = r
                queue.append((len(words) - 1, nv))
    if current_rank != n:
        raise AssertionError("block idempotents and generators do not span the algebra")
    raw = Matrix(p, np.array(vecs, dtype=np.int64))
    coords = linalg.solve_left(raw, linalg.eye(p, n))
    return _WordSpan(words, raw, coords)
