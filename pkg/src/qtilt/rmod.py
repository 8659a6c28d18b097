"""Right modules over a based algebra with block structure.

A module is a dimension vector over the block idempotents together with
one matrix per radical generator; vectors are rows and act from the
left of the matrices, so a generator g: s -> t acts as a
(dims[s] x dims[t]) block.  Module maps are block matrices that
intertwine every generator; composition reads left to right.

Actions of arbitrary basis elements are derived on demand from the
generator words spanning the algebra and memoised per module (plain
dict updates, safe for concurrent readers because recomputation is
idempotent).
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .based_algebra import BasedAlgebra
from .linalg import Matrix

__all__ = [
    "RightModule",
    "ModuleMap",
    "zero_module",
    "projective_module",
    "simple_module",
    "cyclic_quotient",
    "direct_sum",
    "dual_module",
    "regular_module",
    "is_isomorphic",
    "submodule_closure",
    "quotient_module",
    "kernel_module",
    "image_blocks",
]


class RightModule:
    """Finite-dimensional right module, given by generator action blocks."""

    def __init__(self, algebra: BasedAlgebra, dims, actions, label: str = "", check: bool = True):
        if algebra.blocks is None:
            raise ValueError("the algebra carries no block data")
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.actions = tuple(actions)
        self.label = label
        self._basis_actions: dict[int, Matrix] = {}
        self._word_actions: dict[tuple, Matrix] = {}
        if check:
            gens = algebra.blocks.generators
            if len(self.actions) != len(gens):
                raise ValueError("one action block per generator is required")
            for g, a in zip(gens, self.actions):
                if a.shape != (self.dims[g.source], self.dims[g.target]):
                    raise ValueError(f"action block for {g.label} has shape {a.shape}")

    @property
    def dimension_vector(self) -> tuple[int, ...]:
        return self.dims

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dimension == 0

    def word_action(self, start: int, seq: tuple[int, ...]) -> Matrix:
        key = (start, seq)
        cached = self._word_actions.get(key)
        if cached is not None:
            return cached
        gens = self.algebra.blocks.generators
        mat = linalg.eye(self.algebra.p, self.dims[start])
        for gidx in seq:
            mat = mat @ self.actions[gidx]
        self._word_actions[key] = mat
        return mat

    def basis_action(self, m: int) -> Matrix:
        """Action block of the m-th algebra basis element."""
        cached = self._basis_actions.get(m)
        if cached is not None:
            return cached
        alg = self.algebra
        span = alg.word_span()
        s, t = alg.blocks.src[m], alg.blocks.tgt[m]
        out = linalg.zeros(alg.p, self.dims[s], self.dims[t])
        coeffs = span.coords.a[m]
        for widx in np.nonzero(coeffs)[0]:
            start, seq, end = span.words[widx]
            if (start, end) != (s, t):
                raise AssertionError("word support leaves the block of a basis element")
            out = out + int(coeffs[widx]) * self.word_action(start, seq)
        self._basis_actions[m] = out
        return out

    def element_action(self, vec) -> Matrix:
        """Action of a block-homogeneous algebra element."""
        alg = self.algebra
        vec = np.asarray(getattr(vec, "vec", vec), dtype=np.int64) % alg.p
        support = np.nonzero(vec)[0]
        if support.size == 0:
            raise ValueError("the zero element has no block")
        s = alg.blocks.src[support[0]]
        t = alg.blocks.tgt[support[0]]
        out = linalg.zeros(alg.p, self.dims[s], self.dims[t])
        for m in support:
            if (alg.blocks.src[m], alg.blocks.tgt[m]) != (s, t):
                raise ValueError("element is not block-homogeneous")
            out = out + int(vec[m]) * self.basis_action(int(m))
        return out

    def __repr__(self) -> str:
        name = self.label or "module"
        return f"{name}{list(self.dims)}"


class ModuleMap:
    """Block matrix intertwining two modules over the same algebra."""

    def __init__(self, source: RightModule, target: RightModule, blocks):
        self.source = source
        self.target = target
        self.blocks = tuple(blocks)
        for i, b in enumerate(self.blocks):
            if b.shape != (source.dims[i], target.dims[i]):
                raise ValueError(f"block {i} has shape {b.shape}")

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self followed by other."""
        if other.source is not self.target and other.source.dims != self.target.dims:
            raise ValueError("maps do not compose")
        return ModuleMap(self.source, other.target, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __rmul__(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [c * b for b in self.blocks])

    def is_invertible(self) -> bool:
        return self.source.dims == self.target.dims and all(
            b.rows == b.cols and linalg.rank(b) == b.rows for b in self.blocks
        )

    def inverse(self) -> "ModuleMap":
        inv_blocks = []
        for b in self.blocks:
            sol = linalg.solve_right(b, linalg.eye(b.p, b.rows))
            if sol is None:
                raise ValueError("map is not invertible")
            inv_blocks.append(sol)
        return ModuleMap(self.target, self.source, inv_blocks)

    def intertwines(self) -> bool:
        gens = self.source.algebra.blocks.generators
        for k, g in enumerate(gens):
            lhs = self.source.actions[k] @ self.blocks[g.target]
            rhs = self.blocks[g.source] @ self.target.actions[k]
            if lhs != rhs:
                return False
        return True

    def stacked(self) -> np.ndarray:
        parts = [b.a.reshape(-1) for b in self.blocks]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleMap)
            and self.source.dims == other.source.dims
            and self.target.dims == other.target.dims
            and all(a == b for a, b in zip(self.blocks, other.blocks))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def identity_map(x: RightModule) -> ModuleMap:
    return ModuleMap(x, x, [linalg.eye(x.algebra.p, d) for d in x.dims])


def zero_map(x: RightModule, y: RightModule) -> ModuleMap:
    return ModuleMap(x, y, [linalg.zeros(x.algebra.p, a, b) for a, b in zip(x.dims, y.dims)])


def zero_module(alg: BasedAlgebra) -> RightModule:
    nb = alg.num_blocks()
    dims = (0,) * nb
    actions = [linalg.zeros(alg.p, 0, 0) for _ in alg.blocks.generators]
    return RightModule(alg, dims, actions, label="0")


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def _projective_data(alg: BasedAlgebra, i: int):
    """Cached row layout of e_i * alg: basis element indices per target block."""
    key = ("proj", i)
    cached = alg._proj_cache.get(key)
    if cached is not None:
        return cached
    nb = alg.num_blocks()
    rows = [[m for m in range(alg.dim) if alg.blocks.src[m] == i and alg.blocks.tgt[m] == t] for t in range(nb)]
    dims = tuple(len(r) for r in rows)
    positions = [{m: k for k, m in enumerate(r)} for r in rows]
    actions = []
    for g in alg.blocks.generators:
        s, t = g.source, g.target
        block = np.zeros((dims[s], dims[t]), dtype=np.int64)
        for k, m in enumerate(rows[s]):
            prod = (g.vec @ alg.mul[m]) % alg.p
            for idx in np.nonzero(prod)[0]:
                block[k, positions[t][int(idx)]] = prod[idx]
        actions.append(Matrix(alg.p, block))
    module = RightModule(alg, dims, actions, label=f"P{i + 1}")
    cached = (module, rows)
    alg._proj_cache[key] = cached
    return cached


def projective_module(alg: BasedAlgebra, i: int) -> RightModule:
    """The cyclic module e_i * alg with right multiplication action."""
    if not 0 <= i < alg.num_blocks():
        raise ValueError(f"vertex {i} out of range")
    return _projective_data(alg, i)[0]


def regular_module(alg: BasedAlgebra) -> RightModule:
    """The algebra as a right module over itself: direct sum of the e_i * alg."""
    total, _, _ = direct_sum([projective_module(alg, i) for i in range(alg.num_blocks())])
    total.label = "A"
    return total


def simple_module(alg: BasedAlgebra, i: int) -> RightModule:
    if not 0 <= i < alg.num_blocks():
        raise ValueError(f"vertex {i} out of range")
    nb = alg.num_blocks()
    dims = tuple(1 if j == i else 0 for j in range(nb))
    actions = [
        linalg.zeros(alg.p, dims[g.source], dims[g.target]) for g in alg.blocks.generators
    ]
    return RightModule(alg, dims, actions, label=f"S{i + 1}")


def cyclic_quotient(alg: BasedAlgebra, i: int, x, label: str = "") -> RightModule:
    """e_i*alg modulo the submodule generated by x (an element of e_i*alg)."""
    vec = np.asarray(getattr(x, "vec", x), dtype=np.int64) % alg.p
    e_i = alg.blocks.idempotents[i]
    if not np.array_equal(alg.mult(e_i, vec), vec):
        raise ValueError("generator does not lie in e_i * alg")
    proj, rows = _projective_data(alg, i)
    seeds = []
    for t, row_elems in enumerate(rows):
        coords = np.array([[vec[m] for m in row_elems]], dtype=np.int64)
        seeds.append(Matrix(alg.p, coords))
    sub = submodule_closure(proj, seeds)
    quot, _ = quotient_module(proj, sub)
    quot.label = label or f"cyc(e_{i + 1})"
    return quot


def direct_sum(modules):
    """Block-diagonal sum with injections and projections."""
    modules = list(modules)
    if not modules:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = modules[0].algebra
    p = alg.p
    nb = alg.num_blocks()
    dims = tuple(sum(m.dims[i] for m in modules) for i in range(nb))
    actions = []
    for k, g in enumerate(alg.blocks.generators):
        s, t = g.source, g.target
        block = np.zeros((dims[s], dims[t]), dtype=np.int64)
        ro = 0
        co = 0
        for m in modules:
            a = m.actions[k].a
            block[ro : ro + m.dims[s], co : co + m.dims[t]] = a
            ro += m.dims[s]
            co += m.dims[t]
        actions.append(Matrix(p, block))
    total = RightModule(alg, dims, actions, label="(+)".join(m.label or "?" for m in modules))
    injections = []
    projections = []
    offsets = [0] * nb
    for m in modules:
        inj_blocks = []
        proj_blocks = []
        for i in range(nb):
            inj = np.zeros((m.dims[i], dims[i]), dtype=np.int64)
            for r in range(m.dims[i]):
                inj[r, offsets[i] + r] = 1
            inj_blocks.append(Matrix(p, inj))
            proj_blocks.append(Matrix(p, inj.T.copy()))
        injections.append(ModuleMap(m, total, inj_blocks))
        projections.append(ModuleMap(total, m, proj_blocks))
        for i in range(nb):
            offsets[i] += m.dims[i]
    return total, injections, projections


def dual_module(x: RightModule) -> RightModule:
    """The dual over the opposite algebra: transposed action blocks."""
    op = x.algebra.opposite()
    actions = [b.T for b in x.actions]
    return RightModule(op, x.dims, actions, label=f"D({x.label})" if x.label else "D")


# ----------------------------------------------------------------------
# submodules, quotients, kernels
# ----------------------------------------------------------------------

def submodule_closure(x: RightModule, seeds) -> list[Matrix]:
    """Smallest family of row spaces containing the seeds and stable under all generators."""
    p = x.algebra.p
    blocks = [linalg.row_space(s) for s in seeds]
    gens = x.algebra.blocks.generators
    changed = True
    while changed:
        changed = False
        for k, g in enumerate(gens):
            s, t = g.source, g.target
            if blocks[s].rows == 0:
                continue
            image = blocks[s] @ x.actions[k]
            combined = linalg.row_space(linalg.vstack([blocks[t], image]))
            if combined.rows != blocks[t].rows:
                blocks[t] = combined
                changed = True
    return blocks


def quotient_module(x: RightModule, sub_blocks):
    """Quotient by a generator-stable family of row spaces, with the projection."""
    alg = x.algebra
    p = alg.p
    proj_blocks = []
    rep_blocks = []
    qdims = []
    for i in range(alg.num_blocks()):
        red, piv = linalg.rref(sub_blocks[i])
        n = x.dims[i]
        pivset = set(piv)
        free = [j for j in range(n) if j not in pivset]
        elim = np.zeros((n, n), dtype=np.int64)
        for r, pc in enumerate(piv):
            elim[pc, :] = red.a[r, :]
        proj_full = (np.eye(n, dtype=np.int64) - elim) % p
        proj_blocks.append(Matrix(p, np.ascontiguousarray(proj_full[:, free])))
        rep = np.zeros((len(free), n), dtype=np.int64)
        for k, j in enumerate(free):
            rep[k, j] = 1
        rep_blocks.append(Matrix(p, rep))
        qdims.append(len(free))
    actions = []
    for k, g in enumerate(alg.blocks.generators):
        s, t = g.source, g.target
        actions.append(rep_blocks[s] @ x.actions[k] @ proj_blocks[t])
    quot = RightModule(alg, qdims, actions, label=f"{x.label}/~" if x.label else "")
    proj = ModuleMap(x, quot, proj_blocks)
    return quot, proj


def restrict_to_submodule(x: RightModule, sub_blocks, label: str = ""):
    """The submodule spanned by stable row spaces, with its inclusion."""
    alg = x.algebra
    dims = [b.rows for b in sub_blocks]
    actions = []
    for k, g in enumerate(alg.blocks.generators):
        s, t = g.source, g.target
        image = sub_blocks[s] @ x.actions[k]
        coords = linalg.solve_left(sub_blocks[t], image)
        if coords is None:
            raise ValueError("row spaces are not stable under the generators")
        actions.append(coords)
    sub = RightModule(alg, dims, actions, label=label)
    incl = ModuleMap(sub, x, list(sub_blocks))
    return sub, incl


def kernel_module(f: ModuleMap):
    """Kernel of a module map with its inclusion."""
    blocks = [linalg.nullspace_basis(b.T) for b in f.blocks]
    return restrict_to_submodule(f.source, blocks, label=f"ker({f.source.label})")


def image_blocks(f: ModuleMap) -> list[Matrix]:
    return [linalg.row_space(b) for b in f.blocks]


# ----------------------------------------------------------------------
# isomorphism testing
# ----------------------------------------------------------------------

def _intertwiner_basis(x: RightModule, y: RightModule) -> list[ModuleMap]:
    """Canonical basis of Hom(x, y), from the nullspace of the block system."""
    alg = x.algebra
    if y.algebra is not alg:
        raise ValueError("modules live over different algebras")
    p = alg.p
    nb = alg.num_blocks()
    sizes = [x.dims[i] * y.dims[i] for i in range(nb)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    rows = []
    for k, g in enumerate(alg.blocks.generators):
        s, t = g.source, g.target
        neq = x.dims[s] * y.dims[t]
        if neq == 0:
            continue
        block = np.zeros((neq, total), dtype=np.int64)
        if sizes[t]:
            block[:, offsets[t] : offsets[t + 1]] = np.kron(
                x.actions[k].a.astype(np.int64), np.eye(y.dims[t], dtype=np.int64)
            )
        if sizes[s]:
            block[:, offsets[s] : offsets[s + 1]] -= np.kron(
                np.eye(x.dims[s], dtype=np.int64), y.actions[k].a.T.astype(np.int64)
            )
        rows.append(block % p)
    if rows:
        system = Matrix(p, np.vstack(rows))
        sols = linalg.nullspace_basis(system)
    else:
        sols = linalg.eye(p, total)
    maps = []
    for r in range(sols.rows):
        vec = sols.a[r]
        blocks = [
            Matrix(p, vec[offsets[i] : offsets[i + 1]].reshape(x.dims[i], y.dims[i]))
            for i in range(nb)
        ]
        maps.append(ModuleMap(x, y, blocks))
    return maps


def _map_from_coeffs(basis, coeffs) -> ModuleMap:
    out = basis[0]
    p = out.source.algebra.p
    blocks = [linalg.zeros(p, b.rows, b.cols) for b in out.blocks]
    acc = ModuleMap(out.source, out.target, blocks)
    for c, h in zip(coeffs, basis):
        if c % p:
            acc = acc + (int(c) * h)
    return acc


def is_isomorphic(x: RightModule, y: RightModule, seed: int = 0, max_enum: int = 16):
    """An invertible intertwiner, or None.

    Strategy: dimension vectors must match; then single basis maps and
    pairwise sums are tried (complete whenever one side is
    indecomposable), then seeded random sampling, then exhaustive
    enumeration while dim Hom <= max_enum.
    """
    if x.dims != y.dims:
        return None
    if x.is_zero():
        return identity_map(x) if y.is_zero() else None
    basis = _intertwiner_basis(x, y)
    if not basis:
        return None
    for h in basis:
        if h.is_invertible():
            return h
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            h = basis[i] + basis[j]
            if h.is_invertible():
                return h
    p = x.algebra.p
    rng = np.random.default_rng(seed)
    for _ in range(200):
        coeffs = rng.integers(0, p, size=len(basis))
        if not coeffs.any():
            continue
        h = _map_from_coeffs(basis, coeffs)
        if h.is_invertible():
            return h
    if len(basis) <= max_enum and p ** len(basis) <= 2**20:
        for mask in range(1, p ** len(basis)):
            coeffs = []
            t = mask
            for _ in range(len(basis)):
                coeffs.append(t % p)
                t //= p
            h = _map_from_coeffs(basis, coeffs)
            if h.is_invertible():
                return h
        return None
    return None
