"""Homological algebra over based algebras with block structure.

Covers, syzygies, envelopes and resolutions follow the standard minimal
constructions: the projective cover of X is assembled from lifts of a
basis of X/XJ, its kernel is the first syzygy, and injective envelopes
are duals of projective covers over the opposite algebra.  Ext groups
are dimensions of the cohomology of the Hom complex of a minimal
projective resolution.  Dimension searches never assert infinity: a
value that is not reached within the bound is reported as ">= bound".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, rmod
from .based_algebra import BasedAlgebra
from .linalg import Matrix
from .rmod import ModuleMap, RightModule

__all__ = [
    "DimBound",
    "Resolution",
    "TopRadical",
    "hom_basis",
    "top_and_radical",
    "socle_blocks",
    "projective_cover",
    "syzygy",
    "injective_envelope",
    "cokernel",
    "ext_dim",
    "projective_dimension",
    "global_dimension",
    "dominant_dimension",
    "omega_period",
    "is_projective",
    "is_injective",
]


@dataclass(frozen=True)
class DimBound:
    """Either an exact homological dimension or the verdict '>= bound'."""

    value: int | None
    bound: int

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return str(self.value) if self.is_exact else f">={self.bound}"

    def to_json(self):
        return {"value": self.value, "bound": self.bound}


def hom_basis(x: RightModule, y: RightModule) -> list[ModuleMap]:
    """Deterministic basis of the space of module maps x -> y."""
    return rmod._intertwiner_basis(x, y)


def radical_blocks(x: RightModule) -> list[Matrix]:
    """Row spaces of x*J: the submodule generated by all generator images."""
    alg = x.algebra
    seeds = [linalg.zeros(alg.p, 0, d) for d in x.dims]
    images = [[] for _ in x.dims]
    for k, g in enumerate(alg.blocks.generators):
        images[g.target].append(x.actions[k])
    for t, mats in enumerate(images):
        if mats:
            seeds[t] = linalg.row_space(linalg.vstack(mats))
    return rmod.submodule_closure(x, seeds)


@dataclass
class TopRadical:
    top: RightModule
    radical: RightModule
    radical_inclusion: ModuleMap
    projection: ModuleMap


def top_and_radical(x: RightModule) -> TopRadical:
    """The semisimple top x/xJ together with the radical submodule."""
    rad = radical_blocks(x)
    top, proj = rmod.quotient_module(x, rad)
    for k, g in enumerate(top.algebra.blocks.generators):
        if not top.actions[k].is_zero():
            raise AssertionError("top is not semisimple")
    radical, incl = rmod.restrict_to_submodule(x, rad, label=f"rad({x.label})")
    return TopRadical(top, radical, incl, proj)


def socle_blocks(x: RightModule) -> list[Matrix]:
    """Per-block row spaces of the socle: vectors killed by every generator."""
    alg = x.algebra
    out = []
    for i in range(alg.num_blocks()):
        mats = [x.actions[k].a for k, g in enumerate(alg.blocks.generators) if g.source == i]
        mats = [m for m in mats if m.shape[1] > 0]
        if not mats:
            out.append(linalg.eye(alg.p, x.dims[i]))
            continue
        stacked = Matrix(alg.p, np.hstack(mats))
        out.append(linalg.nullspace_basis(stacked.T))
    return out


def projective_cover(x: RightModule):
    """Minimal projective cover (P, epi); the kernel of epi is the syzygy."""
    alg = x.algebra
    p = alg.p
    rad = radical_blocks(x)
    lifts = []  # (block index, row vector in x) per cover summand
    for i in range(alg.num_blocks()):
        red, piv = linalg.rref(rad[i])
        pivset = set(piv)
        for j in range(x.dims[i]):
            if j not in pivset:
                vec = np.zeros(x.dims[i], dtype=np.int64)
                vec[j] = 1
                lifts.append((i, vec))
    if not lifts:
        if not x.is_zero():
            raise AssertionError("nonzero module equals its radical")
        z = rmod.zero_module(alg)
        return z, rmod.zero_map(z, x)
    summands = [rmod.projective_module(alg, i) for i, _ in lifts]
    cover, injections, _ = rmod.direct_sum(summands)
    cover.label = f"P({x.label})"
    blocks = []
    for t in range(alg.num_blocks()):
        rows = []
        for (i, vec), summand in zip(lifts, summands):
            _, elem_rows = rmod._projective_data(alg, i)
            for m in elem_rows[t]:
                act = x.basis_action(m)  # block src=i -> tgt=t
                rows.append((Matrix(p, vec.reshape(1, -1)) @ act).a[0])
        block = np.array(rows, dtype=np.int64) if rows else np.zeros((0, x.dims[t]), dtype=np.int64)
        blocks.append(Matrix(p, block))
    epi = ModuleMap(cover, x, blocks)
    for t, b in enumerate(blocks):
        if linalg.rank(b) != x.dims[t]:
            raise AssertionError("cover map is not surjective")
    return cover, epi


def syzygy(x: RightModule, k: int = 1) -> RightModule:
    """Omega^k(x) via iterated minimal covers; Omega^0 is x itself."""
    cur = x
    for _ in range(k):
        if cur.is_zero():
            return cur
        _, epi = projective_cover(cur)
        cur, _ = rmod.kernel_module(epi)
    return cur


def cokernel(f: ModuleMap):
    """Quotient of the target by the image, with the projection."""
    return rmod.quotient_module(f.target, rmod.image_blocks(f))


def injective_envelope(x: RightModule):
    """Minimal injective envelope (I, mono), via the cover of the dual."""
    env, mono, _ = _envelope_data(x)
    return env, mono


def _envelope_data(x: RightModule):
    alg = x.algebra
    dx = rmod.dual_module(x)
    cover, epi = projective_cover(dx)
    env = rmod.dual_module(cover)
    env.label = f"I({x.label})"
    mono = ModuleMap(x, env, [b.T for b in epi.blocks])
    counts = [0] * alg.num_blocks()
    soc = socle_blocks(x)
    for i, b in enumerate(soc):
        counts[i] = b.rows
    return env, mono, counts


def indecomposable_injective(alg: BasedAlgebra, i: int) -> RightModule:
    """The injective envelope of the simple at block i."""
    mod = rmod.dual_module(rmod.projective_module(alg.opposite(), i))
    mod.label = f"I{i + 1}"
    return mod


def is_projective(x: RightModule) -> bool:
    return x.is_zero() or syzygy(x, 1).is_zero()


def is_injective(x: RightModule) -> bool:
    return is_projective(rmod.dual_module(x))


# ----------------------------------------------------------------------
# resolutions and Ext
# ----------------------------------------------------------------------

class Resolution:
    """Minimal projective resolution, extended on demand.

    terms[k] covers syzygies[k]; maps[k] is the differential
    P_k -> P_{k-1} (maps[0] is the augmentation onto the target).
    Exactness holds by construction: every term is a minimal cover and
    the next syzygy is the exact kernel.
    """

    def __init__(self, target: RightModule):
        self.target = target
        self.terms: list[RightModule] = []
        self.maps: list[ModuleMap] = []
        self._syzygies: list[RightModule] = [target]
        self._inclusions: list[ModuleMap | None] = [None]

    @property
    def length_computed(self) -> int:
        return len(self.terms)

    @property
    def terminated(self) -> bool:
        return bool(self.terms) and self._syzygies[-1].is_zero()

    def extend_to(self, k: int) -> None:
        while len(self.terms) <= k and not self.terminated:
            cur = self._syzygies[-1]
            cover, epi = projective_cover(cur)
            incl = self._inclusions[-1]
            if incl is None:
                diff = epi
            else:
                diff = epi.compose(incl)
            omega, omega_incl = rmod.kernel_module(epi)
            self.terms.append(cover)
            self.maps.append(diff)
            self._syzygies.append(omega)
            self._inclusions.append(omega_incl)

    def term(self, k: int) -> RightModule:
        self.extend_to(k)
        if k < len(self.terms):
            return self.terms[k]
        return rmod.zero_module(self.target.algebra)

    def differential(self, k: int) -> ModuleMap:
        self.extend_to(k)
        if k < len(self.maps):
            return self.maps[k]
        zero_src = rmod.zero_module(self.target.algebra)
        return rmod.zero_map(zero_src, self.term(k - 1) if k >= 1 else self.target)

    def syzygy_module(self, k: int) -> RightModule:
        self.extend_to(k)
        if k < len(self._syzygies):
            return self._syzygies[k]
        return rmod.zero_module(self.target.algebra)


def _coords_over(basis_maps: list[ModuleMap], f: ModuleMap) -> np.ndarray:
    p = f.source.algebra.p
    if not basis_maps:
        if f.is_zero():
            return np.zeros(0, dtype=np.int64)
        raise AssertionError("map does not lie in the empty span")
    stack = Matrix(p, np.array([h.stacked() for h in basis_maps], dtype=np.int64))
    target = Matrix(p, f.stacked().reshape(1, -1))
    sol = linalg.solve_left(stack, target)
    if sol is None:
        raise AssertionError("map does not lie in the span of the basis")
    return sol.a[0]


def ext_dim(x: RightModule, y: RightModule, i: int) -> int:
    """dim Ext^i(x, y) from the Hom complex of a minimal resolution."""
    if i < 0:
        raise ValueError("degree must be non-negative")
    if x.is_zero() or y.is_zero():
        return 0
    if i == 0:
        return len(hom_basis(x, y))
    res = Resolution(x)
    res.extend_to(i + 1)
    h_prev = hom_basis(res.term(i - 1), y)
    h_cur = hom_basis(res.term(i), y)
    h_next = hom_basis(res.term(i + 1), y)
    delta_in = _induced_matrix(res.differential(i), h_prev, h_cur)
    delta_out = _induced_matrix(res.differential(i + 1), h_cur, h_next)
    rank_in = linalg.rank(delta_in) if delta_in is not None else 0
    rank_out = linalg.rank(delta_out) if delta_out is not None else 0
    return len(h_cur) - rank_out - rank_in


def _induced_matrix(d: ModuleMap, h_from: list[ModuleMap], h_to: list[ModuleMap]):
    """Matrix of (precompose with d): Hom(source-of-h_from, y) -> Hom(d.source, y)."""
    if not h_from:
        return None
    p = d.source.algebra.p
    rows = []
    for h in h_from:
        comp = d.compose(h)
        rows.append(_coords_over(h_to, comp) if h_to else np.zeros(0, dtype=np.int64))
    return Matrix(p, np.array(rows, dtype=np.int64).reshape(len(h_from), len(h_to)))


# ----------------------------------------------------------------------
# dimension searches
# ----------------------------------------------------------------------

def projective_dimension(x: RightModule, bound: int) -> DimBound:
    """Smallest k with a projective resolution of length k, or '>= bound'."""
    if x.is_zero():
        return DimBound(0, bound)
    cur = x
    k = 0
    while k <= bound:
        nxt = syzygy(cur, 1)
        if nxt.is_zero():
            return DimBound(k, bound)
        cur = nxt
        k += 1
    return DimBound(None, bound)


def global_dimension(alg: BasedAlgebra, bound: int) -> DimBound:
    """Maximum of the projective dimensions of the simple modules."""
    best = 0
    for i in range(alg.num_blocks()):
        pd = projective_dimension(rmod.simple_module(alg, i), bound)
        if not pd.is_exact:
            return DimBound(None, bound)
        best = max(best, pd.value)
    return DimBound(best, bound)


def injective_projective_matching(alg: BasedAlgebra) -> dict[int, int | None]:
    """For each block i, the block l with I_i isomorphic to P_l, if any."""
    matching: dict[int, int | None] = {}
    projs = [rmod.projective_module(alg, l) for l in range(alg.num_blocks())]
    for i in range(alg.num_blocks()):
        inj = indecomposable_injective(alg, i)
        matching[i] = None
        for l, proj in enumerate(projs):
            if inj.dims == proj.dims and rmod.is_isomorphic(inj, proj) is not None:
                matching[i] = l
                break
    return matching


def dominant_dimension(alg: BasedAlgebra, bound: int) -> DimBound:
    """Index of the first non-projective term of the minimal injective
    coresolution of the regular module, or '>= bound'."""
    matching = injective_projective_matching(alg)
    cur = rmod.regular_module(alg)
    k = 0
    while k <= bound:
        if cur.is_zero():
            return DimBound(None, bound)
        env, mono, counts = _envelope_data(cur)
        if any(counts[i] > 0 and matching[i] is None for i in range(alg.num_blocks())):
            return DimBound(k, bound)
        cur, _ = cokernel(mono)
        k += 1
    return DimBound(None, bound)


def omega_period(x: RightModule, bound: int) -> int | None:
    """Least d <= bound with Omega^d(x) isomorphic to x, if any."""
    cur = x
    for d in range(1, bound + 1):
        cur = syzygy(cur, 1)
        if cur.is_zero():
            return None
        if cur.dims == x.dims and rmod.is_isomorphic(cur, x) is not None:
            return d
    return None
