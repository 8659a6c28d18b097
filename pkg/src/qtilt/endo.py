"""Summand decompositions, endomorphism algebras and their quivers.

The endomorphism algebra of a decomposed module is assembled block by
block from the Hom bases between summand representatives; composition
of such maps never leaves the matching blocks, so the structure
constants come from expressing composites in the Hom bases.  The
arrows of the quiver are read off the radical modulo its square,
blockwise between isomorphism classes of the projective corners.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import homalg, linalg, rmod
from .based_algebra import BasedAlgebra, BlockData, Generator, is_local, radical_basis, primitive_idempotents
from .linalg import Matrix
from .rmod import ModuleMap, RightModule

__all__ = [
    "DecomposeError",
    "Summand",
    "SummandDecomposition",
    "decompose",
    "end_algebra_of",
    "endomorphism_algebra",
    "ExtQuiver",
    "ext_quiver",
    "quiver_isomorphic",
]


class DecomposeError(RuntimeError):
    pass


@dataclass
class Summand:
    module: RightModule
    name: str
    copies: list  # (injection: module -> ambient, projection: ambient -> module)

    @property
    def multiplicity(self) -> int:
        return len(self.copies)


@dataclass
class SummandDecomposition:
    module: RightModule
    summands: list[Summand]

    def check(self) -> None:
        ident = rmod.identity_map(self.module)
        acc = rmod.zero_map(self.module, self.module)
        for s in self.summands:
            for inj, proj in s.copies:
                if inj.compose(proj) != rmod.identity_map(s.module):
                    raise DecomposeError("a projection does not split its injection")
                acc = acc + proj.compose(inj)
        if acc != ident:
            raise DecomposeError("the summand idempotents do not sum to the identity")

    def names(self) -> list[str]:
        return [s.name for s in self.summands]


def end_algebra_of(x: RightModule) -> BasedAlgebra:
    """End(x) as a based algebra (no block data; enough for radical tests)."""
    basis = homalg.hom_basis(x, x)
    k = len(basis)
    p = x.algebra.p
    mul = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            mul[i, j] = homalg._coords_over(basis, basis[i].compose(basis[j]))
    unit = homalg._coords_over(basis, rmod.identity_map(x))
    return BasedAlgebra(p, [f"f{i}" for i in range(k)], mul, unit, [unit], validate=False)


def summand_is_indecomposable(x: RightModule) -> bool:
    return not x.is_zero() and is_local(end_algebra_of(x))


def decompose(m: RightModule, hints=None, names=None, check_local: bool = True) -> SummandDecomposition:
    """Split a module into indecomposable summands.

    With hints, the hinted modules are verified to reassemble m (an
    isomorphism with their direct sum is found, else 'hint mismatch').
    Without hints the primitive idempotents of End(m) are split.
    """
    if m.is_zero():
        return SummandDecomposition(m, [])
    if hints is not None:
        return _decompose_with_hints(m, list(hints), names)
    return _decompose_search(m, check_local)


def _decompose_with_hints(m, hints, names) -> SummandDecomposition:
    if names is None:
        names = [h.label or f"X{k + 1}" for k, h in enumerate(hints)]
    total, injections, projections = rmod.direct_sum(hints)
    iso = rmod.is_isomorphic(total, m)
    if iso is None:
        raise DecomposeError("hint mismatch: the hinted summands do not reassemble the module")
    iso_inv = iso.inverse()
    classes: list[Summand] = []
    for hint, name, inj, proj in zip(hints, names, injections, projections):
        placed = False
        for cls in classes:
            if cls.module.dims == hint.dims and rmod.is_isomorphic(hint, cls.module) is not None:
                corr = rmod.is_isomorphic(hint, cls.module)
                corr_inv = corr.inverse()
                cls.copies.append((corr_inv.compose(inj.compose(iso)), iso_inv.compose(proj).compose(corr)))
                placed = True
                break
        if not placed:
            classes.append(Summand(hint, name, [(inj.compose(iso), iso_inv.compose(proj))]))
    dec = SummandDecomposition(m, classes)
    dec.check()
    for cls in classes:
        if not summand_is_indecomposable(cls.module):
            raise DecomposeError(f"hinted summand {cls.name!r} is not indecomposable")
    return dec


def _decompose_search(m, check_local) -> SummandDecomposition:
    end = end_algebra_of(m)
    basis = homalg.hom_basis(m, m)
    prims = primitive_idempotents(end)
    classes: list[Summand] = []
    for vec in prims:
        eps = _map_from_vec(basis, vec)
        blocks = rmod.image_blocks(eps)
        image, incl = rmod.restrict_to_submodule(m, [linalg.rref(b)[0].copy_rows(range(linalg.rank(b))) for b in blocks])
        proj = _projection_onto_image(eps, incl)
        placed = False
        for cls in classes:
            if cls.module.dims == image.dims and rmod.is_isomorphic(image, cls.module) is not None:
                corr = rmod.is_isomorphic(image, cls.module)
                cls.copies.append((corr.inverse().compose(incl), proj.compose(corr)))
                placed = True
                break
        if not placed:
            image.label = f"X{len(classes) + 1}"
            classes.append(Summand(image, image.label, [(incl, proj)]))
    dec = SummandDecomposition(m, classes)
    dec.check()
    if check_local:
        for cls in classes:
            if not summand_is_indecomposable(cls.module):
                raise DecomposeError("idempotent splitting produced a decomposable piece")
    return dec


def _map_from_vec(basis, vec) -> ModuleMap:
    p = basis[0].source.algebra.p
    acc = rmod.zero_map(basis[0].source, basis[0].target)
    for c, h in zip(vec, basis):
        if c % p:
            acc = acc + (int(c) * h)
    return acc


def _projection_onto_image(eps: ModuleMap, incl: ModuleMap) -> ModuleMap:
    """proj with proj . incl == eps and incl . proj == identity of the image."""
    blocks = []
    for e_blk, r_blk in zip(eps.blocks, incl.blocks):
        right_inv = linalg.solve_right(r_blk, linalg.eye(r_blk.p, r_blk.rows))
        if right_inv is None:
            raise AssertionError("image rows are not independent")
        blocks.append(e_blk @ right_inv)
    return ModuleMap(eps.source, incl.source, blocks)


# ----------------------------------------------------------------------
# the endomorphism algebra
# ----------------------------------------------------------------------

def endomorphism_algebra(dec: SummandDecomposition) -> BasedAlgebra:
    """End of the decomposed module, with one block per summand copy.

    The distinguished idempotents are the identity maps of the summand
    classes; the block idempotents refine them copy by copy.  Radical
    generators (lifts of J/J^2, blockwise) are attached so that module
    theory over the result works.
    """
    summands = dec.summands
    p = dec.module.algebra.p
    reps = [s.module for s in summands]
    nclasses = len(reps)
    hom: dict[tuple[int, int], list[ModuleMap]] = {}
    for a in range(nclasses):
        for b in range(nclasses):
            hom[(a, b)] = homalg.hom_basis(reps[a], reps[b])

    blocks = [(a, c) for a, s in enumerate(summands) for c in range(s.multiplicity)]
    block_index = {bl: i for i, bl in enumerate(blocks)}

    basis_meta = []  # (src_block, tgt_block, class_a, class_b, hom_index)
    for bi, (a, ca) in enumerate(blocks):
        for bj, (b, cb) in enumerate(blocks):
            for h in range(len(hom[(a, b)])):
                basis_meta.append((bi, bj, a, b, h))
    dim = len(basis_meta)
    index_of = {meta: k for k, meta in enumerate(basis_meta)}

    # coordinates of all composites H(a,b) o H(b,c) over H(a,c), one solve per triple
    comp_coords: dict[tuple[int, int, int], np.ndarray] = {}
    for a in range(nclasses):
        for c in range(nclasses):
            basis_ac = hom[(a, c)]
            stack_ac = None
            if basis_ac:
                stack_ac = Matrix(p, np.array([h.stacked() for h in basis_ac], dtype=np.int64))
            for b in range(nclasses):
                n1, n2 = len(hom[(a, b)]), len(hom[(b, c)])
                if n1 == 0 or n2 == 0:
                    continue
                composites = [
                    hom[(a, b)][h1].compose(hom[(b, c)][h2]) for h1 in range(n1) for h2 in range(n2)
                ]
                if stack_ac is None:
                    if any(not comp.is_zero() for comp in composites):
                        raise AssertionError("nonzero composite in an empty Hom block")
                    continue
                rows = np.array([comp.stacked() for comp in composites], dtype=np.int64)
                sol = linalg.solve_left(stack_ac, Matrix(p, rows))
                if sol is None:
                    raise AssertionError("composite leaves the Hom block span")
                comp_coords[(a, b, c)] = sol.a.reshape(n1, n2, len(basis_ac))

    mul = np.zeros((dim, dim, dim), dtype=np.int64)
    for k1, (bi, bj, a, b, h1) in enumerate(basis_meta):
        for k2, (bi2, bj2, b2, c, h2) in enumerate(basis_meta):
            if bj != bi2:
                continue
            table = comp_coords.get((a, b, c))
            if table is None:
                continue
            coords = table[h1, h2]
            for h3 in np.nonzero(coords)[0]:
                mul[k1, k2, index_of[(bi, bj2, a, c, int(h3))]] = coords[h3]

    ident_coords = [homalg._coords_over(hom[(a, a)], rmod.identity_map(reps[a])) for a in range(nclasses)]
    block_idems = []
    for bi, (a, ca) in enumerate(blocks):
        vec = np.zeros(dim, dtype=np.int64)
        for h in np.nonzero(ident_coords[a])[0]:
            vec[index_of[(bi, bi, a, a, int(h))]] = ident_coords[a][h]
        block_idems.append(vec)
    class_idems = []
    for a in range(nclasses):
        vec = np.zeros(dim, dtype=np.int64)
        for bi, (a2, _) in enumerate(blocks):
            if a2 == a:
                vec = (vec + block_idems[bi]) % p
        class_idems.append(vec)
    unit = np.sum(block_idems, axis=0) % p

    labels = [f"h{bi + 1}->{bj + 1}#{h}" for (bi, bj, a, b, h) in basis_meta]
    src = np.array([meta[0] for meta in basis_meta])
    tgt = np.array([meta[1] for meta in basis_meta])

    block_data = BlockData(tuple(block_idems), src, tgt, ())
    alg = BasedAlgebra(p, labels, mul, unit, class_idems, blocks=block_data, validate=True)
    alg.blocks.generators = _radical_generators(alg)
    alg.block_names = tuple(f"{summands[a].name}" + (f"[{ca + 1}]" if summands[a].multiplicity > 1 else "") for a, ca in blocks)
    return alg


def _radical_generators(alg: BasedAlgebra) -> tuple[Generator, ...]:
    """Blockwise lifts of a basis of J/J^2."""
    p = alg.p
    rad = radical_basis(alg)
    rad2 = _ideal_square(alg, rad)
    gens = []
    nb = len(alg.blocks.idempotents)
    for s in range(nb):
        for t in range(nb):
            cols = [m for m in range(alg.dim) if alg.blocks.src[m] == s and alg.blocks.tgt[m] == t]
            if not cols:
                continue
            j_block = linalg.row_space(rad.copy_cols(cols))
            j2_block = linalg.row_space(rad2.copy_cols(cols)) if rad2.rows else linalg.zeros(p, 0, len(cols))
            stack = j2_block
            for r in range(j_block.rows):
                row = j_block.copy_rows([r])
                grown = linalg.vstack([stack, row])
                if linalg.rank(grown) > linalg.rank(stack):
                    stack = grown
                    vec = np.zeros(alg.dim, dtype=np.int64)
                    for c, col in enumerate(cols):
                        vec[col] = row.a[0, c]
                    gens.append(Generator(s, t, vec, f"g{len(gens) + 1}"))
    return tuple(gens)


def _ideal_square(alg: BasedAlgebra, rows: Matrix) -> Matrix:
    if rows.rows == 0:
        return rows
    prods = np.einsum(
        "ti,sj,ijk->tsk", rows.a.astype(np.int64), rows.a.astype(np.int64), alg.mul
    ).reshape(-1, alg.dim) % alg.p
    return linalg.row_space(Matrix(alg.p, prods))


# ----------------------------------------------------------------------
# quivers
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExtQuiver:
    num_vertices: int
    arrows: tuple[tuple[int, int], ...]  # 0-based (source, target), with multiplicity
    block_class: tuple[int, ...]  # block index -> vertex

    def arrow_multiset(self) -> Counter:
        return Counter(self.arrows)

    def reversed(self) -> "ExtQuiver":
        return ExtQuiver(self.num_vertices, tuple((t, s) for s, t in self.arrows), self.block_class)

    def is_connected(self) -> bool:
        if self.num_vertices <= 1:
            return True
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in self.arrows:
            parent[find(s)] = find(t)
        return len({find(v) for v in range(self.num_vertices)}) == 1

    def to_json(self):
        return {
            "vertices": self.num_vertices,
            "arrows": sorted([s + 1, t + 1] for s, t in self.arrows),
        }


def ext_quiver(alg: BasedAlgebra) -> ExtQuiver:
    """Vertices: iso classes of the projective corners; arrows: J/J^2 blocks."""
    nb = alg.num_blocks()
    projs = [rmod.projective_module(alg, i) for i in range(nb)]
    block_class = [-1] * nb
    reps: list[int] = []
    for i in range(nb):
        for cls, r in enumerate(reps):
            if projs[i].dims == projs[r].dims and rmod.is_isomorphic(projs[i], projs[r]) is not None:
                block_class[i] = cls
                break
        if block_class[i] == -1:
            block_class[i] = len(reps)
            reps.append(i)
    rad = radical_basis(alg)
    rad2 = _ideal_square(alg, rad)
    arrows = []
    p = alg.p
    for si, s in enumerate(reps):
        for ti, t in enumerate(reps):
            cols = [m for m in range(alg.dim) if alg.blocks.src[m] == s and alg.blocks.tgt[m] == t]
            if not cols:
                continue
            jdim = linalg.rank(rad.copy_cols(cols))
            j2dim = linalg.rank(rad2.copy_cols(cols)) if rad2.rows else 0
            arrows.extend([(si, ti)] * (jdim - j2dim))
    return ExtQuiver(len(reps), tuple(sorted(arrows)), tuple(block_class))


def quiver_isomorphic(q1_arrows, q2_arrows, num_vertices: int):
    """A vertex bijection matching the arrow multisets, found exhaustively."""
    c1 = Counter(tuple(a) for a in q1_arrows)
    c2 = Counter(tuple(a) for a in q2_arrows)
    if sum(c1.values()) != sum(c2.values()):
        return None
    if num_vertices > 8:
        raise ValueError("exhaustive search is limited to 8 vertices")
    for perm in itertools.permutations(range(num_vertices)):
        mapped = Counter((perm[s], perm[t]) for (s, t), k in c1.items() for _ in range(k))
        if mapped == c2:
            return perm
    return None
