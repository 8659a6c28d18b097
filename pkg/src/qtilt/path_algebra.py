"""Finite-dimensional quotients of path algebras by admissible relation ideals.

The relation ideal is completed to a noncommutative Groebner basis for
the length-lexicographic order (ties broken by declared arrow order):
every overlap ambiguity between leading words is resolved until the
obstruction queue empties, which certifies confluence of the induced
rewriting system.  The quotient basis is then the set of normal words,
enumerated by extending paths arrow by arrow; the enumeration
terminating at some length certifies finite dimension.  A length cap
(default 64) aborts divergent completions and reports the frontier.

Relators must be admissible: every word of a relator has length at
least two, so the arrows of the quiver survive into the quotient.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from . import qspec
from .qspec import AlgebraSpec, PathExpr, Quiver, SpecError, Word

__all__ = [
    "NotFiniteDimensional",
    "QuotientAlgebra",
    "AlgebraElement",
    "complete_groebner",
    "opposite_algebra",
]

TERM_ORDER = "length-lexicographic, ties by declared arrow order"


class NotFiniteDimensional(RuntimeError):
    """Completion or normal-word enumeration hit the length cap."""

    def __init__(self, message: str, frontier=()):
        self.frontier = tuple(frontier)
        super().__init__(message)


def _wkey(w: Word):
    return (len(w.arrows), w.arrows)


def _concat(a: Word, b: Word) -> Word:
    return Word(a.source, b.target, a.arrows + b.arrows)


def _monic(poly: dict[Word, int], p: int) -> dict[Word, int]:
    lead = max(poly, key=_wkey)
    c = poly[lead]
    if c == 1:
        return poly
    inv = pow(c, p - 2, p)
    return {w: (v * inv) % p for w, v in poly.items()}


def _find_subword(hay: tuple[int, ...], needle: tuple[int, ...]) -> int:
    n, m = len(hay), len(needle)
    first = needle[0]
    for i in range(n - m + 1):
        if hay[i] == first and hay[i : i + m] == needle:
            return i
    return -1


@dataclass
class _Rule:
    lead: Word
    tail: dict[Word, int]  # lead rewrites to this combination

    @property
    def poly(self) -> dict[Word, int]:
        out = dict(self.tail)
        # over GF(p) the defining polynomial is lead - tail
        out = {w: -c for w, c in out.items()}
        out[self.lead] = 1
        return out


def _reduce(poly: dict[Word, int], rules: list[_Rule], p: int) -> dict[Word, int]:
    """Fully reduce a polynomial; terminates because substitutes are smaller."""
    work = {w: c % p for w, c in poly.items() if c % p}
    out: dict[Word, int] = {}
    while work:
        w = max(work, key=_wkey)
        c = work.pop(w)
        if c == 0:
            continue
        hit = None
        for rule in rules:
            pos = _find_subword(w.arrows, rule.lead.arrows)
            if pos >= 0:
                hit = (rule, pos)
                break
        if hit is None:
            out[w] = (out.get(w, 0) + c) % p
            if out[w] == 0:
                del out[w]
            continue
        rule, pos = hit
        pre = w.arrows[:pos]
        suf = w.arrows[pos + len(rule.lead.arrows) :]
        for tw, tc in rule.tail.items():
            nw = Word(w.source, w.target, pre + tw.arrows + suf)
            work[nw] = (work.get(nw, 0) + c * tc) % p
            if work[nw] == 0:
                del work[nw]
    return out


def _poly_from_expr(expr: PathExpr) -> dict[Word, int]:
    return {w: c for c, w in expr.terms}


def _expr_from_poly(poly: dict[Word, int], p: int) -> PathExpr:
    return PathExpr.make(p, [(c, w) for w, c in poly.items()])


def _rule_from_poly(poly: dict[Word, int], p: int) -> _Rule:
    poly = _monic(poly, p)
    lead = max(poly, key=_wkey)
    tail = {w: (-c) % p for w, c in poly.items() if w != lead}
    return _Rule(lead, tail)


def _overlaps(f: _Rule, g: _Rule):
    """Proper overlaps: a suffix of lead(f) equals a prefix of lead(g)."""
    u, v = f.lead.arrows, g.lead.arrows
    for L in range(1, min(len(u), len(v))):
        if u[len(u) - L :] == v[:L]:
            yield L


def _spoly(f: _Rule, g: _Rule, L: int, p: int) -> dict[Word, int]:
    # lead(f) = a·c, lead(g) = c·b with |c| = L; S = f·b - a·g
    b = g.lead.arrows[L:]
    a = f.lead.arrows[: len(f.lead.arrows) - L]
    out: dict[Word, int] = {}

    def add(word, coeff):
        out[word] = (out.get(word, 0) + coeff) % p
        if out[word] == 0:
            del out[word]

    src = f.lead.source
    tgt = g.lead.target
    for w, c in f.poly.items():
        add(Word(src, tgt, w.arrows + b), c)
    for w, c in g.poly.items():
        add(Word(src, tgt, a + w.arrows), -c)
    return out


class QuotientAlgebra:
    """A path algebra modulo an admissible ideal, with certified finite basis."""

    def __init__(self, quiver: Quiver, p: int, rules: list[_Rule], normal_words: list[Word], spec: AlgebraSpec | None = None):
        self.quiver = quiver
        self.p = p
        self.term_order = TERM_ORDER
        self._rules = rules
        self.groebner_basis = tuple(_expr_from_poly(r.poly, p) for r in rules)
        self.normal_words = tuple(normal_words)
        self._index = {w: i for i, w in enumerate(self.normal_words)}
        self.spec = spec
        self._opposite = None

    @property
    def dimension(self) -> int:
        return len(self.normal_words)

    def algebra_basis(self) -> tuple[Word, ...]:
        """Normal words by length, then lexicographic in declared arrow order."""
        return self.normal_words

    def basis_labels(self) -> list[str]:
        return [qspec.print_expr(PathExpr.make(self.p, [(1, w)]), self.quiver) for w in self.normal_words]

    def words_from_vertex(self, i: int) -> list[int]:
        return [k for k, w in enumerate(self.normal_words) if w.source == i]

    # -- elements ------------------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dimension, dtype=np.int64))

    def normal_form(self, expr) -> "AlgebraElement":
        """Unique normal form of a path expression (or its string form)."""
        if isinstance(expr, str):
            expr = qspec.parse_element(expr, self.quiver, self.p)
        reduced = _reduce(_poly_from_expr(expr), self._rules, self.p)
        vec = np.zeros(self.dimension, dtype=np.int64)
        for w, c in reduced.items():
            vec[self._index[w]] = c
        return AlgebraElement(self, vec)

    def element(self, expr) -> "AlgebraElement":
        return self.normal_form(expr)

    def idempotent(self, i: int) -> "AlgebraElement":
        if not 0 <= i < self.quiver.num_vertices:
            raise ValueError(f"vertex {i} out of range")
        return self.normal_form(PathExpr.make(self.p, [(1, Word(i, i, ()))]))

    def unit(self) -> "AlgebraElement":
        vec = np.zeros(self.dimension, dtype=np.int64)
        for i in range(self.quiver.num_vertices):
            vec[self._index[Word(i, i, ())]] = 1
        return AlgebraElement(self, vec)

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to different algebras")
        acc: dict[Word, int] = {}
        for i in np.nonzero(a.vec)[0]:
            wi = self.normal_words[i]
            ci = int(a.vec[i])
            for j in np.nonzero(b.vec)[0]:
                wj = self.normal_words[j]
                if wi.target != wj.source:
                    continue
                w = _concat(wi, wj)
                acc[w] = (acc.get(w, 0) + ci * int(b.vec[j])) % self.p
        reduced = _reduce(acc, self._rules, self.p)
        vec = np.zeros(self.dimension, dtype=np.int64)
        for w, c in reduced.items():
            vec[self._index[w]] = c
        return AlgebraElement(self, vec)

    def opposite(self) -> "QuotientAlgebra":
        """Arrows and relator words reversed; dimension is preserved."""
        if self._opposite is None:
            self._opposite = opposite_algebra(self)
        return self._opposite

    def __repr__(self) -> str:
        return f"QuotientAlgebra(GF({self.p}), dim {self.dimension})"


class AlgebraElement:
    """Coefficient vector over the normal-word basis of its algebra."""

    __slots__ = ("algebra", "vec")

    def __init__(self, algebra: QuotientAlgebra, vec: np.ndarray):
        self.algebra = algebra
        self.vec = vec % algebra.p

    def is_zero(self) -> bool:
        return not self.vec.any()

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")
        return AlgebraElement(self.algebra, self.vec + other.vec)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self.algebra.multiply(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and other.algebra is self.algebra
            and np.array_equal(self.vec, other.vec)
        )

    __hash__ = None

    def __repr__(self) -> str:
        alg = self.algebra
        expr = PathExpr.make(alg.p, [(int(c), alg.normal_words[i]) for i, c in enumerate(self.vec) if c])
        return qspec.print_expr(expr, alg.quiver)


def complete_groebner(spec: AlgebraSpec, length_cap: int = 64) -> QuotientAlgebra:
    """Complete a presentation and certify its quotient finite-dimensional.

    Raises NotFiniteDimensional with the frontier words if leading words
    or normal words persist at the cap.
    """
    p, quiver = spec.p, spec.quiver
    for rel in spec.relations:
        for w in rel.words():
            if len(w) < 2:
                raise SpecError("relators must only involve words of length >= 2 (admissible ideal)")

    rules: list[_Rule] = []
    queue: list[tuple[int, int, int, int]] = []  # (degree, fi, gi, overlap)
    pending: list[dict[Word, int]] = [_poly_from_expr(r) for r in spec.relations if not r.is_zero()]

    def push_pairs(k: int) -> None:
        for i in range(len(rules)):
            for a, b in ((i, k), (k, i)) if i != k else ((k, k),):
                for L in _overlaps(rules[a], rules[b]):
                    deg = len(rules[a].lead) + len(rules[b].lead) - L
                    heapq.heappush(queue, (deg, a, b, L))

    def add_poly(poly: dict[Word, int]) -> None:
        reduced = _reduce(poly, rules, p)
        if not reduced:
            return
        rule = _rule_from_poly(reduced, p)
        if len(rule.lead) > length_cap:
            raise NotFiniteDimensional(
                f"completion exceeded the length cap {length_cap}",
                frontier=[rule.lead],
            )
        rules.append(rule)
        push_pairs(len(rules) - 1)

    while pending or queue:
        if pending:
            add_poly(pending.pop())
            continue
        _, fi, gi, L = heapq.heappop(queue)
        s = _spoly(rules[fi], rules[gi], L, p)
        if s:
            add_poly(s)

    rules = _interreduce(rules, p)
    _assert_confluent(rules, spec, p)

    normal_words = _enumerate_normal_words(quiver, rules, length_cap)
    normal_words.sort(key=lambda w: (_wkey(w), w.source))
    return QuotientAlgebra(quiver, p, rules, normal_words, spec)


def _interreduce(rules: list[_Rule], p: int) -> list[_Rule]:
    """Minimal, tail-reduced basis with the leading words an antichain."""
    changed = True
    current = list(rules)
    while changed:
        changed = False
        for i in range(len(current)):
            rest = current[:i] + current[i + 1 :]
            reduced = _reduce(current[i].poly, rest, p)
            if not reduced:
                current = rest
                changed = True
                break
            rule = _rule_from_poly(reduced, p)
            if rule.lead != current[i].lead or rule.tail != current[i].tail:
                current = rest + [rule]
                changed = True
                break
    current.sort(key=lambda r: _wkey(r.lead))
    return current


def _assert_confluent(rules: list[_Rule], spec: AlgebraSpec, p: int) -> None:
    for i in range(len(rules)):
        for j in range(len(rules)):
            for L in _overlaps(rules[i], rules[j]):
                if _reduce(_spoly(rules[i], rules[j], L, p), rules, p):
                    raise AssertionError("completion left an unresolved overlap")
    for rel in spec.relations:
        if _reduce(_poly_from_expr(rel), rules, p):
            raise AssertionError("a defining relator does not reduce to zero")


def _enumerate_normal_words(quiver: Quiver, rules: list[_Rule], length_cap: int) -> list[Word]:
    by_target: dict[int, list[int]] = {v: [] for v in range(quiver.num_vertices)}
    for k, a in enumerate(quiver.arrows):
        by_target[a.source].append(k)
    leads = [r.lead.arrows for r in rules]

    words: list[Word] = [Word(v, v, ()) for v in range(quiver.num_vertices)]
    frontier = list(words)
    length = 0
    while frontier:
        length += 1
        if length > length_cap:
            raise NotFiniteDimensional(
                f"normal words persist at the length cap {length_cap}",
                frontier=frontier[:8],
            )
        nxt = []
        for w in frontier:
            for k in by_target[w.target]:
                cand = w.arrows + (k,)
                # a fresh leading word can only appear as a suffix
                if any(cand[len(cand) - len(ld) :] == ld for ld in leads if len(ld) <= len(cand)):
                    continue
                nxt.append(Word(w.source, quiver.arrows[k].target, cand))
        words.extend(nxt)
        frontier = nxt
    return words


def opposite_algebra(alg: QuotientAlgebra) -> QuotientAlgebra:
    """The opposite quotient: arrows reversed, relator words reversed."""
    quiver_op = alg.quiver.reversed()
    relations_op = tuple(
        PathExpr.make(alg.p, [(c, w.reversed()) for c, w in rel.terms])
        for rel in (alg.spec.relations if alg.spec is not None else alg.groebner_basis)
    )
    spec_op = AlgebraSpec(alg.p, quiver_op, relations_op, (), "")
    return complete_groebner(spec_op)
