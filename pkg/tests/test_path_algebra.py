import time

import numpy as np
import pytest

from qtilt.builtin import builtin_spec_text
from qtilt.path_algebra import NotFiniteDimensional, complete_groebner
from qtilt.qspec import parse_algebra_spec


@pytest.fixture(scope="module")
def A():
    return complete_groebner(parse_algebra_spec(builtin_spec_text()))


def make_algebra(text):
    return complete_groebner(parse_algebra_spec(text))


def test_builtin_dimension(A):
    assert A.dimension == 36


def test_builtin_completion_is_fast():
    t0 = time.perf_counter()
    alg = complete_groebner(parse_algebra_spec(builtin_spec_text()))
    elapsed = time.perf_counter() - t0
    assert alg.dimension == 36
    assert elapsed < 1.0


def test_three_idempotents(A):
    assert sum(1 for w in A.normal_words if len(w) == 0) == 3


def test_words_from_vertex_counts(A):
    # dim e_i A agrees with the projective dimension vectors summed
    counts = [len(A.words_from_vertex(i)) for i in range(3)]
    assert counts == [10, 16, 10]


def test_linear_a2_quiver():
    alg = make_algebra("field 2\nquiver 2\narrow a 1 2\nrelations\n")
    assert alg.dimension == 3


def test_loop_square_zero():
    alg = make_algebra("field 2\nquiver 1\narrow x 1 1\nrelations\nx*x\n")
    assert alg.dimension == 2


def test_commuting_loops_square_zero():
    text = "field 2\nquiver 1\narrow x 1 1\narrow y 1 1\nrelations\nx*y - y*x\nx*x\ny*y\n"
    alg = make_algebra(text)
    # basis e, x, y, xy
    assert alg.dimension == 4


def test_relators_reduce_to_zero(A):
    for rel in A.spec.relations:
        assert A.normal_form(rel).is_zero()


def test_normal_form_examples(A):
    assert A.normal_form("b*y*b*d").is_zero()
    assert A.normal_form("e_1*b") == A.normal_form("b")
    assert A.normal_form("b*d*n*y*b*d*n") == A.normal_form("b*y*b")


def test_multiply_noncomposable_is_zero(A):
    b = A.normal_form("b")
    assert (b * b).is_zero()


def test_multiply_unit_and_idempotents(A):
    n = A.normal_form("n")
    e3 = A.idempotent(2)
    assert e3 * n == n
    assert A.unit() * n == n
    assert n * A.unit() == n


def test_multiply_associative_on_relator_witness(A):
    n = A.normal_form("n")
    d = A.normal_form("d")
    left = (n * d) * n
    right = n * (d * n)
    assert left == right
    assert left == A.normal_form("n*y*b*d*n*y*b")


def test_associativity_random_triples(A):
    rng = np.random.default_rng(0)
    words = A.normal_words
    for _ in range(200):
        i, j, k = rng.integers(0, len(words), size=3)
        a = A.normal_form(_expr_of(A, int(i)))
        b = A.normal_form(_expr_of(A, int(j)))
        c = A.normal_form(_expr_of(A, int(k)))
        assert (a * b) * c == a * (b * c)


def _expr_of(alg, idx):
    from qtilt.qspec import PathExpr, print_expr

    return print_expr(PathExpr.make(alg.p, [(1, alg.normal_words[idx])]), alg.quiver)


def test_normal_words_closed_under_prefix(A):
    seen = set(w.arrows for w in A.normal_words)
    for w in A.normal_words:
        for k in range(len(w.arrows)):
            assert w.arrows[:k] in seen


def test_no_normal_word_contains_a_lead(A):
    from qtilt.path_algebra import _find_subword

    leads = [r.terms[0][1].arrows for r in A.groebner_basis]
    for w in A.normal_words:
        for ld in leads:
            if len(ld) <= len(w.arrows):
                assert _find_subword(w.arrows, ld) == -1


def test_opposite_preserves_dimension(A):
    op = A.opposite()
    assert op.dimension == 36
    opop = op.opposite()
    counts = sorted((w.source, w.target) for w in A.normal_words)
    counts_opop = sorted((w.source, w.target) for w in opop.normal_words)
    assert counts == counts_opop


def test_opposite_a2():
    alg = make_algebra("field 2\nquiver 2\narrow a 1 2\nrelations\n")
    op = alg.opposite()
    assert op.dimension == 3
    assert op.quiver.arrows[0].source == 1
    assert op.quiver.arrows[0].target == 0


def test_infinite_dimensional_reported():
    # a free loop has arbitrarily long normal words
    with pytest.raises(NotFiniteDimensional) as exc:
        make_algebra("field 2\nquiver 1\narrow x 1 1\nrelations\n")
    assert exc.value.frontier


def test_nonadmissible_relator_rejected():
    from qtilt.qspec import SpecError

    with pytest.raises(SpecError):
        make_algebra("field 2\nquiver 1\narrow x 1 1\nrelations\nx\n")
