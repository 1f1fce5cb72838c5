import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from modclass.linalg import elementary_divisors, enumerate_span, kernel_mod, relation_basis, solve_mod, span_size

moduli_e = st.sampled_from([2, 3, 4, 6, 8, 9, 12])


@st.composite
def systems(draw):
    e = draw(moduli_e)
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, 3))
    A = draw(st.lists(st.lists(st.integers(0, e - 1), min_size=n, max_size=n), min_size=m, max_size=m))
    b = draw(st.lists(st.integers(0, e - 1), min_size=m, max_size=m))
    return e, np.array(A, dtype=np.int64), np.array(b, dtype=np.int64)


def brute_solutions(A, b, e):
    n = A.shape[1]
    return [x for x in itertools.product(range(e), repeat=n) if ((A @ np.array(x) - b) % e == 0).all()]


@settings(max_examples=150, derandomize=True)
@given(systems())
def test_kernel_size_and_generators(sys_):
    e, A, _ = sys_
    gens, size = kernel_mod(A, e)
    brute = brute_solutions(A, np.zeros(A.shape[0], dtype=np.int64), e)
    assert size == len(brute)
    for g in gens:
        assert ((A @ g) % e == 0).all()
    assert len(enumerate_span(gens, [e] * A.shape[1], 10**6)) == size


@settings(max_examples=150, derandomize=True)
@given(systems())
def test_solve_mod(sys_):
    e, A, b = sys_
    x = solve_mod(A, b, e)
    brute = brute_solutions(A, b, e)
    if x is None:
        assert not brute
    else:
        assert ((A @ x - b) % e == 0).all()


@settings(max_examples=100, derandomize=True)
@given(moduli_e, st.lists(st.lists(st.integers(0, 11), min_size=2, max_size=2), max_size=3))
def test_span_size_matches_enumeration(e, gens):
    gens = [np.array(g) % e for g in gens]
    assert span_size(gens, [e, e]) == len(enumerate_span(gens, [e, e], 10**6))


@settings(max_examples=100, derandomize=True)
@given(moduli_e, st.lists(st.lists(st.integers(-12, 12), min_size=2, max_size=2), max_size=3))
def test_relation_basis(e, extra):
    rels = [[e, 0], [0, e]] + extra
    orders, new_from_old, old_to_new = relation_basis(rels, 2)
    span = span_size([np.array(r) % e for r in rels], [e, e])
    assert int(np.prod(orders)) == e * e // span
    T = np.array(old_to_new, dtype=np.int64).reshape(2, len(orders))
    for r in rels:
        assert ((np.array(r) @ T) % np.array(orders, dtype=np.int64) == 0).all()
    # new generators map back to themselves
    if orders:
        back = (np.array(new_from_old, dtype=np.int64) @ T) % np.array(orders, dtype=np.int64)
        assert (back == np.eye(len(orders), dtype=np.int64)).all()


def test_elementary_divisors():
    assert elementary_divisors((12, 2)) == (2, 3, 4)
    assert elementary_divisors((1,)) == ()
