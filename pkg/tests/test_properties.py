"""Randomized structural properties over corpus modules (fixed seed)."""
import functools

import oracles
from conftest import ring
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from modclass import (
    HomSpace,
    are_isomorphic,
    character_module,
    classify,
    decompose,
    direct_sum,
    injective_hull,
    is_injective,
    module_corpus,
)
from modclass.classification import check_chain, is_fully_invariant_in_hull, is_quasi_injective
from modclass.decomposition import check_uniform_decomposition, same_decomposition_type
from modclass.injectivity import evaluation_map
from modclass.lattice import is_essential, socle

POOL = [("zmod:4", 64), ("zmod:12", 48), ("zmod:8", 32), ("zmod:6", 36), ("zmod:9", 32), ("gf:4", 32), ("ut2:2", 32), ("ut2rel:2,2", 32)]
SETTINGS = settings(max_examples=120, derandomize=True, deadline=None, suppress_health_check=list(HealthCheck))


@functools.lru_cache(maxsize=None)
def drawable() -> tuple:
    out = []
    for spec, bound in POOL:
        C = module_corpus(ring(spec), bound)
        out.extend((spec, bound, k) for k in range(len(C)))
    return tuple(out)


def module_of(item):
    spec, bound, k = item
    return module_corpus(ring(spec), bound).module(k)


modules = st.sampled_from(drawable()).map(module_of)


def test_enough_modules():
    assert len(drawable()) >= 100


@SETTINGS
@given(modules)
def test_chain_never_violated(M):
    check_chain(classify(M).flags)


@SETTINGS
@given(modules)
def test_hull_properties(M):
    H = injective_hull(M)
    E, u = H.hull, H.embedding
    assert is_injective(E) and u.is_injective
    assert is_essential(u.image())
    assert socle(E).size == socle(M).size
    # idempotent: the hull of E is E itself
    assert injective_hull(E).hull.size == E.size


@SETTINGS
@given(modules)
def test_double_dual_is_isomorphic(M):
    DD = character_module(character_module(M))
    assert evaluation_map(M, DD).is_bijective
    assert are_isomorphic(M, DD).isomorphic


@SETTINGS
@given(modules)
def test_quasi_injectivity_tests_agree(M):
    assert is_quasi_injective(M, "extension") == is_fully_invariant_in_hull(M)


@SETTINGS
@given(modules)
def test_c1_modules_split_into_uniforms(M):
    assert check_uniform_decomposition(M).consistent


@SETTINGS
@given(modules, st.integers(min_value=1, max_value=10_000))
def test_krull_schmidt_independent_of_search_order(M, seed):
    assert same_decomposition_type(decompose(M, seed=0), decompose(M, seed=seed))


@SETTINGS
@given(modules.filter(lambda M: M.size <= 8), modules.filter(lambda M: M.size <= 8))
def test_hom_count_brute_force(M, N):
    if M.ring is not N.ring:
        N = M
    assert HomSpace(M, N).count == len(oracles.homs(M, N))


@SETTINGS
@given(modules, modules)
def test_hom_additive_in_first_argument(A, B):
    if A.ring is not B.ring or A.size * B.size > 256:
        return
    S = direct_sum(A, B)[0]
    for N in (A, B):
        assert HomSpace(S, N).count == HomSpace(A, N).count * HomSpace(B, N).count
