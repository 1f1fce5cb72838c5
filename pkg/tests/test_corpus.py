import itertools

import pytest
from conftest import ring

from modclass import are_isomorphic, classify, closure_check, is_indecomposable, module_corpus
from modclass.corpus import CLASS_IDS, indecomposable_quotients
from modclass.decomposition import decompose
from modclass.module import direct_power, quotient, regular_module
from modclass.lattice import all_submodules


@pytest.mark.parametrize("spec,bound,entries", [("ut2:2", 64, 49), ("zmod:4", 64, 15), ("ut2rel:2,2", 256, 52)])
def test_corpus_sizes(spec, bound, entries):
    assert len(module_corpus(ring(spec), bound)) == entries


@pytest.mark.parametrize("spec,pool", [("ut2:2", [2, 2, 4]), ("zmod:8", [2, 4, 8]), ("zmod:6", [2, 3])])
def test_pool_is_the_indecomposables(spec, pool):
    C = module_corpus(ring(spec), 64)
    assert [N.size for N in C.pool] == pool
    for N, M in itertools.combinations(C.pool, 2):
        assert not are_isomorphic(N, M).isomorphic


@pytest.mark.parametrize("spec", ["zmod:8", "ut2:2", "zmod:6"])
def test_quotient_flags_match_direct_test(spec):
    R = ring(spec)
    F = direct_power(regular_module(R), 2)
    found = indecomposable_quotients(R, 2, 64)
    expected = [quotient(F, K)[0] for K in all_submodules(F) if not K.is_whole]
    expected = [Q for Q in expected if is_indecomposable(Q)]
    assert len(found) == len(expected)


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:8", "ut2:2"])
def test_membership_matches_direct_classification(spec):
    C = module_corpus(ring(spec), 32)
    for k in range(len(C)):
        flags = classify(C.module(k)).flags
        for cls in CLASS_IDS:
            assert C.member(cls, k) == flags[cls], (C.label(k), cls)


def test_entries_are_their_decompositions():
    C = module_corpus(ring("zmod:8"), 64)
    for k in range(len(C)):
        D = decompose(C.module(k), with_idempotents=False)
        assert D.count == sum(C.entries[k].counts)
        assert C.entries[k].size <= 64


def test_closure_counterexample_z8():
    rep = closure_check("C1", ring("zmod:8"), 64)
    C = module_corpus(ring("zmod:8"), 64)
    assert not rep.closed
    a, b = rep.counterexample
    assert sorted([C.module(a).size, C.module(b).size]) == [2, 8]


@pytest.mark.parametrize("spec", ["zmod:4", "ut2:2", "ut2rel:2,2"])
def test_c1_closed_when_uniforms_are_small(spec):
    bound = 256 if spec == "ut2rel:2,2" else 64
    assert closure_check("C1", ring(spec), bound).closed
