import numpy as np
import oracles
import pytest
from conftest import ring, small_modules

from modclass import all_submodules, direct_sum, quotient, regular_module, socle, radical
from modclass.errors import LatticeTooLarge
from modclass.lattice import (
    composition_length,
    cyclic,
    is_essential,
    is_essential_cyclic_test,
    is_uniform,
    loewy_length,
    socle_series,
    summand_complement,
)
from modclass.module import direct_power

SMALL = small_modules(16)
TINY = [(l, M) for l, M in SMALL if M.size <= 8]


def as_sets(subs):
    return {frozenset(int(x) for x in S.members) for S in subs}


# values frozen from the subset-closure oracle
@pytest.mark.parametrize("spec,k,count", [
    ("zmod:4", 2, 15), ("ut2:2", 2, 120), ("zmod:6", 2, 30), ("zmod:6", 3, 448),
    ("gf:4", 3, 44), ("zmod:8", 2, 37), ("zmod:9", 2, 23),
])
def test_lattice_counts(spec, k, count):
    assert len(all_submodules(direct_power(regular_module(ring(spec)), k))) == count


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_lattice_matches_closure_oracle(label, M):
    subs = all_submodules(M)
    assert as_sets(subs) == oracles.submodules(M)
    keys = [S.sort_key() for S in subs]
    assert keys == sorted(keys) and len(set(S.key for S in subs)) == len(subs)


@pytest.mark.parametrize("label,M", TINY, ids=[l for l, _ in TINY])
def test_lattice_matches_subset_oracle(label, M):
    assert as_sets(all_submodules(M)) == oracles.submodules_by_subsets(M)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_socle_radical_uniform(label, M):
    subs = oracles.submodules(M)
    assert frozenset(int(x) for x in socle(M).members) == oracles.socle(M, subs)
    # rad M = intersection of maximal submodules
    maximal = [S for S in subs if len(S) < M.size and not any(S < T and len(T) < M.size for T in subs)]
    rad = frozenset.intersection(*maximal) if maximal else frozenset([0])
    assert frozenset(int(x) for x in radical(M).members) == rad
    assert is_uniform(M) == oracles.is_uniform(M, subs)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_essential_agrees_with_brute_force(label, M):
    subs = all_submodules(M)
    sets = as_sets(subs)
    whole = frozenset(range(M.size))
    for A in subs:
        expected = oracles.is_essential_in(frozenset(int(x) for x in A.members), whole, sets)
        assert is_essential(A) == expected == is_essential_cyclic_test(A)


def test_essential_example(R4):
    from modclass import simple_modules

    M, (i1, i2), _ = direct_sum(simple_modules(R4)[0], regular_module(R4))
    # ℤ/2 ⊕ 0 misses 0 ⊕ 2ℤ/4
    assert not is_essential(i1.image())
    # 0 ⊕ 2ℤ/4 is essential in 0 ⊕ ℤ/4
    B = cyclic(M, int(M.index([0, 2])))
    assert is_essential(B, i2.image())
    assert not is_essential(B)


def test_socle_series_and_lengths():
    Z8 = regular_module(ring("zmod:8"))
    assert socle_series(Z8) == [1, 2, 4, 8]
    assert loewy_length(Z8) == composition_length(Z8) == 3
    # composition and Loewy length differ on a semisimple sum
    M = direct_power(regular_module(ring("zmod:6")), 2)
    assert composition_length(M) == 4 and loewy_length(M) == 1


def test_quotients_are_valid_modules():
    for spec in ("zmod:8", "zmod:12", "ut2:2"):
        F = direct_power(regular_module(ring(spec)), 2)
        for A in all_submodules(F)[::7]:
            Q, proj = quotient(F, A)
            Q._validate()
            assert Q.size * A.size == F.size
            assert proj.kernel() == A


def test_summand_complement():
    M = direct_power(regular_module(ring("zmod:4")), 2)
    for A in all_submodules(M):
        B = summand_complement(A)
        sets = as_sets(all_submodules(M))
        expected = oracles.is_summand(M, frozenset(int(x) for x in A.members), sets)
        assert (B is not None) == expected
        if B is not None:
            assert (A.mask & B.mask).sum() == 1 and A.size * B.size == M.size


def test_lattice_cap_raises():
    M = direct_power(regular_module(ring("ut2:2")), 2)
    M.__dict__.pop("_lattice_cache", None)
    with pytest.raises(LatticeTooLarge):
        all_submodules(M, cap=50)
    M.__dict__.pop("_lattice_cache", None)
