import oracles
import pytest
from conftest import ring, small_modules

from modclass import (
    classify,
    direct_sum,
    injective_hull,
    is_C1,
    is_C2,
    is_C3,
    is_quasi_injective,
    key_trick_witness,
    regular_module,
    simple_modules,
)
from modclass.classification import FLAG_ORDER, c1_failure, check_chain, is_fully_invariant_in_hull
from modclass.errors import ChainViolation, PreconditionViolated

SMALL = small_modules(16)
TINY = [(l, M) for l, M in small_modules(8)]


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_c1_c2_c3_against_oracle(label, M):
    subs = oracles.submodules(M)
    assert is_C1(M) == oracles.is_C1(M, subs)
    assert is_C2(M) == oracles.is_C2(M, subs)
    assert is_C3(M) == oracles.is_C3(M, subs)


@pytest.mark.parametrize("label,M", TINY, ids=[l for l, _ in TINY])
def test_quasi_injective_against_oracle(label, M):
    assert is_quasi_injective(M) == oracles.is_quasi_injective(M, oracles.submodules(M))


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_quasi_injective_methods_agree(label, M):
    assert is_quasi_injective(M, "extension") == is_fully_invariant_in_hull(M)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_report_respects_chain(label, M):
    r = classify(M)
    check_chain(r.flags)
    assert list(r.to_json()["flags"])[:7] == list(FLAG_ORDER)[:7]


def test_chain_violation_detected():
    flags = {k: False for k in FLAG_ORDER}
    flags["injective"] = True
    with pytest.raises(ChainViolation):
        check_chain(flags)


def test_z2_plus_z4_report(R4):
    M = direct_sum(simple_modules(R4)[0], regular_module(R4))[0]
    flags = classify(M).flags
    assert flags["C1"]
    assert not any(flags[c] for c in ("C2", "C3", "C4", "C5", "C6", "injective"))


def test_z2_plus_z8_not_c1_with_witness():
    R = ring("zmod:8")
    M = direct_sum(simple_modules(R)[0], regular_module(R))[0]
    A = c1_failure(M)
    assert A is not None
    subs = oracles.submodules(M)
    members = frozenset(int(x) for x in A.members)
    # no summand has A as an essential submodule
    assert not any(
        members <= U and oracles.is_essential_in(members, U, subs)
        for U in subs if oracles.is_summand(M, U, subs)
    )


def test_regular_ut2kl_not_c1():
    assert not is_C1(regular_module(ring("ut2rel:2,2")))


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:8", "ut2:2"])
def test_key_trick_on_simples(spec):
    R = ring(spec)
    for S in simple_modules(R):
        if injective_hull(S).hull.size == S.size:
            with pytest.raises(PreconditionViolated):
                key_trick_witness(S)
            continue
        w = key_trick_witness(S)
        assert w.passed
        assert not is_C3(w.module)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_semisimple_shortcut_matches_full_check(label, M):
    assert classify(M).flags == classify(M, shortcuts=False).flags
