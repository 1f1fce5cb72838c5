import json

import pytest
from conftest import ring

from modclass import (
    construct_C1_preenvelope,
    direct_sum,
    module_corpus,
    regular_module,
    simple_modules,
    verify_mainC1_condition,
    verify_preenvelope,
    verify_theorem_rare,
)
from modclass.approximation import SUITES, run_suite, verify_comC1
from modclass.errors import NotCommutative
from modclass.module import ModuleHom, zero_module


@pytest.mark.parametrize("spec", ["ut2:2", "zmod:4", "zmod:9"])
def test_preenvelopes_conclusive_when_condition_holds(spec):
    R = ring(spec)
    C = module_corpus(R, 32)
    for k in range(len(C)):
        cert = construct_C1_preenvelope(C.module(k), bound=32)
        assert cert.status == "CONCLUSIVE" and cert.passed
        if C.member("C1", k):
            # a C1 module is its own C1-preenvelope up to a split mono
            assert cert.split_mono


def test_generator_check_agrees_with_full_check():
    R = ring("zmod:4")
    N = direct_sum(simple_modules(R)[0], regular_module(R))[0]
    cert = construct_C1_preenvelope(N, bound=16)
    corpus = module_corpus(R, 16)
    fast = verify_preenvelope(cert.morphism, "C1", corpus)
    full = verify_preenvelope(cert.morphism, "C1", corpus, full=True)
    assert fast.passed == full.passed is True
    assert full.checked_maps >= fast.checked_maps


def test_zero_map_is_not_a_preenvelope():
    R = ring("zmod:4")
    N = regular_module(R)
    u = ModuleHom.zero(N, zero_module(R))
    check = verify_preenvelope(u, "C1", module_corpus(R, 16))
    assert not check.passed and check.counterexample is not None


def test_z8_preenvelope_not_conclusive():
    R = ring("zmod:8")
    cert = construct_C1_preenvelope(simple_modules(R)[0], bound=32)
    assert cert.status != "CONCLUSIVE"


def test_main_condition():
    assert verify_mainC1_condition(ring("ut2:2")).holds
    rep = verify_mainC1_condition(ring("zmod:8"))
    assert not rep.holds
    assert {"size": 8, "length": 3, "injective": True, "ok": False} in rep.uniforms


def test_comC1_rejects_noncommutative():
    with pytest.raises(NotCommutative):
        verify_comC1(ring("ut2:2"))


@pytest.mark.parametrize("i", [2, 3, 6])
def test_rare_on_semisimple_ring(i):
    assert verify_theorem_rare(ring("zmod:6"), i).passed


def test_every_suite_serializes():
    for name in ("rare", "mainC1", "key_trick", "chain", "c1inj"):
        rep = run_suite(name, "zmod:4", bound=16)
        assert rep.passed, name
        json.dumps(rep.to_json())
    assert set(SUITES) >= {"rare", "mainC1", "comC1", "ut2", "ut2kl", "key_trick", "chain"}


def test_hull_is_an_injective_preenvelope():
    from modclass import indecomposable_injectives, injective_hull

    R = ring("ut2:2")
    N = simple_modules(R)[0]
    u = injective_hull(N).embedding
    assert verify_preenvelope(u, "injective", list(indecomposable_injectives(R))).passed


def test_z2_plus_z4_preenvelope_at_bound_64():
    R = ring("zmod:4")
    N = direct_sum(simple_modules(R)[0], regular_module(R))[0]
    cert = construct_C1_preenvelope(N, bound=64, check_envelope=True)
    assert cert.passed and cert.status == "CONCLUSIVE"
    assert set(cert.morphism.cod.invariants) <= {2, 4}
    assert cert.envelope is True
