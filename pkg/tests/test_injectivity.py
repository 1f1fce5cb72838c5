import oracles
import pytest
from conftest import ring, small_modules

from modclass import (
    are_isomorphic,
    character_module,
    cogenerator,
    indecomposable_injectives,
    injective_hull,
    is_injective,
    regular_module,
    simple_modules,
    uniform_modules,
)
from modclass.injectivity import evaluation_map, is_injective_by_extension, simple_modules_by_lattice
from modclass.lattice import composition_length, is_essential, socle

SMALL = small_modules(16)
TINY = [(l, M) for l, M in small_modules(8)]


@pytest.mark.parametrize("label,M", TINY, ids=[l for l, _ in TINY])
def test_injective_against_baer_oracle(label, M):
    assert is_injective(M) == oracles.is_injective_baer(M)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_injective_tests_agree(label, M):
    fast = is_injective(M)
    assert fast == is_injective(M, essential_only=False) == is_injective_by_extension(M)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_double_dual(label, M):
    D = character_module(M)
    assert D.size == M.size and D.ring == M.ring.opposite
    DD = character_module(D)
    ev = evaluation_map(M, DD)
    ev.validate()
    assert ev.is_bijective


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:8", "ut2:2", "ut2rel:2,2", "zmod:6"])
def test_cogenerator_is_injective(spec):
    R = ring(spec)
    C = cogenerator(R)
    assert C.size == R.size and is_injective(C)


@pytest.mark.parametrize("label,M", SMALL, ids=[l for l, _ in SMALL])
def test_hull_postconditions(label, M):
    H = injective_hull(M)
    assert H.embedding.is_injective and is_injective(H.hull)
    assert is_essential(H.embedding.image())
    # socle is preserved: soc E(M) is the image of soc M
    assert socle(H.hull).size == socle(M).size
    # hull of the hull adds nothing
    assert injective_hull(H.hull).hull.size == H.hull.size


@pytest.mark.parametrize("label,M", SMALL[::2], ids=[l for l, _ in SMALL[::2]])
def test_hull_methods_agree(label, M):
    a = injective_hull(M, method="socle").hull
    b = injective_hull(M, method="cogenerator").hull
    assert are_isomorphic(a, b).isomorphic


@pytest.mark.parametrize("spec,hull_size", [("zmod:4", 4), ("zmod:8", 8), ("zmod:9", 9)])
def test_hull_of_simple_over_local_pir(spec, hull_size):
    R = ring(spec)
    H = injective_hull(simple_modules(R)[0])
    assert H.hull.size == hull_size and are_isomorphic(H.hull, regular_module(R)).isomorphic


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:6", "ut2:2", "ut2rel:2,2", "gf:4"])
def test_simple_modules_match_lattice_method(spec):
    R = ring(spec)
    a, b = simple_modules(R), simple_modules_by_lattice(R)
    assert len(a) == len(b)
    for S in a:
        assert sum(are_isomorphic(S, T).isomorphic for T in b) == 1


def test_ut2_injectives_and_uniforms():
    R = ring("ut2:2")
    inj = sorted((E.size, composition_length(E)) for E in indecomposable_injectives(R))
    assert inj == [(2, 1), (4, 2)]
    sig = sorted((U.size, composition_length(U), is_injective(U)) for U in uniform_modules(R))
    assert sig == [(2, 1, False), (2, 1, True), (4, 2, True)]


def test_ut2kl_injectives():
    R = ring("ut2rel:2,2")
    inj = sorted((E.size, composition_length(E)) for E in indecomposable_injectives(R))
    assert inj == [(4, 1), (8, 2)]
    assert sorted(S.size for S in simple_modules(R)) == [2, 4]


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:8", "zmod:6", "ut2:2", "ut2rel:2,2"])
def test_uniform_modules_are_uniform_and_distinct(spec):
    Us = uniform_modules(ring(spec))
    for U in Us:
        assert composition_length(socle(U).module()[0]) == 1
    for i, U in enumerate(Us):
        for V in Us[i + 1:]:
            assert not are_isomorphic(U, V).isomorphic
