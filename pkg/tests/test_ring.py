import numpy as np
import pytest
from conftest import ring

from modclass import build_ring, opposite_ring, parse_ring_spec
from modclass.errors import AxiomViolation, InvalidSpec, SizeLimit
from modclass.ring import FiniteRing
from modclass.ringtheory import is_semisimple_ring, jacobson_elements, primitive_idempotents


def brute_units(R):
    return sorted(a for a in range(R.size) if any(R.mul[a, b] == R.one == R.mul[b, a] for b in range(R.size)))


def brute_radical(R):
    """Intersection of maximal right ideals, found by subset closure."""
    import oracles
    from modclass import regular_module

    RR = regular_module(R)
    subs = oracles.submodules(RR)
    maximal = [S for S in subs if len(S) < RR.size and not any(S < T < frozenset(range(RR.size)) for T in subs)]
    common = frozenset.intersection(*maximal)
    ring_of = {int(RR.index(R.coords[r])): r for r in range(R.size)}
    return sorted(ring_of[x] for x in common)


@pytest.mark.parametrize("spec,size", [
    ("zmod:4", 4), ("zmod:12", 12), ("gf:4", 4), ("gf:9", 9), ("ut2:2", 8), ("ut2:3", 27), ("ut2rel:2,2", 32),
])
def test_sizes(spec, size):
    assert build_ring(spec).size == size


def test_shorthand_matches_json():
    assert parse_ring_spec("ut2rel:2,2") == parse_ring_spec('{"type":"ut2_rel","q":2,"d":2}')
    assert build_ring("zmod:8") == build_ring({"type": "zmod", "n": 8})


@pytest.mark.parametrize("bad", ["zmod", "zmod:x", "foo:3", "{not json", '{"n": 4}', "gf:6", "ut2:6"])
def test_bad_specs_are_rejected(bad):
    with pytest.raises(InvalidSpec):
        build_ring(bad)


def test_ring_cap():
    with pytest.raises(SizeLimit):
        build_ring("zmod:100000")


def test_tables_ring_and_axiom_witness():
    R = build_ring({"type": "tables", "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 1]], "one": 1})
    assert R.size == 2 and R.is_commutative
    with pytest.raises(AxiomViolation):
        # 1·1 = 0 breaks the unit law
        FiniteRing.from_tables([[0, 1], [1, 0]], [[0, 0], [0, 0]], 1)


def test_product_ring():
    R = build_ring({"type": "product", "factors": [{"type": "zmod", "n": 2}, {"type": "zmod", "n": 3}]})
    assert R.size == 6 and is_semisimple_ring(R)


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:6", "zmod:8", "gf:4", "ut2:2", "ut2rel:2,2"])
def test_units_and_radical_against_brute_force(spec):
    R = ring(spec)
    assert sorted(int(u) for u in R.units) == brute_units(R)
    assert sorted(int(x) for x in jacobson_elements(R)) == brute_radical(R)


@pytest.mark.parametrize("spec,semisimple", [("zmod:6", True), ("gf:4", True), ("zmod:4", False), ("ut2:2", False)])
def test_semisimple(spec, semisimple):
    assert is_semisimple_ring(ring(spec)) == semisimple


def test_opposite_ring():
    R = ring("ut2:2")
    Rop = opposite_ring(R)
    assert np.array_equal(Rop.mul, R.mul.T)
    assert not R.is_commutative


@pytest.mark.parametrize("spec,count", [("zmod:6", 2), ("zmod:4", 1), ("zmod:12", 2), ("gf:4", 1)])
def test_commutative_primitive_idempotents_form_complete_set(spec, count):
    R = ring(spec)
    es = primitive_idempotents(R)
    assert len(es) == count
    total = 0
    for e in es:
        total = R.add[total, e]
    assert total == R.one
    assert all(R.mul[a, b] == 0 for a in es for b in es if a != b)


@pytest.mark.parametrize("spec", ["ut2:2", "ut2rel:2,2", "zmod:6"])
def test_primitive_idempotents_do_not_split(spec):
    R = ring(spec)
    idem = [int(e) for e in R.idempotents if e != 0]
    for e in primitive_idempotents(R):
        assert R.mul[e, e] == e
        for f in idem:
            g = R.add[e, R.neg[f]]
            split = f not in (0, e) and R.mul[e, f] == f == R.mul[f, e] and R.mul[g, g] == g
            assert not split


def test_opposite_is_an_involution():
    R = ring("ut2:2")
    assert np.array_equal(opposite_ring(opposite_ring(R)).mul, R.mul)
    assert np.array_equal(opposite_ring(ring("zmod:4")).mul, ring("zmod:4").mul)
