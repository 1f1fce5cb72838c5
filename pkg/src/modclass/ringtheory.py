"""Ring-level structure: Jacobson radical, primitive idempotents, simple modules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import span_size
from .module import FiniteModule, Submodule, quotient, regular_module, ring_element_of
from .ring import FiniteRing


def jacobson_mask(R: FiniteRing) -> np.ndarray:
    """Boolean mask over ring elements: r ∈ J iff 1 - rs is a unit for every s."""
    cached = R._cache.get("jacobson_mask")
    if cached is not None:
        return cached
    unit = np.zeros(R.size, dtype=bool)
    unit[list(R.units)] = True
    out = np.zeros(R.size, dtype=bool)
    rows = max(1, (1 << 22) // R.size)
    for start in range(0, R.size, rows):
        prods = R.mul[start:start + rows]
        diff = R.add[R.one][R.neg[prods]]
        out[start:start + rows] = unit[diff].all(axis=1)
    out.setflags(write=False)
    R._cache["jacobson_mask"] = out
    return out


def jacobson_elements(R: FiniteRing) -> np.ndarray:
    return np.flatnonzero(jacobson_mask(R))


def jacobson_radical(R: FiniteRing) -> Submodule:
    """J(R) as a submodule of the regular right module."""
    M = regular_module(R)
    mask = np.zeros(M.size, dtype=bool)
    mask[M.index(R.coords[jacobson_elements(R)])] = True
    return Submodule(M, mask)


def jacobson_generators(R: FiniteRing) -> tuple[int, ...]:
    """Ring elements generating J(R) additively."""
    cached = R._cache.get("jacobson_gens")
    if cached is None:
        A = jacobson_radical(R)
        M = A.parent
        cached = tuple(ring_element_of(M, int(x)) for x in A.additive_generators)
        R._cache["jacobson_gens"] = cached
    return cached


def is_semisimple_ring(R: FiniteRing) -> bool:
    return int(jacobson_mask(R).sum()) == 1


def primitive_idempotents(R: FiniteRing) -> tuple[int, ...]:
    """Nonzero idempotents e whose corner eRe has no idempotents besides 0 and e."""
    cached = R._cache.get("primitive_idempotents")
    if cached is not None:
        return cached
    E = np.array(sorted(R.idempotents), dtype=np.int64)
    out = []
    for e in E:
        if e == 0:
            continue
        inside = (R.mul[e, E] == E) & (R.mul[E, e] == E) & (E != 0) & (E != e)
        if not inside.any():
            out.append(int(e))
    cached = tuple(out)
    R._cache["primitive_idempotents"] = cached
    return cached


@dataclass(frozen=True)
class SimpleModuleInfo:
    module: FiniteModule
    idempotent: int          # primitive e with top(eR) ≅ module
    division_size: int       # |End(T)| = |T e|


def _same_top(R: FiniteRing, e: int, f: int) -> bool:
    # eR/eJ ≅ fR/fJ  iff  eRf ⊄ J
    J = jacobson_mask(R)
    return not J[R.mul[R.mul[e, :], f]].all()


def _top_of(R: FiniteRing, e: int) -> FiniteModule:
    M = regular_module(R)
    xe = int(M.index(R.coords[e]))
    from .lattice import cyclic, generated_submodule

    eR = cyclic(M, xe)
    sub, _ = eR.module()
    eJ = generated_submodule(M, M.index(R.coords[R.mul[e, list(jacobson_generators(R))]]))
    mask = np.zeros(sub.size, dtype=bool)
    mask[eR.to_sub_index(eJ.members)] = True
    T, _ = quotient(sub, Submodule(sub, mask))
    return T


def simple_module_data(R: FiniteRing) -> tuple[SimpleModuleInfo, ...]:
    """One representative per isomorphism class of simple right modules, canonically ordered."""
    cached = R._cache.get("simples")
    if cached is not None:
        return cached
    reps: list[int] = []
    for e in primitive_idempotents(R):
        if not any(_same_top(R, f, e) for f in reps):
            reps.append(e)
    infos = []
    for e in reps:
        T = _top_of(R, e)
        infos.append(SimpleModuleInfo(T, e, image_size(T, e)))
    infos.sort(key=lambda s: (s.module.size, s.idempotent))
    for k, s in enumerate(infos):
        s.module.name = f"S{k + 1}"
    cached = tuple(infos)
    R._cache["simples"] = cached
    return cached


def image_size(M: FiniteModule, r: int) -> int:
    """|M·r| for a ring element r."""
    if M.rank == 0:
        return 1
    return span_size(list(M.act[r]), M.invariants)


def _int_log(n: int, base: int) -> int:
    k = 0
    while n > 1:
        if n % base:
            raise ArithmeticError(f"{n} is not a power of {base}")
        n //= base
        k += 1
    return k


def composition_factors(M: FiniteModule) -> tuple[int, ...]:
    """Multiplicity of each simple module (in canonical order) as a composition factor of M."""
    return tuple(
        _int_log(image_size(M, s.idempotent), s.division_size) for s in simple_module_data(M.ring)
    )
