"""Submodule generation, the submodule lattice, and the structural predicates
(socle, radical, length, essential, uniform, summands) built on it."""
from __future__ import annotations

import numpy as np

from . import config
from .errors import LatticeTooLarge
from .module import FiniteModule, Submodule, quotient


def _span_from(M: FiniteModule, mask: np.ndarray, gens_done: list, gens) -> Submodule:
    d = M.d
    elems = M.coords[np.flatnonzero(mask)]
    for g in gens:
        g = int(g)
        if mask[g]:
            continue
        gc = M.coords[g]
        layers = [elems]
        step = gc.copy()
        while not mask[M.index(step)]:
            layers.append((elems + step) % d)
            step = (step + gc) % d
        elems = np.concatenate(layers)
        mask[M.index(elems)] = True
        gens_done.append(g)
    return Submodule(M, mask, gens_done)


def additive_span(M: FiniteModule, gens, base: Submodule | None = None) -> Submodule:
    """Additive subgroup generated by element indices ``gens`` (together with ``base``)."""
    mask = np.zeros(M.size, dtype=bool) if base is None else base.mask.copy()
    mask[0] = True
    done = [] if base is None or base.gens is None else list(base.gens)
    if base is not None and base.gens is None and not base.is_zero:
        done = list(base.additive_generators)
    return _span_from(M, mask, done, np.asarray(gens, dtype=np.int64).reshape(-1))


def _ring_basis_plus_one(M: FiniteModule) -> np.ndarray:
    R = M.ring
    return np.array(sorted(set(R.additive_basis) | {R.one}), dtype=np.int64)


def translates(M: FiniteModule, xs) -> np.ndarray:
    """x·b for every x in xs and b in an additive basis of R (plus 1)."""
    xs = np.asarray(xs, dtype=np.int64).reshape(-1)
    if M.rank == 0 or xs.size == 0:
        return np.zeros(0, dtype=np.int64)
    B = _ring_basis_plus_one(M)
    imgs = np.einsum("xi,bij->xbj", M.coords[xs], M.act[B])
    return M.index(imgs).reshape(-1)


def cyclic(M: FiniteModule, x: int) -> Submodule:
    """The cyclic submodule xR."""
    return additive_span(M, translates(M, [x]))


def generated_submodule(M: FiniteModule, S) -> Submodule:
    """Smallest submodule containing the element indices S."""
    return additive_span(M, translates(M, list(S)))


def join(A: Submodule, B: Submodule) -> Submodule:
    if A.parent is not B.parent:
        raise ValueError("submodules of different modules")
    if B <= A:
        return A
    if A <= B:
        return B
    gens = B.gens if B.gens is not None else B.additive_generators
    return additive_span(A.parent, gens, base=A)


def zero_submodule(M: FiniteModule) -> Submodule:
    mask = np.zeros(M.size, dtype=bool)
    mask[0] = True
    return Submodule(M, mask, ())


def whole(M: FiniteModule) -> Submodule:
    return Submodule(M, np.ones(M.size, dtype=bool))


def cyclic_submodules(M: FiniteModule) -> list[tuple[int, Submodule]]:
    """Distinct nonzero cyclic submodules, each with its least generator."""
    units = np.array(sorted(M.ring.units), dtype=np.int64)
    covered = np.zeros(M.size, dtype=bool)
    covered[0] = True
    seen, out = set(), []
    for x in range(1, M.size):
        if covered[x]:
            continue
        covered[M.index(M.coords[x] @ M.act[units])] = True
        C = cyclic(M, x)
        if C.key not in seen:
            seen.add(C.key)
            out.append((x, C))
    return out


def all_submodules(M: FiniteModule, cap: int | None = None) -> list[Submodule]:
    """Every submodule of M, canonically ordered by (size, sorted members)."""
    cap = config.caps().lattice if cap is None else cap
    cache = M.__dict__.setdefault("_lattice_cache", {})
    if "all" in cache:
        return cache["all"]
    from .ringtheory import jacobson_generators, simple_module_data

    # Walk covering edges only.  If x = xe for a primitive idempotent e and
    # xJ ⊆ S, then (S + xR)/S is a quotient of eR/eJ, hence simple, so every
    # y ∈ (S + xR) \ S generates the same cover.  Each simple subquotient has
    # such generators for the representative idempotent of its class.
    jg = list(jacobson_generators(M.ring))
    XJ = M.index(np.einsum("xi,gij->gxj", M.coords, M.act[jg])) if jg and M.rank else None
    fixed = np.zeros(M.size, dtype=bool)
    for info in simple_module_data(M.ring):
        fixed[M.index(M.coords @ M.act[info.idempotent])] = True
    zero = zero_submodule(M)
    found = {zero.key: zero}
    queue = [zero]
    while queue:
        S = queue.pop()
        cand = ~S.mask & fixed
        if XJ is not None:
            cand &= S.mask[XJ].all(axis=0)
        todo = np.flatnonzero(cand)
        pos = 0
        while pos < len(todo):
            x = int(todo[pos])
            pos += 1
            if not cand[x]:
                continue
            T = additive_span(M, translates(M, [x]), base=S)
            cand &= ~T.mask
            if T.key not in found:
                found[T.key] = T
                if len(found) > cap:
                    raise LatticeTooLarge(f"more than {cap} submodules")
                queue.append(T)
    subs = sorted(found.values(), key=Submodule.sort_key)
    cache["all"] = subs
    return subs


def count_submodules(M: FiniteModule, cap: int | None = None) -> int:
    return len(all_submodules(M, cap))


# ---------------------------------------------------------------- radical layers

def socle(M: FiniteModule) -> Submodule:
    """soc(M) = {m : mJ = 0}."""
    from .ringtheory import jacobson_generators

    gens = list(jacobson_generators(M.ring))
    if not gens or M.rank == 0:
        return whole(M)
    imgs = np.einsum("xi,gij->gxj", M.coords, M.act[gens]) % M.d
    mask = ~imgs.any(axis=(0, 2))
    return Submodule(M, mask)


def radical(M: FiniteModule) -> Submodule:
    """rad(M) = MJ."""
    from .ringtheory import jacobson_generators

    gens = list(jacobson_generators(M.ring))
    if not gens or M.rank == 0:
        return zero_submodule(M)
    imgs = np.einsum("ki,gij->gkj", np.eye(M.rank, dtype=np.int64), M.act[gens])
    return additive_span(M, M.index(imgs).reshape(-1))


def composition_factors(M: FiniteModule) -> tuple[int, ...]:
    from .ringtheory import composition_factors as cf

    return cf(M)


def composition_length(M: FiniteModule) -> int:
    return sum(composition_factors(M))


def socle_series(M: FiniteModule) -> list[int]:
    """Sizes of 0 = S_0 ⊂ S_1 ⊂ ... ⊂ S_k = M with S_{i+1}/S_i = soc(M/S_i)."""
    sizes = [1]
    cur = zero_submodule(M)
    while not cur.is_whole:
        Q, proj = quotient(M, cur)
        s = socle(Q)
        pre = proj.map
        cur = Submodule(M, s.mask[pre])
        sizes.append(cur.size)
    return sizes


def loewy_length(M: FiniteModule) -> int:
    return len(socle_series(M)) - 1


def is_semisimple(M: FiniteModule) -> bool:
    return radical(M).is_zero


# ---------------------------------------------------------------- predicates

def is_essential(A: Submodule, U: Submodule | None = None) -> bool:
    """Is A essential in U (default: the whole parent)?  Uses soc(U) = soc(M) ∩ U ⊆ A."""
    M = A.parent
    umask = np.ones(M.size, dtype=bool) if U is None else U.mask
    if (A.mask & ~umask).any():
        raise ValueError("A must be contained in U")
    return not (socle(M).mask & umask & ~A.mask).any()


def is_essential_cyclic_test(A: Submodule, U: Submodule | None = None) -> bool:
    """Reference check: every nonzero cyclic xR with x ∈ U meets A."""
    M = A.parent
    members = np.arange(M.size) if U is None else U.members
    for x in members:
        if x == 0:
            continue
        if (cyclic(M, int(x)).mask & A.mask).sum() == 1:
            return False
    return True


def _uniform_by_cyclics(M: FiniteModule) -> bool:
    cyc = [C for _, C in cyclic_submodules(M)]
    # every nonzero cyclic contains a minimal one; pairs of minimal cyclics must meet
    minimal = [C for C in cyc if not any(D.size < C.size and D <= C for D in cyc)]
    for i, C in enumerate(minimal):
        for D in minimal[i + 1:]:
            if (C.mask & D.mask).sum() == 1:
                return False
    return True


def is_uniform(M: FiniteModule, cross_check: bool | None = None) -> bool:
    """M ≠ 0 and any two nonzero submodules meet nontrivially."""
    if M.size == 1:
        return False
    by_socle = composition_length(socle(M).module()[0]) == 1
    if cross_check is None:
        cross_check = M.size <= 1024
    if cross_check:
        by_cyclics = _uniform_by_cyclics(M)
        assert by_cyclics == by_socle, "uniformity tests disagree"
    return by_socle


def is_summand(A: Submodule) -> bool:
    from .homs import retraction

    return retraction(A) is not None


def summand_complement(A: Submodule, use_lattice: bool = True) -> Submodule | None:
    """A complement B (A ⊕ B = M): the first in canonical order when the lattice is
    within cap, otherwise the kernel of a retraction onto A."""
    from .homs import retraction

    M = A.parent
    r = retraction(A)
    if r is None:
        return None
    if use_lattice:
        try:
            subs = all_submodules(M)
        except LatticeTooLarge:
            subs = None
        if subs is not None:
            want = M.size // A.size
            for B in subs:
                if B.size == want and (A.mask & B.mask).sum() == 1:
                    return B
            raise AssertionError("retraction exists but no complement found")
    return r.kernel()
