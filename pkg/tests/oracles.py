"""Brute-force reference implementations over raw Cayley tables.

Nothing here uses the package's algorithms: only the dense tables
``M.add_table`` and ``M.act_table`` (and the ring tables).  Everything is
exponential and meant for modules of a few dozen elements at most.
"""
from __future__ import annotations



def tables(M):
    return M.add_table.tolist(), M.act_table.tolist()


def closure(M, seed, add=None, act=None) -> frozenset:
    """Smallest subset containing seed ∪ {0} closed under + and every x·r."""
    if add is None:
        add, act = tables(M)
    S = {0} | set(seed)
    frontier = list(S)
    while frontier:
        new = []
        for x in frontier:
            for r in range(len(act)):
                y = act[r][x]
                if y not in S:
                    S.add(y)
                    new.append(y)
            for z in list(S):
                y = add[x][z]
                if y not in S:
                    S.add(y)
                    new.append(y)
        frontier = new
    return frozenset(S)


def submodules(M) -> set[frozenset]:
    """All submodules, by closing under joins with cyclic submodules."""
    add, act = tables(M)
    cyc = {closure(M, [x], add, act) for x in range(M.size)}
    found = {frozenset([0])}
    frontier = list(found)
    while frontier:
        new = []
        for S in frontier:
            for C in cyc:
                if C <= S:
                    continue
                T = closure(M, S | C, add, act)
                if T not in found:
                    found.add(T)
                    new.append(T)
        frontier = new
    return found


def submodules_by_subsets(M) -> set[frozenset]:
    """All submodules by testing every subset containing 0 (|M| ≤ 12)."""
    add, act = tables(M)
    n = M.size
    out = set()
    for bits in range(1 << (n - 1)):
        S = {0} | {i + 1 for i in range(n - 1) if bits >> i & 1}
        if all(add[x][y] in S for x in S for y in S) and all(act[r][x] in S for r in range(len(act)) for x in S):
            out.add(frozenset(S))
    return out


def homs(M, N) -> list[tuple[int, ...]]:
    """Every map f: M -> N (as a tuple of images) that is additive and R-linear."""
    return [tuple(f[x] for x in range(M.size)) for f in restricted_homs(M, frozenset(range(M.size)), N)]


def restricted_homs(M, A: frozenset, N) -> list[dict]:
    """Every additive R-linear map A -> N for a submodule A of M, as dicts.

    Function enumeration by backtracking over element images; each
    constraint is checked once all of its elements have images.
    """
    addM, actM = tables(M)
    addN, actN = tables(N)
    elems = sorted(A)
    pos = {x: k for k, x in enumerate(elems)}
    # constraints attached to the latest element they mention
    checks = [[] for _ in elems]
    for x in elems:
        for y in elems:
            s = addM[x][y]
            checks[max(pos[x], pos[y], pos[s])].append(("add", x, y, s))
        for r in range(len(actM)):
            y = actM[r][x]
            checks[max(pos[x], pos[y])].append(("act", r, x, y))
    f = {}
    out = []

    def ok(k):
        for c in checks[k]:
            if c[0] == "add":
                _, x, y, s = c
                if f[s] != addN[f[x]][f[y]]:
                    return False
            else:
                _, r, x, y = c
                if f[y] != actN[r][f[x]]:
                    return False
        return True

    def rec(k):
        if k == len(elems):
            out.append(dict(f))
            return
        for v in range(N.size):
            f[elems[k]] = v
            if ok(k):
                rec(k + 1)
        del f[elems[k]]

    rec(0)
    return out


# ---------------------------------------------------------------- structure

def is_summand(M, A, subs) -> bool:
    return any(len(A & B) == 1 and len(A) * len(B) == M.size for B in subs)


def is_essential_in(A, U, subs) -> bool:
    return all(len(A & B) > 1 for B in subs if B <= U and len(B) > 1)


def minimal(subs) -> list:
    nz = [S for S in subs if len(S) > 1]
    return [S for S in nz if not any(T < S and len(T) > 1 for T in nz)]


def socle(M, subs) -> frozenset:
    add, act = tables(M)
    return closure(M, set().union(*minimal(subs)) if minimal(subs) else set(), add, act)


def is_uniform(M, subs) -> bool:
    nz = [S for S in subs if len(S) > 1]
    return bool(nz) and all(len(A & B) > 1 for A in nz for B in nz)


def is_indecomposable(M, subs) -> bool:
    return M.size > 1 and not any(
        1 < len(A) < M.size and is_summand(M, A, subs) for A in subs
    )


def is_C1(M, subs) -> bool:
    summands = [U for U in subs if is_summand(M, U, subs)]
    return all(any(A <= U and is_essential_in(A, U, subs) for U in summands) for A in subs)


def _isomorphic_subs(M, A, B) -> bool:
    if len(A) != len(B):
        return False
    for f in restricted_homs(M, A, M):
        if sorted(f.values()) == sorted(B):
            return True
    return False


def is_C2(M, subs) -> bool:
    summands = [U for U in subs if is_summand(M, U, subs)]
    for A in subs:
        if is_summand(M, A, subs):
            continue
        if any(_isomorphic_subs(M, A, B) for B in summands):
            return False
    return True


def is_C3(M, subs) -> bool:
    add, act = tables(M)
    summands = [U for U in subs if is_summand(M, U, subs)]
    for A in summands:
        for B in summands:
            if len(A & B) == 1:
                S = closure(M, A | B, add, act)
                if not is_summand(M, S, subs):
                    return False
    return True


def is_quasi_injective(M, subs) -> bool:
    """Every map from a submodule into M extends to an endomorphism."""
    ends = homs(M, M)
    for A in subs:
        for f in restricted_homs(M, A, M):
            if not any(all(g[x] == v for x, v in f.items()) for g in ends):
                return False
    return True


def is_injective_baer(M) -> bool:
    """Baer: every map from a right ideal I into M is left multiplication by some m."""
    from modclass.module import regular_module

    RR = regular_module(M.ring)
    add, act = tables(M)
    # element index of ring element r in RR
    ring_idx = [int(RR.index(M.ring.coords[r])) for r in range(M.ring.size)]
    elem_of = {ring_idx[r]: r for r in range(M.ring.size)}
    for I in submodules(RR):
        for f in restricted_homs(RR, I, M):
            if not any(all(act[elem_of[i]][m] == v for i, v in f.items()) for m in range(M.size)):
                return False
    return True
