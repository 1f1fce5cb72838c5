"""Exact linear algebra over Z/e and over Z for small finite abelian groups.

Everything here works on integer numpy arrays (int64) or plain Python ints.
Moduli stay below 2**16 at desk scale, so products of two reduced entries
fit comfortably in int64.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd, prod

import numpy as np
from sympy import factorint

from .errors import CapExceeded


@lru_cache(maxsize=None)
def prime_powers(e: int) -> tuple[tuple[int, int], ...]:
    """Return ((p, a), ...) with e = prod p**a, primes ascending."""
    if e <= 1:
        return ()
    return tuple(sorted(factorint(e).items()))


def _valuations(x: np.ndarray, p: int, a: int) -> np.ndarray:
    # valuation of nonzero residues mod p**a; zeros get a (never chosen as pivots)
    val = np.zeros(x.shape, dtype=np.int64)
    pk = 1
    for _ in range(1, a):
        pk *= p
        val += (x % pk == 0)
    val[x == 0] = a
    return val


def _local_kernel(A: np.ndarray, p: int, a: int):
    """Kernel of x -> A x over Z/p**a.

    Returns (generators, log_p of kernel size).  Uses min-valuation pivoting,
    which is valid because the ideals of Z/p**a are totally ordered.
    """
    q = p ** a
    A = np.array(A, dtype=np.int64) % q
    m, n = A.shape
    V = np.eye(n, dtype=np.int64)
    pivots = []
    r = 0
    while r < min(m, n):
        sub = A[r:, r:]
        if not sub.any():
            break
        val = _valuations(sub, p, a)
        i, j = np.unravel_index(np.argmin(val), val.shape)
        v = int(val[i, j])
        i += r
        j += r
        if i != r:
            A[[r, i]] = A[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            V[:, [r, j]] = V[:, [j, r]]
        pv = p ** v
        unit = int(A[r, r]) // pv
        A[r] = A[r] * pow(unit, -1, q) % q
        below = A[r + 1:, r] // pv
        if below.any():
            A[r + 1:] = (A[r + 1:] - np.outer(below, A[r])) % q
        right = A[r, r + 1:] // pv
        if right.any():
            A[r, r + 1:] = 0
            V[:, r + 1:] = (V[:, r + 1:] - np.outer(V[:, r], right)) % q
        pivots.append(v)
        r += 1
    gens = []
    for k, v in enumerate(pivots):
        gens.append(V[:, k] * p ** (a - v) % q)
    for k in range(r, n):
        gens.append(V[:, k].copy())
    log_size = sum(pivots) + (n - r) * a
    return [g for g in gens if g.any()], log_size


def _crt_coefficient(e: int, q: int) -> int:
    rest = e // q
    return rest * pow(rest % q, -1, q) % e if rest > 1 else 1 % e


def kernel_mod(A, e: int):
    """Generators and size of {x in (Z/e)^n : A x = 0 mod e}.

    ``A`` is an (m, n) integer array.  The generators generate the kernel as
    an abelian group; the size is exact.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if e == 1:
        return [], 1
    if A.shape[0] == 0:
        gens = [np.eye(n, dtype=np.int64)[k] for k in range(n)]
        return gens, e ** n
    gens, size = [], 1
    for p, a in prime_powers(e):
        q = p ** a
        local, log_size = _local_kernel(_dedupe_rows(A % q), p, a)
        c = _crt_coefficient(e, q)
        gens.extend(g * c % e for g in local)
        size *= p ** log_size
    return gens, size


def solve_mod(A, b, e: int):
    """One solution x of A x = b (mod e), or None if the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    n = A.shape[1]
    if e == 1:
        return np.zeros(n, dtype=np.int64)
    aug = np.concatenate([A, (-b % e).reshape(-1, 1)], axis=1)
    x = np.zeros(n, dtype=np.int64)
    for p, a in prime_powers(e):
        q = p ** a
        local, _ = _local_kernel(_dedupe_rows(aug % q), p, a)
        for g in local:
            z = int(g[-1])
            if z % p:
                sol = g[:-1] * pow(z, -1, q) % q
                break
        else:
            return None
        x = (x + sol * _crt_coefficient(e, q)) % e
    return x


def _dedupe_rows(A: np.ndarray) -> np.ndarray:
    A = A[A.any(axis=1)]
    if A.shape[0] > 1:
        A = np.unique(A, axis=0)
    return A


def smith_columns(rows, ncols: int):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns ``(diag, V, Vinv)`` where ``U A V`` is diagonal with entries
    ``diag`` (length ``ncols``; zero past the rank) and ``Vinv = V**-1``.
    The row transform is not tracked.  Pure Python ints; intended for the
    small relation matrices of finite abelian groups.
    """
    A = [list(map(int, r)) for r in rows]
    m, n = len(A), ncols
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_add(j, k, c):  # col_j += c * col_k
        for row in A:
            row[j] += c * row[k]
        for row in V:
            row[j] += c * row[k]
        Vinv[k] = [x - c * y for x, y in zip(Vinv[k], Vinv[j])]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vinv[j], Vinv[k] = Vinv[k], Vinv[j]

    def col_neg(j):
        for row in A:
            row[j] = -row[j]
        for row in V:
            row[j] = -row[j]
        Vinv[j] = [-x for x in Vinv[j]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            col_swap(t, j)
        while True:
            if A[t][t] < 0:
                A[t] = [-x for x in A[t]]
            piv = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    c = A[i][t] // piv
                    A[i] = [x - c * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    c = A[t][j] // piv
                    col_add(j, t, -c)
                    if A[t][j]:
                        col_swap(t, j)
                        done = False
                        break
            if done:
                break
        t += 1
    diag = [abs(A[k][k]) if k < m else 0 for k in range(n)]
    for k in range(min(m, n)):
        if A[k][k] < 0:
            col_neg(k)
    return diag, V, Vinv


def relation_basis(relations, ngens: int):
    """Basis of Z^ngens / <relations> for a finite quotient.

    Returns ``(orders, new_from_old, old_to_new)``: the quotient is
    ``⊕ Z/orders[k]``; new generator k is ``sum_j new_from_old[k][j] * old_j``
    and old coefficient vector c has new coordinates ``c @ old_to_new``
    (reduce column k mod orders[k]).  Trivial factors are dropped.
    """
    diag, V, Vinv = smith_columns(relations, ngens)
    if any(d == 0 for d in diag):
        raise ValueError("relation lattice has infinite quotient")
    keep = [k for k, d in enumerate(diag) if d != 1]
    orders = tuple(diag[k] for k in keep)
    # coefficients of old generators are only defined modulo the quotient's exponent
    L = 1
    for k in keep:
        L = L * diag[k] // gcd(L, diag[k])
    new_from_old = [[Vinv[k][j] % L for j in range(ngens)] for k in keep]
    old_to_new = [[V[j][k] % diag[k] for k in keep] for j in range(ngens)]
    return orders, new_from_old, old_to_new


def enumerate_span(gens, moduli, cap: int) -> np.ndarray:
    """All elements of the subgroup of ⊕ Z/moduli generated by ``gens``.

    Coset extension one generator at a time; raises CapExceeded beyond ``cap``.
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    elems = np.zeros((1, len(moduli)), dtype=np.int64)
    seen = {elems[0].tobytes()}
    for g in gens:
        g = np.asarray(g, dtype=np.int64) % moduli
        layers = [elems]
        step = g.copy()
        while step.tobytes() not in seen:
            layers.append((elems + step) % moduli)
            step = (step + g) % moduli
            if len(layers) * len(elems) > cap:
                raise CapExceeded(f"span exceeds cap {cap}")
        if len(layers) > 1:
            elems = np.concatenate(layers)
            seen = {row.tobytes() for row in elems}
    return elems


def span_size(gens, moduli) -> int:
    """Order of the subgroup of ⊕ Z/moduli generated by ``gens``, by linear algebra."""
    moduli = [int(x) for x in moduli]
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if not gens or not moduli:
        return 1
    e = 1
    for d in moduli:
        e = e * d // gcd(e, d)
    # kernel of Z^k -> G, c -> sum c_i g_i, then |G-span| = e^k / |kernel mod e|
    k = len(gens)
    G = np.array(gens) % np.array(moduli)
    scale = np.array([e // d for d in moduli], dtype=np.int64)
    A = (G * scale).T % e
    _, ker = kernel_mod(A, e)
    return e ** k // ker


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * int(v) // gcd(out, int(v))
    return out


def elementary_divisors(invariants) -> tuple[int, ...]:
    """Canonical prime-power invariants of ⊕ Z/invariants, sorted."""
    out = []
    for d in invariants:
        for p, a in prime_powers(int(d)):
            out.append(p ** a)
    return tuple(sorted(out))


def group_order(invariants) -> int:
    return prod(int(d) for d in invariants)


def subgroup_basis_vectors(gens, moduli):
    """Basis of the subgroup of ⊕ Z/moduli generated by ``gens`` (no enumeration).

    Returns ``(basis, orders)``: the subgroup is the internal direct sum of the
    cyclic groups generated by the rows of ``basis``, of the given orders.
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    G = np.array([np.asarray(g, dtype=np.int64) for g in gens]).reshape(-1, len(moduli)) % moduli
    G = G[G.any(axis=1)] if len(G) else G
    k = len(G)
    if k == 0:
        return np.zeros((0, len(moduli)), dtype=np.int64), ()
    e = lcm_all(moduli.tolist())
    scale = np.array([e // int(d) for d in moduli], dtype=np.int64)
    ker, _ = kernel_mod((G * scale).T % e, e)
    rels = [list(map(int, g)) for g in ker] + [[e * int(i == j) for j in range(k)] for i in range(k)]
    orders, nfo, _ = relation_basis(rels, k)
    if not orders:
        return np.zeros((0, len(moduli)), dtype=np.int64), ()
    basis = (np.array(nfo, dtype=np.int64).reshape(len(orders), k) @ G) % moduli
    return basis, orders
