"""Hom spaces, extension problems and isomorphism tests.

Hom_R(M, N) is the solution set of a linear system: unknown images of M's
basis in N's coordinates, subject to order relations and equivariance for
an additive basis of R.  Unknowns live in Z/e (e = exponent of N) and an
equation on coordinate j, which holds mod n_j, is scaled by e/n_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config
from .errors import HomSpaceTooLarge
from .linalg import enumerate_span, kernel_mod, solve_mod, subgroup_basis_vectors
from .module import FiniteModule, ModuleHom, Submodule


def _hom_equations(M: FiniteModule, N: FiniteModule):
    """Homogeneous system whose solutions mod e are Hom(M, N) plus the trivial lift."""
    tM, tN = M.rank, N.rank
    e = N.exponent
    scale = np.tile(np.array([e // n for n in N.invariants], dtype=np.int64), tM)
    blocks = [np.diag(scale * np.repeat(M.d, tN))]
    eyeN = np.eye(tN, dtype=np.int64)
    eyeM = np.eye(tM, dtype=np.int64)
    for r in M.ring.additive_basis:
        block = np.kron(M.act[r], eyeN) - np.kron(eyeM, N.act[r].T)
        blocks.append(block * scale[:, None])
    return np.concatenate(blocks) % e, scale, e


def _constraint_rows(M, N, constraints, scale_j):
    rows, rhs = [], []
    tN = N.rank
    for x, y in constraints:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        for j in range(tN):
            row = np.zeros(M.rank * tN, dtype=np.int64)
            row[j::tN] = x * scale_j[j]
            rows.append(row)
            rhs.append(int(y[j]) * int(scale_j[j]))
    return rows, rhs


class HomSpace:
    """Hom_R(M, N) as an abelian group: a basis, its order, and enumeration on demand."""

    def __init__(self, M: FiniteModule, N: FiniteModule):
        M.check_same_ring(N)
        self.dom, self.cod = M, N
        if M.rank == 0 or N.rank == 0:
            self.basis, self.orders, self.count = [], (), 1
            return
        A, scale, e = _hom_equations(M, N)
        gens, size = kernel_mod(A, e)
        trivial = 1
        for n in N.invariants:
            trivial *= (e // n) ** M.rank
        self.count = size // trivial
        moduli = np.tile(N.d, M.rank)
        vecs, orders = subgroup_basis_vectors(gens, moduli)
        self.orders = tuple(int(o) for o in orders)
        self.basis = [ModuleHom(M, N, v.reshape(M.rank, N.rank)) for v in vecs]
        size_check = 1
        for o in self.orders:
            size_check *= o
        assert size_check == self.count, "hom basis inconsistent with kernel count"

    @property
    def generators(self) -> list[ModuleHom]:
        return self.basis

    def __len__(self):
        return self.count

    def __iter__(self):
        return iter(self.elements())

    def elements(self, cap: int | None = None) -> list[ModuleHom]:
        cap = config.caps().hom if cap is None else cap
        if self.count > cap:
            raise HomSpaceTooLarge(f"|Hom| = {self.count} exceeds cap {cap}")
        return [ModuleHom(self.dom, self.cod, m) for m in self.element_matrices(cap)]

    def element_matrices(self, cap: int | None = None) -> np.ndarray:
        cap = config.caps().hom if cap is None else cap
        if self.count > cap:
            raise HomSpaceTooLarge(f"|Hom| = {self.count} exceeds cap {cap}")
        M, N = self.dom, self.cod
        if not self.basis:
            return np.zeros((1, M.rank, N.rank), dtype=np.int64)
        moduli = np.tile(N.d, M.rank)
        flat = enumerate_span([h.matrix.reshape(-1) for h in self.basis], moduli, cap)
        order = np.lexsort(flat.T[::-1])
        return flat[order].reshape(-1, M.rank, N.rank)

    def random(self, rng: np.random.Generator) -> ModuleHom:
        mat = np.zeros((self.dom.rank, self.cod.rank), dtype=np.int64)
        for h, o in zip(self.basis, self.orders):
            mat = mat + int(rng.integers(o)) * h.matrix
        return ModuleHom(self.dom, self.cod, mat)


def hom_space(M: FiniteModule, N: FiniteModule) -> HomSpace:
    return HomSpace(M, N)


def solve_hom(M: FiniteModule, N: FiniteModule, constraints) -> ModuleHom | None:
    """A homomorphism h: M -> N with h(x) = y for each (x_coords, y_coords) pair, or None."""
    M.check_same_ring(N)
    if N.rank == 0:
        return ModuleHom.zero(M, N)
    if M.rank == 0:
        ok = all(not np.asarray(y).any() for _, y in constraints)
        return ModuleHom.zero(M, N) if ok else None
    A, scale, e = _hom_equations(M, N)
    scale_j = np.array([e // n for n in N.invariants], dtype=np.int64)
    rows, rhs = _constraint_rows(M, N, constraints, scale_j)
    b = np.zeros(len(A), dtype=np.int64)
    if rows:
        A = np.concatenate([A, np.array(rows)]) % e
        b = np.concatenate([b, np.array(rhs, dtype=np.int64)]) % e
    x = solve_mod(A, b, e)
    if x is None:
        return None
    h = ModuleHom(M, N, x.reshape(M.rank, N.rank))
    return h


@dataclass
class Extension:
    exists: bool
    extension: ModuleHom | None = None

    def __bool__(self):
        return self.exists


def extension_exists(f: ModuleHom, A: Submodule) -> Extension:
    """Does f: A -> T extend along A ⊆ M to some h: M -> T?"""
    M = A.parent
    sub, inc, basis_idx, _ = A.as_module
    if f.dom is not sub:
        raise ValueError("f must be defined on the module of A (A.module()[0])")
    constraints = [(inc.matrix[k], f.matrix[k]) for k in range(sub.rank)]
    h = solve_hom(M, f.cod, constraints)
    return Extension(h is not None, h)


def restrict(h: ModuleHom, A: Submodule) -> ModuleHom:
    """h restricted to the submodule A of its domain, as a map on A's module."""
    sub, inc = A.module()
    return h.compose(inc)


def retraction(A: Submodule) -> ModuleHom | None:
    """r: M -> A with r restricted to A the identity, if A is a direct summand."""
    sub, inc, _, _ = A.as_module
    eye = np.eye(sub.rank, dtype=np.int64)
    return solve_hom(A.parent, sub, [(inc.matrix[k], eye[k]) for k in range(sub.rank)])


# ---------------------------------------------------------------- isomorphism

def _bijective_matrices(M: FiniteModule, N: FiniteModule, mats: np.ndarray) -> np.ndarray:
    """Flags for a batch of hom matrices: is each a bijection M -> N?"""
    if M.size != N.size:
        return np.zeros(len(mats), dtype=bool)
    if M.size == 1:
        return np.ones(len(mats), dtype=bool)
    out = np.zeros(len(mats), dtype=bool)
    batch = max(1, 2_000_000 // max(M.size, 1))
    coords = M.coords
    for start in range(0, len(mats), batch):
        chunk = mats[start:start + batch]
        images = N.index(np.einsum("xi,bij->bxj", coords, chunk))
        images.sort(axis=1)
        out[start:start + batch] = (np.diff(images, axis=1) != 0).all(axis=1)
    return out


@dataclass
class IsoResult:
    isomorphic: bool
    witness: ModuleHom | None = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def fingerprint(M: FiniteModule) -> tuple:
    """Cheap isomorphism invariant: size, group type, socle/radical sizes, length, factors, |End|."""
    from .lattice import composition_factors, radical, socle

    return (
        M.size,
        M.elementary_divisors,
        socle(M).size,
        radical(M).size,
        composition_factors(M),
        composition_factors(socle(M).module()[0]),
        HomSpace(M, M).count,
    )


def are_isomorphic(M: FiniteModule, N: FiniteModule, *, seed: int = 0, samples: int = 200) -> IsoResult:
    """Decide M ≅ N; a positive answer always carries a bijective witness."""
    M.check_same_ring(N)
    if M.size != N.size or M.elementary_divisors != N.elementary_divisors:
        return IsoResult(False, reason="additive groups differ")
    if M.size == 1:
        return IsoResult(True, ModuleHom.zero(M, N), "zero modules")
    fM, fN = fingerprint(M), fingerprint(N)
    if fM != fN:
        return IsoResult(False, reason="fingerprints differ")
    H = HomSpace(M, N)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        h = H.random(rng)
        if _bijective_matrices(M, N, h.matrix[None])[0]:
            return IsoResult(True, h, "random search")
    mats = H.element_matrices()
    flags = _bijective_matrices(M, N, mats)
    if flags.any():
        return IsoResult(True, ModuleHom(M, N, mats[int(np.argmax(flags))]), "exhaustive search")
    return IsoResult(False, reason="no bijective homomorphism (exhaustive)")
