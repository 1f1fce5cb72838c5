"""Krull–Schmidt decompositions driven by endomorphisms."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, HomSpaceTooLarge, LatticeTooLarge
from .homs import HomSpace, are_isomorphic, fingerprint, retraction, solve_hom
from .lattice import (
    additive_span,
    all_submodules,
    composition_length,
    is_uniform,
    radical,
    socle,
)
from .module import FiniteModule, ModuleHom, Submodule, quotient


def _power(F: np.ndarray, k: int, d: np.ndarray) -> np.ndarray:
    out = np.eye(F.shape[0], dtype=np.int64) % d
    base = F.copy()
    while k:
        if k & 1:
            out = out @ base % d
        base = base @ base % d
        k >>= 1
    return out


def _image_kernel(S: FiniteModule, G: np.ndarray) -> tuple[Submodule, Submodule]:
    h = ModuleHom(S, S, G)
    return h.image(), h.kernel()


def _is_local(S: FiniteModule) -> bool:
    top, _ = quotient(S, radical(S))
    return composition_length(top) == 1


def _has_simple_socle(S: FiniteModule) -> bool:
    return composition_length(socle(S).module()[0]) == 1


def _split_random(S: FiniteModule, rng, tries: int):
    """Fitting's lemma: for f in End(S), S = im f^l ⊕ ker f^l with l = length(S)."""
    H = HomSpace(S, S)
    l = max(1, composition_length(S))
    for _ in range(tries):
        G = _power(H.random(rng).matrix, l, S.d)
        im, ker = _image_kernel(S, G)
        if 1 < im.size < S.size:
            return im, ker
    return None


def _split_exhaustive(S: FiniteModule):
    H = HomSpace(S, S)
    mats = H.element_matrices()
    idem = ((mats @ mats) % S.d == mats).all(axis=(1, 2))
    eye = np.eye(S.rank, dtype=np.int64) % S.d
    idem &= mats.any(axis=(1, 2)) & ~(mats == eye).all(axis=(1, 2))
    if not idem.any():
        return None
    return _image_kernel(S, mats[int(np.argmax(idem))])


def _split_by_lattice(S: FiniteModule):
    for A in all_submodules(S):
        if A.is_zero or A.is_whole:
            continue
        r = retraction(A)
        if r is not None:
            return A, r.kernel()
    return None


def find_split(S: FiniteModule, rng=None, tries: int = 64):
    """A pair (A, B) of nonzero submodules with S = A ⊕ B, or None if S is indecomposable."""
    if S.size == 1:
        raise ValueError("the zero module has no decomposition")
    if _has_simple_socle(S) or _is_local(S):
        return None
    rng = np.random.default_rng(0) if rng is None else rng
    found = _split_random(S, rng, tries)
    if found is not None:
        return found
    try:
        return _split_exhaustive(S)
    except HomSpaceTooLarge:
        pass
    try:
        return _split_by_lattice(S)
    except LatticeTooLarge as exc:
        raise CapExceeded(f"cannot certify indecomposability of a module of size {S.size}") from exc


def is_indecomposable(M: FiniteModule) -> bool:
    """True iff End(M) has no idempotents besides 0 and 1."""
    if M.size == 1:
        raise ValueError("the zero module is not indecomposable")
    return find_split(M) is None


@dataclass
class Decomposition:
    parent: FiniteModule
    pieces: list[Submodule]                  # internal summands, all copies
    classes: list[tuple[int, int]]           # (index of representative piece, multiplicity)
    piece_class: list[int]                   # class number of each piece
    idempotents: list[ModuleHom] = field(default_factory=list)

    @property
    def summands(self) -> list[tuple[Submodule, int]]:
        return [(self.pieces[i], m) for i, m in self.classes]

    def modules(self) -> list[tuple[FiniteModule, int]]:
        return [(self.pieces[i].module()[0], m) for i, m in self.classes]

    @property
    def count(self) -> int:
        return len(self.pieces)

    def to_json(self) -> list[dict]:
        return [
            {"size": P.size, "invariants": list(P.module()[0].invariants), "multiplicity": m}
            for P, m in self.summands
        ]


def _lift(A: Submodule, inner: Submodule) -> Submodule:
    """A submodule of A's module, viewed inside A's parent."""
    _, inc = A.module()
    gens = inc.apply(inner.as_module[2]) if not inner.is_zero else []
    return additive_span(A.parent, gens)


def _projections(M: FiniteModule, pieces: list[Submodule]) -> list[ModuleHom]:
    bases = [P.as_module[1].matrix for P in pieces]
    out = []
    for k, P in enumerate(pieces):
        cons = []
        for j, B in enumerate(bases):
            for row in B:
                cons.append((row, row if j == k else np.zeros_like(row)))
        h = solve_hom(M, M, cons)
        assert h is not None, "pieces do not form a direct sum"
        out.append(h)
    return out


def _order_key(S: FiniteModule):
    fp = fingerprint(S)
    return (S.size, S.invariants, repr(fp))


def decompose(M: FiniteModule, seed: int = 0, with_idempotents: bool = True) -> Decomposition:
    """Split M into indecomposables, merge isomorphic pieces, order canonically."""
    rng = np.random.default_rng(seed)
    if M.size == 1:
        return Decomposition(M, [], [], [], [])
    todo = [Submodule(M, np.ones(M.size, dtype=bool))]
    done: list[Submodule] = []
    while todo:
        P = todo.pop()
        S, _ = P.module()
        split = find_split(S, rng)
        if split is None:
            done.append(P)
        else:
            todo.extend(_lift(P, X) for X in split)
    mods = [P.module()[0] for P in done]
    keys = [_order_key(S) for S in mods]
    order = sorted(range(len(done)), key=lambda k: (keys[k], done[k].sort_key()))
    done = [done[k] for k in order]
    mods = [mods[k] for k in order]
    keys = [keys[k] for k in order]
    reps: list[int] = []
    piece_class = []
    for k, S in enumerate(mods):
        for c, r in enumerate(reps):
            if keys[r] == keys[k] and are_isomorphic(mods[r], S).isomorphic:
                piece_class.append(c)
                break
        else:
            piece_class.append(len(reps))
            reps.append(k)
    classes = [(r, piece_class.count(c)) for c, r in enumerate(reps)]
    idem = _projections(M, done) if with_idempotents else []
    return Decomposition(M, done, classes, piece_class, idem)


def same_decomposition_type(D1: Decomposition, D2: Decomposition) -> bool:
    """Do two decompositions have the same multiset of isomorphism classes?"""
    if sorted(m for _, m in D1.classes) != sorted(m for _, m in D2.classes):
        return False
    unmatched = list(D2.modules())
    for S, m in D1.modules():
        for k, (T, n) in enumerate(unmatched):
            if m == n and are_isomorphic(S, T).isomorphic:
                unmatched.pop(k)
                break
        else:
            return False
    return True


@dataclass
class UniformDecompositionReport:
    summands: list[dict]
    is_c1: bool
    all_uniform: bool

    @property
    def consistent(self) -> bool:
        return (not self.is_c1) or self.all_uniform

    def to_json(self) -> dict:
        return {
            "summands": self.summands,
            "is_C1": self.is_c1,
            "all_uniform": self.all_uniform,
            "consistent": self.consistent,
        }


def check_uniform_decomposition(M: FiniteModule, is_c1=None) -> UniformDecompositionReport:
    """Decompose M and test each summand for uniformity; C1 modules must give only uniform summands."""
    if is_c1 is None:
        from .classification import is_C1 as is_c1
    D = decompose(M, with_idempotents=False)
    rows = []
    for S, m in D.modules():
        rows.append({"size": S.size, "invariants": list(S.invariants), "multiplicity": m, "uniform": is_uniform(S)})
    return UniformDecompositionReport(rows, bool(is_c1(M)), all(r["uniform"] for r in rows))
