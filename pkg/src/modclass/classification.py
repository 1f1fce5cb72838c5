"""Membership in the classes C1..C6, injectivity, and the summand-sum witness."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ChainViolation, PreconditionViolated
from .homs import HomSpace, are_isomorphic, retraction
from .injectivity import injective_hull, is_injective
from .lattice import all_submodules, composition_factors, composition_length, is_uniform, socle
from .module import FiniteModule, ModuleHom, Submodule, direct_sum, quotient


class SummandData:
    """The submodule lattice of M annotated with direct-summand information."""

    def __init__(self, M: FiniteModule):
        self.M = M
        self.subs = all_submodules(M)
        self.index = {A.key: k for k, A in enumerate(self.subs)}
        soc = socle(M).mask
        self.soc_cols = np.flatnonzero(soc)
        self.soc_masks = np.array([A.mask[self.soc_cols] for A in self.subs], dtype=np.float32)
        self.sizes = np.array([A.size for A in self.subs], dtype=np.int64)
        self.complement = self._complements()

    def _complements(self) -> np.ndarray:
        """complement[k] = index of the first B (canonical order) with A_k ⊕ B = M, else -1."""
        n = len(self.subs)
        out = np.full(n, -1, dtype=np.int64)
        groups: dict[int, np.ndarray] = {}
        for s in np.unique(self.sizes):
            groups[int(s)] = np.flatnonzero(self.sizes == s)
        m = self.M.size
        for s, idx in groups.items():
            other = groups.get(m // s) if m % s == 0 else None
            if other is None:
                continue
            # A ∩ B = 0 iff their socles meet only in 0
            meet = self.soc_masks[idx] @ self.soc_masks[other].T
            ok = meet < 1.5
            has = ok.any(axis=1)
            first = np.argmax(ok, axis=1)
            out[idx[has]] = other[first[has]]
        return out

    @cached_property
    def is_summand(self) -> np.ndarray:
        return self.complement >= 0

    @cached_property
    def summands(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.is_summand)]

    @cached_property
    def indecomposable_summands(self) -> list[int]:
        """Nonzero summands containing no smaller nonzero summand of M."""
        out = []
        S = self.summands
        for k in S:
            A = self.subs[k]
            if A.is_zero:
                continue
            if not any(j != k and 1 < self.sizes[j] < A.size and self.subs[j] <= A for j in S):
                out.append(k)
        return out

    def soc_key(self, k: int) -> bytes:
        return self.soc_masks[k].tobytes()

    def sum_key(self, a: int, b: int) -> bytes:
        M = self.M
        A, B = self.subs[a], self.subs[b]
        elems = M.index(M.coords[A.members][:, None, :] + M.coords[B.members][None, :, :])
        mask = np.zeros(M.size, dtype=bool)
        mask[elems.reshape(-1)] = True
        return Submodule(M, mask).key


def summand_data(M: FiniteModule) -> SummandData:
    cache = M.__dict__.setdefault("_lattice_cache", {})
    if "summands" not in cache:
        cache["summands"] = SummandData(M)
    return cache["summands"]


def direct_summands(M: FiniteModule) -> list[Submodule]:
    D = summand_data(M)
    return [D.subs[k] for k in D.summands]


# ---------------------------------------------------------------- C1

def c1_failure(M: FiniteModule) -> Submodule | None:
    """A submodule essential in no direct summand, or None."""
    D = summand_data(M)
    by_soc: dict[bytes, list[int]] = {}
    for k in D.summands:
        by_soc.setdefault(D.soc_key(k), []).append(k)
    for k, A in enumerate(D.subs):
        if D.is_summand[k]:
            continue
        # A ⊆ U essential  ⇔  A ⊆ U and soc(U) = soc(A)
        if not any(A <= D.subs[u] for u in by_soc.get(D.soc_key(k), ())):
            return A
    return None


def is_C1(M: FiniteModule) -> bool:
    """Every submodule is essential in a direct summand."""
    return c1_failure(M) is None


# ---------------------------------------------------------------- C2

def _cheap_invariant(A: Submodule):
    N = A.module()[0]
    return (N.size, N.elementary_divisors, composition_factors(N), composition_factors(socle(N).module()[0]))


def c2_failure(M: FiniteModule) -> tuple[Submodule, Submodule] | None:
    """(A, U): A isomorphic to the summand U but not itself a summand, or None."""
    D = summand_data(M)
    reps: dict[tuple, list[int]] = {}
    for k in D.summands:
        inv = _cheap_invariant(D.subs[k])
        bucket = reps.setdefault(inv, [])
        if not any(are_isomorphic(D.subs[j].module()[0], D.subs[k].module()[0]).isomorphic for j in bucket):
            bucket.append(k)
    sizes = {inv[0] for inv in reps}
    for k, A in enumerate(D.subs):
        if D.is_summand[k] or A.size not in sizes:
            continue
        inv = _cheap_invariant(A)
        for j in reps.get(inv, ()):
            if are_isomorphic(A.module()[0], D.subs[j].module()[0]).isomorphic:
                return A, D.subs[j]
    return None


def is_C2(M: FiniteModule) -> bool:
    """Every submodule isomorphic to a direct summand is a direct summand."""
    return c2_failure(M) is None


# ---------------------------------------------------------------- C3

def c3_failure(M: FiniteModule) -> tuple[Submodule, Submodule] | None:
    """Summands A, B with A ∩ B = 0 and A + B not a summand, or None.

    B may be taken indecomposable: if A ⊕ B1 is a summand and B = B1 ⊕ B2,
    then (A ⊕ B1) ∩ B2 = 0, so the general case follows by induction.
    """
    D = summand_data(M)
    S = np.array(D.summands, dtype=np.int64)
    summand_keys = {D.subs[k].key for k in D.summands}
    for b in D.indecomposable_summands:
        meet = D.soc_masks[S] @ D.soc_masks[b]
        for a in S[meet < 1.5]:
            a = int(a)
            if D.subs[a].is_zero or D.sizes[a] * D.sizes[b] == M.size:
                continue  # A ⊕ B is all of M
            if D.sum_key(a, b) not in summand_keys:
                return D.subs[a], D.subs[b]
    return None


def is_C3(M: FiniteModule) -> bool:
    """The sum of two direct summands meeting in 0 is a direct summand."""
    return c3_failure(M) is None


# ---------------------------------------------------------------- C6

def quasi_injective_failure(M: FiniteModule) -> Submodule | None:
    """A submodule N with a map N -> M that does not extend to M, or None.

    Restriction End(M) -> Hom(N, M) has kernel Hom(M/N, M), so every map
    extends iff |Hom(N, M)| · |Hom(M/N, M)| = |End(M)|.
    """
    end = HomSpace(M, M).count
    for N in all_submodules(M):
        if N.is_zero or N.is_whole:
            continue
        Q, _ = quotient(M, N)
        if HomSpace(N.module()[0], M).count * HomSpace(Q, M).count != end:
            return N
    return None


def is_fully_invariant_in_hull(M: FiniteModule) -> bool:
    """Is the image of M in E(M) stable under every endomorphism of E(M)?"""
    H = injective_hull(M)
    E, emb = H.hull, H.embedding
    image = emb.image()
    gens = np.array(image.additive_generators, dtype=np.int64)
    for h in HomSpace(E, E).generators:
        if not image.mask[h.apply(gens)].all():
            return False
    return True


def is_quasi_injective(M: FiniteModule, method: str = "extension") -> bool:
    """Every map from a submodule of M into M extends to an endomorphism of M.

    ``method``: "extension" (lattice counting), "hull" (fully invariant in
    the injective hull) or "both" (asserts agreement).
    """
    if M.size == 1:
        return True
    if method == "hull":
        return is_fully_invariant_in_hull(M)
    primary = quasi_injective_failure(M) is None
    if method == "both":
        other = is_fully_invariant_in_hull(M)
        assert primary == other, "quasi-injectivity tests disagree"
    return primary


# ---------------------------------------------------------------- report

FLAG_ORDER = ("injective", "C1", "C2", "C3", "C4", "C5", "C6", "uniform")


@dataclass
class ClassificationReport:
    size: int
    invariants: tuple
    flags: dict
    length: int
    socle_size: int
    summands: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def fingerprint(self) -> dict:
        return {"size": self.size, "invariants": list(self.invariants)}

    def to_json(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "flags": {k: bool(self.flags[k]) for k in FLAG_ORDER},
            "length": self.length,
            "socle_size": self.socle_size,
            "summands": self.summands,
            "witnesses": self.witnesses,
        }


def check_chain(flags: dict):
    """Validate injective ⇒ C6 ⇒ C5 ⇒ C4 ⇒ C1 and C2 ⇒ C3."""
    implications = [
        ("injective", "C6"),
        ("C6", "C5"),
        ("C5", "C4"),
        ("C4", "C1"),
        ("C5", "C2"),
        ("C4", "C3"),
        ("C2", "C3"),
    ]
    for a, b in implications:
        if flags[a] and not flags[b]:
            raise ChainViolation(f"{a} holds but {b} fails")
    if flags["C5"] != (flags["C1"] and flags["C2"]) or flags["C4"] != (flags["C1"] and flags["C3"]):
        raise ChainViolation("C4/C5 inconsistent with C1, C2, C3")


def classify(M: FiniteModule, quasi_injective_method: str = "extension", shortcuts: bool = True) -> ClassificationReport:
    """Decide injectivity, C1, C2, C3, C6 directly; C4 = C1 ∧ C3, C5 = C1 ∧ C2.

    With ``shortcuts``, a semisimple M gets every class at once: each
    submodule is a summand, so all maps from submodules extend.
    """
    from .decomposition import decompose
    from .lattice import is_semisimple

    witnesses = {}
    easy = shortcuts and is_semisimple(M)
    f1 = None if easy else c1_failure(M)
    f2 = None if easy else c2_failure(M)
    f3 = None if easy else c3_failure(M)
    if f1 is not None:
        witnesses["C1"] = {"submodule": f1.members.tolist()}
    if f2 is not None:
        witnesses["C2"] = {"submodule": f2[0].members.tolist(), "isomorphic_summand": f2[1].members.tolist()}
    if f3 is not None:
        witnesses["C3"] = {"A": f3[0].members.tolist(), "B": f3[1].members.tolist()}
    flags = {
        "injective": is_injective(M),
        "C1": f1 is None,
        "C2": f2 is None,
        "C3": f3 is None,
        "C6": True if easy else is_quasi_injective(M, quasi_injective_method),
        "uniform": is_uniform(M) if M.size > 1 else False,
    }
    flags["C4"] = flags["C1"] and flags["C3"]
    flags["C5"] = flags["C1"] and flags["C2"]
    check_chain(flags)
    D = decompose(M, with_idempotents=False)
    return ClassificationReport(
        size=M.size,
        invariants=M.invariants,
        flags=flags,
        length=composition_length(M),
        socle_size=socle(M).size,
        summands=D.to_json(),
        witnesses=witnesses,
    )


# ---------------------------------------------------------------- A, B witness

@dataclass
class KeyTrickWitness:
    module: FiniteModule
    A: Submodule
    B: Submodule
    isomorphic: bool
    A_summand: bool
    B_summand: bool
    disjoint: bool
    sum_not_summand: bool

    @property
    def passed(self) -> bool:
        return self.isomorphic and self.A_summand and self.B_summand and self.disjoint and self.sum_not_summand

    def to_json(self) -> dict:
        return {
            "module_size": self.module.size,
            "A_isomorphic_to_B": self.isomorphic,
            "A_is_summand": self.A_summand,
            "B_is_summand": self.B_summand,
            "A_meet_B_zero": self.disjoint,
            "A_plus_B_not_summand": self.sum_not_summand,
            "passed": self.passed,
            "scope": "certifies that N ⊕ E(N) is not C3; absence of preenvelopes is not checked here",
        }


def key_trick_witness(N: FiniteModule) -> KeyTrickWitness:
    """For non-injective N: in M = N ⊕ E(N), A = N ⊕ 0 and B = {(n, e(n))} are
    isomorphic summands meeting in 0 whose sum is not a summand."""
    if N.size == 1 or is_injective(N):
        raise PreconditionViolated("N must be a non-injective module")
    H = injective_hull(N)
    M, (i1, i2), _ = direct_sum(N, H.hull)
    A = i1.image()
    graph = i1 + i2.compose(H.embedding)
    B = graph.image()
    AB = A + B
    return KeyTrickWitness(
        module=M,
        A=A,
        B=B,
        isomorphic=graph.is_injective and B.size == A.size,
        A_summand=retraction(A) is not None,
        B_summand=retraction(B) is not None,
        disjoint=bool((A.mask & B.mask).sum() == 1),
        sum_not_summand=retraction(AB) is None,
    )
