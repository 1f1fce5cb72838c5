"""Bounded module corpora: every direct sum of known indecomposables up to a size
bound, with class membership decided lazily and shared across summands."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .decomposition import is_indecomposable
from .errors import CapExceeded, LatticeTooLarge
from .homs import are_isomorphic, fingerprint
from .injectivity import is_injective, simple_modules, uniform_modules
from .lattice import all_submodules, composition_length
from .module import FiniteModule, direct_power, direct_sum, quotient, regular_module
from .ring import FiniteRing

CLASS_IDS = ("injective", "C1", "C2", "C3", "C4", "C5", "C6")


def _order_key(N: FiniteModule):
    return (N.size, N.invariants, repr(fingerprint(N)))


def indecomposable_quotients(R: FiniteRing, g: int, bound: int) -> list[FiniteModule]:
    """Indecomposable quotients of R^g of size ≤ bound.

    An indecomposable summand of a quotient of R^g is itself a quotient of
    R^g, so this also covers summands of quotients.
    """
    F = direct_power(regular_module(R), g)
    subs = all_submodules(F)
    wanted = [k for k, K in enumerate(subs) if not K.is_whole and F.size // K.size <= bound]
    flags = _indecomposable_quotient_flags(F, subs, wanted)
    return [quotient(F, subs[k])[0] for k, ok in zip(wanted, flags) if ok]


def _indecomposable_quotient_flags(F: FiniteModule, subs, wanted) -> list[bool]:
    """F/K is decomposable iff there are A, B ⊋ K with A ∩ B = K and A + B = F."""
    if len(subs) > 6000:
        return [is_indecomposable(quotient(F, subs[k])[0]) for k in wanted]
    masks = np.array([S.mask for S in subs], dtype=np.float32)
    sizes = np.array([S.size for S in subs], dtype=np.int64)
    meet = np.rint(masks @ masks.T).astype(np.int64)  # |A ∩ B|
    out = []
    for k in wanted:
        above = np.flatnonzero((meet[k] == sizes[k]) & (sizes > sizes[k]) & (sizes < F.size))
        sub = meet[np.ix_(above, above)]
        prod = sizes[above][:, None] * sizes[above][None, :]
        split = (sub == sizes[k]) & (prod == F.size * sizes[k])
        out.append(not split.any())
    return out


def _dedupe(mods):
    out, prints = [], []
    for N in mods:
        fp = fingerprint(N)
        if not any(fp == q and are_isomorphic(N, T).isomorphic for T, q in zip(out, prints)):
            out.append(N)
            prints.append(fp)
    return out


@dataclass
class CorpusEntry:
    counts: tuple[int, ...]
    size: int

    def label(self, names) -> str:
        parts = []
        for n, c in zip(names, self.counts):
            if c:
                parts.append(n if c == 1 else f"{n}^{c}")
        return "+".join(parts) or "0"


class ModuleCorpus:
    """All nonzero direct sums of pool indecomposables with size ≤ bound."""

    def __init__(self, R: FiniteRing, bound: int, generators: int = 2):
        self.ring = R
        self.bound = bound
        self.requested_generators = generators
        pool = [N for N in uniform_modules(R) if N.size <= bound]
        g_used = 0
        for g in range(1, generators + 1):
            try:
                pool.extend(indecomposable_quotients(R, g, bound))
            except (LatticeTooLarge, CapExceeded):
                break
            g_used = g
        self.generators = g_used
        self.pool = sorted(_dedupe(pool), key=_order_key)
        simple_sizes = {S.size for S in simple_modules(R)}
        self.pool_simple = [N.size in simple_sizes and composition_length(N) == 1 for N in self.pool]
        self.pool_injective = [is_injective(N) for N in self.pool]
        for k, N in enumerate(self.pool):
            if N.name is None or not N.name.startswith(("S", "E(")):
                N.name = f"X{k + 1}"
        self.names = [f"M{k + 1}" for k in range(len(self.pool))]
        self.entries = self._enumerate()
        self.index = {e.counts: k for k, e in enumerate(self.entries)}
        self._modules: dict[int, FiniteModule] = {}
        self._member: dict[tuple[str, int], bool | None] = {}

    def _enumerate(self) -> list[CorpusEntry]:
        sizes = [N.size for N in self.pool]
        out = []

        def rec(i, counts, size):
            if i == len(sizes):
                if size > 1:
                    out.append(CorpusEntry(tuple(counts), size))
                return
            c = 0
            s = size
            while s <= self.bound:
                rec(i + 1, counts + [c], s)
                c += 1
                s *= sizes[i]

        rec(0, [], 1)
        out.sort(key=lambda e: (e.size, sum(e.counts), tuple(-c for c in e.counts)))
        return out

    def __len__(self):
        return len(self.entries)

    def module(self, k: int) -> FiniteModule:
        if k not in self._modules:
            e = self.entries[k]
            parts = [N for N, c in zip(self.pool, e.counts) for _ in range(c)]
            M = parts[0] if len(parts) == 1 else direct_sum(*parts)[0]
            if len(parts) > 1:
                M.name = e.label(self.names)
            self._modules[k] = M
        return self._modules[k]

    def modules(self) -> list[FiniteModule]:
        return [self.module(k) for k in range(len(self.entries))]

    def label(self, k: int) -> str:
        return self.entries[k].label(self.names)

    def lookup(self, counts) -> int | None:
        return self.index.get(tuple(counts))

    def union(self, a: int, b: int) -> int | None:
        ca, cb = self.entries[a].counts, self.entries[b].counts
        return self.lookup(x + y for x, y in zip(ca, cb))

    # -- membership
    def is_injective(self, k: int) -> bool:
        return all(inj for inj, c in zip(self.pool_injective, self.entries[k].counts) if c)

    def is_semisimple(self, k: int) -> bool:
        return all(s for s, c in zip(self.pool_simple, self.entries[k].counts) if c)

    def _predicate(self, class_id: str):
        from . import classification as cl

        return {
            "C1": cl.is_C1,
            "C2": cl.is_C2,
            "C3": cl.is_C3,
            "C6": lambda M: cl.is_quasi_injective(M, "extension"),
        }[class_id]

    def member(self, class_id: str, k: int) -> bool | None:
        """Is entry k in the class?  None when the direct check exceeds a cap."""
        if class_id not in CLASS_IDS:
            raise ValueError(f"unknown class {class_id!r}")
        if class_id == "injective":
            return self.is_injective(k)
        if class_id == "C4":
            a, b = self.member("C1", k), self.member("C3", k)
            return None if a is None or b is None else a and b
        if class_id == "C5":
            a, b = self.member("C1", k), self.member("C2", k)
            return None if a is None or b is None else a and b
        key = (class_id, k)
        if key in self._member:
            return self._member[key]
        e = self.entries[k]
        if self.is_injective(k) or self.is_semisimple(k):
            verdict = True
        else:
            verdict = None
            # every class is closed under direct summands
            for j, c in enumerate(e.counts):
                if c:
                    counts = list(e.counts)
                    counts[j] -= 1
                    sub = self.lookup(counts)
                    if sub is not None and self.member(class_id, sub) is False:
                        verdict = False
                        break
            if verdict is None:
                try:
                    verdict = bool(self._predicate(class_id)(self.module(k)))
                except CapExceeded:
                    verdict = None
        self._member[key] = verdict
        return verdict

    def members(self, class_id: str) -> list[int]:
        return [k for k in range(len(self.entries)) if self.member(class_id, k)]

    def undecided(self, class_id: str) -> list[int]:
        return [k for k in range(len(self.entries)) if self.member(class_id, k) is None]

    def describe(self) -> dict:
        return {
            "bound": self.bound,
            "generator_bound": self.generators,
            "requested_generator_bound": self.requested_generators,
            "pool": [
                {"name": n, "size": N.size, "length": composition_length(N), "injective": inj, "simple": s}
                for n, N, inj, s in zip(self.names, self.pool, self.pool_injective, self.pool_simple)
            ],
            "entries": len(self.entries),
        }


def module_corpus(R: FiniteRing, bound: int, generators: int = 2) -> ModuleCorpus:
    """Cached corpus for (R, bound, generator bound)."""
    key = ("corpus", bound, generators)
    if key not in R._cache:
        R._cache[key] = ModuleCorpus(R, bound, generators)
    return R._cache[key]


@dataclass
class ClosureReport:
    class_id: str
    bound: int
    closed: bool
    counterexample: tuple[int, int] | None
    labels: tuple[str, str] | None
    checked_pairs: int
    undecided: int

    def to_json(self) -> dict:
        return {
            "class": self.class_id,
            "bound": self.bound,
            "closed": self.closed,
            "counterexample": list(self.labels) if self.labels else None,
            "checked_pairs": self.checked_pairs,
            "undecided_sums": self.undecided,
        }


def closure_check(class_id: str, R: FiniteRing, bound: int, generators: int = 2) -> ClosureReport:
    """Is the class closed under direct sums of two members, within the bound?

    Pairs are scanned by increasing size of the sum, so the reported
    counterexample is a smallest one.
    """
    C = module_corpus(R, bound, generators)
    mem = C.members(class_id)
    pairs = []
    for a, b in itertools.combinations_with_replacement(mem, 2):
        u = C.union(a, b)
        if u is not None:
            pairs.append((C.entries[u].size, a, b, u))
    pairs.sort()
    undecided = 0
    for n, (_, a, b, u) in enumerate(pairs, 1):
        v = C.member(class_id, u)
        if v is None:
            undecided += 1
        elif not v:
            return ClosureReport(class_id, bound, False, (a, b), (C.label(a), C.label(b)), n, undecided)
    return ClosureReport(class_id, bound, True, None, None, len(pairs), undecided)
