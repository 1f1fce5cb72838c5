"""C1-preenvelopes, bounded preenvelope verification, and the named verification suites."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .corpus import ModuleCorpus, closure_check, module_corpus
from .errors import CapExceeded, HomSpaceTooLarge, LatticeTooLarge, NotCommutative, SizeLimit
from .homs import HomSpace, are_isomorphic, retraction, solve_hom
from .injectivity import (
    indecomposable_injectives,
    injective_hull,
    is_injective,
    simple_modules,
    uniform_modules,
)
from .lattice import all_submodules, composition_length, cyclic, cyclic_submodules, is_semisimple
from .module import FiniteModule, ModuleHom, direct_sum, quotient, regular_module, zero_module
from .ring import FiniteRing, build_ring, parse_ring_spec
from .ringtheory import is_semisimple_ring, primitive_idempotents


# ---------------------------------------------------------------- factorization

def factors_through(u: ModuleHom, f: ModuleHom) -> ModuleHom | None:
    """α with α ∘ u = f, or None."""
    C, E = u.cod, f.cod
    cons = [(u.matrix[k], f.matrix[k]) for k in range(u.dom.rank)]
    return solve_hom(C, E, cons)


@dataclass
class PreenvelopeCheck:
    passed: bool
    counterexample: dict | None
    checked_modules: int
    checked_maps: int
    undecided: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "counterexample": self.counterexample,
            "checked_modules": self.checked_modules,
            "checked_maps": self.checked_maps,
            "undecided_members": self.undecided,
        }


def verify_preenvelope(u: ModuleHom, class_id: str, corpus, *, full: bool = False) -> PreenvelopeCheck:
    """Does every map from u's domain into a class member factor through u?

    ``corpus`` is a ModuleCorpus (membership decided only where a map fails
    to factor) or a list of modules all assumed to be members.  Checking a
    generating set of each Hom(N, E') suffices: if α u = f and β u = g then
    (α + β) u = f + g.  ``full`` checks every map instead.
    """
    N = u.dom
    if isinstance(corpus, ModuleCorpus):
        items = [(corpus.label(k), k) for k in range(len(corpus))]
        get = corpus.module
    else:
        items = [(getattr(E, "name", None) or f"#{k}", k) for k, E in enumerate(corpus)]
        get = lambda k: corpus[k]
    n_maps = 0
    undecided = []
    log = []
    for label, k in items:
        E = get(k)
        H = HomSpace(N, E)
        maps = H.elements() if full else H.generators
        failed = None
        for f in maps:
            n_maps += 1
            if factors_through(u, f) is None:
                failed = f
                break
        if failed is None:
            log.append({"module": label, "maps": len(maps), "factor": True})
            continue
        member = corpus.member(class_id, k) if isinstance(corpus, ModuleCorpus) else True
        log.append({"module": label, "maps": len(maps), "factor": False, "member": member})
        if member is None:
            undecided.append(label)
        elif member:
            cex = {"module": label, "map": failed.matrix.tolist()}
            return PreenvelopeCheck(False, cex, len(log), n_maps, undecided, log)
    return PreenvelopeCheck(not undecided, None, len(log), n_maps, undecided, log)


# ---------------------------------------------------------------- main C1 condition

@dataclass
class MainC1Report:
    holds: bool
    uniforms: list
    structure_checked: int = 0
    structure_ok: bool | None = None
    undecided: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "uniforms": self.uniforms,
            "structure_checked": self.structure_checked,
            "structure_ok": self.structure_ok,
            "undecided": self.undecided,
        }


def verify_mainC1_condition(R: FiniteRing, bound: int = 64, generators: int = 2) -> MainC1Report:
    """Is every uniform module simple, or injective of length 2?  When it is,
    also check that each corpus C1 module is semisimple ⊕ injective."""
    rows = []
    for U in uniform_modules(R):
        length = composition_length(U)
        inj = is_injective(U)
        rows.append({"size": U.size, "length": length, "injective": inj, "ok": length == 1 or (inj and length == 2)})
    holds = all(r["ok"] for r in rows)
    report = MainC1Report(holds, rows)
    if holds:
        C = module_corpus(R, bound, generators)
        ok, checked = True, 0
        for k in range(len(C)):
            m = C.member("C1", k)
            if m is None:
                report.undecided.append(C.label(k))
                continue
            if not m:
                continue
            checked += 1
            pieces_ok = all(
                (C.pool_simple[j] or C.pool_injective[j]) for j, c in enumerate(C.entries[k].counts) if c
            )
            ok &= pieces_ok
        report.structure_checked = checked
        report.structure_ok = ok
    return report


# ---------------------------------------------------------------- construction

@dataclass
class PreenvelopeCertificate:
    source: FiniteModule
    morphism: ModuleHom
    class_id: str
    status: str                      # CONCLUSIVE, BOUNDED-EVIDENCE or FAILED
    target_in_class: bool | None
    split_mono: bool
    check: PreenvelopeCheck
    corpus_bound: int
    generator_bound: int
    envelope: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.check.passed and self.target_in_class is not False

    def to_json(self) -> dict:
        return {
            "class": self.class_id,
            "source_size": self.source.size,
            "target_size": self.morphism.cod.size,
            "target_invariants": list(self.morphism.cod.invariants),
            "status": self.status,
            "passed": self.passed,
            "target_in_class": self.target_in_class,
            "split_mono": self.split_mono,
            "envelope": self.envelope,
            "corpus_bound": self.corpus_bound,
            "generator_bound": self.generator_bound,
            "check": self.check.to_json(),
            "notes": self.notes,
        }


def preenvelope_targets(R: FiniteRing) -> list[FiniteModule]:
    """Simple modules and indecomposable injectives, without repeats."""
    out = []
    for T in list(simple_modules(R)) + list(indecomposable_injectives(R)):
        if not any(T.size == S.size and are_isomorphic(T, S).isomorphic for S in out):
            out.append(T)
    return out


def _assemble(N: FiniteModule, chosen) -> ModuleHom:
    if not chosen:
        Z = zero_module(N.ring)
        return ModuleHom.zero(N, Z)
    C, injections, _ = direct_sum(*[T for T, _ in chosen]) if len(chosen) > 1 else (
        chosen[0][0], [ModuleHom.identity(chosen[0][0])], None)
    mat = sum(inj.compose(g).matrix for inj, (_, g) in zip(injections, chosen)) % C.d
    return ModuleHom(N, C, mat)


def _pruned_generators(N: FiniteModule, pairs) -> list:
    """Drop generators that already factor through the maps chosen so far."""
    chosen = []
    for T, g in pairs:
        if chosen:
            u = _assemble(N, chosen)
            if factors_through(u, g) is not None:
                continue
        chosen.append((T, g))
    # second pass: earlier choices may have become redundant
    k = 0
    while k < len(chosen) and len(chosen) > 1:
        rest = chosen[:k] + chosen[k + 1:]
        if factors_through(_assemble(N, rest), chosen[k][1]) is not None:
            chosen = rest
        else:
            k += 1
    return chosen


def _envelope_check(u: ModuleHom) -> bool | None:
    """Is every α with α u = u an automorphism?  None if the space is too large."""
    C = u.cod
    Q, proj = quotient(C, u.image())
    try:
        mats = HomSpace(Q, C).element_matrices()
    except HomSpaceTooLarge:
        return None
    eye = np.eye(C.rank, dtype=np.int64)
    for m in mats:
        alpha = ModuleHom(C, C, eye + proj.matrix @ m)
        if not alpha.is_bijective:
            return False
    return True


def construct_C1_preenvelope(
    N: FiniteModule, bound: int = 64, generators: int = 2, check_envelope: bool = False
) -> PreenvelopeCertificate:
    """u: N -> C = ∏ T^{|G_T|} over simples and indecomposable injectives T,
    where G_T generates Hom(N, T); then verify u against the corpus."""
    from .classification import is_C1

    R = N.ring
    notes = []
    pairs = [(T, g) for T in preenvelope_targets(R) for g in HomSpace(N, T).generators]
    # a dropped generator factors through the smaller map, so the property is kept
    pruned = _pruned_generators(N, pairs)
    if len(pruned) < len(pairs):
        notes.append(f"{len(pairs) - len(pruned)} generators already factor; pruned")
    u = _assemble(N, pruned)
    C = u.cod
    condition = verify_mainC1_condition(R, bound, generators)
    if C.size == 1 or is_semisimple(C) or is_injective(C):
        target_ok = True
    else:
        try:
            target_ok = is_C1(C)
        except CapExceeded:
            target_ok = None
            notes.append("target C1 membership not decided: over cap")
    corpus = module_corpus(R, bound, generators)
    check = verify_preenvelope(u, "C1", corpus)
    split = retraction(u.image()) is not None and u.is_injective
    if not check.passed or target_ok is False:
        status = "FAILED"
    elif condition.holds and target_ok:
        status = "CONCLUSIVE"
    else:
        status = "BOUNDED-EVIDENCE"
    cert = PreenvelopeCertificate(N, u, "C1", status, target_ok, split, check, bound, corpus.generators, notes=notes)
    if check_envelope:
        cert.envelope = _envelope_check(u)
    return cert


# ---------------------------------------------------------------- suites

@dataclass
class SuiteReport:
    name: str
    ring: dict
    claims: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def claim(self, text: str, verdict: bool, **evidence):
        self.claims.append({"claim": text, "verdict": bool(verdict), "evidence": evidence})
        return verdict

    @property
    def passed(self) -> bool:
        return all(c["verdict"] for c in self.claims)

    def to_json(self) -> dict:
        return {"suite": self.name, "ring": self.ring, "params": self.params, "claims": self.claims, "passed": self.passed}


def verify_theorem_rare(R: FiniteRing, i: int, bound: int = 64, generators: int = 2) -> SuiteReport:
    """(1) C_i closed under finite sums ⇔ (2) C_i = injectives; for i ≤ 5 also ⇔ R semisimple."""
    if i not in range(2, 7):
        raise ValueError("i must be in 2..6")
    cls = f"C{i}"
    rep = SuiteReport(f"rare:{cls}", R.spec, params={"bound": bound})
    closure = closure_check(cls, R, bound, generators)
    C = module_corpus(R, bound, generators)
    members = C.members(cls)
    non_inj = [C.label(k) for k in members if not C.is_injective(k)]
    s1, s2 = closure.closed, not non_inj
    semisimple = is_semisimple_ring(R)
    rep.claim("(1) <=> (2)", s1 == s2, closed=s1, all_members_injective=s2,
              counterexample=closure.labels, non_injective_member=non_inj[:1])
    if i <= 5:
        rep.claim("(1) and (2) hold exactly when R is semisimple", s1 == semisimple and s2 == semisimple,
                  semisimple=semisimple)
    undecided = C.undecided(cls)
    rep.claim("every corpus membership decided", not undecided and closure.undecided == 0, undecided=undecided)
    return rep


def _local_factor_checks(R: FiniteRing) -> list[dict]:
    """Split a commutative R by its primitive idempotents; test each factor eR."""
    from .decomposition import _is_local

    RR = regular_module(R)
    out = []
    for e in primitive_idempotents(R):
        A = cyclic(RR, int(RR.index(R.coords[e])))
        F, _ = A.module()
        ideals = [S for S in all_submodules(F) if not S.is_zero]
        principal_keys = {C.key for _, C in cyclic_submodules(F)}
        out.append({
            "idempotent": e,
            "size": F.size,
            "local": _is_local(F),
            "principal": all(S.key in principal_keys for S in ideals),
            "length": composition_length(F),
        })
    return out


def verify_comC1(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    """For commutative R: (2) product of local PIRs of length ≤ 2 ⇔ (3) every module is C1."""
    if not R.is_commutative:
        raise NotCommutative("the ring is not commutative")
    rep = SuiteReport("comC1", R.spec, params={"bound": bound})
    factors = _local_factor_checks(R)
    s2 = all(f["local"] and f["principal"] and f["length"] <= 2 for f in factors)
    C = module_corpus(R, bound, generators)
    verdicts = [C.member("C1", k) for k in range(len(C))]
    failures = [C.label(k) for k, v in enumerate(verdicts) if v is False]
    undecided = [C.label(k) for k, v in enumerate(verdicts) if v is None]
    s3 = not failures
    main = verify_mainC1_condition(R, bound, generators).holds
    rep.claim("(2) <=> (3) at bound", s2 == s3, condition_2=s2, condition_3=s3, factors=factors,
              non_C1=failures[:3], undecided=undecided)
    rep.claim("(3) <=> uniform modules simple or injective of length 2", s3 == main, main_condition=main)
    return rep


def _uniform_pair_counterexample(R, C: ModuleCorpus):
    uniform_idx = [j for j, N in enumerate(C.pool) if any(
        N.size == U.size and are_isomorphic(N, U).isomorphic for U in uniform_modules(R))]
    for a in uniform_idx:
        for b in uniform_idx:
            if b < a:
                continue
            counts = [0] * len(C.pool)
            counts[a] += 1
            counts[b] += 1
            k = C.lookup(counts)
            if k is not None and C.member("C1", k) is False:
                return C.label(k)
    return None


def suite_mainC1(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    rep = SuiteReport("mainC1", R.spec, params={"bound": bound})
    main = verify_mainC1_condition(R, bound, generators)
    closure = closure_check("C1", R, bound, generators)
    rep.claim("condition (2) <=> C1 closed under finite sums at bound", main.holds == closure.closed,
              condition=main.to_json(), closure=closure.to_json())
    if main.holds:
        rep.claim("C1 corpus modules are semisimple plus injective", bool(main.structure_ok),
                  checked=main.structure_checked)
    else:
        from .classification import c1_failure

        C = module_corpus(R, bound, generators)
        pair = _uniform_pair_counterexample(R, C)
        rep.claim("a sum of two uniform modules is not C1", pair is not None, witness=pair)
        if closure.counterexample is not None:
            a, b = closure.counterexample
            M = C.module(C.union(a, b))
            A = c1_failure(M)
            rep.claim(f"{C.label(a)}+{C.label(b)} is not C1", A is not None,
                      summands=[C.module(a).size, C.module(b).size],
                      witness_submodule=None if A is None else [M.element(int(x)) for x in A.members])
    return rep


def suite_ut2(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    spec = R.spec
    q = spec.get("q", 2)
    rep = SuiteReport("ut2", spec, params={"bound": bound, "generator_bound": generators})
    sig = sorted((U.size, composition_length(U), is_injective(U)) for U in uniform_modules(R))
    want = sorted([(q, 1, False), (q, 1, True), (q * q, 2, True)])
    rep.claim("three uniform classes (size, length, injective)", sig == want, found=sig, expected=want)
    C = module_corpus(R, bound, generators)
    bad = [C.label(k) for k in range(len(C)) if C.member("C1", k) is not True]
    rep.claim("every corpus module is C1", not bad, corpus_size=len(C), failures=bad,
              generator_bound=C.generators)
    rep.claim("uniform modules simple or injective of length 2", verify_mainC1_condition(R, bound, generators).holds)
    return rep


def indecomposable_projectives(R: FiniteRing) -> list[FiniteModule]:
    from .decomposition import decompose

    return [S for S, _ in decompose(regular_module(R), with_idempotents=False).modules()]


def suite_ut2kl(R: FiniteRing, bound: int = 256, generators: int = 2) -> SuiteReport:
    from .classification import is_C1

    spec = R.spec
    q, d = spec.get("q", 2), spec.get("d", 2)
    rep = SuiteReport("ut2kl", spec, params={"bound": bound, "generator_bound": generators})
    main = verify_mainC1_condition(R, bound, generators)
    rep.claim("uniform modules simple or injective of length 2", main.holds, uniforms=main.uniforms)
    inj = sorted((E.size, composition_length(E)) for E in indecomposable_injectives(R))
    want = sorted([(q ** d, 1), (q ** (d + 1), 2)])
    rep.claim("indecomposable injectives: simple and length 2", inj == want, found=inj, expected=want)
    projs = [P for P in indecomposable_projectives(R) if composition_length(P) > 1]
    P = max(projs, key=lambda X: X.size)
    p_c1 = is_C1(P)
    rep.claim("the non-simple indecomposable projective is not C1", not p_c1, size=P.size)
    cert = construct_C1_preenvelope(P, bound, generators)
    rep.claim("C1-preenvelope of P is conclusive and passes",
              cert.status == "CONCLUSIVE" and cert.passed, certificate=cert.to_json())
    rep.claim("preenvelope of P is not split", not cert.split_mono)
    return rep


def suite_key_trick(R: FiniteRing, bound: int = 32, generators: int = 2) -> SuiteReport:
    from .classification import key_trick_witness

    rep = SuiteReport("key_trick", R.spec, params={"bound": bound})
    C = module_corpus(R, bound, generators)
    tested, skipped = [], []
    for k in range(len(C)):
        if C.is_injective(k) or not C.member("C6", k):
            continue
        N = C.module(k)
        try:
            w = key_trick_witness(N)
        except CapExceeded:
            skipped.append(C.label(k))
            continue
        tested.append(C.label(k))
        rep.claim(f"N = {C.label(k)}: N + E(N) is not C3", w.passed, **w.to_json())
    simples_ok = all(is_injective(S) or any(
        C.label(k) in tested for k in range(len(C)) if C.entries[k].size == S.size
    ) for S in simple_modules(R))
    rep.params["skipped_over_cap"] = skipped
    rep.claim("all non-injective simples tested", simples_ok, tested=tested)
    return rep


def suite_chain(R: FiniteRing, bound: int = 32, generators: int = 2) -> SuiteReport:
    from .classification import classify
    from .errors import ChainViolation

    rep = SuiteReport("chain", R.spec, params={"bound": bound})
    C = module_corpus(R, bound, generators)
    for k in range(len(C)):
        try:
            r = classify(C.module(k))
            rep.claim(f"{C.label(k)}: chain implications", True, flags=r.flags)
        except ChainViolation as exc:
            rep.claim(f"{C.label(k)}: chain implications", False, error=str(exc))
    return rep


def verify_c1_injective_instances(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    """If C1 is closed under sums (at the bound), C1 modules with Hom(N, E(R)) = 0 are injective."""
    rep = SuiteReport("c1inj", R.spec, params={"bound": bound})
    closed = closure_check("C1", R, bound, generators).closed
    rep.claim("C1 closed under finite sums at bound", closed)
    E = injective_hull(regular_module(R)).hull
    C = module_corpus(R, bound, generators)
    hits = []
    for k in C.members("C1"):
        if HomSpace(C.module(k), E).count == 1:
            hits.append(C.label(k))
            rep.claim(f"{C.label(k)}: Hom(N, E(R)) = 0 implies injective", C.is_injective(k))
    rep.params["instances"] = hits
    return rep


def suite_rare(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    rep = SuiteReport("rare", R.spec, params={"bound": bound})
    for i in range(2, 7):
        sub = verify_theorem_rare(R, i, bound, generators)
        for c in sub.claims:
            rep.claims.append({**c, "claim": f"C{i}: {c['claim']}"})
    return rep


def suite_comC1(R: FiniteRing, bound: int = 64, generators: int = 2) -> SuiteReport:
    rep = verify_comC1(R, bound, generators)
    s2 = rep.claims[0]["evidence"]["condition_2"]
    if s2:
        C = module_corpus(R, bound, generators)
        for k in range(len(C)):
            cert = construct_C1_preenvelope(C.module(k), bound, generators)
            rep.claim(f"C1-preenvelope of {C.label(k)} conclusive and passing",
                      cert.status == "CONCLUSIVE" and cert.passed,
                      status=cert.status, target_size=cert.morphism.cod.size, split=cert.split_mono)
    return rep


SUITES = {
    "rare": suite_rare,
    "mainC1": suite_mainC1,
    "comC1": suite_comC1,
    "ut2": suite_ut2,
    "ut2kl": suite_ut2kl,
    "key_trick": suite_key_trick,
    "chain": suite_chain,
    "c1inj": verify_c1_injective_instances,
}

DEFAULT_RINGS = {
    "ut2": "ut2:2",
    "ut2kl": "ut2rel:2,2",
    "comC1": "zmod:4",
    "mainC1": "ut2:2",
    "rare": "zmod:4",
    "key_trick": "zmod:4",
    "chain": "zmod:4",
    "c1inj": "zmod:4",
}


def run_suite(name: str, ring=None, bound: int | None = None, generators: int = 2) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    R = ring if isinstance(ring, FiniteRing) else build_ring(parse_ring_spec(ring or DEFAULT_RINGS[name]))
    kwargs = {"generators": generators}
    if bound is not None:
        kwargs["bound"] = bound
    return SUITES[name](R, **kwargs)
