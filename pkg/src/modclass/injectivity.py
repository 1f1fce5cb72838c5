"""Injectivity (Baer), character duals, injective hulls, and the finite lists of
simple, indecomposable injective and uniform modules of a ring."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HullPostconditionFailure
from .homs import HomSpace, are_isomorphic, fingerprint, solve_hom
from .lattice import additive_span, all_submodules, is_essential, socle, zero_submodule
from .module import FiniteModule, ModuleHom, Submodule, direct_sum, direct_power, regular_module, ring_element_of
from .ring import FiniteRing
from .ringtheory import simple_module_data


# ---------------------------------------------------------------- Baer's criterion

def _right_ideals(R: FiniteRing):
    """[(ideal as submodule of R_R, its module, additive generators as ring elements, essential?)]."""
    cached = R._cache.get("right_ideals")
    if cached is None:
        RR = regular_module(R)
        cached = []
        for I in all_submodules(RR):
            gens = tuple(ring_element_of(RR, int(x)) for x in I.additive_generators)
            cached.append((I, I.module()[0], gens, is_essential(I)))
        R._cache["right_ideals"] = cached
    return cached


def _annihilator_size(M: FiniteModule, ring_gens) -> int:
    if not ring_gens or M.rank == 0:
        return M.size
    imgs = np.einsum("xi,gij->gxj", M.coords, M.act[list(ring_gens)]) % M.d
    return int((~imgs.any(axis=(0, 2))).sum())


def baer_failures(M: FiniteModule, essential_only: bool = True):
    """Right ideals I for which some f: I -> M fails to extend to R.

    Restriction Hom(R, M) -> Hom(I, M) has image ≅ M / ann_M(I), so every f
    extends iff |Hom(I, M)| = |M| / |ann_M(I)|.
    """
    bad = []
    for I, Imod, gens, ess in _right_ideals(M.ring):
        if essential_only and not ess:
            continue
        if I.is_zero or I.is_whole:
            continue
        if HomSpace(Imod, M).count * _annihilator_size(M, gens) != M.size:
            bad.append(I)
    return bad


def is_injective(M: FiniteModule, essential_only: bool = True) -> bool:
    """Baer's criterion over all right ideals, or only the essential ones (equivalent)."""
    if M.size == 1:
        return True
    return not baer_failures(M, essential_only)


def is_injective_by_extension(M: FiniteModule, essential_only: bool = False) -> bool:
    """Reference check: try to extend every generator of Hom(I, M) to R."""
    from .homs import extension_exists

    for I, Imod, _, ess in _right_ideals(M.ring):
        if essential_only and not ess:
            continue
        sub = I.module()[0]
        for f in HomSpace(sub, M).generators:
            if not extension_exists(f, I).exists:
                return False
    return True


# ---------------------------------------------------------------- duality

def character_module(M: FiniteModule) -> FiniteModule:
    """M* = Hom_Z(M, Q/Z) as a right module over the opposite ring, (f*r)(x) = f(x·r).

    A character with coordinates c sends basis element b_i to c_i / d_i.
    """
    Rop = M.ring.opposite
    d = M.d
    if M.rank == 0:
        return FiniteModule(Rop, (), np.zeros((Rop.size, 0, 0)), validate=False)
    # (f*r)(b_i) = sum_j A_ij c_j / d_j  ->  c'_i = sum_j c_j A_ij d_i / d_j
    A = M.act
    B = A * d[None, :, None] // d[None, None, :]
    act = np.transpose(B, (0, 2, 1)) % d
    name = f"{M.name}*" if M.name else None
    return FiniteModule(Rop, M.invariants, act, name=name)


def evaluation_map(M: FiniteModule, MDD: FiniteModule) -> ModuleHom:
    """The natural map M -> M** (identity in the dual-basis coordinates)."""
    return ModuleHom(M, MDD, np.eye(M.rank, dtype=np.int64), validate=True)


def cogenerator(R: FiniteRing) -> FiniteModule:
    """(R as a right module over R^op)*, an injective cogenerator over R."""
    C = R._cache.get("cogenerator")
    if C is None:
        C = character_module(regular_module(R.opposite))
        assert C.ring == R
        C = FiniteModule(R, C.invariants, C.act, name="C", validate=False)
        R._cache["cogenerator"] = C
    return C


def _character_value(M: FiniteModule, a: np.ndarray, y: np.ndarray, L: int) -> np.ndarray:
    # phi_a(y) as a multiple of 1/L
    return (y * (a * (L // M.d))).sum(axis=-1) % L


def character_embedding(M: FiniteModule, chars) -> tuple[FiniteModule, ModuleHom]:
    """m -> (r -> phi_k(m r))_k into a power of the cogenerator."""
    R = M.ring
    C = cogenerator(R)
    k = len(chars)
    P = direct_power(C, k) if k > 1 else C
    L = M.exponent
    basis = list(R.additive_basis)
    o = np.array(R.additive_orders, dtype=np.int64)
    blocks = []
    for a in chars:
        a = np.asarray(a, dtype=np.int64)
        # images of M's basis under each ring basis element: (t_M, t_R, t_M)
        y = np.transpose(M.act[basis], (1, 0, 2))
        s = _character_value(M, a, y, L)  # (t_M, t_R) in units of 1/L
        num = s * o[None, :]
        assert not (num % L).any(), "character values have unexpected order"
        blocks.append((num // L) % o)
    mat = np.concatenate(blocks, axis=1)
    return P, ModuleHom(M, P, mat, validate=True)


def separating_characters(M: FiniteModule) -> list[np.ndarray]:
    """Characters whose induced maps into the cogenerator have trivial common kernel."""
    chars = []
    K = np.ones(M.size, dtype=bool)
    soc = socle(M).mask
    L = M.exponent
    while K.sum() > 1:
        x = int(np.flatnonzero(soc & K)[1])
        y = M.coords[x]
        # a character not vanishing on x: pick one coordinate where x is nonzero
        i = int(np.flatnonzero(y % M.d)[0])
        a = np.zeros(M.rank, dtype=np.int64)
        a[i] = 1
        assert _character_value(M, a, y, L) != 0
        chars.append(a)
        _, emb = character_embedding(M, [a])
        K &= emb.kernel().mask
    return chars


# ---------------------------------------------------------------- hulls

@dataclass
class HullResult:
    hull: FiniteModule
    embedding: ModuleHom
    method: str
    essential: bool
    injective: bool

    @property
    def minimality_certificate(self) -> dict:
        return {"image_essential": self.essential, "hull_injective": self.injective, "method": self.method}


def maximal_essential_extension(P: FiniteModule, U0: Submodule) -> Submodule:
    """Grow U0 inside P to a maximal essential extension (single greedy pass in index order).

    A rejected x stays rejected as U grows, so one pass reaches a fixpoint.
    """
    from .lattice import cyclic, join

    socP = socle(P).mask
    allowed = socP & U0.mask
    U = U0
    for x in range(P.size):
        if U.mask[x]:
            continue
        V = join(U, cyclic(P, x))
        if not (V.mask & socP & ~allowed).any():
            U = V
    return U


def _restrict_codomain(h: ModuleHom, U: Submodule) -> ModuleHom:
    sub, _ = U.module()
    basis_imgs = h.apply(h.dom.index(np.eye(h.dom.rank, dtype=np.int64)))
    return ModuleHom(h.dom, sub, sub.coords[U.to_sub_index(basis_imgs)])


def hull_via_cogenerator(M: FiniteModule) -> tuple[FiniteModule, ModuleHom]:
    P, emb = character_embedding(M, separating_characters(M))
    U = maximal_essential_extension(P, emb.image())
    return U.module()[0], _restrict_codomain(emb, U)


def _simple_hulls(R: FiniteRing):
    cached = R._cache.get("simple_hulls")
    if cached is None:
        cached = []
        for info in simple_module_data(R):
            E, emb = hull_via_cogenerator(info.module)
            E.name = f"E({info.module.name})"
            cached.append((info.module, E, emb))
        R._cache["simple_hulls"] = cached
    return cached


def _simple_index(R: FiniteRing, T: FiniteModule) -> tuple[int, ModuleHom]:
    """Which canonical simple T is, with an isomorphism simple -> T."""
    for k, (S, _, _) in enumerate(_simple_hulls(R)):
        iso = are_isomorphic(S, T)
        if iso.isomorphic:
            return k, iso.witness
    raise AssertionError("module is not simple")


def hull_via_socle(M: FiniteModule) -> tuple[FiniteModule, ModuleHom]:
    """E(M) = ⊕ E(S_k) over a simple decomposition of soc(M); the embedding extends
    the socle embedding, which is possible because the target is injective."""
    from .decomposition import decompose

    R = M.ring
    soc = socle(M)
    smod, sinc = soc.module()
    D = decompose(smod, with_idempotents=True)
    hulls = _simple_hulls(R)
    parts, maps = [], []
    for piece, e in zip(D.pieces, D.idempotents):
        T, tinc = piece.module()
        k, iso = _simple_index(R, T)
        S, E, emb = hulls[k]
        # T -> S -> E, then precompose with the projection of soc(M) onto T
        inv = solve_hom(T, S, [(iso.matrix[i], np.eye(S.rank, dtype=np.int64)[i]) for i in range(S.rank)])
        assert inv is not None
        to_T = ModuleHom(smod, T, T.coords[piece.to_sub_index(e.apply(smod.index(np.eye(smod.rank, dtype=np.int64))))])
        parts.append(E)
        maps.append(emb.compose(inv).compose(to_T))
    if not parts:
        return M, ModuleHom.identity(M)
    E, injections, _ = direct_sum(*parts) if len(parts) > 1 else (parts[0], [ModuleHom.identity(parts[0])], None)
    sigma = maps[0] if len(maps) == 1 else None
    sigma_mat = sum(injections[k].compose(maps[k]).matrix for k in range(len(maps))) % E.d
    sigma = ModuleHom(smod, E, sigma_mat)
    cons = [(sinc.matrix[i], sigma.matrix[i]) for i in range(smod.rank)]
    h = solve_hom(M, E, cons)
    if h is None:
        raise HullPostconditionFailure("socle embedding does not extend to M")
    return E, h


def injective_hull(M: FiniteModule, method: str = "auto", check: bool = True) -> HullResult:
    """Injective hull with an essential embedding.

    ``method`` is "cogenerator" (grow a maximal essential extension inside a
    power of the cogenerator), "socle" (sum of hulls of the socle's simple
    summands) or "auto" (cogenerator when one copy suffices, else socle).
    """
    if M.size == 1:
        return HullResult(M, ModuleHom.identity(M), "zero", True, True)
    if method == "auto":
        method = "cogenerator" if len(separating_characters(M)) == 1 else "socle"
    if method == "cogenerator":
        E, emb = hull_via_cogenerator(M)
    elif method == "socle":
        E, emb = hull_via_socle(M)
    else:
        raise ValueError(f"unknown hull method {method!r}")
    ess = inj = True
    if check:
        emb.validate()
        if not emb.is_injective:
            raise HullPostconditionFailure("embedding is not injective")
        ess = is_essential(emb.image())
        inj = is_injective(E)
        if not (ess and inj):
            raise HullPostconditionFailure(f"hull check failed: essential={ess}, injective={inj}")
    return HullResult(E, emb, method, ess, inj)


# ---------------------------------------------------------------- finite lists

def simple_modules(R: FiniteRing) -> list[FiniteModule]:
    return [s.module for s in simple_module_data(R)]


def simple_modules_by_lattice(R: FiniteRing) -> list[FiniteModule]:
    """Reference: R/I for maximal right ideals I, deduplicated up to isomorphism."""
    from .module import quotient

    RR = regular_module(R)
    subs = all_submodules(RR)
    proper = [I for I in subs if not I.is_whole]
    maximal = [I for I in proper if not any(I.size < J.size and I <= J for J in proper)]
    out: list[FiniteModule] = []
    for I in maximal:
        Q, _ = quotient(RR, I)
        if not any(are_isomorphic(Q, T).isomorphic for T in out if T.size == Q.size):
            out.append(Q)
    return out


def indecomposable_injectives(R: FiniteRing) -> list[FiniteModule]:
    """E(S) for each simple S; every indecomposable injective arises this way."""
    return [E for _, E, _ in _simple_hulls(R)]


def _dedupe(mods: list[FiniteModule]) -> list[FiniteModule]:
    out, prints = [], []
    for N in mods:
        fp = fingerprint(N)
        if any(fp == q and are_isomorphic(N, T).isomorphic for T, q in zip(out, prints)):
            continue
        out.append(N)
        prints.append(fp)
    return out


def uniform_modules(R: FiniteRing) -> list[FiniteModule]:
    """Every uniform module up to isomorphism: the nonzero submodules of the E(S)."""
    cached = R._cache.get("uniforms")
    if cached is None:
        cands = []
        for E in indecomposable_injectives(R):
            cands.extend(A.module()[0] for A in all_submodules(E) if not A.is_zero)
        cached = sorted(_dedupe(cands), key=lambda N: (N.size, N.invariants, repr(fingerprint(N))))
        R._cache["uniforms"] = cached
    return cached
