"""Finite right modules, submodules and homomorphisms.

A module's additive group is stored as ``⊕ Z/d_i`` (its *invariants*) and
the action of every ring element r as an integer matrix ``act[r]`` acting on
coordinate row vectors: ``x·r = x @ act[r]`` with column i reduced mod d_i.
Elements are indexed in mixed radix over the invariants (first coordinate
most significant), so index 0 is zero.  Dense add/act tables are derived on
demand for small modules.
"""
from __future__ import annotations

import json
from functools import cached_property
from math import prod

import numpy as np

from . import config
from .errors import AxiomViolation, RingMismatch, SizeLimit
from .linalg import elementary_divisors, lcm_all, relation_basis
from .ring import FiniteRing


def _reduce(mat: np.ndarray, d: np.ndarray) -> np.ndarray:
    return mat % d if d.size else mat


class FiniteModule:
    """A finite right module over a :class:`FiniteRing`."""

    def __init__(self, ring: FiniteRing, invariants, act, *, name: str | None = None, validate: bool = True):
        self.ring = ring
        self.invariants = tuple(int(x) for x in invariants)
        if any(x < 2 for x in self.invariants):
            raise ValueError(f"invariants must be >= 2, got {self.invariants}")
        self.size = prod(self.invariants)
        cap = config.caps().module_size
        if self.size > cap:
            raise SizeLimit(f"module of size {self.size} exceeds cap {cap}")
        t = len(self.invariants)
        self.d = np.array(self.invariants, dtype=np.int64)
        act = np.asarray(act, dtype=np.int64).reshape(ring.size, t, t)
        self.act = _reduce(act, self.d)
        self.act.setflags(write=False)
        self.name = name
        if validate:
            self._validate()

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FiniteModule{label} size={self.size} invariants={self.invariants}>"

    @property
    def rank(self) -> int:
        """Number of cyclic factors of the additive group."""
        return len(self.invariants)

    @cached_property
    def exponent(self) -> int:
        return lcm_all(self.invariants)

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.d[i + 1]
        return w

    @cached_property
    def coords(self) -> np.ndarray:
        """Coordinates of every element, row x for element index x."""
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.invariants).reshape(self.rank, -1).T
        grids.setflags(write=False)
        return grids

    def index(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return (coords % self.d) @ self.weights

    def element(self, x: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.coords[x])

    # -- arithmetic on element indices
    def add(self, x, y):
        return self.index(self.coords[x] + self.coords[y])

    def neg(self, x):
        return self.index(-self.coords[x])

    def scale(self, x, k: int):
        return self.index(self.coords[x] * k)

    def act_on(self, x, r: int):
        """x·r for element index (or index array) x and ring element r."""
        return self.index(self.coords[x] @ self.act[r])

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        return self.index(c[:, None, :] + c[None, :, :])

    @cached_property
    def act_table(self) -> np.ndarray:
        """act_table[r][x] = x·r."""
        return self.index(np.einsum("xi,rij->rxj", self.coords, self.act))

    # -- structure
    @cached_property
    def elementary_divisors(self) -> tuple[int, ...]:
        return elementary_divisors(self.invariants)

    @property
    def is_zero(self) -> bool:
        return self.size == 1

    def same_ring(self, other: "FiniteModule") -> bool:
        return self.ring is other.ring or self.ring == other.ring

    def check_same_ring(self, other: "FiniteModule"):
        if not self.same_ring(other):
            raise RingMismatch("modules live over different rings")

    def _validate(self):
        R, d, act = self.ring, self.d, self.act
        t = self.rank
        if t == 0:
            return
        eye = np.eye(t, dtype=np.int64)
        if not np.array_equal(act[R.one], _reduce(eye, d)):
            raise AxiomViolation("x·1 != x")
        # each act[r] must be an endomorphism of the additive group
        orders_ok = _reduce(act * d[None, :, None], d) == 0
        if not orders_ok.all():
            r = int(np.argwhere(~orders_ok)[0][0])
            raise AxiomViolation(f"action by ring element {r} is not additive", r)
        basis = np.array(R.additive_basis, dtype=np.int64)
        Bact = act[basis]  # (tR, t, t)
        # x·(r+s) = x·r + x·s  <=>  act is additive in r, i.e. determined by the basis
        expected = _reduce(np.einsum("rk,kij->rij", R.coords, Bact), d)
        bad = (expected != act).any(axis=(1, 2))
        if bad.any():
            r = int(np.flatnonzero(bad)[0])
            raise AxiomViolation(f"x·(r+s) != x·r + x·s (ring element {r})", r)
        # x·(rs) = (x·r)·s, checked on basis pairs (bilinear)
        prods = R.mul[basis[:, None], basis[None, :]]
        lhs = act[prods]
        rhs = _reduce(np.einsum("aij,bjk->abik", Bact, Bact), d)
        bad = (lhs != rhs).any(axis=(2, 3))
        if bad.any():
            a, b = np.argwhere(bad)[0]
            raise AxiomViolation(f"x·(rs) != (x·r)·s for r={basis[a]}, s={basis[b]}", (int(basis[a]), int(basis[b])))

    def to_json(self, tables: bool = True) -> dict:
        out = {
            "ring": self.ring.spec,
            "size": self.size,
            "invariants": list(self.invariants),
            "act_matrices": self.act.tolist() if self.ring.size * self.rank * self.rank <= 4096 else None,
        }
        if tables and self.size <= 256:
            out["add"] = self.add_table.tolist()
            out["act"] = self.act_table.tolist()
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_tables(cls, ring: FiniteRing, add, act, name=None) -> "FiniteModule":
        """Build a module from dense tables (add[x][y], act[r][x] = x·r), fully checked."""
        from .ring import table_group_basis

        add = np.asarray(add, dtype=np.int64)
        act = np.asarray(act, dtype=np.int64)
        m = add.shape[0]
        if add.shape != (m, m) or act.shape != (ring.size, m):
            raise AxiomViolation("table shapes do not match ring and module sizes")
        x = np.arange(m)
        if not np.array_equal(add[0], x) or not np.array_equal(add, add.T):
            raise AxiomViolation("module addition must be commutative with identity 0")
        if not ((add == 0).sum(axis=1) == 1).all():
            raise AxiomViolation("module addition lacks inverses")
        for b in x:
            if (add[add[:, b]][:, x] != add[:, add[b, x]]).any():
                raise AxiomViolation("module addition not associative")
        basis, orders, coords = table_group_basis(add)
        basis = np.array(basis, dtype=np.int64)
        mats = coords[act[:, basis]] if len(basis) else np.zeros((ring.size, 0, 0), dtype=np.int64)
        M = cls(ring, orders, mats, name=name)
        # the coordinate model must reproduce the given tables exactly
        relabel = M.index(coords)
        if not np.array_equal(M.act_table[:, relabel], relabel[act]):
            raise AxiomViolation("action table is not additive/compatible with the ring")
        if not np.array_equal(M.add_table[relabel[:, None], relabel[None, :]], relabel[add]):
            raise AxiomViolation("addition table inconsistent with its cyclic decomposition")
        return M


class ModuleHom:
    """A module homomorphism stored by the images of the domain's basis."""

    def __init__(self, dom: FiniteModule, cod: FiniteModule, matrix, *, validate: bool = False):
        self.dom = dom
        self.cod = cod
        m = np.asarray(matrix, dtype=np.int64).reshape(dom.rank, cod.rank)
        self.matrix = _reduce(m, cod.d)
        self.matrix.setflags(write=False)
        if validate:
            self.validate()

    def __repr__(self):
        return f"<ModuleHom {self.dom.size}->{self.cod.size}>"

    def __eq__(self, other):
        return (
            isinstance(other, ModuleHom)
            and self.dom is other.dom
            and self.cod is other.cod
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((id(self.dom), id(self.cod), self.matrix.tobytes()))

    def validate(self):
        dom, cod, F = self.dom, self.cod, self.matrix
        if dom.rank and cod.rank:
            if (_reduce(F * dom.d[:, None], cod.d) != 0).any():
                raise AxiomViolation("map is not well defined on the additive group")
            for r in dom.ring.additive_basis:
                lhs = _reduce(dom.act[r] @ F, cod.d)
                rhs = _reduce(F @ cod.act[r], cod.d)
                if not np.array_equal(lhs, rhs):
                    raise AxiomViolation(f"map is not equivariant for ring element {r}")
        return True

    def apply(self, x):
        """Image of element index (or index array) x."""
        return self.cod.index(self.dom.coords[x] @ self.matrix)

    @cached_property
    def map(self) -> np.ndarray:
        return self.apply(np.arange(self.dom.size))

    def compose(self, inner: "ModuleHom") -> "ModuleHom":
        """self ∘ inner."""
        return ModuleHom(inner.dom, self.cod, inner.matrix @ self.matrix)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.dom, self.cod, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.dom, self.cod, self.matrix - other.matrix)

    def __neg__(self):
        return ModuleHom(self.dom, self.cod, -self.matrix)

    def scale(self, k: int) -> "ModuleHom":
        return ModuleHom(self.dom, self.cod, self.matrix * k)

    @property
    def is_zero(self) -> bool:
        return not self.matrix.any()

    def kernel(self) -> "Submodule":
        return Submodule(self.dom, self.map == 0)

    def image(self) -> "Submodule":
        from .lattice import additive_span

        gens = self.cod.index(self.matrix) if self.dom.rank else np.zeros(0, dtype=np.int64)
        return additive_span(self.cod, gens)

    def image_size(self) -> int:
        return self.image().size

    @property
    def is_injective(self) -> bool:
        return self.image_size() == self.dom.size

    @property
    def is_surjective(self) -> bool:
        return self.image_size() == self.cod.size

    @property
    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective

    @classmethod
    def identity(cls, M: FiniteModule) -> "ModuleHom":
        return cls(M, M, np.eye(M.rank, dtype=np.int64))

    @classmethod
    def zero(cls, M: FiniteModule, N: FiniteModule) -> "ModuleHom":
        return cls(M, N, np.zeros((M.rank, N.rank), dtype=np.int64))

    def to_json(self) -> dict:
        return {"dom_size": self.dom.size, "cod_size": self.cod.size, "matrix": self.matrix.tolist()}


class Submodule:
    """A submodule of ``parent`` stored as a membership mask over element indices."""

    def __init__(self, parent: FiniteModule, mask, gens=None):
        self.parent = parent
        mask = np.asarray(mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask
        self.gens = None if gens is None else tuple(int(g) for g in gens)

    @cached_property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @cached_property
    def size(self) -> int:
        return int(self.mask.sum())

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.parent is other.parent and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<Submodule size={self.size} of {self.parent!r}>"

    def __contains__(self, x):
        return bool(self.mask[x])

    def __le__(self, other: "Submodule") -> bool:
        return not (self.mask & ~other.mask).any()

    def __and__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.parent, self.mask & other.mask)

    def __add__(self, other: "Submodule") -> "Submodule":
        from .lattice import join

        return join(self, other)

    @property
    def is_zero(self) -> bool:
        return self.size == 1

    @property
    def is_whole(self) -> bool:
        return self.size == self.parent.size

    def sort_key(self):
        return (self.size, tuple(self.members.tolist()))

    @cached_property
    def additive_generators(self) -> tuple[int, ...]:
        """A small additive generating set (basis elements in the parent)."""
        return tuple(int(x) for x in self.as_module[2])

    @cached_property
    def as_module(self):
        """(module, inclusion hom, basis element indices in the parent, parent->sub index map)."""
        return _submodule_module(self)

    def module(self) -> tuple[FiniteModule, ModuleHom]:
        M, inc, _, _ = self.as_module
        return M, inc

    def to_sub_index(self, x):
        """Index in :meth:`module` of parent element(s) x (which must be members)."""
        return self.as_module[3][x]


def subgroup_basis(M: FiniteModule, gens):
    """Basis of the additive subgroup of M generated by element indices ``gens``.

    Returns ``(basis_coords, orders, elems, elem_new_coords)`` where ``elems``
    are the parent indices of all subgroup elements and ``elem_new_coords``
    their coordinates in the new basis.
    """
    d = M.d
    coords = M.coords
    pos = np.full(M.size, -1, dtype=np.int64)
    pos[0] = 0
    ec = np.zeros((1, M.rank), dtype=np.int64)
    coeff = np.zeros((1, 0), dtype=np.int64)
    chosen, rels = [], []
    for g in gens:
        g = int(g)
        if pos[g] >= 0:
            continue
        k = len(chosen)
        chosen.append(g)
        coeff = np.concatenate([coeff, np.zeros((len(coeff), 1), dtype=np.int64)], axis=1)
        gc = coords[g]
        layers_c, layers_k = [ec], [coeff]
        step, s = gc.copy(), 1
        while pos[M.index(step)] < 0:
            layers_c.append(_reduce(ec + step, d))
            kk = coeff.copy()
            kk[:, k] = s
            layers_k.append(kk)
            step = _reduce(step + gc, d)
            s += 1
        rel = (-coeff[pos[M.index(step)]]).tolist()
        rel[k] += s
        rels.append(rel)
        ec = np.concatenate(layers_c)
        coeff = np.concatenate(layers_k)
        pos[M.index(ec)] = np.arange(len(ec))
    elems = M.index(ec)
    if not chosen:
        return np.zeros((0, M.rank), dtype=np.int64), (), elems, np.zeros((1, 0), dtype=np.int64)
    rels = [r + [0] * (len(chosen) - len(r)) for r in rels]
    orders, nfo, otn = relation_basis(rels, len(chosen))
    G = coords[np.array(chosen)]
    basis = _reduce(np.array(nfo, dtype=np.int64).reshape(len(orders), len(chosen)) @ G, d)
    o = np.array(orders, dtype=np.int64)
    new_coords = (coeff @ np.array(otn, dtype=np.int64).reshape(len(chosen), len(orders))) % o
    return basis, tuple(orders), elems, new_coords


def _submodule_module(A: Submodule):
    M = A.parent
    basis, orders, elems, new_coords = subgroup_basis(M, A.members)
    if len(elems) != A.size:
        raise AxiomViolation("mask is not closed under addition")
    t = len(orders)
    parent_to_sub = np.full(M.size, -1, dtype=np.int64)
    if t == 0:
        parent_to_sub[0] = 0
        S = FiniteModule(M.ring, (), np.zeros((M.ring.size, 0, 0)), validate=False)
        return S, ModuleHom(S, M, np.zeros((0, M.rank))), np.zeros(0, dtype=np.int64), parent_to_sub
    o = np.array(orders, dtype=np.int64)
    w = np.ones(t, dtype=np.int64)
    for i in range(t - 2, -1, -1):
        w[i] = w[i + 1] * o[i + 1]
    parent_to_sub[elems] = new_coords @ w
    images = M.index(np.einsum("ki,rij->rkj", basis, M.act))  # (n, t, ) parent indices
    sub_idx = parent_to_sub[images]
    if (sub_idx < 0).any():
        raise AxiomViolation("subset is not closed under the ring action")
    act = (sub_idx[..., None] // w) % o  # unravel
    S = FiniteModule(M.ring, orders, act, validate=False)
    inc = ModuleHom(S, M, basis)
    return S, inc, M.index(basis), parent_to_sub


# ---------------------------------------------------------------- constructions

def regular_module(R: FiniteRing) -> FiniteModule:
    """R as a right module over itself."""
    cached = R._cache.get("regular")
    if cached is None:
        basis = np.array(R.additive_basis, dtype=np.int64)
        # act[r][i] = coords(b_i * r)
        act = R.coords[R.mul[basis][:, :]].transpose(1, 0, 2) if len(basis) else np.zeros((R.size, 0, 0))
        cached = FiniteModule(R, R.additive_orders, act, name="R_R")
        R._cache["regular"] = cached
    return cached


def ring_element_of(M: FiniteModule, x: int) -> int:
    """For M = regular_module(R): the ring element represented by module element x."""
    R = M.ring
    lookup = R._cache.get("regular_lookup")
    if lookup is None:
        lookup = np.empty(R.size, dtype=np.int64)
        lookup[M.index(R.coords)] = np.arange(R.size)
        R._cache["regular_lookup"] = lookup
    return int(lookup[x])


def zero_module(R: FiniteRing) -> FiniteModule:
    return FiniteModule(R, (), np.zeros((R.size, 0, 0)), name="0")


def direct_sum(*modules: FiniteModule):
    """External direct sum with its injections and projections."""
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    R = modules[0].ring
    for M in modules[1:]:
        modules[0].check_same_ring(M)
    total = prod(M.size for M in modules)
    if total > config.caps().module_size:
        raise SizeLimit(f"direct sum of size {total} exceeds module cap {config.caps().module_size}")
    inv = sum((M.invariants for M in modules), ())
    t = len(inv)
    act = np.zeros((R.size, t, t), dtype=np.int64)
    offsets = np.cumsum([0] + [M.rank for M in modules])
    for M, o in zip(modules, offsets):
        act[:, o:o + M.rank, o:o + M.rank] = M.act
    S = FiniteModule(R, inv, act, validate=False)
    injections, projections = [], []
    for M, o in zip(modules, offsets):
        emb = np.zeros((M.rank, t), dtype=np.int64)
        emb[:, o:o + M.rank] = np.eye(M.rank, dtype=np.int64)
        injections.append(ModuleHom(M, S, emb))
        projections.append(ModuleHom(S, M, emb.T))
    return S, injections, projections


def direct_power(M: FiniteModule, k: int) -> FiniteModule:
    if k == 0:
        return zero_module(M.ring)
    return direct_sum(*([M] * k))[0]


def quotient(M: FiniteModule, A: Submodule):
    """M/A with its canonical projection."""
    basisA = A.as_module[2]
    rels = [list(map(int, row)) for row in np.diag(M.d)] + [list(map(int, M.coords[g])) for g in basisA]
    if M.rank == 0:
        Q = zero_module(M.ring)
        return Q, ModuleHom(M, Q, np.zeros((0, 0)))
    orders, nfo, otn = relation_basis(rels, M.rank)
    t = len(orders)
    P = np.array(otn, dtype=np.int64).reshape(M.rank, t)
    if t == 0:
        Q = zero_module(M.ring)
        return Q, ModuleHom(M, Q, P)
    G = np.array(nfo, dtype=np.int64).reshape(t, M.rank)
    o = np.array(orders, dtype=np.int64)
    act = np.einsum("ki,rij,jl->rkl", G, M.act, P) % o
    Q = FiniteModule(M.ring, orders, act, validate=False)
    return Q, ModuleHom(M, Q, P)


def coset_representatives(proj: ModuleHom) -> np.ndarray:
    """For each element of the quotient, the least parent index mapping to it."""
    images = proj.map
    reps = np.full(proj.cod.size, -1, dtype=np.int64)
    order = np.argsort(images, kind="stable")
    first = np.unique(images[order], return_index=True)[1]
    reps[images[order][first]] = order[first]
    return reps


def module_to_json_text(M: FiniteModule) -> str:
    return json.dumps(M.to_json(), sort_keys=True, separators=(",", ":"))
