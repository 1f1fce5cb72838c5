"""Finite associative unital rings as dense Cayley tables.

Rings are built from a JSON-style spec (``{"type": "zmod", "n": 4}`` and
friends), validated exhaustively on construction and immutable afterwards.
"""
from __future__ import annotations

import itertools
import json
from functools import cached_property

import numpy as np

from . import config
from .errors import AxiomViolation, InvalidSpec, SizeLimit
from .linalg import prime_powers, relation_basis

# Above this size the cubic axiom checks use an additive generating set for
# the middle argument instead of every element.
EXHAUSTIVE_AXIOM_LIMIT = 512


# ---------------------------------------------------------------- specs

SHORTHANDS = {"zmod": ("n",), "gf": ("q",), "ut2": ("q",), "ut2rel": ("q", "d"), "ut2_rel": ("q", "d")}


def parse_ring_spec(spec) -> dict:
    """Normalize a ring spec given as dict, JSON text or shorthand like ``ut2rel:2,2``."""
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            try:
                spec = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidSpec(f"bad ring JSON {text!r}: {exc}") from None
        else:
            name, _, args = text.partition(":")
            if name not in SHORTHANDS:
                raise InvalidSpec(f"unknown ring shorthand {text!r}")
            values = [a for a in args.split(",") if a]
            keys = SHORTHANDS[name]
            if len(values) != len(keys):
                raise InvalidSpec(f"shorthand {text!r} needs {len(keys)} argument(s)")
            spec = {"type": "ut2_rel" if name == "ut2rel" else name}
            for k, v in zip(keys, values):
                try:
                    spec[k] = int(v)
                except ValueError:
                    raise InvalidSpec(f"non-integer argument in {text!r}") from None
    if not isinstance(spec, dict) or "type" not in spec:
        raise InvalidSpec(f"ring spec must be an object with a 'type': {spec!r}")
    kind = spec["type"]
    if kind == "product":
        return {"type": "product", "factors": [parse_ring_spec(f) for f in spec.get("factors", [])]}
    return dict(spec)


def spec_to_json(spec: dict) -> str:
    return json.dumps(spec, sort_keys=True, separators=(",", ":"))


def _check_prime_power(q) -> tuple[int, int]:
    if not isinstance(q, int) or q < 2:
        raise InvalidSpec(f"{q!r} is not a prime power")
    pp = prime_powers(q)
    if len(pp) != 1:
        raise InvalidSpec(f"{q} is not a prime power")
    return pp[0]


# ---------------------------------------------------------------- finite fields

def _poly_divides(d, f, p):
    # d monic; remainder of f by d over F_p, coefficient lists low -> high
    f = list(f)
    while len(f) >= len(d):
        c = f[-1]
        if c:
            shift = len(f) - len(d)
            for i, di in enumerate(d):
                f[shift + i] = (f[shift + i] - c * di) % p
        f.pop()
    return not any(f)


def _first_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically first monic irreducible of degree k over F_p (low -> high)."""
    if k == 1:
        return [0, 1]
    for tail in itertools.product(range(p), repeat=k):
        f = list(reversed(tail)) + [1]
        if f[0] == 0:
            continue
        reducible = False
        for deg in range(1, k // 2 + 1):
            for dtail in itertools.product(range(p), repeat=deg):
                if _poly_divides(list(reversed(dtail)) + [1], f, p):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise InvalidSpec(f"no irreducible of degree {k} over F_{p}")  # unreachable


class _Field:
    """GF(p**k) with elements indexed by sum c_i p**i of polynomial coefficients."""

    def __init__(self, q: int):
        p, k = _check_prime_power(q)
        self.p, self.k, self.q = p, k, q
        self.modulus = _first_irreducible(p, k)
        digits = np.array([[(x // p ** i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(k)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul = self._mul_table(digits)

    def _polymul(self, a, b):
        p, k, f = self.p, self.k, self.modulus
        prod_ = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] = (prod_[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod_[deg]
            if c:
                for i in range(k + 1):
                    prod_[deg - k + i] = (prod_[deg - k + i] - c * f[i]) % p
        return prod_[:k]

    def _mul_table(self, digits):
        q, p = self.q, self.p
        if q == p:
            x = np.arange(q)
            return np.outer(x, x) % p
        weights = p ** np.arange(self.k)
        # find a primitive element, then multiply through discrete logs
        for g in range(2, q):
            powers = [1]
            cur = list(digits[1])
            gd = list(digits[g])
            for _ in range(q - 2):
                cur = self._polymul(cur, gd)
                powers.append(int(np.dot(cur, weights)))
            if len(set(powers)) == q - 1:
                break
        exp = np.array(powers, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        table = exp[(log[:, None] + log[None, :]) % (q - 1)]
        table[0, :] = 0
        table[:, 0] = 0
        return table


# ---------------------------------------------------------------- the ring

class FiniteRing:
    """A finite ring given by addition and multiplication tables.

    Element 0 is the additive identity.  Instances are created through
    :func:`build_ring` (or :meth:`from_tables`) and are always validated.
    """

    def __init__(self, add, mul, one: int, spec: dict, *, validate: bool = True):
        self.add = np.asarray(add, dtype=np.int64)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.one = int(one)
        self.spec = spec
        self.size = self.add.shape[0]
        if self.size > config.caps().ring_size:
            raise SizeLimit(f"ring of size {self.size} exceeds cap {config.caps().ring_size}: {spec_to_json(spec)}")
        if validate:
            _validate_ring(self)
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        self._cache = {}

    def __repr__(self):
        return f"FiniteRing({spec_to_json(self.spec)}, size={self.size})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteRing)
            and self.size == other.size
            and self.one == other.one
            and np.array_equal(self.add, other.add)
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self):
        return hash((self.size, self.one, self.add.tobytes(), self.mul.tobytes()))

    @cached_property
    def neg(self) -> np.ndarray:
        return np.argmin(self.add, axis=1) if self.size > 1 else np.zeros(1, dtype=np.int64)

    @cached_property
    def characteristic(self) -> int:
        x, k = self.one, 1
        while x != 0:
            x = int(self.add[x, self.one])
            k += 1
        return k if self.size > 1 else 1

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def _additive(self):
        return table_group_basis(self.add)

    @property
    def additive_basis(self) -> tuple[int, ...]:
        """Ring elements forming a basis of (R, +) as a product of cyclic groups."""
        return self._additive[0]

    @property
    def additive_orders(self) -> tuple[int, ...]:
        return self._additive[1]

    @property
    def coords(self) -> np.ndarray:
        """Row r = coordinates of element r in :attr:`additive_basis`."""
        return self._additive[2]

    @cached_property
    def units(self) -> np.ndarray:
        one = self.one
        right = (self.mul == one).any(axis=1)
        left = (self.mul == one).any(axis=0)
        return np.flatnonzero(right & left)

    @cached_property
    def idempotents(self) -> np.ndarray:
        x = np.arange(self.size)
        return x[self.mul[x, x] == x]

    @cached_property
    def opposite(self) -> "FiniteRing":
        """The opposite ring (same elements, multiplication with arguments swapped)."""
        op = FiniteRing(self.add, self.mul.T, self.one, {"type": "opposite", "of": self.spec}, validate=False)
        op._additive = self._additive
        op.__dict__["opposite"] = self
        return op

    @classmethod
    def from_tables(cls, add, mul, one, spec=None):
        add = np.asarray(add)
        mul = np.asarray(mul)
        n = add.shape[0] if add.ndim == 2 else 0
        if add.shape != (n, n) or mul.shape != (n, n) or n == 0:
            raise InvalidSpec("tables must be square, non-empty and of equal size")
        if not (0 <= int(one) < n):
            raise InvalidSpec(f"unit index {one} out of range")
        if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
            raise InvalidSpec("table entries must be element indices")
        if spec is None:
            spec = {"type": "tables", "add": add.tolist(), "mul": mul.tolist(), "one": int(one)}
        return cls(add, mul, one, spec)

    def to_json(self) -> dict:
        return {"spec": self.spec, "size": self.size, "characteristic": self.characteristic}


def opposite_ring(R: FiniteRing) -> FiniteRing:
    return R.opposite


def table_group_basis(add: np.ndarray):
    """Basis of a finite abelian group given by its addition table.

    Returns ``(basis, orders, coords)`` with ``coords[x]`` the coordinates of
    element x; elements are generated greedily in index order.
    """
    n = add.shape[0]
    coeffs: dict[int, list[int]] = {0: []}
    gens: list[int] = []
    rels: list[list[int]] = []
    for x in range(n):
        if x in coeffs:
            continue
        k = len(gens)
        gens.append(x)
        for c in coeffs.values():
            c.append(0)
        s, m = 1, x
        while m not in coeffs:
            m = int(add[m, x])
            s += 1
        rel = [-v for v in coeffs[m]]
        rel[k] += s
        rels.append(rel)
        old = list(coeffs.items())
        jx = x
        for j in range(1, s):
            for h, c in old:
                coeffs[int(add[h, jx])] = c[:k] + [j]
            jx = int(add[jx, x])
    if not gens:
        return (), (), np.zeros((n, 0), dtype=np.int64)
    rels = [r + [0] * (len(gens) - len(r)) for r in rels]
    orders, new_from_old, old_to_new = relation_basis(rels, len(gens))

    def multiple(x, c):
        out, base = 0, x
        while c:
            if c & 1:
                out = int(add[out, base])
            base = int(add[base, base])
            c >>= 1
        return out

    basis = []
    for row in new_from_old:
        el = 0
        for g, c in zip(gens, row):
            el = int(add[el, multiple(g, c)])
        basis.append(el)
    C = np.array([coeffs[x] for x in range(n)], dtype=np.int64)
    T = np.array(old_to_new, dtype=np.int64).reshape(len(gens), len(orders))
    coords = (C @ T) % np.array(orders, dtype=np.int64) if orders else np.zeros((n, 0), dtype=np.int64)
    return tuple(basis), tuple(int(o) for o in orders), coords


# ---------------------------------------------------------------- validation

def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def _validate_ring(R: FiniteRing):
    add, mul, n, one = R.add, R.mul, R.size, R.one
    x = np.arange(n)
    if not np.array_equal(add[0], x) or not np.array_equal(add[:, 0], x):
        raise AxiomViolation("0 is not an additive identity")
    if not np.array_equal(add, add.T):
        w = _first(add != add.T)
        raise AxiomViolation(f"addition not commutative at {w}", w)
    if not ((add == 0).sum(axis=1) == 1).all():
        raise AxiomViolation("missing or non-unique additive inverse")
    if not np.array_equal(mul[one], x) or not np.array_equal(mul[:, one], x):
        raise AxiomViolation(f"{one} is not a two-sided multiplicative unit")
    middles = x if n <= EXHAUSTIVE_AXIOM_LIMIT else np.array(table_group_basis(add)[0] + (one,))
    for b in middles:
        # (a+b)+c = a+(b+c)
        bad = add[add[:, b]][:, x] != add[:, add[b, x]]
        if bad.any():
            a, c = _first(bad)
            raise AxiomViolation(f"addition not associative at {(a, int(b), c)}", (a, int(b), c))
        bad = mul[mul[:, b]][:, x] != mul[:, mul[b, x]]
        if bad.any():
            a, c = _first(bad)
            raise AxiomViolation(f"multiplication not associative at {(a, int(b), c)}", (a, int(b), c))
        # a(b+c) = ab+ac  and  (b+c)a = ba+ca with b fixed
        left = mul[:, add[b, x]] != add[mul[:, b][:, None], mul[:, x]]
        if left.any():
            a, c = _first(left)
            raise AxiomViolation(f"left distributivity fails at {(a, int(b), c)}", (a, int(b), c))
        right = mul[add[b, x]][:, x] != add[mul[b][None, :], mul[x][:, x]]
        if right.any():
            c, a = _first(right)
            raise AxiomViolation(f"right distributivity fails at {(int(b), c, a)}", (int(b), c, a))


# ---------------------------------------------------------------- builders

def _zmod(n):
    if not isinstance(n, int) or n < 1:
        raise InvalidSpec(f"zmod needs a positive integer n, got {n!r}")
    x = np.arange(n)
    return (x[:, None] + x[None, :]) % n, (x[:, None] * x[None, :]) % n, 1 % n


def _gf(q):
    F = _Field(q)
    return F.add, F.mul, 1


def _poly_quotient(q, f):
    F = _Field(q)
    if not isinstance(f, list) or len(f) < 2 or any(not isinstance(c, int) or not 0 <= c < q for c in f):
        raise InvalidSpec(f"poly_quotient needs a coefficient list over F_{q} of degree >= 1, got {f!r}")
    if f[-1] != 1:
        raise InvalidSpec(f"polynomial {f!r} is not monic (coefficients are listed constant term first)")
    deg = len(f) - 1
    N = q ** deg
    digits = np.array([[(x // q ** i) % q for i in range(deg)] for x in range(N)], dtype=np.int64)
    weights = q ** np.arange(deg)
    add = F.add[digits[:, None, :], digits[None, :, :]] @ weights
    # schoolbook product, then reduce with x^deg = -(f_0 + ... + f_{deg-1} x^{deg-1})
    prod_ = np.zeros((N, N, 2 * deg - 1), dtype=np.int64)
    for i in range(deg):
        for j in range(deg):
            term = F.mul[digits[:, None, i], digits[None, :, j]]
            prod_[:, :, i + j] = F.add[prod_[:, :, i + j], term]
    for top in range(2 * deg - 2, deg - 1, -1):
        c = prod_[:, :, top]
        for i in range(deg):
            sub = F.mul[c, f[i]]
            prod_[:, :, top - deg + i] = F.add[prod_[:, :, top - deg + i], F.neg[sub]]
    mul = prod_[:, :, :deg] @ weights
    return add, mul, 1 if N > 1 else 0


def _triangular(F: _Field, sub: list[int]):
    """Tables of the matrices (f1 f2; 0 k), f1, f2 in F, k in ``sub`` (a subfield of F)."""
    q, s = F.q, len(sub)
    sub = np.array(sub, dtype=np.int64)
    pos = np.full(q, -1, dtype=np.int64)
    pos[sub] = np.arange(s)
    n = q * q * s
    idx = np.arange(n)
    a, b, c = idx // (q * s), (idx // s) % q, sub[idx % s]

    def index(a_, b_, c_):
        return (a_ * q + b_) * s + pos[c_]

    add = index(F.add[a[:, None], a[None, :]], F.add[b[:, None], b[None, :]], F.add[c[:, None], c[None, :]])
    mul = index(
        F.mul[a[:, None], a[None, :]],
        F.add[F.mul[a[:, None], b[None, :]], F.mul[b[:, None], c[None, :]]],
        F.mul[c[:, None], c[None, :]],
    )
    if (pos[F.add[c[:, None], c[None, :]]] < 0).any() or (pos[F.mul[c[:, None], c[None, :]]] < 0).any():
        raise InvalidSpec("diagonal entries do not form a subfield")
    return add, mul, int(index(1, 0, 1))


def _ut2(q):
    F = _Field(q)
    return _triangular(F, list(range(q)))


def _ut2_rel(q, d):
    if not isinstance(d, int) or d < 1:
        raise InvalidSpec(f"ut2_rel needs a positive integer d, got {d!r}")
    _check_prime_power(q)
    big = q ** d
    if big * big * q > config.caps().ring_size:
        raise SizeLimit(f"ut2_rel({q},{d}) has {big * big * q} elements, cap {config.caps().ring_size}")
    F = _Field(big)
    sub = []
    for x in range(big):
        # x is in the subfield of order q iff x**q == x
        acc, base, e = 1, x, q
        while e:
            if e & 1:
                acc = int(F.mul[acc, base])
            base = int(F.mul[base, base])
            e >>= 1
        if acc == x:
            sub.append(x)
    return _triangular(F, sub)


def _product(factors):
    if not factors:
        raise InvalidSpec("product needs at least one factor")
    rings = [build_ring(f) for f in factors]
    total = int(np.prod([r.size for r in rings]))
    if total > config.caps().ring_size:
        raise SizeLimit(f"product ring of size {total} exceeds cap {config.caps().ring_size}")
    add = np.zeros((1, 1), dtype=np.int64)
    mul = np.zeros((1, 1), dtype=np.int64)
    one = 0
    for r in rings:
        m = r.size
        add = (add[:, None, :, None] * m + r.add[None, :, None, :]).reshape(add.shape[0] * m, -1)
        mul = (mul[:, None, :, None] * m + r.mul[None, :, None, :]).reshape(mul.shape[0] * m, -1)
        one = one * m + r.one
    return add, mul, one


def build_ring(spec) -> FiniteRing:
    """Construct and validate the ring described by ``spec``."""
    spec = parse_ring_spec(spec)
    kind = spec["type"]
    size_cap = config.caps().ring_size
    try:
        if kind == "zmod":
            n = spec.get("n")
            if isinstance(n, int) and n > size_cap:
                raise SizeLimit(f"zmod({n}) exceeds ring cap {size_cap}")
            tables = _zmod(n)
        elif kind == "gf":
            q = spec.get("q")
            _check_prime_power(q)
            if q > size_cap:
                raise SizeLimit(f"gf({q}) exceeds ring cap {size_cap}")
            tables = _gf(q)
        elif kind == "poly_quotient":
            q, f = spec.get("q"), spec.get("f")
            _check_prime_power(q)
            if isinstance(f, list) and q ** max(len(f) - 1, 0) > size_cap:
                raise SizeLimit(f"poly_quotient of size {q ** (len(f) - 1)} exceeds cap {size_cap}")
            tables = _poly_quotient(q, f)
        elif kind == "ut2":
            q = spec.get("q")
            _check_prime_power(q)
            if q ** 3 > size_cap:
                raise SizeLimit(f"ut2({q}) exceeds ring cap {size_cap}")
            tables = _ut2(q)
        elif kind == "ut2_rel":
            tables = _ut2_rel(spec.get("q"), spec.get("d"))
        elif kind == "product":
            tables = _product(spec["factors"])
        elif kind == "tables":
            return FiniteRing.from_tables(spec.get("add"), spec.get("mul"), spec.get("one"), spec)
        else:
            raise InvalidSpec(f"unknown ring type {kind!r}")
    except (TypeError, KeyError) as exc:
        raise InvalidSpec(f"malformed ring spec {spec_to_json(spec)}: {exc}") from None
    add, mul, one = tables
    return FiniteRing(add, mul, one, spec)
