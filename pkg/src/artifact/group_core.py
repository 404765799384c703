"""Finite groups as validated Cayley tables.

Elements are the integers ``0..n-1`` and element 0 is always the identity.
Besides construction and the standard families this module computes the
commutator subgroup, the abelianization, both forms of the Hall-Paige
condition, square-root statistics, commutator width and a fixed
identity-product triple of elements with few square roots.

Family numbering (all bit-exact and stable):

* ``cyclic:n``      i is the residue i mod n.
* ``elem2:k``       i is a k-bit mask, the product is XOR.
* ``dihedral:m``    order 2m, id ``i + m*j`` is r^i s^j.
* ``dicyclic:m``    order 4m, id ``i + 2m*j`` is a^i x^j with a^(2m)=e,
                    x^2=a^m, x a x^-1 = a^-1.
* ``quaternion``    ``dicyclic:2``: ids 0..3 are 1, i, -1, -i and ids 4..7
                    are j, k, -j, -k (a = i, x = j).
* ``sym:m``         permutations of range(m) in lexicographic order; the
                    product p*q is the map i -> p[q[i]].
* ``alt:m``         the even permutations, lexicographic order, same product.
* ``product(A,B,...)`` direct product, id is mixed radix with the first
                    factor most significant.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NoTripleFound, NotAGroup, OrderTooLarge, UnknownFamily

DEFAULT_MAX_ORDER = 2048
FULL_ASSOCIATIVITY_LIMIT = 512
SAMPLED_TRIPLES = 1_000_000


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its Cayley table (identity is element 0)."""

    order: int
    cayley: Tuple[Tuple[int, ...], ...] = field(repr=False)
    inverse: Tuple[int, ...] = field(repr=False)
    name: str = ""
    sampled_validated: bool = False

    identity = 0

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"Group({label}, n={self.order})"

    @property
    def n(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, elems: Iterable[int]) -> int:
        acc = 0
        table = self.cayley
        for g in elems:
            acc = table[acc][g]
        return acc

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse[g], -k
        acc = 0
        for _ in range(k):
            acc = self.cayley[acc][g]
        return acc

    def commutator(self, a: int, b: int) -> int:
        """[a,b] = a b a^-1 b^-1."""
        t, inv = self.cayley, self.inverse
        return t[t[t[a][b]][inv[a]]][inv[b]]

    def element_order(self, g: int) -> int:
        k, acc = 1, g
        while acc != 0:
            acc = self.cayley[acc][g]
            k += 1
        return k

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.cayley, dtype=np.int64).reshape(self.order, self.order)

    @cached_property
    def is_abelian(self) -> bool:
        arr = self.array
        return bool(np.array_equal(arr, arr.T))

    @cached_property
    def squares(self) -> Tuple[int, ...]:
        return tuple(self.cayley[x][x] for x in range(self.order))

    @cached_property
    def sqrt_counts(self) -> Tuple[int, ...]:
        counts = [0] * self.order
        for s in self.squares:
            counts[s] += 1
        return tuple(counts)

    @cached_property
    def involutions(self) -> Tuple[int, ...]:
        return tuple(g for g in range(1, self.order) if self.squares[g] == 0)

    @cached_property
    def is_elementary_abelian_2(self) -> bool:
        return self.order > 1 and all(s == 0 for s in self.squares)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` stored as a sorted tuple of element ids."""

    parent: Group
    elements: Tuple[int, ...]
    closed: bool = True

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __len__(self) -> int:
        return len(self.elements)

    def is_cyclic(self) -> bool:
        G = self.parent
        return any(G.element_order(g) == self.order for g in self.elements)


@dataclass(frozen=True, eq=False)
class AbelianizationView:
    """The quotient G/G' with cosets numbered 0..q-1 and coset 0 = [e]."""

    group: Group
    quotient_order: int
    coset_of: Tuple[int, ...] = field(repr=False)
    representatives: Tuple[int, ...] = field(repr=False)
    add_table: Tuple[Tuple[int, ...], ...] = field(repr=False)

    zero = 0

    def coset(self, g: int) -> int:
        return self.coset_of[g]

    def add(self, x: int, y: int) -> int:
        return self.add_table[x][y]

    def neg(self, x: int) -> int:
        return self.coset_of[self.group.inv(self.representatives[x])]

    def sum(self, elems: Iterable[int]) -> int:
        acc = 0
        for g in elems:
            acc = self.add_table[acc][self.coset_of[g]]
        return acc

    def coset_members(self, x: int) -> Tuple[int, ...]:
        return tuple(g for g, c in enumerate(self.coset_of) if c == x)


@dataclass(frozen=True)
class PhiTriple:
    """Identity-product triple with a report on the genericity conditions."""

    a: int
    b: int
    c: int
    conditions: Dict[str, bool]
    params: Dict[str, float]
    root_count: int
    coset_root_count: int

    def all_hold(self) -> bool:
        return all(self.conditions.values())


# ---------------------------------------------------------------- building


def _validate_associativity(arr: np.ndarray, seed: int = 0) -> Tuple[bool, Optional[tuple]]:
    n = arr.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        for a in range(n):
            # (a*b)*c versus a*(b*c) for all b, c at once
            left = arr[arr[a]]
            right = arr[a][arr]
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                return False, (a, int(b), int(c))
        return True, None
    rng = np.random.default_rng(seed)
    a = rng.integers(0, n, SAMPLED_TRIPLES)
    b = rng.integers(0, n, SAMPLED_TRIPLES)
    c = rng.integers(0, n, SAMPLED_TRIPLES)
    bad = arr[arr[a, b], c] != arr[a, arr[b, c]]
    if bad.any():
        i = int(np.argmax(bad))
        return False, (int(a[i]), int(b[i]), int(c[i]))
    return True, None


def from_cayley_table(table: Sequence[Sequence[int]], name: str = "") -> Group:
    """Validate a Cayley table and return the group it defines.

    If the identity is some element e other than 0, elements 0 and e are
    swapped so that the returned group has identity 0.
    """
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    rows = [list(r) for r in table]
    for i, r in enumerate(rows):
        if len(r) != n:
            raise NotAGroup(f"row {i} has length {len(r)}, expected {n}")
        for v in r:
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise NotAGroup(f"row {i} has entry {v} outside 0..{n - 1}")
    arr = np.asarray(rows, dtype=np.int64)
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(arr[i]), full):
            raise NotAGroup(f"row {i} is not a permutation")
    for j in range(n):
        if not np.array_equal(np.sort(arr[:, j]), full):
            raise NotAGroup(f"column {j} is not a permutation")
    ident = None
    for e in range(n):
        if np.array_equal(arr[e], full) and np.array_equal(arr[:, e], full):
            ident = e
            break
    if ident is None:
        raise NotAGroup("no identity element")
    if ident != 0:
        perm = np.arange(n)
        perm[0], perm[ident] = ident, 0
        # perm is an involution, so relabelling is conjugation by it
        arr = perm[arr[np.ix_(perm, perm)]]
    ok, triple = _validate_associativity(arr)
    if not ok:
        raise NotAGroup(f"associativity fails at triple {triple}")
    return _from_array(arr, name, sampled=n > FULL_ASSOCIATIVITY_LIMIT)


def _from_array(arr: np.ndarray, name: str, sampled: bool = False) -> Group:
    n = arr.shape[0]
    inv = np.argmax(arr == 0, axis=1)
    cayley = tuple(tuple(int(v) for v in row) for row in arr)
    return Group(n, cayley, tuple(int(v) for v in inv), name, sampled)


def _from_elements(elements: List, mul, name: str) -> Group:
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    arr = np.empty((n, n), dtype=np.int64)
    for i, g in enumerate(elements):
        arr[i] = [index[mul(g, h)] for h in elements]
    return _from_array(arr, name)


def read_cayley_file(path) -> Group:
    """Read the text format: n on the first line, then n rows of n ids."""
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens:
        raise NotAGroup("empty file")
    n = int(tokens[0])
    vals = [int(t) for t in tokens[1:]]
    if len(vals) != n * n:
        raise NotAGroup(f"expected {n * n} entries, found {len(vals)}")
    return from_cayley_table([vals[i * n:(i + 1) * n] for i in range(n)], name=str(path))


def write_cayley_text(G: Group) -> str:
    lines = [str(G.order)]
    lines += [" ".join(str(v) for v in row) for row in G.cayley]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- families


def _split_args(body: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if cur:
        parts.append("".join(cur).strip())
    return [p for p in parts if p]


def family_order(spec: str) -> int:
    """Order of the group a family descriptor would build (no table built)."""
    spec = spec.strip()
    m = re.fullmatch(r"product\((.*)\)", spec)
    if m:
        factors = _split_args(m.group(1))
        if not factors:
            raise UnknownFamily(f"empty product in {spec!r}")
        return math.prod(family_order(f) for f in factors)
    if spec == "quaternion":
        return 8
    m = re.fullmatch(r"([a-z0-9]+):(\d+)", spec)
    if not m:
        raise UnknownFamily(f"cannot parse family descriptor {spec!r}")
    fam, k = m.group(1), int(m.group(2))
    if fam == "cyclic" and k >= 1:
        return k
    if fam == "elem2" and k >= 0:
        return 2 ** k
    if fam == "dihedral" and k >= 1:
        return 2 * k
    if fam == "dicyclic" and k >= 1:
        return 4 * k
    if fam == "sym" and k >= 1:
        return math.factorial(k)
    if fam == "alt" and k >= 1:
        return max(1, math.factorial(k) // 2)
    raise UnknownFamily(f"unknown family {spec!r}")


def make_family(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Build a standard group from a descriptor such as ``sym:4`` or
    ``product(cyclic:4,elem2:2)``."""
    spec = spec.strip()
    n = family_order(spec)
    if n > max_order:
        raise OrderTooLarge(f"{spec} has order {n} > cap {max_order}")
    m = re.fullmatch(r"product\((.*)\)", spec)
    if m:
        factors = [make_family(f, max_order) for f in _split_args(m.group(1))]
        return direct_product(factors, name=spec)
    if spec == "quaternion":
        return _dicyclic(2, "quaternion")
    fam, k = spec.split(":")
    k = int(k)
    if fam == "cyclic":
        arr = (np.arange(k)[:, None] + np.arange(k)[None, :]) % k
        return _from_array(arr, spec)
    if fam == "elem2":
        size = 2 ** k
        arr = np.arange(size)[:, None] ^ np.arange(size)[None, :]
        return _from_array(arr, spec)
    if fam == "dihedral":
        def dmul(g, h):
            (i, j), (a, b) = g, h
            return ((i + (a if j == 0 else -a)) % k, (j + b) % 2)
        elems = [(i, j) for j in range(2) for i in range(k)]
        return _from_elements(elems, dmul, spec)
    if fam == "dicyclic":
        return _dicyclic(k, spec)
    if fam in ("sym", "alt"):
        perms = list(itertools.permutations(range(k)))
        if fam == "alt":
            perms = [p for p in perms if _parity(p) == 0]
        return _from_elements(perms, lambda p, q: tuple(p[i] for i in q), spec)
    raise UnknownFamily(spec)


def _dicyclic(k: int, name: str) -> Group:
    two_k = 2 * k

    def qmul(g, h):
        (i, j), (a, b) = g, h
        if j == 0:
            return ((i + a) % two_k, b)
        # x a^a = a^-a x, and x^2 = a^k
        if b == 0:
            return ((i - a) % two_k, 1)
        return ((i - a + k) % two_k, 0)

    elems = [(i, j) for j in range(2) for i in range(two_k)]
    return _from_elements(elems, qmul, name)


def _parity(p: Sequence[int]) -> int:
    seen, parity = set(), 0
    for s in range(len(p)):
        if s in seen:
            continue
        length, x = 0, s
        while x not in seen:
            seen.add(x)
            x = p[x]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def direct_product(factors: Sequence[Group], name: str = "") -> Group:
    arr = np.zeros((1, 1), dtype=np.int64)
    for F in factors:
        f = F.array
        m, k = arr.shape[0], f.shape[0]
        # (a, x)*(b, y) = (ab, xy), id(a, x) = a*k + x
        big = arr[:, None, :, None] * k + f[None, :, None, :]
        arr = big.reshape(m * k, m * k)
    return _from_array(arr, name or "product(" + ",".join(F.name for F in factors) + ")")


# ------------------------------------------------------------ subgroups


def generated_subgroup(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = [g for g in set(gens) if g != 0]
    seen = {0}
    queue = deque([0])
    table = G.cayley
    while queue:
        x = queue.popleft()
        for g in gens:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Subgroup(G, tuple(sorted(seen)))


def is_subgroup(G: Group, elems: Iterable[int]) -> bool:
    s = set(elems)
    if 0 not in s:
        return False
    table = G.cayley
    return all(table[a][b] in s for a in s for b in s)


def commutator_set(G: Group) -> Tuple[int, ...]:
    return tuple(sorted({G.commutator(a, b) for a in range(G.order) for b in range(G.order)}))


def commutator_subgroup(G: Group) -> Subgroup:
    cache = G.__dict__.setdefault("_derived", {})
    if "sub" not in cache:
        cache["sub"] = generated_subgroup(G, commutator_set(G))
    return cache["sub"]


def abelianization(G: Group) -> AbelianizationView:
    cache = G.__dict__.setdefault("_derived", {})
    if "ab" in cache:
        return cache["ab"]
    D = commutator_subgroup(G).elements
    coset_of = [-1] * G.order
    reps: List[int] = []
    for g in range(G.order):
        if coset_of[g] < 0:
            idx = len(reps)
            reps.append(g)
            for d in D:
                coset_of[G.mul(g, d)] = idx
    q = len(reps)
    add = tuple(tuple(coset_of[G.mul(reps[x], reps[y])] for y in range(q)) for x in range(q))
    view = AbelianizationView(G, q, tuple(coset_of), tuple(reps), add)
    cache["ab"] = view
    return view


def subset_sum_ab(G: Group, S: Iterable[int]) -> int:
    """Coset id of the sum of ``S`` (a multiset) in the abelianization."""
    return abelianization(G).sum(S)


def hall_paige_product(G: Group) -> bool:
    return subset_sum_ab(G, G.elements()) == 0


def sylow_2_subgroup(G: Group, max_order: int = DEFAULT_MAX_ORDER) -> Subgroup:
    """A Sylow 2-subgroup, grown one index-2 step at a time.

    If P is a 2-subgroup that is not Sylow then N(P)/P has even order, so
    some g in N(P) with g not in P and g^2 in P exists and <P, g> has order
    2|P|.
    """
    if G.order > max_order:
        raise OrderTooLarge(f"Sylow search disabled above order {max_order}")
    target = G.order & -G.order
    P = Subgroup(G, (0,))
    while P.order < target:
        members = P.members
        table, inv = G.cayley, G.inverse
        found = None
        for g in range(G.order):
            if g in members or table[g][g] not in members:
                continue
            gi = inv[g]
            if all(table[table[g][p]][gi] in members for p in P.elements):
                found = g
                break
        if found is None:  # pragma: no cover - excluded by Sylow theory
            raise RuntimeError("Sylow extension failed")
        P = generated_subgroup(G, P.elements + (found,))
    return P


def hall_paige_sylow(G: Group) -> bool:
    P = sylow_2_subgroup(G)
    return P.order == 1 or not P.is_cyclic()


# ------------------------------------------------------------ square roots


def default_tau(n: int) -> int:
    return n // 16


def square_root_count(G: Group, g: int) -> int:
    return G.sqrt_counts[g]


def is_generic(G: Group, g: int, tau: Optional[int] = None) -> bool:
    if tau is None:
        tau = default_tau(G.order)
    return g != 0 and G.sqrt_counts[g] <= tau


def coset_square_count(G: Group, g: int) -> int:
    """Number of x with x^2 in the coset [g] of G'."""
    ab = abelianization(G)
    cache = G.__dict__.setdefault("_derived", {})
    if "coset_sq" not in cache:
        per = [0] * ab.quotient_order
        for s in G.squares:
            per[ab.coset_of[s]] += 1
        cache["coset_sq"] = tuple(per)
    return cache["coset_sq"][ab.coset_of[g]]


def _width_table(G: Group) -> Dict[int, int]:
    cache = G.__dict__.setdefault("_derived", {})
    if "width" in cache:
        return cache["width"]
    comms = commutator_set(G)
    dist = {0: 0}
    frontier = [0]
    t = 0
    table = G.cayley
    while frontier:
        t += 1
        nxt = []
        for x in frontier:
            for c in comms:
                y = table[x][c]
                if y not in dist:
                    dist[y] = t
                    nxt.append(y)
        frontier = nxt
    cache["width"] = dist
    return dist


def commutator_width(G: Group, g: int) -> Optional[int]:
    """Least t such that g is a product of t commutators (None if g is not in G')."""
    return _width_table(G).get(g)


def gallagher_bound(G: Group) -> int:
    d = commutator_subgroup(G).order
    return max(1, math.ceil(math.log(d, 4) - 1e-12)) if d > 1 else 1


# ---------------------------------------------------------------- phi triple


def find_phi_triple(G: Group, tau: Optional[int] = None,
                    root_bound: Optional[int] = None,
                    coset_root_bound: Optional[int] = None,
                    small_commutator: Optional[float] = None,
                    min_order: int = 2) -> PhiTriple:
    """Scan all triples (a, b, (ab)^-1) of non-identity elements.

    Conditions reported: ``a`` (product is e), ``generic`` (all three generic
    under tau), ``b`` (few roots of x^2 in {a,b,c}), ``c`` (few roots of x^2
    in the union of their cosets) and ``d`` (outside G' when G' is small).
    The triple satisfying the most conditions wins, then the one with fewest
    square roots, then the lexicographically first.
    """
    n = G.order
    if n < max(min_order, 2):
        raise NoTripleFound(f"order {n} below floor {max(min_order, 2)}")
    if tau is None:
        tau = default_tau(n)
    dsub = commutator_subgroup(G)
    if root_bound is None:
        root_bound = 2 * math.ceil(n / 8)
    if coset_root_bound is None:
        coset_root_bound = 2 * math.ceil(n / 8) * dsub.order
    if small_commutator is None:
        small_commutator = n / 8
    ab = abelianization(G)
    coset_sq = [coset_square_count(G, ab.representatives[x]) for x in range(ab.quotient_order)]
    sq = G.sqrt_counts
    small = dsub.order <= small_commutator
    best_key, best = None, None
    for a in range(1, n):
        for b in range(1, n):
            c = G.inv(G.mul(a, b))
            if c == 0:
                continue
            trip = (a, b, c)
            roots = sum(sq[g] for g in set(trip))
            croots = sum(coset_sq[x] for x in {ab.coset_of[g] for g in trip})
            conds = {
                "a": True,
                "generic": all(sq[g] <= tau for g in trip),
                "b": roots <= root_bound,
                "c": croots <= coset_root_bound,
                "d": (not small) or all(g not in dsub for g in trip),
            }
            key = (-sum(conds.values()), roots, croots, trip)
            if best_key is None or key < best_key:
                best_key = key
                best = PhiTriple(a, b, c, conds, {
                    "tau": tau, "root_bound": root_bound,
                    "coset_root_bound": coset_root_bound,
                    "small_commutator": small_commutator,
                }, roots, croots)
    if best is None:
        raise NoTripleFound("no triple of non-identity elements multiplies to e")
    return best


# ------------------------------------------------------------- misc helpers


def builtin_groups(max_order: int = 64) -> List[Group]:
    """The standard library of small groups used by sweeps and the CLI."""
    specs = builtin_specs(max_order)
    return [make_family(s) for s in specs]


def builtin_specs(max_order: int = 64) -> List[str]:
    specs: List[str] = []
    for k in range(1, 65):
        specs.append(f"cyclic:{k}")
    for k in range(1, 7):
        specs.append(f"elem2:{k}")
    for m in range(3, 33):
        specs.append(f"dihedral:{m}")
    for m in range(2, 17):
        specs.append(f"dicyclic:{m}")
    specs += ["quaternion", "sym:3", "sym:4", "alt:4", "alt:5"]
    specs += [
        "product(cyclic:2,cyclic:2)", "product(cyclic:4,cyclic:2)",
        "product(cyclic:4,elem2:2)", "product(cyclic:4,cyclic:4)",
        "product(cyclic:8,cyclic:2)", "product(cyclic:6,cyclic:2)",
        "product(cyclic:3,cyclic:3)", "product(cyclic:6,elem2:2)",
        "product(cyclic:10,cyclic:2)", "product(cyclic:12,cyclic:2)",
        "product(sym:3,cyclic:2)", "product(sym:3,cyclic:3)",
        "product(quaternion,cyclic:2)", "product(dihedral:4,cyclic:2)",
        "product(sym:3,sym:3)", "product(alt:4,cyclic:2)",
        "product(sym:4,cyclic:2)", "product(quaternion,elem2:2)",
        "product(dihedral:4,elem2:2)", "product(quaternion,cyclic:4)",
        "product(sym:3,cyclic:8)", "product(alt:4,cyclic:4)",
        "product(dihedral:8,cyclic:2)", "product(dicyclic:3,cyclic:2)",
    ]
    seen, out = set(), []
    for s in specs:
        if s not in seen and family_order(s) <= max_order:
            seen.add(s)
            out.append(s)
    return out


def describe(G: Group) -> Dict[str, object]:
    dsub = commutator_subgroup(G)
    return {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "commutator_order": dsub.order,
        "abelianization_order": abelianization(G).quotient_order,
        "involutions": len(G.involutions),
        "hall_paige": hall_paige_product(G),
        "sampled_validated": G.sampled_validated,
    }
