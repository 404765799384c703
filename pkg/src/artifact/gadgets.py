"""Absorbers, comparator and wire gadgets, sorting-network routing and
robustly matchable bipartite graphs.

Hypergraph vertices are pairs (part, g) with part 0, 1, 2 for the copies
G_A, G_B, G_C.  Gadgets in K^+_G / K^-_G keep vertices and colours as
separate id spaces; an arc u -> w has colour uw (multiplication) or u^-1 w
(division).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import (
    GadgetCollision,
    NoProjection,
    NotFound,
    PreconditionFailed,
    RoutingInvariantViolation,
    TooLarge,
    InvalidP,
    as_budget,
)
from .free_product import Word, apply_projection, normalize, separable_pairs
from .group_core import Group, abelianization, is_generic
from .hypergraph import Matching, build_slice, find_perfect_matching, verify_matching
from .sequencing import DIVISION, MULTIPLICATION

Vertex = Tuple[int, int]
PART_NAMES = "ABC"
DEFAULT_RETRIES = 100_000
EXHAUSTIVE_CAP = 10 ** 7


def _kind(kind: str) -> str:
    if kind in ("+", "plus", "mul", MULTIPLICATION):
        return MULTIPLICATION
    if kind in ("-", "minus", "div", DIVISION):
        return DIVISION
    raise ValueError(f"unknown digraph kind {kind!r}")


def arc_color(G: Group, kind: str, u: int, w: int) -> int:
    if _kind(kind) == MULTIPLICATION:
        return G.mul(u, w)
    return G.mul(G.inv(u), w)


# ------------------------------------------------------------ word templates


def template_word(G: Group, text: str, variables: Dict[str, int], constants: Dict[str, int]) -> Word:
    """Word from a template such as ``"x^-1 c^-1 b a"``; names in
    ``variables`` are free variables, names in ``constants`` group elements."""
    toks = []
    for raw in text.split():
        name, _, power = raw.partition("^")
        sign = -1 if power == "-1" else 1
        if power not in ("", "-1"):
            raise ValueError(f"bad exponent in {raw!r}")
        if name in variables:
            toks.append(sign * variables[name])
        elif name in constants:
            g = constants[name]
            toks.append(("g", g if sign == 1 else G.inv(g)))
        else:
            raise ValueError(f"unknown symbol {name!r}")
    return normalize(G, toks, len(variables))


def search_projection(G: Group, S: Sequence[Word], tau: Optional[int] = None,
                      forbidden: Iterable[int] = (), seed: int = 0,
                      retries: int = DEFAULT_RETRIES, exhaustive_cap: int = EXHAUSTIVE_CAP,
                      accept=None) -> Optional[Tuple[int, ...]]:
    """A projection separating S with no image in ``forbidden``.

    Exhaustive in lexicographic order when n^k is at most ``exhaustive_cap``,
    otherwise seeded random assignments.  ``accept(pi, images)`` can add
    further constraints.
    """
    S = list(S)
    k = max((w.k for w in S), default=0)
    bad = set(forbidden)
    pairs = separable_pairs(G, S, tau)

    def ok(pi):
        img = [apply_projection(pi, w) for w in S]
        if any(x in bad for x in img):
            return False
        if any(img[i] == img[j] for i, j in pairs):
            return False
        return accept is None or accept(pi, img)

    if G.order ** k <= exhaustive_cap:
        for pi in itertools.product(range(G.order), repeat=k):
            if ok(pi):
                return pi
        return None
    rng = random.Random(seed)
    for _ in range(retries):
        pi = tuple(rng.randrange(G.order) for _ in range(k))
        if ok(pi):
            return pi
    return None


# ------------------------------------------------------------ absorbers


@dataclass
class AbsorberVerdict:
    ok: bool
    witnesses: Dict[Tuple[int, ...], Matching] = field(default_factory=dict)
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class AbsorberInstance:
    group: Group
    R: FrozenSet[Vertex]
    F: List[FrozenSet[Vertex]]
    m: int
    projection: Optional[Tuple[int, ...]] = None
    matchings: Dict[str, List[Tuple[int, int, int]]] = field(default_factory=dict)


def _split_parts(vertices: Iterable[Vertex]) -> Tuple[List[int], List[int], List[int]]:
    parts: Tuple[List[int], List[int], List[int]] = ([], [], [])
    for p, g in vertices:
        parts[p].append(g)
    return parts


def verify_m_absorber(G: Group, R: Iterable[Vertex], F: Sequence[Iterable[Vertex]], m: int,
                      budget=None, max_family: int = 8) -> AbsorberVerdict:
    """R m-absorbs F: every m-subfamily F' leaves R with the union of F'
    spanning a perfect matching."""
    R = frozenset(R)
    F = [frozenset(S) for S in F]
    if len(F) > max_family:
        raise TooLarge(f"{len(F)} sets exceed the family cap {max_family}")
    union: Set[Vertex] = set()
    for S in F:
        if S & union:
            return AbsorberVerdict(False, failure="family sets are not disjoint")
        union |= S
    if R & union:
        return AbsorberVerdict(False, failure="R meets the family")
    bud = as_budget(budget)
    ab = abelianization(G)
    witnesses: Dict[Tuple[int, ...], Matching] = {}
    for sub in itertools.combinations(range(len(F)), m):
        verts = set(R)
        for i in sub:
            verts |= F[i]
        X, Y, Z = _split_parts(verts)
        if not (len(X) == len(Y) == len(Z)):
            return AbsorberVerdict(False, witnesses, f"subfamily {sub}: unbalanced parts")
        M = find_perfect_matching(build_slice(G, X, Y, Z), budget=bud)
        if M is None:
            return AbsorberVerdict(False, witnesses, f"subfamily {sub}: no perfect matching")
        assert ab.sum(X + Y + Z) == 0
        witnesses[sub] = M
    return AbsorberVerdict(True, witnesses)


def union_absorber(pieces: Sequence[Tuple[Iterable[Vertex], Iterable[Vertex], Iterable[Vertex]]]):
    """Combine R_i 1-absorbing {X_i, Y_i} into (R, X, Y) with
    R = union R_i plus Z, where Z is the overlap of the X's and Y's."""
    Rs, Xs, Ys = set(), set(), set()
    for R, X, Y in pieces:
        Rs |= set(R)
        Xs |= set(X)
        Ys |= set(Y)
    Z = Xs & Ys
    return frozenset(Rs | Z), frozenset(Xs - Z), frozenset(Ys - Z)


COMMUTATOR_WORDS = {
    # part A
    "z": (0, "z"),
    "b-z": (0, "b^-1 z"),
    "y": (0, "y"),
    "a-y": (0, "a^-1 y"),
    # part B
    "x": (1, "x"),
    "z-cx": (1, "z^-1 c x"),
    "z-ba-b-cx": (1, "z^-1 b a^-1 b^-1 c x"),
    "y-aba-b-cx": (1, "y^-1 a b a^-1 b^-1 c x"),
    "y-b-cx": (1, "y^-1 b^-1 c x"),
    # part C
    "x-c-": (2, "x^-1 c^-1"),
    "x-c-bab-a-": (2, "x^-1 c^-1 b a b^-1 a^-1"),
    "x-c-bab-": (2, "x^-1 c^-1 b a b^-1"),
    "x-c-ba": (2, "x^-1 c^-1 b a"),
    "x-c-b": (2, "x^-1 c^-1 b"),
}
# the two absorbed vertices in part A
COMMUTATOR_TARGETS = {"[a,b]c": "a b a^-1 b^-1 c", "c": "c"}
COMMUTATOR_MATCHINGS = {
    "c": [("c", "x", "x-c-"), ("z", "z-ba-b-cx", "x-c-bab-"), ("b-z", "z-cx", "x-c-b"),
          ("y", "y-aba-b-cx", "x-c-bab-a-"), ("a-y", "y-b-cx", "x-c-ba")],
    "[a,b]c": [("[a,b]c", "x", "x-c-bab-a-"), ("y", "y-b-cx", "x-c-b"), ("b-z", "z-ba-b-cx", "x-c-ba"),
               ("z", "z-cx", "x-c-"), ("a-y", "y-aba-b-cx", "x-c-bab-")],
}


def commutator_preconditions(G: Group, a: int, b: int, c: int, tau: Optional[int] = None) -> Dict[str, int]:
    """The elements that must be generic, keyed by their expression."""
    ci = G.inv(c)
    ai, bi = G.inv(a), G.inv(b)
    return {
        "c": c,
        "c^-1 b a b^-1 a^-1": G.prod((ci, b, a, bi, ai)),
        "c^-1 b a b^-1": G.prod((ci, b, a, bi)),
        "c^-1 b a": G.prod((ci, b, a)),
        "c^-1 b": G.prod((ci, b)),
    }


def commutator_word_set(G: Group, a: int, b: int, c: int) -> Dict[str, Word]:
    variables = {"x": 1, "y": 2, "z": 3}
    constants = {"a": a, "b": b, "c": c}
    return {name: template_word(G, text, variables, constants) for name, (_, text) in COMMUTATOR_WORDS.items()}


def build_commutator_absorber(G: Group, a: int, b: int, c: int, tau: Optional[int] = None,
                              U: Iterable[int] = (), seed: int = 0,
                              retries: int = DEFAULT_RETRIES, budget=None) -> AbsorberInstance:
    """R' of size at most 14 that 1-absorbs {[a,b]c, c} (both in part A)."""
    pre = commutator_preconditions(G, a, b, c, tau)
    offending = [name for name, g in pre.items() if not is_generic(G, g, tau)]
    if offending:
        raise PreconditionFailed("non-generic elements: " + ", ".join(offending), offending)
    U = set(U)
    ab_c = G.prod((G.commutator(a, b), c))
    if ab_c == c:
        # [a,b] = e: a single edge (c, s, t) absorbs both
        for s in range(G.order):
            t = G.inv(G.mul(c, s))
            if s in U or t in U:
                continue
            R = frozenset({(1, s), (2, t)})
            F = [frozenset({(0, c)})]
            return AbsorberInstance(G, R, F, 1, None, {"c": [(c, s, t)], "[a,b]c": [(c, s, t)]})
        raise NoProjection("no edge through c avoids U")
    words = commutator_word_set(G, a, b, c)
    names = list(words)
    S = [words[n] for n in names]
    part_of = [COMMUTATOR_WORDS[n][0] for n in names]
    targets = {c, ab_c}

    def accept(pi, img):
        return all(not (p == 0 and g in targets) for p, g in zip(part_of, img))

    pi = search_projection(G, S, tau, U, seed=seed, retries=retries, accept=accept)
    if pi is None:
        raise NoProjection("no separating projection avoids U")
    images = {n: apply_projection(pi, w) for n, w in zip(names, S)}
    images["c"] = c
    images["[a,b]c"] = ab_c
    R = frozenset((COMMUTATOR_WORDS[n][0], images[n]) for n in names)
    F = [frozenset({(0, ab_c)}), frozenset({(0, c)})]
    matchings = {key: [tuple(images[n] for n in edge) for edge in edges]
                 for key, edges in COMMUTATOR_MATCHINGS.items()}
    inst = AbsorberInstance(G, R, F, 1, pi, matchings)
    check = verify_template_matchings(inst)
    if not check:
        raise RoutingInvariantViolation(f"template matching failed: {check.failure}")
    if not verify_m_absorber(G, R, F, 1, budget=budget):
        raise RoutingInvariantViolation("solver could not confirm 1-absorption")
    return inst


def verify_template_matchings(inst: AbsorberInstance) -> AbsorberVerdict:
    """Each absorbed set must have a stored matching covering exactly R plus that set."""
    G = inst.group
    for i, S in enumerate(inst.F):
        verts = set(inst.R) | set(S)
        X, Y, Z = _split_parts(verts)
        sl = build_slice(G, X, Y, Z)
        if not any(verify_matching(sl, edges) for edges in inst.matchings.values()):
            return AbsorberVerdict(False, failure=f"no stored matching covers R with set {i}")
    return AbsorberVerdict(True)


# ------------------------------------------------------------ wire gadget


@dataclass(frozen=True)
class WireGadget:
    kind: str
    path: Tuple[int, int, int, int]
    colors: Tuple[int, int, int]

    @property
    def internal(self) -> Tuple[int, int]:
        return self.path[1], self.path[2]


def build_wire_gadget(G: Group, kind: str, x: int, y: int, U: Iterable[int] = (),
                      U_colors: Optional[Iterable[int]] = None) -> WireGadget:
    """Rainbow path x -> u -> v -> y with u, v outside U and colours outside
    U_colors (default U)."""
    if x == y:
        raise ValueError("wire endpoints must differ")
    kind = _kind(kind)
    bad_v = set(U) | {x, y}
    bad_c = set(U if U_colors is None else U_colors)
    for u in range(G.order):
        if u in bad_v:
            continue
        c1 = arc_color(G, kind, x, u)
        if c1 in bad_c:
            continue
        for v in range(G.order):
            if v == u or v in bad_v:
                continue
            c2, c3 = arc_color(G, kind, u, v), arc_color(G, kind, v, y)
            if len({c1, c2, c3}) == 3 and c2 not in bad_c and c3 not in bad_c:
                return WireGadget(kind, (x, u, v, y), (c1, c2, c3))
    raise NotFound(f"no wire gadget from {x} to {y}")


# ------------------------------------------------------------ comparator gadget

COMPARATOR_VARIABLES = {"x": 1, "y": 2, "a": 3, "b": 4, "c": 5, "d": 6, "f": 7}
# vertex names, colour names and the four length-5 paths as vertex-name lists
COMPARATOR_TABLES = {
    MULTIPLICATION: {
        "vertices": ["x", "y", "a", "b", "x d", "y d", "d^-1 b", "d^-1 c", "x f", "y f", "f^-1 a", "f^-1 c"],
        "colors": ["x a", "y b", "a x d", "b y d", "x b", "y a", "x c", "y c", "d^-1 b x f", "d^-1 c y f"],
        "ends": ("f^-1 a", "f^-1 c"),
        "paths": {
            ("-", "-"): ["x", "b", "y d", "d^-1 b", "x f", "f^-1 a"],
            ("+", "+"): ["y", "a", "x d", "d^-1 c", "y f", "f^-1 c"],
            ("-", "+"): ["x", "a", "x d", "d^-1 b", "x f", "f^-1 c"],
            ("+", "-"): ["y", "b", "y d", "d^-1 c", "y f", "f^-1 a"],
        },
    },
    DIVISION: {
        "vertices": ["x", "y", "a", "b", "d x", "d y", "d b", "d c", "f x", "f y", "f a", "f c"],
        "colors": ["x^-1 a", "x^-1 b", "y^-1 a", "y^-1 b", "a^-1 d x", "b^-1 d y", "x^-1 c", "y^-1 c",
                   "b^-1 d^-1 f x", "c^-1 d^-1 f y"],
        "ends": ("f a", "f c"),
        "paths": {
            ("-", "-"): ["x", "b", "d y", "d b", "f x", "f a"],
            ("+", "+"): ["y", "a", "d x", "d c", "f y", "f c"],
            ("-", "+"): ["x", "a", "d x", "d b", "f x", "f c"],
            ("+", "-"): ["y", "b", "d y", "d c", "f y", "f a"],
        },
    },
}


@dataclass
class ComparatorGadget:
    kind: str
    vertices: Dict[str, int]
    colors: Dict[str, int]
    paths: Dict[Tuple[str, str], List[int]]
    projection: Optional[Tuple[int, ...]] = None

    @property
    def start(self) -> Dict[str, int]:
        return {"-": self.paths[("-", "-")][0], "+": self.paths[("+", "+")][0]}

    @property
    def end(self) -> Dict[str, int]:
        return {"-": self.paths[("-", "-")][-1], "+": self.paths[("+", "+")][-1]}

    def vertex_set(self) -> List[int]:
        return list(self.vertices.values())

    def color_set(self) -> List[int]:
        return list(self.colors.values())


STRAIGHT = (("-", "-"), ("+", "+"))
CROSSED = (("-", "+"), ("+", "-"))


@dataclass(frozen=True)
class GadgetCheck:
    ok: bool
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_comparator(G: Group, gad: ComparatorGadget) -> GadgetCheck:
    verts, cols = gad.vertex_set(), gad.color_set()
    if len(set(verts)) != 12 or len(verts) != 12:
        return GadgetCheck(False, "the gadget does not have 12 distinct vertices")
    if len(set(cols)) != 10 or len(cols) != 10:
        return GadgetCheck(False, "the gadget does not have 10 distinct colours")
    for key, p in gad.paths.items():
        if len(p) != 6:
            return GadgetCheck(False, f"path {key} does not have length 5")
        if p[0] != gad.start[key[0]] or p[-1] != gad.end[key[1]]:
            return GadgetCheck(False, f"path {key} has wrong endpoints")
    for pair in (STRAIGHT, CROSSED):
        pv: List[int] = []
        pc: List[int] = []
        for key in pair:
            p = gad.paths[key]
            pv += p
            pc += [arc_color(G, gad.kind, u, w) for u, w in zip(p, p[1:])]
        if sorted(pv) != sorted(verts):
            return GadgetCheck(False, f"paths {pair} do not partition the vertices")
        if sorted(pc) != sorted(cols):
            return GadgetCheck(False, f"paths {pair} do not partition the colours")
    return GadgetCheck(True)


def comparator_word_set(G: Group, kind: str) -> Tuple[List[str], List[Word], int]:
    t = COMPARATOR_TABLES[_kind(kind)]
    names = t["vertices"] + t["colors"]
    words = [template_word(G, n, COMPARATOR_VARIABLES, {}) for n in names]
    return names, words, len(t["vertices"])


def build_comparator_gadget(G: Group, kind: str, U: Iterable[int] = (),
                            U_colors: Optional[Iterable[int]] = None, seed: int = 0,
                            retries: int = DEFAULT_RETRIES, min_order: int = 22,
                            tau: Optional[int] = None) -> ComparatorGadget:
    """12 vertices and 10 colours with paths between x^-, x^+ and y^-, y^+."""
    kind = _kind(kind)
    if G.order < min_order:
        raise NoProjection(f"order {G.order} is below the floor {min_order}")
    names, words, nv = comparator_word_set(G, kind)
    bad_v = set(U)
    bad_c = set(U if U_colors is None else U_colors)

    def accept(pi, img):
        return not any(g in bad_v for g in img[:nv]) and not any(g in bad_c for g in img[nv:])

    pi = search_projection(G, words, tau, (), seed=seed, retries=retries, accept=accept)
    if pi is None:
        raise NoProjection("no separating projection found")
    img = dict(zip(names, (apply_projection(pi, w) for w in words)))
    t = COMPARATOR_TABLES[kind]
    gad = ComparatorGadget(
        kind,
        {n: img[n] for n in t["vertices"]},
        {n: img[n] for n in t["colors"]},
        {key: [img[n] for n in p] for key, p in t["paths"].items()},
        pi,
    )
    check = verify_comparator(G, gad)
    if not check:
        raise RoutingInvariantViolation(check.failure)
    return gad


# ------------------------------------------------------------ sorting networks

Node = Tuple  # ("in", ch) / ("out", ch) / ("cin", i, s) / ("cout", i, s)


@dataclass
class SortingNetwork:
    m: int
    comparators: List[Tuple[int, int]]
    layers: List[List[int]]
    wires: List[Tuple[Node, Node]]
    uniform: bool = False

    @property
    def depth(self) -> int:
        return len(self.layers)

    def wire_from(self) -> Dict[Node, Node]:
        return dict(self.wires)


def _batcher_pairs(m: int) -> List[Tuple[int, int]]:
    n = 1
    while n < m:
        n *= 2
    out = []
    p = 1
    while p < n:
        k = p
        while k >= 1:
            for j in range(k % p, n - k, 2 * k):
                for i in range(min(k, n - j - k)):
                    if (i + j) // (2 * p) == (i + j + k) // (2 * p):
                        lo, hi = i + j, i + j + k
                        if hi < m:
                            out.append((lo, hi))
            k //= 2
        p *= 2
    return out


def _layer(m: int, comps: Sequence[Tuple[int, int]]) -> List[List[int]]:
    last = [0] * m
    layers: List[List[int]] = []
    for idx, (lo, hi) in enumerate(comps):
        L = max(last[lo], last[hi])
        if L == len(layers):
            layers.append([])
        layers[L].append(idx)
        last[lo] = last[hi] = L + 1
    return layers


def _wires(m: int, comps: Sequence[Tuple[int, int]], layers: Sequence[Sequence[int]]) -> List[Tuple[Node, Node]]:
    current: List[Node] = [("in", ch) for ch in range(m)]
    wires = []
    for layer in layers:
        for idx in layer:
            lo, hi = comps[idx]
            wires.append((current[lo], ("cin", idx, "-")))
            wires.append((current[hi], ("cin", idx, "+")))
            current[lo] = ("cout", idx, "-")
            current[hi] = ("cout", idx, "+")
    for ch in range(m):
        wires.append((current[ch], ("out", ch)))
    return wires


def apply_network(comps: Sequence[Tuple[int, int]], values: Sequence[int]) -> List[int]:
    v = list(values)
    for lo, hi in comps:
        if v[lo] > v[hi]:
            v[lo], v[hi] = v[hi], v[lo]
    return v


def _sorts_01(m: int, comps: Sequence[Tuple[int, int]]) -> bool:
    for bits in range(1 << m):
        vals = [(bits >> i) & 1 for i in range(m)]
        out = apply_network(comps, vals)
        if any(out[i] > out[i + 1] for i in range(m - 1)):
            return False
    return True


def network_sorts(net: SortingNetwork, exhaustive_up_to: int = 6) -> bool:
    """All permutations for small m, the 0-1 principle otherwise (m <= 16)."""
    if net.m <= exhaustive_up_to:
        target = list(range(1, net.m + 1))
        return all(evaluate_network(net, list(p))[1] == target
                   for p in itertools.permutations(range(1, net.m + 1)))
    if net.m > 16:
        raise TooLarge("sorting checks are limited to m <= 16")
    return _sorts_01(net.m, net.comparators)


def evaluate_network(net: SortingNetwork, inputs: Sequence[int]) -> Tuple[Dict[Node, int], List[int]]:
    """Values at every node following the wire and comparator rules."""
    src = {dst: s for s, dst in net.wires}
    val: Dict[Node, int] = {("in", ch): inputs[ch] for ch in range(net.m)}
    for layer in net.layers:
        for idx in layer:
            lo_v = val[src[("cin", idx, "-")]]
            hi_v = val[src[("cin", idx, "+")]]
            val[("cin", idx, "-")], val[("cin", idx, "+")] = lo_v, hi_v
            val[("cout", idx, "-")] = min(lo_v, hi_v)
            val[("cout", idx, "+")] = max(lo_v, hi_v)
    out = []
    for ch in range(net.m):
        val[("out", ch)] = val[src[("out", ch)]]
        out.append(val[("out", ch)])
    return val, out


def path_lengths(net: SortingNetwork) -> Set[int]:
    """Comparator counts along every input -> output path of the contracted digraph."""
    src = {dst: s for s, dst in net.wires}
    lengths: Dict[Node, Set[int]] = {("in", ch): {0} for ch in range(net.m)}

    def at(node: Node) -> Set[int]:
        if node[0] == "cout":
            idx = node[1]
            inner = at(src[("cin", idx, "-")]) | at(src[("cin", idx, "+")])
            return {x + 1 for x in inner}
        return lengths[node]

    out: Set[int] = set()
    for ch in range(net.m):
        out |= at(src[("out", ch)])
    return out


def _perfect_pairings(chs: List[int], ok) -> Optional[List[Tuple[int, int]]]:
    if not chs:
        return []
    first = chs[0]
    for j in range(1, len(chs)):
        if ok(first, chs[j]):
            rest = _perfect_pairings(chs[1:j] + chs[j + 1:], ok)
            if rest is not None:
                return [(first, chs[j])] + rest
    return None


def _try_pad(m: int, comps: Sequence[Tuple[int, int]], assign: Sequence[int], depth: int):
    """Fill idle channels of each layer with no-op comparators, if possible."""
    layers: List[List[Tuple[int, int]]] = [[] for _ in range(depth)]
    for idx, L in enumerate(assign):
        layers[L].append(comps[idx])
    vectors = {tuple((bits >> i) & 1 for i in range(m)) for bits in range(1 << m)}
    padded: List[List[Tuple[int, int]]] = []
    for layer in layers:
        busy = {ch for pair in layer for ch in pair}
        idle = [ch for ch in range(m) if ch not in busy]

        def noop(i, j, vectors=vectors):
            return all(v[i] <= v[j] for v in vectors)

        extra = _perfect_pairings(idle, noop)
        if extra is None:
            return None
        padded.append(layer + extra)
        vectors = {tuple(apply_network(layer, v)) for v in vectors}
    return padded


def _pad_layers(m: int, comps: List[Tuple[int, int]], layers: List[List[int]], max_extra: int = 2,
                max_tries: int = 200_000):
    """Reschedule comparators (keeping per-channel order) and add no-op
    comparators so every channel meets a comparator in every layer."""
    prev: List[List[int]] = []
    last_on = [-1] * m
    for idx, (lo, hi) in enumerate(comps):
        prev.append([p for p in (last_on[lo], last_on[hi]) if p >= 0])
        last_on[lo] = last_on[hi] = idx
    tail = [0] * len(comps)
    for idx in reversed(range(len(comps))):
        for p in prev[idx]:
            tail[p] = max(tail[p], tail[idx] + 1)
    tries = [0]
    for depth in range(len(layers), len(layers) + max_extra + 1):
        assign = [0] * len(comps)

        def go(idx):
            if idx == len(comps):
                tries[0] += 1
                if tries[0] > max_tries:
                    raise RoutingInvariantViolation("padding search exhausted its budget")
                return _try_pad(m, comps, assign, depth)
            lo_layer = max((assign[p] + 1 for p in prev[idx]), default=0)
            for L in range(lo_layer, depth - tail[idx]):
                assign[idx] = L
                r = go(idx + 1)
                if r is not None:
                    return r
            return None

        res = go(0)
        if res is not None:
            ordered: List[Tuple[int, int]] = []
            out_layers = []
            for layer in res:
                out_layers.append(list(range(len(ordered), len(ordered) + len(layer))))
                ordered += layer
            return ordered, out_layers
    raise RoutingInvariantViolation("no uniform padding found")


def build_sorting_network(m: int, pad_uniform: bool = False) -> SortingNetwork:
    if m < 1:
        raise ValueError("m must be at least 1")
    comps = _batcher_pairs(m)
    layers = _layer(m, comps)
    if pad_uniform and m > 1:
        if m % 2:
            raise ValueError("uniform padding needs an even number of channels")
        comps, layers = _pad_layers(m, comps, layers)
    net = SortingNetwork(m, comps, layers, _wires(m, comps, layers))
    net.uniform = len(path_lengths(net)) == 1
    return net


# ------------------------------------------------------------ routing


@dataclass
class GadgetPool:
    kind: str
    comparators: List[ComparatorGadget]
    wires: Dict[Tuple[Node, Node], WireGadget]

    def vertices(self) -> List[int]:
        out: List[int] = []
        for g in self.comparators:
            out += g.vertex_set()
        for w in self.wires.values():
            out += list(w.internal)
        return out

    def colors(self) -> List[int]:
        out: List[int] = []
        for g in self.comparators:
            out += g.color_set()
        for w in self.wires.values():
            out += list(w.colors)
        return out


def _port(node: Node, comps: Sequence[ComparatorGadget], A: Sequence[int], B: Sequence[int]) -> int:
    kind = node[0]
    if kind == "in":
        return A[node[1]]
    if kind == "out":
        return B[node[1]]
    if kind == "cin":
        return comps[node[1]].start[node[2]]
    return comps[node[1]].end[node[2]]


def build_gadget_pool(G: Group, kind: str, net: SortingNetwork, A: Sequence[int], B: Sequence[int],
                      U: Iterable[int] = (), seed: int = 0, retries: int = DEFAULT_RETRIES) -> GadgetPool:
    """One comparator gadget per comparator and one wire per wire, pairwise
    vertex- and colour-disjoint and avoiding A, B and U."""
    kind = _kind(kind)
    if len(A) != net.m or len(B) != net.m:
        raise ValueError("A and B must have one vertex per channel")
    used_v = set(U) | set(A) | set(B)
    used_c = set(U)
    comps: List[ComparatorGadget] = []
    for i in range(len(net.comparators)):
        gad = build_comparator_gadget(G, kind, used_v, used_c, seed=seed + i, retries=retries)
        used_v |= set(gad.vertex_set())
        used_c |= set(gad.color_set())
        comps.append(gad)
    wires: Dict[Tuple[Node, Node], WireGadget] = {}
    for s, d in net.wires:
        w = build_wire_gadget(G, kind, _port(s, comps, A, B), _port(d, comps, A, B), used_v, used_c)
        used_v |= set(w.internal)
        used_c |= set(w.colors)
        wires[(s, d)] = w
    return GadgetPool(kind, comps, wires)


def validate_pool(net: SortingNetwork, pool: GadgetPool, A: Sequence[int], B: Sequence[int]) -> None:
    verts = list(A) + list(B) + pool.vertices()
    dup = [v for v in set(verts) if verts.count(v) > 1]
    if dup:
        raise GadgetCollision(f"vertices used twice: {sorted(dup)}")
    cols = pool.colors()
    dup = [c for c in set(cols) if cols.count(c) > 1]
    if dup:
        raise GadgetCollision(f"colours used twice: {sorted(dup)}")
    if len(pool.comparators) != len(net.comparators):
        raise GadgetCollision("one comparator gadget per comparator is required")
    for s, d in net.wires:
        w = pool.wires.get((s, d))
        if w is None:
            raise GadgetCollision(f"wire {s} -> {d} has no gadget")
        if w.path[0] != _port(s, pool.comparators, A, B) or w.path[-1] != _port(d, pool.comparators, A, B):
            raise GadgetCollision(f"wire {s} -> {d} does not join its ports")


@dataclass
class PathSystem:
    paths: Dict[int, List[int]]
    colors: Dict[int, List[int]]
    active: List[str]
    length: Optional[int]


def route_path_system(G: Group, kind: str, net: SortingNetwork, pool: GadgetPool,
                      A: Sequence[int], B: Sequence[int], phi: Dict[int, int]) -> PathSystem:
    """Rainbow vertex-disjoint paths a -> phi(a) through the gadget pool."""
    kind = _kind(kind)
    m = net.m
    if len(A) != m or len(B) != m:
        raise ValueError("|A| = |B| = m is required")
    if sorted(phi) != sorted(A) or sorted(phi.values()) != sorted(B):
        raise ValueError("phi must be a bijection from A onto B")
    validate_pool(net, pool, A, B)
    pos_b = {b: i for i, b in enumerate(B)}
    sigma = [pos_b[phi[a]] + 1 for a in A]
    val, outs = evaluate_network(net, sigma)
    if outs != list(range(1, m + 1)):
        raise RoutingInvariantViolation("the network does not sort this input")
    active = []
    for idx in range(len(net.comparators)):
        active.append("straight" if val[("cin", idx, "-")] < val[("cin", idx, "+")] else "crossed")
    nxt = net.wire_from()
    paths: Dict[int, List[int]] = {}
    colors: Dict[int, List[int]] = {}
    for j, a in enumerate(A):
        node: Node = ("in", j)
        walk = [a]
        while node[0] != "out":
            dst = nxt[node]
            walk += list(pool.wires[(node, dst)].path[1:])
            if dst[0] == "out":
                node = dst
                break
            idx, s = dst[1], dst[2]
            e = s if active[idx] == "straight" else ("+" if s == "-" else "-")
            walk += pool.comparators[idx].paths[(s, e)][1:]
            node = ("cout", idx, e)
        if B[node[1]] != phi[a]:
            raise RoutingInvariantViolation(f"path from {a} ends at {B[node[1]]}, not {phi[a]}")
        paths[a] = walk
        colors[a] = [arc_color(G, kind, u, w) for u, w in zip(walk, walk[1:])]
    lengths = {len(p) - 1 for p in paths.values()}
    system = PathSystem(paths, colors, active, lengths.pop() if len(lengths) == 1 else None)
    _verify_system(net, pool, A, B, system)
    return system


def _verify_system(net: SortingNetwork, pool: GadgetPool, A, B, system: PathSystem) -> None:
    all_v = [v for p in system.paths.values() for v in p]
    if len(set(all_v)) != len(all_v):
        raise RoutingInvariantViolation("paths are not vertex-disjoint")
    if sorted(all_v) != sorted(list(A) + list(B) + pool.vertices()):
        raise RoutingInvariantViolation("paths do not use exactly the pool vertices")
    all_c = [c for cs in system.colors.values() for c in cs]
    if len(set(all_c)) != len(all_c):
        raise RoutingInvariantViolation("the path system is not rainbow")
    if sorted(all_c) != sorted(pool.colors()):
        raise RoutingInvariantViolation("paths do not use exactly the pool colours")
    if net.uniform and system.length != 3 * (net.depth + 1) + 5 * net.depth:
        raise RoutingInvariantViolation("path lengths are not uniform")


# ------------------------------------------------------------ robust matchability


def _edges_of(K) -> List[Tuple[Hashable, Hashable]]:
    if isinstance(K, nx.Graph):
        return list(K.edges())
    return [tuple(e) for e in K]


def verify_rmbg(K, X: Sequence, Y: Sequence, Yp: Sequence, h: int, max_h: int = 6) -> bool:
    """For every h-subset Y0 of Y' there is a perfect matching X <-> Y + Y0."""
    if h > max_h:
        raise TooLarge(f"h = {h} exceeds {max_h}")
    if len(X) != 3 * h or len(Y) != 2 * h or len(Yp) != 2 * h:
        raise ValueError("need |X| = 3h and |Y| = |Y'| = 2h")
    xs = {("X", x) for x in X}
    adj = nx.Graph()
    for u, v in _edges_of(K):
        if ("X", u) in xs:
            adj.add_edge(("X", u), ("Y", v))
        elif ("X", v) in xs:
            adj.add_edge(("X", v), ("Y", u))
    for Y0 in itertools.combinations(Yp, h):
        side = [("Y", y) for y in list(Y) + list(Y0)]
        H = nx.Graph()
        H.add_nodes_from(xs)
        H.add_nodes_from(side)
        H.add_edges_from(e for e in adj.subgraph(list(xs) + side).edges())
        M = nx.bipartite.hopcroft_karp_matching(H, top_nodes=xs)
        if sum(1 for x in xs if x in M) != 3 * h:
            return False
    return True


def minimal_rmbg(h: int, seed: int = 0):
    """Greedy edge deletion from the complete bipartite graph while the
    property holds; the result is inclusion-minimal."""
    X = [f"x{i}" for i in range(3 * h)]
    Y = [f"y{i}" for i in range(2 * h)]
    Yp = [f"z{i}" for i in range(2 * h)]
    edges = [(x, y) for x in X for y in Y + Yp]
    random.Random(seed).shuffle(edges)
    kept = list(edges)
    for e in edges:
        trial = [f for f in kept if f != e]
        if verify_rmbg(trial, X, Y, Yp, h):
            kept = trial
    return kept, X, Y, Yp


# ------------------------------------------------------------ random sets


def sample_disjoint_symmetric(G: Group, p: float, count: int = 3, seed: int = 0) -> List[Set[int]]:
    """Disjoint symmetric p-random sets: each class {g, g^-1} joins set i
    with probability p and at most one set."""
    if p < 0 or p * count > 1 + 1e-12:
        raise InvalidP(f"p = {p} with {count} sets needs 0 <= p*count <= 1")
    rng = random.Random(seed)
    sets: List[Set[int]] = [set() for _ in range(count)]
    seen: Set[int] = set()
    for g in range(G.order):
        if g in seen:
            continue
        cls = {g, G.inv(g)}
        seen |= cls
        u = rng.random()
        if p > 0 and u < p * count:
            sets[min(int(u // p), count - 1)] |= cls
    return sets
