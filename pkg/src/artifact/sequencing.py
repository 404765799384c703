"""Sequencings, R-sequencings, harmonious orderings and rainbow paths.

K^+_G colours the arc a->b by ab and K^-_G colours it by a^-1 b.  A
sequencing of G is the same thing as a rainbow Hamilton path of K^-_G
starting at e (the path visits the partial products).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import as_budget
from .group_core import Group, abelianization

MULTIPLICATION = "multiplication"
DIVISION = "division"


@dataclass(frozen=True, eq=False)
class ColoredDigraph:
    group: Group
    kind: str
    vertices: Tuple[int, ...]
    colors: Tuple[int, ...]

    def color(self, a: int, b: int) -> int:
        G = self.group
        if self.kind == MULTIPLICATION:
            return G.mul(a, b)
        return G.mul(G.inv(a), b)


def colored_digraph(G: Group, kind: str, V: Optional[Iterable[int]] = None,
                    C: Optional[Iterable[int]] = None) -> ColoredDigraph:
    if kind in ("+", "plus", "mul"):
        kind = MULTIPLICATION
    elif kind in ("-", "minus", "div"):
        kind = DIVISION
    if kind not in (MULTIPLICATION, DIVISION):
        raise ValueError(f"unknown digraph kind {kind!r}")
    V = tuple(sorted(set(G.elements() if V is None else V)))
    C = tuple(sorted(set(G.elements() if C is None else C)))
    return ColoredDigraph(G, kind, V, C)


@dataclass
class OrderingWitness:
    kind: str
    sequence: List[int]
    derived: List[int] = field(default_factory=list)


@dataclass(frozen=True)
class OrderingVerdict:
    ok: bool
    violation: Optional[str] = None
    index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def partial_products(G: Group, seq: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for g in seq:
        acc = G.mul(acc, g)
        out.append(acc)
    return out


def cyclic_products(G: Group, seq: Sequence[int]) -> List[int]:
    n = len(seq)
    return [G.mul(seq[i], seq[(i + 1) % n]) for i in range(n)]


def find_sequencing(G: Group, budget=None) -> Optional[OrderingWitness]:
    """Orderings b_1..b_n with distinct partial products.

    b_1 must be e (otherwise e appearing later repeats a partial product).
    """
    bud = as_budget(budget)
    n = G.order
    t = G.cayley
    seq = [0]

    def go(used: int, seen: int, acc: int) -> bool:
        bud.tick()
        if len(seq) == n:
            return True
        for g in range(1, n):
            if used >> g & 1:
                continue
            p = t[acc][g]
            if seen >> p & 1:
                continue
            seq.append(g)
            if go(used | 1 << g, seen | 1 << p, p):
                return True
            seq.pop()
        return False

    if go(1, 1, 0):
        return OrderingWitness("sequencing", list(seq), partial_products(G, seq))
    return None


def find_r_sequencing(G: Group, budget=None, require_closure: bool = True) -> Optional[OrderingWitness]:
    """Orderings (e, b_1, ..., b_{n-1}) whose partial products b_1, b_1 b_2,
    ... are distinct.  With ``require_closure`` the full product must be e
    (the adopted convention); without it only distinctness is required."""
    bud = as_budget(budget)
    n = G.order
    t = G.cayley
    if n == 1:
        return OrderingWitness("r_sequencing", [0], [])
    seq: List[int] = []

    def go(used: int, seen: int, acc: int) -> bool:
        bud.tick()
        if len(seq) == n - 1:
            return (acc == 0) or not require_closure
        last = len(seq) == n - 2
        for g in range(1, n):
            if used >> g & 1:
                continue
            p = t[acc][g]
            if seen >> p & 1:
                continue
            if require_closure:
                # e may only be reached by the final product
                if (p == 0) != last:
                    continue
            seq.append(g)
            if go(used | 1 << g, seen | 1 << p, p):
                return True
            seq.pop()
        return False

    if go(1, 0, 0):
        return OrderingWitness("r_sequencing", [0] + seq, partial_products(G, seq))
    return None


def find_harmonious(G: Group, budget=None) -> Optional[OrderingWitness]:
    """Cyclic orderings a_1..a_n whose products a_i a_{i+1} are all distinct.

    Rotations preserve the property, so a_1 = e is fixed.
    """
    bud = as_budget(budget)
    n = G.order
    t = G.cayley
    seq = [0]
    if n == 1:
        return OrderingWitness("harmonious", [0], [0])

    def go(used: int, seen: int) -> bool:
        bud.tick()
        prev = seq[-1]
        if len(seq) == n:
            close = t[prev][seq[0]]
            return not (seen >> close & 1)
        for g in range(1, n):
            if used >> g & 1:
                continue
            p = t[prev][g]
            if seen >> p & 1:
                continue
            seq.append(g)
            if go(used | 1 << g, seen | 1 << p):
                return True
            seq.pop()
        return False

    if go(1, 0):
        return OrderingWitness("harmonious", list(seq), cyclic_products(G, seq))
    return None


def verify_ordering(G: Group, w: OrderingWitness, require_closure: bool = True) -> OrderingVerdict:
    seq = list(w.sequence)
    n = G.order
    if len(seq) != n:
        return OrderingVerdict(False, f"length {len(seq)} but the group has order {n}")
    if sorted(seq) != list(range(n)):
        return OrderingVerdict(False, "sequence is not a permutation of the group")
    if w.kind == "sequencing":
        derived = partial_products(G, seq)
    elif w.kind == "r_sequencing":
        if seq[0] != 0:
            return OrderingVerdict(False, "an R-sequencing starts with e", 0)
        derived = partial_products(G, seq[1:])
        if require_closure and derived and derived[-1] != 0:
            return OrderingVerdict(False, "the full product is not e", len(derived))
    elif w.kind == "harmonious":
        derived = cyclic_products(G, seq)
    else:
        return OrderingVerdict(False, f"unknown witness kind {w.kind!r}")
    seen: Dict[int, int] = {}
    for i, d in enumerate(derived):
        if d in seen:
            return OrderingVerdict(False, f"derived value {d} repeats at positions {seen[d]} and {i}", i)
        seen[d] = i
    return OrderingVerdict(True)


def rainbow_hamilton_path(D: ColoredDigraph, x: int, y: int, budget=None) -> Optional[List[int]]:
    """Hamilton path x -> y through D.vertices with distinct colours from D.colors."""
    if x == y:
        raise ValueError("endpoints must differ")
    V = D.vertices
    if x not in V or y not in V:
        raise ValueError("endpoints must be vertices of the digraph")
    bud = as_budget(budget)
    G = D.group
    allowed = 0
    for c in D.colors:
        allowed |= 1 << c
    if D.kind == MULTIPLICATION:
        col = [[G.mul(a, b) for b in range(G.order)] for a in range(G.order)]
    else:
        col = [[G.mul(G.inv(a), b) for b in range(G.order)] for a in range(G.order)]
    others = [v for v in V if v != x]
    total = len(V)
    path = [x]

    def go(visited: int, colors: int) -> bool:
        bud.tick()
        cur = path[-1]
        if len(path) == total:
            return cur == y
        for v in others:
            if visited >> v & 1:
                continue
            if v == y and len(path) != total - 1:
                continue
            c = col[cur][v]
            if not (allowed >> c & 1) or colors >> c & 1:
                continue
            path.append(v)
            if go(visited | 1 << v, colors | 1 << c):
                return True
            path.pop()
        return False

    return list(path) if go(1 << x, 0) else None


def path_colors(D: ColoredDigraph, path: Sequence[int]) -> List[int]:
    return [D.color(a, b) for a, b in zip(path, path[1:])]


@dataclass(frozen=True)
class HamiltonHypothesis:
    multiplication_sum: bool
    division_sum: bool
    size_condition: bool
    boolean_condition: bool
    branches: Tuple[str, ...]


def hamilton_hypothesis(D: ColoredDigraph, V: Iterable[int], C: Iterable[int],
                        x: int, y: int) -> HamiltonHypothesis:
    """Evaluates the sum identities that a rainbow x -> y path forces.

    Along a path x = v_0, ..., v_k = y the colours of K^+ sum to
    x + y + 2 sum(interior) in G^ab, while the colours of K^- telescope to
    y - x.  ``V`` is the set of interior vertices.
    """
    G = D.group
    ab = abelianization(G)
    V = [v for v in set(V) if v not in (x, y)]
    C = sorted(set(C))
    sc = ab.sum(C)
    sv = ab.sum(V)
    mult = sc == ab.add(ab.add(ab.coset(x), ab.coset(y)), ab.add(sv, sv))
    div = sc == ab.add(ab.coset(y), ab.neg(ab.coset(x)))
    size = len(V) + 1 == len(C)
    boolean = not (G.is_elementary_abelian_2 and 0 in C)
    branches = []
    if size and boolean:
        if mult:
            branches.append(MULTIPLICATION)
        if div:
            branches.append(DIVISION)
    return HamiltonHypothesis(mult, div, size, boolean, tuple(branches))


def sequencing_as_division_path(G: Group, w: OrderingWitness) -> Tuple[ColoredDigraph, List[int]]:
    """The partial products of a sequencing as a rainbow path of K^-_G."""
    D = colored_digraph(G, DIVISION)
    return D, partial_products(G, w.sequence)


def format_witness(w: OrderingWitness) -> str:
    return " ".join(map(str, w.sequence)) + "\n" + " ".join(map(str, w.derived))
