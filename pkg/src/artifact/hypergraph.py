"""Slices H_G[X,Y,Z] of the multiplication hypergraph and exact matching.

The hypergraph has three disjoint copies G_A, G_B, G_C of a group and an
edge (a, b, c) whenever abc = e.  Edges are never materialised: for any two
coordinates the third is forced, which also makes the hypergraph linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import Budget, IdOutOfRange, TooLarge, UnbalancedParts, as_budget
from .group_core import Group, abelianization

Edge = Tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class MulSlice:
    group: Group
    X: Tuple[int, ...]
    Y: Tuple[int, ...]
    Z: Tuple[int, ...]

    def has_edge(self, a: int, b: int, c: int) -> bool:
        return self.group.prod((a, b, c)) == 0

    def completion(self, a: int, b: int) -> int:
        """The unique c with abc = e."""
        G = self.group
        return G.inv(G.mul(a, b))

    def edges(self) -> Iterable[Edge]:
        zs = set(self.Z)
        for a in self.X:
            for b in self.Y:
                c = self.completion(a, b)
                if c in zs:
                    yield (a, b, c)

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def is_balanced(self) -> bool:
        return len(self.X) == len(self.Y) == len(self.Z)


@dataclass
class Matching:
    edges: List[Edge] = field(default_factory=list)

    def covered(self) -> Tuple[set, set, set]:
        return ({e[0] for e in self.edges}, {e[1] for e in self.edges},
                {e[2] for e in self.edges})

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class MatchingVerdict:
    valid: bool
    perfect: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid and self.perfect


@dataclass(frozen=True)
class TypicalityReport:
    min_degree: Dict[str, int]
    max_degree: Dict[str, int]
    min_pair_degree: Dict[str, int]
    max_pair_degree: Dict[str, int]
    linear: bool


def build_slice(G: Group, X: Iterable[int], Y: Iterable[int], Z: Iterable[int]) -> MulSlice:
    parts = []
    for name, part in (("X", X), ("Y", Y), ("Z", Z)):
        ids = tuple(sorted(set(part)))
        for g in ids:
            if not 0 <= g < G.order:
                raise IdOutOfRange(f"{name} contains {g}, outside 0..{G.order - 1}")
        parts.append(ids)
    return MulSlice(G, *parts)


def full_slice(G: Group) -> MulSlice:
    every = tuple(G.elements())
    return MulSlice(G, every, every, every)


def typicality_stats(sl: MulSlice) -> TypicalityReport:
    """Vertex degrees, pair degrees and a linearity check.

    The pair degree of a part pair counts, for a fixed vertex of the first
    part, how many vertices of the second part share an edge with it.
    """
    xs, ys, zs = set(sl.X), set(sl.Y), set(sl.Z)
    deg = {"A": {a: 0 for a in xs}, "B": {b: 0 for b in ys}, "C": {c: 0 for c in zs}}
    pair_count: Dict[Tuple[str, int, str, int], int] = {}
    for a, b, c in sl.edges():
        deg["A"][a] += 1
        deg["B"][b] += 1
        deg["C"][c] += 1
        for key in (("A", a, "B", b), ("A", a, "C", c), ("B", b, "C", c)):
            pair_count[key] = pair_count.get(key, 0) + 1
    linear = all(v == 1 for v in pair_count.values())
    nbrs: Dict[Tuple[str, str], Dict[int, int]] = {
        ("A", "B"): {a: 0 for a in xs}, ("A", "C"): {a: 0 for a in xs},
        ("B", "C"): {b: 0 for b in ys},
    }
    for (p, u, q, _v) in pair_count:
        nbrs[(p, q)][u] += 1

    def lo_hi(values):
        vals = list(values)
        return (min(vals), max(vals)) if vals else (0, 0)

    mn, mx, pmn, pmx = {}, {}, {}, {}
    for part, d in deg.items():
        mn[part], mx[part] = lo_hi(d.values())
    for (p, q), d in nbrs.items():
        pmn[p + q], pmx[p + q] = lo_hi(d.values())
    return TypicalityReport(mn, mx, pmn, pmx, linear)


class _Search:
    """Backtracking over bitmasks of unmatched vertices, one per part.

    At every node the unmatched vertex with the fewest live edges is matched
    first (ties: part A, then B, then C, then smallest id).
    """

    def __init__(self, sl: MulSlice, budget: Budget):
        G = sl.group
        self.t = G.cayley
        self.inv = G.inverse
        self.n = G.order
        self.budget = budget

    def live_edges(self, part: int, v: int, masks) -> List[Edge]:
        t, inv = self.t, self.inv
        mx, my, mz = masks
        out = []
        if part == 0:
            m = my
            while m:
                low = m & -m
                b = low.bit_length() - 1
                m ^= low
                c = inv[t[v][b]]
                if mz >> c & 1:
                    out.append((v, b, c))
        elif part == 1:
            m = mx
            while m:
                low = m & -m
                a = low.bit_length() - 1
                m ^= low
                c = inv[t[a][v]]
                if mz >> c & 1:
                    out.append((a, v, c))
        else:
            m = mx
            while m:
                low = m & -m
                a = low.bit_length() - 1
                m ^= low
                # a b c = e  =>  b = a^-1 c^-1
                b = t[inv[a]][inv[v]]
                if my >> b & 1:
                    out.append((a, b, v))
        return out

    def pick(self, masks):
        best = None
        for part in range(3):
            m = masks[part]
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                edges = self.live_edges(part, v, masks)
                if best is None or len(edges) < len(best):
                    best = edges
                    if not edges:
                        return best
        return best

    def run(self, masks, stack: List[Edge], count_cap: Optional[int] = None):
        self.budget.tick()
        if masks[0] == 0:
            return 1
        edges = self.pick(masks)
        total = 0
        for a, b, c in edges:
            stack.append((a, b, c))
            sub = self.run((masks[0] & ~(1 << a), masks[1] & ~(1 << b), masks[2] & ~(1 << c)),
                           stack, count_cap)
            if count_cap is None:
                if sub:
                    return 1
            else:
                total += sub
                if total >= count_cap:
                    stack.pop()
                    return total
            stack.pop()
        return total


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for g in ids:
        m |= 1 << g
    return m


def parity_obstructed(sl: MulSlice) -> bool:
    """True when sum X + sum Y + sum Z is not zero in G^ab (edges are zero-sum)."""
    ab = abelianization(sl.group)
    total = ab.add(ab.add(ab.sum(sl.X), ab.sum(sl.Y)), ab.sum(sl.Z))
    return total != 0


def find_perfect_matching(sl: MulSlice, budget=None, use_parity: bool = True) -> Optional[Matching]:
    """A perfect matching of the slice, or None when none exists.

    None is only returned after the parity test or a full search; a tripped
    budget raises BudgetExceeded.
    """
    if not sl.is_balanced():
        raise UnbalancedParts(f"part sizes {len(sl.X)}, {len(sl.Y)}, {len(sl.Z)}")
    if use_parity and parity_obstructed(sl):
        return None
    search = _Search(sl, as_budget(budget))
    stack: List[Edge] = []
    if search.run((_mask(sl.X), _mask(sl.Y), _mask(sl.Z)), stack):
        M = Matching(sorted(stack))
        ab = abelianization(sl.group)
        assert ab.add(ab.add(ab.sum(sl.X), ab.sum(sl.Y)), ab.sum(sl.Z)) == 0
        return M
    return None


def count_perfect_matchings(sl: MulSlice, cap: Optional[int] = None, budget=None,
                            max_part: int = 12) -> int:
    """Exact number of perfect matchings, stopping early at ``cap``."""
    if not sl.is_balanced():
        raise UnbalancedParts(f"part sizes {len(sl.X)}, {len(sl.Y)}, {len(sl.Z)}")
    if len(sl.X) > max_part:
        raise TooLarge(f"parts of size {len(sl.X)} exceed {max_part}")
    search = _Search(sl, as_budget(budget))
    big = cap if cap is not None else 1 << 62
    return search.run((_mask(sl.X), _mask(sl.Y), _mask(sl.Z)), [], count_cap=big)


def verify_matching(sl: MulSlice, M) -> MatchingVerdict:
    edges = M.edges if isinstance(M, Matching) else list(M)
    seen = (set(), set(), set())
    parts = (set(sl.X), set(sl.Y), set(sl.Z))
    names = "ABC"
    for e in edges:
        if len(e) != 3:
            return MatchingVerdict(False, False, f"malformed edge {e}")
        for i, v in enumerate(e):
            if v not in parts[i]:
                return MatchingVerdict(False, False, f"vertex {v} not in part {names[i]}")
            if v in seen[i]:
                return MatchingVerdict(False, False, f"duplicate in part {names[i]}: {v}")
            seen[i].add(v)
        if not sl.has_edge(*e):
            return MatchingVerdict(False, False, f"{e} is not an edge (product is not e)")
    perfect = all(seen[i] == parts[i] for i in range(3))
    return MatchingVerdict(True, perfect, None if perfect else "matching does not cover every vertex")


def brute_force_has_perfect_matching(sl: MulSlice) -> bool:
    """Reference oracle: try every bijection X -> Y."""
    import itertools

    if not sl.is_balanced():
        raise UnbalancedParts("unbalanced")
    zs = set(sl.Z)
    for perm in itertools.permutations(sl.Y):
        cs = {sl.completion(a, b) for a, b in zip(sl.X, perm)}
        if len(cs) == len(sl.X) and cs == zs:
            return True
    return len(sl.X) == 0


def format_matching(M: Matching) -> str:
    return "\n".join(f"{a} {b} {c}" for a, b, c in M.edges)


def parse_slice_text(text: str, group_factory) -> MulSlice:
    """Slice file: group descriptor, then three lines of ids for X, Y, Z."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ValueError("slice file needs a group line plus X, Y and Z lines")
    G = group_factory(lines[0])
    parts: Sequence[List[int]] = [[int(t) for t in ln.split()] for ln in lines[1:4]]
    return build_slice(G, *parts)
