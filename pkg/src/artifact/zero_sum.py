"""Zero-sum partitions of G minus {0} for abelian groups G.

For a multiset M of sizes (each at least 2) a zero-sum M-partition splits
the non-identity elements into sets of the given sizes, each summing to 0.
The decision rules depend on I(G), the set of involutions, and on
f(G) = (n - |I(G)| - 1)/2, the number of inverse pairs {g, -g} of
non-involutions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidSpec, NotAbelian, NotFound, as_budget
from .group_core import Group, default_tau, is_generic

DEFAULT_ORDER_FLOOR = 32


@dataclass(frozen=True)
class PartitionSpec:
    parts: Tuple[int, ...]

    @staticmethod
    def of(parts: Iterable[int]) -> "PartitionSpec":
        ps = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 2 for p in ps):
            raise InvalidSpec(f"all parts must be at least 2, got {ps}")
        return PartitionSpec(ps)

    @staticmethod
    def parse(text: str) -> "PartitionSpec":
        try:
            return PartitionSpec.of(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError as exc:
            raise InvalidSpec(f"cannot parse sizes {text!r}") from exc

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def m2(self) -> int:
        return self.count(2)

    def count(self, i: int) -> int:
        return sum(1 for p in self.parts if p == i)

    @property
    def max(self) -> int:
        return max(self.parts) if self.parts else 0


@dataclass
class ZeroSumPartition:
    sets: List[Tuple[int, ...]]

    def sizes(self) -> List[int]:
        return sorted((len(s) for s in self.sets), reverse=True)


@dataclass
class Decision:
    verdict: str  # "Yes", "No" or "SmallOrderSearch"
    reason: str
    involutions: int = 0
    f: int = 0
    conditions: Dict[str, bool] = field(default_factory=dict)


def _require_abelian(G: Group) -> None:
    if not G.is_abelian:
        raise NotAbelian(f"{G.name or 'group'} is not abelian")


def involution_stats(G: Group) -> Tuple[int, int]:
    _require_abelian(G)
    i = len(G.involutions)
    return i, (G.order - i - 1) // 2


def _as_spec(M) -> PartitionSpec:
    if isinstance(M, PartitionSpec):
        return M
    if isinstance(M, str):
        return PartitionSpec.parse(M)
    return PartitionSpec.of(M)


def large_group_conditions(G: Group, M) -> Dict[str, bool]:
    """Conditions (1), (2), (3) of the characterisation for |I(G)| >= 3."""
    M = _as_spec(M)
    _, f = involution_stats(G)
    return {
        "1": M.total == G.order - 1 and f >= M.m2,
        "2": f != M.m2 + 1 or M.max >= 5,
        "3": f != M.m2 + 2 or M.max >= 4,
    }


def decide_partition(G: Group, M, order_floor: int = DEFAULT_ORDER_FLOOR) -> Decision:
    """Yes, No(reason) or SmallOrderSearch.

    Failed necessary conditions give No at every order.  Sufficiency for
    |I| >= 3 is only known for large groups, so below ``order_floor`` the
    answer is SmallOrderSearch (defer to find_partition).
    """
    _require_abelian(G)
    M = _as_spec(M)
    n = G.order
    if any(p > n - 1 for p in M.parts):
        raise InvalidSpec(f"part larger than n-1 = {n - 1}")
    i, f = involution_stats(G)
    if M.total != n - 1:
        return Decision("No", f"condition (1): sum M = {M.total} must equal n-1 = {n - 1}", i, f)
    if i == 0:
        return Decision("Yes", "odd order: sum M = n-1 suffices", i, f)
    if i == 1:
        return Decision("No", "a unique involution makes the sum of G nonzero", i, f)
    conds = large_group_conditions(G, M)
    if not conds["1"]:
        return Decision("No", f"condition (1): f(G) = {f} < m2(M) = {M.m2}", i, f, conds)
    if not conds["2"]:
        return Decision("No", "condition (2): max M >= 5 required", i, f, conds)
    if not conds["3"]:
        return Decision("No", "condition (3): max M >= 4 required", i, f, conds)
    if i == 3 and M.m2 == 0:
        return Decision("Yes", "three involutions and all parts at least 3", i, f, conds)
    if n >= order_floor:
        return Decision("Yes", "all conditions hold at an order above the floor", i, f, conds)
    return Decision("SmallOrderSearch", "conditions hold; small order needs the solver", i, f, conds)


class _PartitionSearch:
    """Places the first unplaced element (non-involutions first) into a new
    set; the other members are later in the order and the last member is
    forced by the zero-sum constraint."""

    def __init__(self, G: Group, sizes: Counter, budget):
        self.G = G
        self.t = G.cayley
        self.inv = G.inverse
        self.budget = budget
        invs = set(G.involutions)
        non = [g for g in range(1, G.order) if g not in invs]
        self.order = non + sorted(invs)
        self.pos = {g: i for i, g in enumerate(self.order)}
        self.sizes = sizes
        self.is_invol = [g in invs for g in range(G.order)]
        self.sets: List[Tuple[int, ...]] = []

    def free_pairs(self, placed: int) -> int:
        """Inverse pairs of non-involutions with both members unplaced."""
        cnt = 0
        for g in self.order:
            if self.is_invol[g]:
                break
            h = self.inv[g]
            if g < h and not (placed >> g & 1) and not (placed >> h & 1):
                cnt += 1
        return cnt

    def run(self, placed: int) -> bool:
        self.budget.tick()
        first = None
        for g in self.order:
            if not placed >> g & 1:
                first = g
                break
        if first is None:
            return True
        if self.sizes[2] > self.free_pairs(placed):
            return False
        rest = [g for g in self.order[self.pos[first] + 1:] if not placed >> g & 1]
        for s in sorted((s for s, c in self.sizes.items() if c > 0), reverse=False):
            if s - 1 > len(rest):
                continue
            self.sizes[s] -= 1
            for chosen in self._completions(first, rest, s - 1, placed):
                block = (first,) + chosen
                mask = placed
                for g in block:
                    mask |= 1 << g
                self.sets.append(block)
                if self.run(mask):
                    return True
                self.sets.pop()
            self.sizes[s] += 1
        return False

    def _completions(self, first: int, rest: List[int], k: int, placed: int):
        t, inv, pos = self.t, self.inv, self.pos
        if k == 0:
            return
        for head in itertools.combinations(rest, k - 1):
            acc = first
            for g in head:
                acc = t[acc][g]
            last = inv[acc]
            if last == 0 or placed >> last & 1 or last == first:
                continue
            if head and pos[last] <= pos[head[-1]]:
                continue
            if not head and pos[last] <= pos[first]:
                continue
            yield head + (last,)


def find_partition(G: Group, M, budget=None) -> Optional[ZeroSumPartition]:
    _require_abelian(G)
    M = _as_spec(M)
    if M.total != G.order - 1:
        raise InvalidSpec(f"sum M = {M.total} differs from n-1 = {G.order - 1}")
    search = _PartitionSearch(G, Counter(M.parts), as_budget(budget))
    if search.run(1):
        P = ZeroSumPartition([tuple(sorted(s)) for s in search.sets])
        assert verify_partition(G, P, M)
        return P
    return None


def verify_partition(G: Group, P: ZeroSumPartition, M=None) -> bool:
    elems = [g for s in P.sets for g in s]
    if sorted(elems) != list(range(1, G.order)):
        return False
    if any(G.prod(s) != 0 for s in P.sets):
        return False
    if M is not None and P.sizes() != list(_as_spec(M).parts):
        return False
    return True


def find_zero_sum_subset(G: Group, Z: Iterable[int], m: int, g: int = 0,
                         budget=None) -> Tuple[int, ...]:
    """R' inside Z with |R'| = m and sum R' = g.

    Sizes up to 4 use pair-sum tables; larger sizes enumerate the first m-1
    members and look up the last.  Raises NotFound when no subset exists.
    """
    _require_abelian(G)
    Zs = sorted(set(Z))
    if m < 0 or m > len(Zs):
        raise NotFound(f"no {m}-subset of a {len(Zs)}-set")
    t, inv = G.cayley, G.inverse
    members = set(Zs)
    bud = as_budget(budget)
    if m == 0:
        if g == 0:
            return ()
        raise NotFound("the empty set sums to 0")
    if m == 1:
        if g in members:
            return (g,)
        raise NotFound(f"{g} is not in the set")
    if m == 4:
        pairs: Dict[int, List[Tuple[int, int]]] = {}
        for a, b in itertools.combinations(Zs, 2):
            pairs.setdefault(t[a][b], []).append((a, b))
        for s, plist in pairs.items():
            need = t[g][inv[s]]
            for a, b in plist:
                for c, d in pairs.get(need, ()):
                    bud.tick()
                    if len({a, b, c, d}) == 4:
                        return tuple(sorted((a, b, c, d)))
        raise NotFound("no 4-subset with that sum")
    for head in itertools.combinations(Zs, m - 1):
        bud.tick()
        acc = G.prod(head)
        last = t[g][inv[acc]]
        if last in members and last > head[-1]:
            return head + (last,)
    raise NotFound(f"no {m}-subset with that sum")


def equipartition_k(G: Group, X: Iterable[int], k: int, budget=None) -> Optional[List[Tuple[int, ...]]]:
    """Partition X into zero-sum k-sets (k in {3, 4, 5})."""
    _require_abelian(G)
    X = sorted(set(X))
    if k not in (3, 4, 5):
        raise ValueError("k must be 3, 4 or 5")
    if len(X) % k or 0 in X or G.prod(X) != 0:
        raise ValueError("need |X| divisible by k, 0 not in X and sum X = 0")
    bud = as_budget(budget)
    t, inv = G.cayley, G.inverse
    blocks: List[Tuple[int, ...]] = []

    def go(remaining: List[int]) -> bool:
        bud.tick()
        if not remaining:
            return True
        first, rest = remaining[0], remaining[1:]
        rest_set = set(rest)
        for head in itertools.combinations(rest, k - 2):
            acc = first
            for g in head:
                acc = t[acc][g]
            last = inv[acc]
            if last not in rest_set or last in head or last < head[-1]:
                continue
            block = (first,) + head + (last,)
            blocks.append(block)
            used = set(block)
            if go([g for g in rest if g not in used]):
                return True
            blocks.pop()
        return False

    return list(blocks) if go(X) else None


def proper_subset_sums(G: Group, S: Sequence[int]) -> List[int]:
    out = []
    for r in range(1, len(S)):
        for sub in itertools.combinations(S, r):
            out.append(G.prod(sub))
    return out


def sigma_generic_subset(G: Group, k: int, tau: Optional[int] = None) -> Tuple[int, ...]:
    """A zero-sum k-set of involutions whose proper non-empty subsets all
    have generic sums."""
    _require_abelian(G)
    if not 3 <= k <= 10:
        raise ValueError("k must lie in 3..10")
    if tau is None:
        tau = default_tau(G.order)
    invs = list(G.involutions)
    for S in itertools.combinations(invs, k):
        if G.prod(S) != 0:
            continue
        if all(is_generic(G, s, tau) for s in proper_subset_sums(G, S)):
            return S
    raise NotFound(f"no Sigma-generic {k}-set of involutions")


def integer_partitions(total: int, lo: int, hi: int) -> List[Tuple[int, ...]]:
    """All multisets of integers in [lo, hi] summing to total (descending)."""
    out: List[Tuple[int, ...]] = []

    def go(rem: int, cap: int, acc: List[int]) -> None:
        if rem == 0:
            out.append(tuple(acc))
            return
        for p in range(min(cap, rem), lo - 1, -1):
            acc.append(p)
            go(rem - p, p, acc)
            acc.pop()

    go(total, hi, [])
    return out


def format_partition(P: ZeroSumPartition) -> str:
    return "\n".join(" ".join(map(str, s)) for s in P.sets)
