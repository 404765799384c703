"""Exhaustive sweeps used by ``artifact verify-suite`` and the acceptance tests.

Each suite returns a SuiteResult listing every checked instance that broke
the expected invariant.  An empty failure list means the sweep passed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .designs import complete_mapping, subsquare_transversal
from .free_product import (
    all_projections,
    apply_projection,
    count_projections_with_image,
    normalize,
)
from .group_core import (
    builtin_specs,
    hall_paige_product,
    hall_paige_sylow,
    make_family,
)
from .sequencing import MULTIPLICATION, DIVISION, find_sequencing
from .zero_sum import (
    decide_partition,
    find_partition,
    integer_partitions,
    involution_stats,
    large_group_conditions,
    verify_partition,
)


@dataclass
class SuiteResult:
    name: str
    cap: int
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> Dict[str, object]:
        return {"suite": self.name, "cap": self.cap, "checked": self.checked,
                "failures": list(self.failures), "ok": self.ok}


def hall_paige_equivalence(cap: int = 16) -> SuiteResult:
    res = SuiteResult("hall-paige-equivalence", cap)
    for spec in builtin_specs(cap):
        G = make_family(spec)
        prod, syl = hall_paige_product(G), hall_paige_sylow(G)
        solved = complete_mapping(G, budget=None) is not None
        res.checked += 1
        if not (prod == syl == solved):
            res.failures.append(f"{spec}: product={prod} sylow={syl} solver={solved}")
    return res


def snevily_small(cap: int = 7) -> SuiteResult:
    res = SuiteResult("snevily-small", cap)
    for n in range(1, cap + 1, 2):
        G = make_family(f"cyclic:{n}")
        for size in range(1, n + 1):
            subsets = list(itertools.combinations(range(n), size))
            for A in subsets:
                for B in subsets:
                    res.checked += 1
                    if subsquare_transversal(G, A, B, budget=None) is None:
                        res.failures.append(f"cyclic:{n} A={A} B={B}")
    return res


def boolean_obstruction(cap: int = 3) -> SuiteResult:
    """Z2^k with two zero-sum pairs removed has no transversal."""
    res = SuiteResult("boolean-obstruction", cap)
    for k in range(2, cap + 1):
        G = make_family(f"elem2:{k}")
        pairs = list(itertools.combinations(range(G.order), 2))
        for (a1, a2), (b1, b2) in itertools.product(pairs, repeat=2):
            if a1 ^ a2 ^ b1 ^ b2:
                continue
            A = [g for g in G.elements() if g not in (a1, a2)]
            B = [g for g in G.elements() if g not in (b1, b2)]
            res.checked += 1
            if subsquare_transversal(G, A, B, budget=None) is not None:
                res.failures.append(f"elem2:{k} removed A={a1, a2} B={b1, b2}")
    return res


def _abelian_specs(cap: int) -> List[str]:
    return [s for s in builtin_specs(cap) if make_family(s).is_abelian]


def zero_sum_necessity(cap: int = 24, max_part: int = 6) -> SuiteResult:
    res = SuiteResult("zero-sum-necessity", cap)
    for spec in _abelian_specs(cap):
        G = make_family(spec)
        if involution_stats(G)[0] < 3:
            continue
        for M in integer_partitions(G.order - 1, 2, max_part):
            res.checked += 1
            P = find_partition(G, M, budget=None)
            if P is None:
                continue
            if not verify_partition(G, P, M):
                res.failures.append(f"{spec} M={M}: witness does not verify")
            elif not all(large_group_conditions(G, M).values()):
                res.failures.append(f"{spec} M={M}: solved but a condition fails")
    return res


def z2m_partitions(cap: int = 4) -> SuiteResult:
    res = SuiteResult("z2m-partitions", cap)
    for m in range(2, cap + 1):
        G = make_family(f"elem2:{m}")
        n = G.order
        for M in integer_partitions(n - 1, 3, n - 1):
            res.checked += 1
            P = find_partition(G, M, budget=None)
            if P is None or not verify_partition(G, P, M):
                res.failures.append(f"elem2:{m} M={M}: no partition")
            elif decide_partition(G, M).verdict == "No":
                res.failures.append(f"elem2:{m} M={M}: decision says No")
    G = make_family("product(cyclic:4,elem2:2)")
    res.checked += 1
    if find_partition(G, [2, 2, 2, 3, 3, 3], budget=None) is not None:
        res.failures.append("product(cyclic:4,elem2:2) M=2,2,2,3,3,3 has a partition")
    return res


def sequencing_facts(cap: int = 10) -> SuiteResult:
    res = SuiteResult("sequencing-facts", cap)
    for spec in ("sym:3", "dihedral:4", "quaternion"):
        res.checked += 1
        if find_sequencing(make_family(spec), budget=None) is not None:
            res.failures.append(f"{spec}: unexpected sequencing")
    for spec in ("cyclic:4", "cyclic:8"):
        res.checked += 1
        if find_sequencing(make_family(spec), budget=None) is None:
            res.failures.append(f"{spec}: no sequencing found")
    for spec in _abelian_specs(cap):
        G = make_family(spec)
        if G.order < 2:
            continue
        res.checked += 1
        found = find_sequencing(G, budget=None) is not None
        if found != (len(G.involutions) == 1):
            res.failures.append(f"{spec}: sequenceable={found} involutions={len(G.involutions)}")
    return res


def gadget_checks(cap: int = 6, triples: int = 5) -> SuiteResult:
    from .gadgets import (
        build_commutator_absorber,
        build_comparator_gadget,
        build_gadget_pool,
        build_sorting_network,
        network_sorts,
        route_path_system,
        verify_comparator,
        verify_m_absorber,
    )
    from .errors import PreconditionFailed

    res = SuiteResult("gadget-figures", cap)
    S4 = make_family("sym:4")
    built = 0
    for a, b, c in itertools.product(S4.elements(), repeat=3):
        if built >= triples:
            break
        if S4.commutator(a, b) == 0:
            continue
        try:
            inst = build_commutator_absorber(S4, a, b, c)
        except PreconditionFailed:
            continue
        res.checked += 1
        built += 1
        if not verify_m_absorber(S4, inst.R, inst.F, 1):
            res.failures.append(f"commutator absorber a={a} b={b} c={c} fails")
    if built < triples:
        res.failures.append(f"only {built} commutator absorbers built in sym:4")
    Z = make_family("cyclic:101")
    for kind in (MULTIPLICATION, DIVISION):
        res.checked += 1
        if not verify_comparator(Z, build_comparator_gadget(Z, kind)):
            res.failures.append(f"comparator {kind} fails")
        net = build_sorting_network(2, pad_uniform=True)
        A, B = [1, 2], [3, 4]
        pool = build_gadget_pool(Z, kind, net, A, B)
        for phi in ({1: 3, 2: 4}, {1: 4, 2: 3}):
            res.checked += 1
            ps = route_path_system(Z, kind, net, pool, A, B, phi)
            if any(ps.paths[a][-1] != phi[a] for a in A):
                res.failures.append(f"routing {kind} {phi} ends wrong")
    for m in range(1, cap + 1):
        res.checked += 1
        if not network_sorts(build_sorting_network(m)):
            res.failures.append(f"network m={m} does not sort")
    return res


def _random_linear_word(G, k, rng):
    chosen = rng.sample(range(1, k + 1), rng.randint(1, k))
    toks = [("g", rng.randrange(G.order))]
    for v in chosen:
        toks += [v * rng.choice((1, -1)), ("g", rng.randrange(G.order))]
    return normalize(G, toks, k)


def free_product_counts(cap: int = 7, words: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("free-product-counts", cap)
    rng = random.Random(seed)
    specs = [s for s in builtin_specs(cap) if make_family(s).order >= 2]
    for spec in specs:
        G = make_family(spec)
        for k in (1, 2):
            res.checked += 1
            if sum(1 for _ in all_projections(G, k)) != G.order ** k:
                res.failures.append(f"{spec} k={k}: projection count")
    for i in range(words):
        G = make_family(specs[i % len(specs)])
        k = 1 + i % 2
        w = _random_linear_word(G, k, rng)
        counts = [0] * G.order
        for pi in all_projections(G, k):
            counts[apply_projection(pi, w)] += 1
        res.checked += 1
        if counts != [G.order ** (k - 1)] * G.order:
            res.failures.append(f"{G.name} word {w}: image counts {counts}")
        g = rng.randrange(G.order)
        if count_projections_with_image(G, w, g) != G.order ** (k - 1):
            res.failures.append(f"{G.name} word {w}: count helper")
    return res


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "hall-paige-equivalence": hall_paige_equivalence,
    "snevily-small": snevily_small,
    "boolean-obstruction": boolean_obstruction,
    "zero-sum-necessity": zero_sum_necessity,
    "z2m-partitions": z2m_partitions,
    "sequencing-facts": sequencing_facts,
    "gadget-figures": gadget_checks,
    "free-product-counts": free_product_counts,
}


def run_suite(name: str, cap: Optional[int] = None) -> SuiteResult:
    fn = SUITES[name]
    return fn() if cap is None else fn(cap)
