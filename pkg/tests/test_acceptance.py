"""The twelve acceptance criteria, each at its stated tolerance and time bound.

Every criterion prints one PASS/FAIL line. Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""

import itertools
import math
import random
import time

import pytest

from artifact.designs import complete_mapping, is_partial_transversal, near_transversal, subsquare_transversal
from artifact.free_product import (
    all_projections,
    apply_projection,
    count_projections_with_image,
    normalize,
    strongly_separable,
    word_inv,
    word_mul,
)
from artifact.gadgets import (
    build_commutator_absorber,
    build_comparator_gadget,
    build_gadget_pool,
    build_sorting_network,
    build_wire_gadget,
    evaluate_network,
    route_path_system,
    verify_comparator,
    verify_m_absorber,
)
from artifact.errors import PreconditionFailed
from artifact.group_core import (
    builtin_specs,
    commutator_width,
    hall_paige_product,
    hall_paige_sylow,
    make_family,
    square_root_count,
)
from artifact.sequencing import DIVISION, MULTIPLICATION, find_sequencing, partial_products
from artifact.zero_sum import find_partition, integer_partitions, involution_stats, verify_partition


# ---------------------------------------------------------------- oracles

def brute_transversal(G, A, B):
    for perm in itertools.permutations(B):
        if len({G.mul(a, b) for a, b in zip(A, perm)}) == len(A):
            return True
    return False


def brute_commutator_widths(G):
    comms = {G.commutator(a, b) for a in G.elements() for b in G.elements()}
    width, layer, t = {0: 0}, {0}, 0
    while layer:
        t += 1
        layer = {G.mul(x, c) for x in layer for c in comms} - set(width)
        width.update((g, t) for g in layer)
    return width


def random_word(G, k, rng, linear, max_len=5):
    if linear:
        letters = [v * rng.choice((1, -1)) for v in rng.sample(range(1, k + 1), rng.randint(1, k))]
    else:
        letters = [rng.randint(1, k) * rng.choice((1, -1)) for _ in range(rng.randint(0, max_len))]
    toks = [("g", rng.randrange(G.order))]
    for x in letters:
        toks += [x, ("g", rng.randrange(G.order))]
    return normalize(G, toks, k)


# ---------------------------------------------------------------- criteria

def crit_hall_paige():
    specs = builtin_specs(16)
    families = {s.split(":")[0].split("(")[0] for s in specs}
    bad = []
    for s in specs:
        G = make_family(s)
        prod, syl = hall_paige_product(G), hall_paige_sylow(G)
        solved = complete_mapping(G, budget=None) is not None
        if not prod == syl == solved:
            bad.append(s)
    ok = not bad and len(specs) >= 20 and {"cyclic", "elem2", "dihedral", "sym", "alt",
                                          "quaternion", "product"} <= families
    return ok, f"{len(specs)} groups, mismatches {bad}"


def crit_even_cyclic():
    bad = [k for k in range(1, 7) if complete_mapping(make_family(f"cyclic:{2 * k}"), budget=None)]
    G = make_family("cyclic:99")
    fn = complete_mapping(G, [98, 1], [98, 1], [49, 50], budget=None)
    # the necessary sum condition holds, yet no mapping exists
    sums_ok = (98 + 1 + 98 + 1) % 99 == (49 + 50) % 99
    return not bad and fn is None and sums_ok, f"even cyclic with mappings {bad}, Z99 {fn}"


def crit_near_transversal():
    bad = []
    specs = builtin_specs(16)
    for s in specs:
        G = make_family(s)
        cells = near_transversal(G, budget=None)
        rows, cols, syms = zip(*cells) if cells else ((), (), ())
        honest = all(G.mul(a, b) == c for a, b, c in cells)
        distinct = len(set(rows)) == len(set(cols)) == len(set(syms)) == len(cells)
        if len(cells) != G.order - 1 or not honest or not distinct or not is_partial_transversal(G, cells):
            bad.append(s)
    return not bad, f"{len(specs)} groups, failures {bad}"


def crit_snevily():
    bad, checked = [], 0
    for n in (5, 7):
        G = make_family(f"cyclic:{n}")
        for size in range(1, n + 1):
            subsets = list(itertools.combinations(range(n), size))
            for A in subsets:
                for B in subsets:
                    checked += 1
                    cells = subsquare_transversal(G, A, B, budget=None)
                    if cells is None or len({c for _, _, c in cells}) != size:
                        bad.append((n, A, B))
                    elif n == 5 and not brute_transversal(G, A, B):
                        bad.append((n, A, B, "oracle"))
    return not bad, f"{checked} subsquares, failures {bad[:3]}"


def crit_boolean():
    bad, checked = [], 0
    for k in (2, 3):
        G = make_family(f"elem2:{k}")
        pairs = list(itertools.combinations(range(G.order), 2))
        for (a1, a2), (b1, b2) in itertools.product(pairs, repeat=2):
            if a1 ^ a2 ^ b1 ^ b2:
                continue
            A = [g for g in G.elements() if g not in (a1, a2)]
            B = [g for g in G.elements() if g not in (b1, b2)]
            checked += 1
            if subsquare_transversal(G, A, B, budget=None) is not None or brute_transversal(G, A, B):
                bad.append((k, a1, a2, b1, b2))
    return not bad and checked > 0, f"{checked} subsquares, with transversals {bad}"


def crit_sequencing():
    bad = []
    for s in ("sym:3", "dihedral:4", "quaternion"):
        if find_sequencing(make_family(s), budget=None) is not None:
            bad.append(s)
    for s in ("cyclic:4", "cyclic:8"):
        G = make_family(s)
        w = find_sequencing(G, budget=None)
        if w is None or sorted(w.sequence) != list(G.elements()) \
                or sorted(partial_products(G, w.sequence)) != list(G.elements()):
            bad.append(s)
    abelian = [s for s in builtin_specs(10) if make_family(s).is_abelian and make_family(s).order >= 2]
    for s in abelian:
        G = make_family(s)
        unique = sum(1 for g in G.elements() if g and G.mul(g, g) == 0) == 1
        if (find_sequencing(G, budget=None) is not None) != unique:
            bad.append(s)
    return not bad, f"{len(abelian)} abelian groups, failures {bad}"


def crit_zero_sum():
    bad, checked = [], 0
    for s in builtin_specs(24):
        G = make_family(s)
        if not G.is_abelian or involution_stats(G)[0] < 3:
            continue
        i = sum(1 for g in G.elements() if g and G.mul(g, g) == 0)
        f = (G.order - i - 1) // 2
        for M in integer_partitions(G.order - 1, 2, 6):
            checked += 1
            P = find_partition(G, M, budget=None)
            if P is None:
                continue
            m2 = M.count(2)
            cond1 = sum(M) == G.order - 1 and m2 <= f
            cond2 = f != m2 + 1 or max(M) >= 5
            cond3 = f != m2 + 2 or max(M) >= 4
            if not verify_partition(G, P, M) or not (cond1 and cond2 and cond3):
                bad.append((s, M))
    for m in range(2, 5):
        E = make_family(f"elem2:{m}")
        for M in integer_partitions(E.order - 1, 3, E.order - 1):
            checked += 1
            P = find_partition(E, M, budget=None)
            if P is None or not verify_partition(E, P, M):
                bad.append((f"elem2:{m}", M))
    H = make_family("product(cyclic:4,elem2:2)")
    if find_partition(H, [2, 2, 2, 3, 3, 3], budget=None) is not None:
        bad.append("Z4xZ2xZ2")
    return not bad, f"{checked} instances, failures {bad[:3]}"


def crit_projection_counts():
    rng = random.Random(8)
    specs = [s for s in builtin_specs(7) if make_family(s).order >= 2]
    bad = []
    for s in specs:
        G = make_family(s)
        for k in (1, 2):
            if len(set(all_projections(G, k))) != G.order ** k:
                bad.append((s, k))
    for t in range(100):
        G = make_family(specs[t % len(specs)])
        k = 1 + t % 2
        w = random_word(G, k, rng, linear=True)
        counts = [0] * G.order
        for pi in itertools.product(range(G.order), repeat=k):
            counts[apply_projection(pi, w)] += 1
        g = rng.randrange(G.order)
        if set(counts) != {G.order ** (k - 1)} or count_projections_with_image(G, w, g) != G.order ** (k - 1):
            bad.append((G.name, str(w)))
    return not bad, f"{len(specs)} groups, 100 words, failures {bad[:3]}"


def crit_separability():
    rng = random.Random(9)
    groups = [make_family("sym:3"), make_family("cyclic:8")]
    bad = 0
    for t in range(10_000):
        G = groups[t % 2]
        a = random_word(G, 2, rng, linear=rng.random() < 0.7)
        b = random_word(G, 2, rng, linear=rng.random() < 0.7)
        ref = bool(strongly_separable(G, a, b, tau=1))
        variants = [(x, y) for x in (a, word_inv(a)) for y in (b, word_inv(b))]
        if any(bool(strongly_separable(G, x, y, tau=1)) != ref for x, y in variants):
            bad += 1
        pi = (rng.randrange(G.order), rng.randrange(G.order))
        if apply_projection(pi, word_mul(a, b)) != G.mul(apply_projection(pi, a), apply_projection(pi, b)):
            bad += 1
    return bad == 0, f"10000 pairs, violations {bad}"


def crit_gadgets():
    notes = []
    S4 = make_family("sym:4")
    built = 0
    for a, b, c in itertools.product(S4.elements(), repeat=3):
        if built == 5:
            break
        if S4.commutator(a, b) == 0:
            continue
        try:
            inst = build_commutator_absorber(S4, a, b, c)
        except PreconditionFailed:
            continue
        built += 1
        if not verify_m_absorber(S4, inst.R, inst.F, 1):
            notes.append(f"absorber {a, b, c}")
    if built < 5:
        notes.append(f"only {built} absorbers")
    Z = make_family("cyclic:101")
    for kind in (MULTIPLICATION, DIVISION):
        if not verify_comparator(Z, build_comparator_gadget(Z, kind)):
            notes.append(f"comparator {kind}")
        w = build_wire_gadget(Z, kind, 1, 2)
        if len(set(w.path)) != 4 or len(set(w.colors)) != 3:
            notes.append(f"wire {kind}")
        net = build_sorting_network(2, pad_uniform=True)
        A, B = [1, 2], [3, 4]
        pool = build_gadget_pool(Z, kind, net, A, B)
        for phi in ({1: 3, 2: 4}, {1: 4, 2: 3}):
            ps = route_path_system(Z, kind, net, pool, A, B, phi)
            verts = [v for p in ps.paths.values() for v in p]
            cols = []
            for p in ps.paths.values():
                for u, v in zip(p, p[1:]):
                    cols.append(Z.mul(u, v) if kind == MULTIPLICATION else Z.mul(Z.inv(u), v))
            if any(ps.paths[a][-1] != phi[a] for a in A) or len(verts) != len(set(verts)) \
                    or len(cols) != len(set(cols)) or sorted(cols) != sorted(pool.colors()) \
                    or len({len(p) for p in ps.paths.values()}) != 1:
                notes.append(f"routing {kind} {phi}")
    for m in range(1, 7):
        net = build_sorting_network(m)
        for perm in itertools.permutations(range(m)):
            if evaluate_network(net, list(perm))[1] != list(range(m)):
                notes.append(f"network m={m}")
                break
    return not notes, f"{built} absorbers, problems {notes}"


def crit_gallagher():
    bad, checked = [], 0
    for s in builtin_specs(64):
        G = make_family(s)
        if G.is_abelian:
            continue
        widths = brute_commutator_widths(G)
        bound = max(1, math.ceil(math.log(len(widths), 4) - 1e-12))
        for g, t in widths.items():
            checked += 1
            if t > bound or commutator_width(G, g) != t:
                bad.append((s, g))
    return not bad and checked > 0, f"{checked} elements, violations {bad[:3]}"


def crit_square_roots():
    bad = []
    specs = builtin_specs(64)
    for s in specs:
        G = make_family(s)
        counts = [0] * G.order
        for x in G.elements():
            counts[G.mul(x, x)] += 1
        boolean = all(G.mul(x, x) == 0 for x in G.elements())
        for g in G.elements():
            if square_root_count(G, g) != counts[g]:
                bad.append((s, g, "count"))
            if 4 * counts[g] > 3 * G.order and not (boolean and g == 0):
                bad.append((s, g))
    return not bad, f"{len(specs)} groups, violations {bad[:3]}"


CRITERIA = [
    (1, "Hall-Paige equivalence sweep", crit_hall_paige, 60),
    (2, "even cyclic and Z99 impossibility", crit_even_cyclic, 5),
    (3, "near transversals up to order 16", crit_near_transversal, 30),
    (4, "odd cyclic subsquares have transversals", crit_snevily, 600),
    (5, "Boolean subsquares without transversals", crit_boolean, 60),
    (6, "sequencing facts", crit_sequencing, 600),
    (7, "zero-sum partition necessity and Z2^m existence", crit_zero_sum, 1800),
    (8, "free product projection counts", crit_projection_counts, 60),
    (9, "separability symmetry and homomorphism law", crit_separability, 60),
    (10, "absorber, comparator, wire, routing and networks", crit_gadgets, 600),
    (11, "commutator width bound", crit_gallagher, 300),
    (12, "square root criterion", crit_square_roots, 60),
]


def run_criterion(num, title, fn, limit):
    t0 = time.monotonic()
    ok, detail = fn()
    elapsed = time.monotonic() - t0
    passed = ok and elapsed < limit
    print(f"criterion {num:2d} {'PASS' if passed else 'FAIL'} {title} "
          f"[{elapsed:.2f}s / {limit}s] {detail}")
    return passed


@pytest.mark.parametrize("num, title, fn, limit", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_acceptance(num, title, fn, limit, capsys):
    with capsys.disabled():
        print()
        passed = run_criterion(num, title, fn, limit)
    assert passed


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
