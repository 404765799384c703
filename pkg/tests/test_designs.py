import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.designs import (
    classify_subsquare,
    complete_mapping,
    is_complete_mapping,
    is_orthomorphism,
    is_partial_transversal,
    multiplicative_energy,
    near_transversal,
    necessary_condition,
    orthomorphism,
    subsquare_transversal,
)
from artifact.errors import UnbalancedParts
from artifact.group_core import hall_paige_product, make_family


def brute_transversal(G, A, B):
    for perm in itertools.permutations(B):
        if len({G.mul(a, b) for a, b in zip(A, perm)}) == len(A):
            return True
    return len(A) == 0


def test_necessary_condition_examples():
    Z5 = make_family("cyclic:5")
    assert necessary_condition(Z5, range(5), range(5), range(5))
    Z99 = make_family("cyclic:99")
    assert necessary_condition(Z99, [98, 1], [98, 1], [49, 50])
    Z4 = make_family("cyclic:4")
    assert not necessary_condition(Z4, [0], [0], [1])
    with pytest.raises(UnbalancedParts):
        necessary_condition(Z4, [0], [0, 1], [1])


def test_complete_mapping_examples():
    Z99 = make_family("cyclic:99")
    assert complete_mapping(Z99, [98, 1], [98, 1], [49, 50]) is None
    Z3 = make_family("cyclic:3")
    phi = complete_mapping(Z3)
    assert is_complete_mapping(Z3, phi)
    assert is_complete_mapping(Z3, {0: 0, 1: 1, 2: 2})
    assert complete_mapping(make_family("cyclic:6")) is None


def test_complete_mapping_brute_force_z3():
    Z3 = make_family("cyclic:3")
    good = [p for p in itertools.permutations(range(3))
            if is_complete_mapping(Z3, dict(enumerate(p)))]
    assert good and (0, 1, 2) in good


def test_orthomorphism_examples():
    Z3 = make_family("cyclic:3")
    phi = orthomorphism(Z3)
    assert is_orthomorphism(Z3, phi)
    assert is_orthomorphism(Z3, {0: 0, 1: 2, 2: 1})
    Z2 = make_family("cyclic:2")
    assert orthomorphism(Z2) is None
    assert not any(is_orthomorphism(Z2, dict(enumerate(p)))
                   for p in itertools.permutations(range(2)))
    assert orthomorphism(Z3, [], [], []) == {}


@pytest.mark.parametrize("spec", ["cyclic:5", "cyclic:7", "elem2:2", "quaternion", "alt:4",
                                  "cyclic:4", "sym:3", "dihedral:4"])
def test_full_mappings_follow_hall_paige(spec):
    G = make_family(spec)
    hp = hall_paige_product(G)
    phi = complete_mapping(G)
    assert (phi is not None) == hp
    if phi is not None:
        assert is_complete_mapping(G, phi)
    psi = orthomorphism(G)
    assert (psi is not None) == hp
    if psi is not None:
        assert is_orthomorphism(G, psi)


def test_subsquare_examples():
    Z4 = make_family("cyclic:4")
    assert subsquare_transversal(Z4, [0, 2], [0, 2]) is None
    assert not brute_transversal(Z4, [0, 2], [0, 2])
    E = make_family("elem2:2")
    assert subsquare_transversal(E, [2, 3], [0, 1]) is None
    Z5 = make_family("cyclic:5")
    for A in itertools.combinations(range(5), 2):
        for B in itertools.combinations(range(5), 2):
            T = subsquare_transversal(Z5, A, B)
            assert T is not None and is_partial_transversal(Z5, T)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["cyclic:6", "sym:3", "elem2:3", "quaternion", "cyclic:8"]),
       st.integers(0, 5), st.randoms(use_true_random=False))
def test_transversal_solver_matches_brute_force(spec, size, rnd):
    G = make_family(spec)
    A = rnd.sample(range(G.order), size)
    B = rnd.sample(range(G.order), size)
    T = subsquare_transversal(G, A, B)
    assert (T is not None) == brute_transversal(G, sorted(A), sorted(B))
    if T is not None:
        assert is_partial_transversal(G, T) and len(T) == size


def test_translates_keep_transversals():
    G = make_family("sym:3")
    rng = random.Random(3)
    for _ in range(50):
        k = rng.randint(1, 5)
        A, B = rng.sample(range(6), k), rng.sample(range(6), k)
        g, h = rng.randrange(6), rng.randrange(6)
        base = subsquare_transversal(G, A, B) is not None
        moved = subsquare_transversal(G, [G.mul(g, a) for a in A], [G.mul(b, h) for b in B])
        assert base == (moved is not None)


def test_near_transversal_examples():
    for spec, size in [("cyclic:1", 0), ("cyclic:2", 1), ("cyclic:6", 5), ("cyclic:3", 2), ("sym:3", 5)]:
        G = make_family(spec)
        cells = near_transversal(G)
        assert len(cells) == size == G.order - 1
        assert is_partial_transversal(G, cells)


def test_classify_case1():
    Z4 = make_family("cyclic:4")
    for g1 in range(4):
        for g2 in range(4):
            A = [(g1 + h) % 4 for h in (0, 2)]
            B = [(h + g2) % 4 for h in (0, 2)]
            res = classify_subsquare(Z4, A, B)
            assert res.verdict == "Case1" and res.subgroup == (0, 2)


def test_classify_case2():
    E = make_family("elem2:2")
    res = classify_subsquare(E, [2, 3], [0, 1])
    assert res.verdict == "Case2" and res.k == 2
    a1, a2 = res.removed_a
    b1, b2 = res.removed_b
    assert a1 ^ a2 ^ b1 ^ b2 == 0


def test_classify_has_transversal():
    Z5 = make_family("cyclic:5")
    for A in itertools.combinations(range(5), 3):
        res = classify_subsquare(Z5, A, (0, 1, 3))
        assert res.verdict == "HasTransversal" and not res.notes


def test_classification_is_exclusive():
    rng = random.Random(11)
    for spec in ["elem2:3", "cyclic:8", "quaternion", "product(cyclic:4,cyclic:2)"]:
        G = make_family(spec)
        for _ in range(40):
            k = rng.randint(1, G.order)
            res = classify_subsquare(G, rng.sample(range(G.order), k), rng.sample(range(G.order), k))
            assert res.verdict in {"HasTransversal", "Case1", "Case2", "SmallOrderException"}
            if res.verdict == "HasTransversal":
                assert not res.notes


def test_energy_examples():
    Z5 = make_family("cyclic:5")
    assert multiplicative_energy(Z5, [3]) == 1
    S3 = make_family("sym:3")
    from artifact.group_core import commutator_subgroup

    H = commutator_subgroup(S3).elements
    assert multiplicative_energy(S3, H) == len(H) ** 3
    A = [0, 1]
    brute = sum(1 for a1, a2, b1, b2 in itertools.product(A, repeat=4)
                if (a1 - a2) % 5 == (b1 - b2) % 5)
    assert brute == 6 == multiplicative_energy(Z5, A)
