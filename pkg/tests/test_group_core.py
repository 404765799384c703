import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import NoTripleFound, NotAGroup, OrderTooLarge, UnknownFamily
from artifact.group_core import (
    abelianization,
    builtin_specs,
    commutator_subgroup,
    commutator_width,
    coset_square_count,
    find_phi_triple,
    from_cayley_table,
    gallagher_bound,
    hall_paige_product,
    hall_paige_sylow,
    is_generic,
    is_subgroup,
    make_family,
    read_cayley_file,
    square_root_count,
    subset_sum_ab,
    sylow_2_subgroup,
    write_cayley_text,
)

SMALL = [
    "cyclic:1", "cyclic:2", "cyclic:5", "cyclic:6", "cyclic:8", "elem2:3",
    "dihedral:3", "dihedral:4", "dihedral:5", "quaternion", "sym:3", "alt:4",
    "dicyclic:3", "product(cyclic:4,elem2:2)", "product(sym:3,cyclic:2)",
]


def brute_closure(G, gens):
    elems = {0} | set(gens)
    while True:
        new = {G.mul(a, b) for a in elems for b in elems} | elems
        if new == elems:
            return elems
        elems = new


def test_trivial_and_z2_tables():
    assert from_cayley_table([[0]]).order == 1
    G = from_cayley_table([[0, 1], [1, 0]])
    assert G.order == 2 and G.inv(1) == 1


def test_column_not_permutation_rejected():
    with pytest.raises(NotAGroup, match="column 0"):
        from_cayley_table([[0, 1], [0, 1]])


def test_associativity_violation_reports_triple():
    # a Latin square with identity 0 that is not associative (a loop of order 5)
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup, match="associativity"):
        from_cayley_table(loop)


def test_identity_relabelled_to_zero():
    # Z3 written with identity 2
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = from_cayley_table(table)
    assert all(G.mul(0, g) == g == G.mul(g, 0) for g in range(3))


def test_cayley_file_round_trip(tmp_path):
    G = make_family("sym:3")
    path = tmp_path / "s3.txt"
    path.write_text(write_cayley_text(G))
    H = read_cayley_file(path)
    assert H.cayley == G.cayley


@pytest.mark.parametrize("spec", SMALL)
def test_family_tables_are_groups(spec):
    G = make_family(spec)
    H = from_cayley_table(G.cayley)
    assert H.cayley == G.cayley


def test_family_orders():
    assert make_family("cyclic:6").order == 6
    assert make_family("product(cyclic:4,elem2:2)").order == 16
    S3 = make_family("sym:3")
    assert S3.order == 6 and not S3.is_abelian
    assert make_family("alt:5").order == 60
    assert make_family("dihedral:4").order == 8


def test_family_errors():
    with pytest.raises(UnknownFamily):
        make_family("banana:3")
    with pytest.raises(OrderTooLarge):
        make_family("sym:7")
    with pytest.raises(OrderTooLarge):
        make_family("cyclic:100", max_order=50)


def test_product_numbering_mixed_radix():
    G = make_family("product(cyclic:4,elem2:2)")
    # (a, x) has id 4a + x; (1,1) * (3,2) = (0,3)
    assert G.mul(4 * 1 + 1, 4 * 3 + 2) == 3


def test_commutator_subgroups():
    assert commutator_subgroup(make_family("cyclic:8")).elements == (0,)
    S3 = make_family("sym:3")
    D = commutator_subgroup(S3)
    comms = {S3.commutator(a, b) for a in range(6) for b in range(6)}
    assert D.members == brute_closure(S3, comms) and D.order == 3
    assert commutator_subgroup(make_family("quaternion")).order == 2


def test_abelianization_orders():
    assert abelianization(make_family("cyclic:7")).quotient_order == 7
    assert abelianization(make_family("sym:3")).quotient_order == 2
    assert abelianization(make_family("quaternion")).quotient_order == 4


@pytest.mark.parametrize("spec", SMALL)
def test_coset_map_is_homomorphism(spec):
    G = make_family(spec)
    ab = abelianization(G)
    for g in G.elements():
        for h in G.elements():
            assert ab.coset(G.mul(g, h)) == ab.add(ab.coset(g), ab.coset(h))
    assert ab.coset(0) == 0


def test_subset_sums():
    assert subset_sum_ab(make_family("cyclic:6"), []) == 0
    Z6 = make_family("cyclic:6")
    assert subset_sum_ab(Z6, range(6)) == abelianization(Z6).coset(3)
    assert subset_sum_ab(make_family("cyclic:5"), range(5)) == 0


def test_hall_paige_examples():
    for spec, expected in [("cyclic:5", True), ("cyclic:6", False), ("quaternion", True)]:
        G = make_family(spec)
        assert hall_paige_product(G) is expected
        assert hall_paige_sylow(G) is expected


@pytest.mark.parametrize("spec", builtin_specs(32))
def test_hall_paige_forms_agree(spec):
    G = make_family(spec)
    assert hall_paige_product(G) == hall_paige_sylow(G)


@pytest.mark.parametrize("spec", ["sym:4", "dihedral:6", "alt:4", "product(quaternion,cyclic:3)"])
def test_sylow_subgroup_properties(spec):
    G = make_family(spec)
    P = sylow_2_subgroup(G)
    assert P.order == G.order & -G.order
    assert is_subgroup(G, P.elements)


def test_square_root_counts():
    E = make_family("elem2:3")
    assert square_root_count(E, 0) == 8
    assert all(square_root_count(E, g) == 0 for g in range(1, 8))
    Z5 = make_family("cyclic:5")
    assert all(square_root_count(Z5, g) == 1 for g in range(5))


def test_genericity():
    E = make_family("elem2:3")
    assert not is_generic(E, 0)
    assert is_generic(E, 3, tau=0)
    assert not is_generic(make_family("cyclic:5"), 1, tau=0)


def test_commutator_width_examples():
    S3 = make_family("sym:3")
    assert commutator_width(S3, 0) == 0
    for g in commutator_subgroup(S3).elements[1:]:
        assert commutator_width(S3, g) == 1
    assert commutator_width(S3, 1) is None  # a transposition
    assert commutator_width(make_family("cyclic:6"), 2) is None


@pytest.mark.parametrize("spec", ["sym:3", "quaternion", "alt:4", "sym:4", "dicyclic:3"])
def test_commutator_characterisation(spec):
    G = make_family(spec)
    D = commutator_subgroup(G)
    for g in D.elements:
        assert commutator_width(G, g) is not None
    # a product of a multiset in two orders differs by an element of G'
    rng = random.Random(spec)
    for _ in range(200):
        elems = [rng.randrange(G.order) for _ in range(rng.randint(1, 6))]
        perm = elems[:]
        rng.shuffle(perm)
        assert G.mul(G.prod(elems), G.inv(G.prod(perm))) in D


def test_square_root_criterion_on_small_groups():
    for spec in builtin_specs(32):
        G = make_family(spec)
        for g in G.elements():
            if 4 * square_root_count(G, g) > 3 * G.order:
                assert G.is_elementary_abelian_2 or G.order == 1
                assert g == 0


@pytest.mark.parametrize("spec", ["sym:3", "quaternion", "dihedral:5", "alt:4"])
def test_coset_square_translation(spec):
    G = make_family(spec)
    ab = abelianization(G)
    for g in G.elements():
        for h in G.elements():
            t = G.mul(G.mul(h, h), g)
            direct_g = sum(1 for x in G.elements() if ab.coset(G.mul(x, x)) == ab.coset(g))
            direct_t = sum(1 for x in G.elements() if ab.coset(G.mul(x, x)) == ab.coset(t))
            assert direct_g == direct_t == coset_square_count(G, g)


def test_gallagher_bound_small():
    for spec in ["sym:3", "sym:4", "alt:4", "quaternion", "dihedral:8"]:
        G = make_family(spec)
        for g in commutator_subgroup(G).elements:
            assert commutator_width(G, g) <= gallagher_bound(G)


def test_phi_triple_examples():
    E = make_family("elem2:3")
    t = find_phi_triple(E)
    assert E.prod([t.a, t.b, t.c]) == 0 and t.conditions["a"]
    Z7 = make_family("cyclic:7")
    t = find_phi_triple(Z7)
    assert (t.a + t.b + t.c) % 7 == 0
    assert (1 + 2 + 4) % 7 == 0
    with pytest.raises(NoTripleFound):
        find_phi_triple(make_family("cyclic:1"))


def test_phi_triple_prefers_satisfied_conditions():
    G = make_family("sym:4")
    t = find_phi_triple(G, tau=1)
    assert t.all_hold()
    assert all(is_generic(G, g, 1) for g in (t.a, t.b, t.c))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_inverse_table(spec, data):
    G = make_family(spec)
    g = data.draw(st.integers(0, G.order - 1))
    assert G.mul(g, G.inv(g)) == 0 == G.mul(G.inv(g), g)


def test_gallagher_bound_formula():
    assert gallagher_bound(make_family("cyclic:4")) == 1
    assert gallagher_bound(make_family("alt:5")) == math.ceil(math.log(60, 4))
