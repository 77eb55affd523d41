import numpy as np
import pytest
from hypothesis import given, settings

from conftest import closure
from strategies import sggis
from polycov.constructors import build, hypercube, polygon, pyramid, toroid44
from polycov.covers import (
    NotACGroup,
    PreconditionError,
    SymbolicGroup,
    bump,
    bump_stage,
    extend_2k,
    facet_action,
    largest_c_group_prefix,
    regular_cover,
)
from polycov.factored import FactoredInteger
from polycov.monodromy import monodromy
from polycov.perm import Permutation, compose
from polycov.sggi import Sggi, check_sggi, covers, is_string_c_group, schlafli_type

# g0 == g2 on three points: an sggi of type {3,3} that is not a C-group
REPEATED = Sggi([Permutation(g) for g in ([1, 0, 2], [0, 2, 1], [1, 0, 2])], 3)


def square():
    return monodromy(polygon(4))


def sign_flip_only(p: Permutation, nA: int) -> bool:
    img = p.images
    x = np.arange(2 * nA)
    return bool(np.all(img[: 2 * nA] // 2 == x // 2)) and bool(np.all(img[2 * nA:] == np.arange(2 * nA, len(img))))


@pytest.mark.parametrize("expr, count", [("polygon(4)", 4), ("hypercube(3)", 6), ("polygon(12)", 12),
                                         ("toroid44(3)", 9), ("simplex(3)", 4)])
def test_facet_counts(expr, count):
    fa = facet_action(monodromy(build(expr)))
    assert fa.facet_count == count
    assert fa.base_facet == 0
    assert fa.action.is_transitive()


def test_facet_subgroup_fixes_base_facet():
    G = monodromy(hypercube(3))
    fa = facet_action(G)
    for t in range(G.rank - 1):
        assert fa.action.generators[t].images[0] == 0
    assert fa.action.generators[G.rank - 1].images[0] != 0
    assert fa.faithful


def test_square_extension():
    K = extend_2k(square())
    assert isinstance(K, Sggi)
    assert K.order() == FactoredInteger.from_int(128)
    assert schlafli_type(K).periods == (4, 4)
    assert is_string_c_group(K)
    assert K.subgroup([0, 1]).order_int() == 8
    assert len(closure([g.tolist() for g in K.gens])) == 128


@pytest.mark.parametrize("p", range(3, 9))
def test_polygon_extension_order(p):
    K = extend_2k(monodromy(polygon(p)))
    assert K.order() == FactoredInteger.from_int(2 * p * 2**p)
    assert schlafli_type(K).periods == (p, 4)
    assert len(closure([g.tolist() for g in K.gens])) == 2 * p * 2**p


@pytest.mark.parametrize("expr", ["polygon(3)", "polygon(5)", "hypercube(3)", "simplex(3)", "polygon(2)"])
def test_extension_invariants(expr):
    G = monodromy(build(expr))
    nA = facet_action(G).facet_count
    K = extend_2k(G)
    m = G.rank
    r = K.gens
    for j in range(m - 1):
        assert compose(r[m], r[j]) == compose(r[j], r[m])
    sq = compose(r[m - 1], r[m]) ** 2
    assert sq.order() == 2
    assert sign_flip_only(sq, nA)
    assert K.order() == G.order() * FactoredInteger({2: nA})
    # the facet subgroup is a copy of G
    F = K.prefix(m)
    assert F.order() == G.order()
    assert covers(F, G) and covers(G, F)


def test_digon_unfaithful_facet_action():
    G = monodromy(polygon(2))
    fa = facet_action(G)
    assert fa.facet_count == 2 and not fa.faithful
    K = extend_2k(G)
    assert K.degree == 2 * 2 + G.degree
    assert K.order() == FactoredInteger.from_int(16)
    assert schlafli_type(K).periods == (2, 4)
    assert is_string_c_group(K)


def test_rank_one_extension():
    K = extend_2k(Sggi([Permutation([1, 0])], 2))
    assert K.order() == FactoredInteger.from_int(8)
    assert schlafli_type(K).periods == (4,)
    assert len(closure([g.tolist() for g in K.gens])) == 8


def test_extension_rejects_non_c_groups():
    with pytest.raises(NotACGroup):
        extend_2k(REPEATED)


def test_symbolic_extension_under_a_small_facet_cap():
    G = monodromy(hypercube(3))
    S = extend_2k(G, facet_cap=4)
    assert isinstance(S, SymbolicGroup)
    assert S.order == FactoredInteger.from_int(48 * 2**6)
    assert S.type.periods == (4, 3, 4)
    assert S.order_exact
    again = extend_2k(S)
    assert again.rank == 5 and again.type.periods == (4, 3, 4, 4)
    assert again.order == S.order * FactoredInteger({2: 2**6})


def test_bump_keeps_a_c_group_prefix():
    G = monodromy(hypercube(3))
    H = G.prefix(2)
    L = bump(G, 1, H)
    assert isinstance(L, Sggi)
    assert L.subgroup([0, 1]).order() == H.order()
    assert covers(L, G)


def test_bump_precondition():
    G = monodromy(hypercube(3))
    with pytest.raises(PreconditionError):
        bump(G, 1, monodromy(polygon(5)))
    with pytest.raises(ValueError):
        bump(G, 2, G)


def test_explicit_bump_of_repeated_generator():
    st = bump_stage(REPEATED, 1, REPEATED.prefix(2))
    assert st.mode == "explicit"
    assert st.facet_count == 3
    assert st.extension.order() == FactoredInteger.from_int(48)
    assert st.c_group is True and st.covers_prefix is True


def test_cover_of_repeated_generator():
    rep = regular_cover(REPEATED)
    assert rep.start_prefix == 2 and len(rep.bumps) == 1
    assert rep.mode == "explicit" and rep.certified
    assert rep.final_order == FactoredInteger.parse("2^4 * 3^2")
    assert rep.final_type.periods == (3, 12)
    assert is_string_c_group(rep.final.group)


def test_cover_of_a_c_group_is_itself():
    G = monodromy(toroid44(3))
    rep = regular_cover(G)
    assert rep.start_prefix == 3 and not rep.bumps
    assert rep.final.group is G or rep.final.group.to_json() == G.to_json()
    assert rep.certified


def test_cover_rejects_non_sggis():
    bad = Sggi([Permutation([1, 2, 0]), Permutation([1, 0, 2])], 3)
    with pytest.raises(PreconditionError):
        regular_cover(bad)


def test_cover_of_rank_four_witness(witness_sggi):
    G, _ = witness_sggi
    rep = regular_cover(G)
    assert rep.start_prefix == 3
    assert rep.mode == "explicit" and rep.certified
    stage = rep.final
    assert stage.facet_count == 15
    assert stage.extension.order() == FactoredInteger.parse("2^18 * 3 * 5")
    assert rep.final_order == FactoredInteger.parse("2^21 * 3^3 * 5^2")
    assert is_string_c_group(stage.group)


def test_face_subgroups_of_the_cover():
    # all 2-faces of the torus are squares: the cover's <l0,l1> is the square's group
    rep = regular_cover(monodromy(toroid44(3)))
    assert rep.final.group.subgroup([0, 1]).order_int() == 8
    # negative control: the square pyramid has triangles and a square
    rep = regular_cover(monodromy(pyramid(polygon(4))))
    face_group = rep.final.group.subgroup([0, 1]).order_int()
    assert face_group not in (6, 8)
    assert face_group % 24 == 0
    # edges are all alike
    assert rep.final.group.subgroup([0]).order_int() == 2


def test_largest_prefix_scan(example_mon):
    assert largest_c_group_prefix(REPEATED) == (2, False)
    k, capped = largest_c_group_prefix(example_mon, enum_cap=10)
    assert capped and k < 3


def test_report_serialises():
    d = regular_cover(REPEATED).as_dict()
    assert d["final_order"] == "2^4 * 3^2"
    assert d["stages"][1]["extension"]["order"] == "2^4 * 3"
    assert d["certified"] is True


@settings(max_examples=25)
@given(sggis(ranks=(2, 3), degrees=(3, 4, 5)))
def test_cover_properties(G):
    rep = regular_cover(G)
    assert rep.mode == "explicit"
    assert rep.certified
    L = rep.final.group
    assert check_sggi(L) and is_string_c_group(L)
    for st in rep.stages:
        prefix = G.prefix(st.index + 1)
        for a, b in zip(schlafli_type(prefix).periods, st.type().periods):
            assert b % a == 0
