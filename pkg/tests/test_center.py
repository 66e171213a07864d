import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from endocomm.abelian import AbHom, Subgroup, abelian_groups_up_to
from endocomm.center import (
    center_of_fully_invariant_submodule_check, center_of_module, commutator_image, essential_center_lemma_check,
    is_endo_commutative, is_fully_invariant, main_theorem_report,
)
from endocomm.errors import HypothesisUnmet
from endocomm.modules import ModuleAction, end_ring, scalar_module
from endocomm.rings import ScalarRing

Z2Z4 = scalar_module((2, 4))


def test_z2z2_center_is_zero():
    a = scalar_module((2, 2))
    assert center_of_module(a).is_trivial()
    assert commutator_image(a).is_whole()
    assert not is_endo_commutative(a)


def test_z2z4_center():
    C = center_of_module(Z2Z4)
    assert C == Subgroup(Z2Z4.carrier, [(0, 2)])
    img = commutator_image(Z2Z4)
    assert not img.is_trivial() and not img.is_whole()


def test_cyclic_and_dissimilar_are_endo_commutative():
    for n in (2, 9, 12, 30):
        a = scalar_module((n,))
        assert center_of_module(a).is_whole() and is_endo_commutative(a)
        assert commutator_image(a).is_trivial()


def oracle_center(G):
    f = G.invariant_factors
    H = oracle.end_homs(f)
    gens = [np.array(g).reshape(len(f), len(f)) for g in oracle.greedy_generators(H, oracle.hom_moduli(f, f))]
    return oracle.center(f, gens), oracle.commutator_image(f, gens)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([G for G in abelian_groups_up_to(64)
                        if oracle.hom_count(G.invariant_factors, G.invariant_factors) <= 2 ** 12]))
def test_center_matches_brute_force(G):
    a = ModuleAction(ScalarRing(0), G)
    C, img = oracle_center(G)
    assert center_of_module(a).element_set == C
    assert commutator_image(a).element_set == img


def test_main_theorem_examples():
    r = main_theorem_report(scalar_module((2, 2)))
    assert set(r.predicates.values()) == {False}
    assert r.center.is_trivial() and r.T_order == 2
    r = main_theorem_report(scalar_module((6,)))
    assert set(r.predicates.values()) == {True}
    r = main_theorem_report(Z2Z4)
    assert set(r.predicates.values()) == {False}
    assert not r.center.is_trivial() and not r.center.is_whole()
    assert r.consistent()


def test_full_invariance_examples():
    M = Z2Z4.carrier
    assert is_fully_invariant(Subgroup(M, [(1, 0), (0, 2)]), Z2Z4)
    assert not is_fully_invariant(Subgroup(M, [(1, 0)]), Z2Z4)
    assert is_fully_invariant(Subgroup(M, [(0, 2)]), Z2Z4)
    # the witness: a -> 2b
    f = AbHom.from_images(M, M, [(0, 2), (0, 0)])
    assert end_ring(Z2Z4).contains(f) and f((1, 0)) == (0, 2)


def test_fully_invariant_center_formula_examples():
    a = scalar_module((2, 2))
    assert center_of_fully_invariant_submodule_check(Subgroup.whole(a.carrier), a)
    assert center_of_fully_invariant_submodule_check(Subgroup.trivial(a.carrier), a)
    b = scalar_module((4, 4))
    twice = Subgroup(b.carrier, [(2, 0), (0, 2)])
    assert center_of_fully_invariant_submodule_check(twice, b)
    with pytest.raises(HypothesisUnmet):
        center_of_fully_invariant_submodule_check(Subgroup(Z2Z4.carrier, [(1, 0)]), Z2Z4)


def test_essential_center_lemma_examples():
    assert essential_center_lemma_check(scalar_module((2, 6))) in (True, None)
    assert essential_center_lemma_check(scalar_module((6,), 6)) is True
    assert essential_center_lemma_check(scalar_module((2, 4), 4)) is None
    assert essential_center_lemma_check(scalar_module((4,), 4)) is True


def test_center_is_brute_force_fully_invariant():
    for G in abelian_groups_up_to(32):
        a = ModuleAction(ScalarRing(0), G)
        C = center_of_module(a)
        S = end_ring(a)
        assert all(C.contains(h(x)) for h in S.generators for x in C.canonical_generators)
