import itertools

import numpy as np
import pytest

import oracle
from endocomm.abelian import (
    FinAbGroup, Subgroup, abelian_groups_up_to, count_subgroups, enumerate_subgroups, factorize, primary_components,
)
from endocomm.center import is_endo_commutative
from endocomm.classify import (
    classify, is_comultiplication, is_d_module, is_dissimilar_semisimple, is_endo_extendable, is_generator,
    is_multiplication, is_quasi_injective, is_self_generator, s_module_multiplication_check,
    submodule_lattice_comparison, torsion_subset, trace_ideal_and_generator,
)
from endocomm.errors import BoundExceeded, HypothesisUnmet, NonScalarRing
from endocomm.modules import Bounds, ModuleAction, end_ring, regular_module, scalar_module
from endocomm.rings import ScalarRing, scalar_ring_as_finring


def groups(max_order):
    return [G for G in abelian_groups_up_to(max_order)]


def as_sets(G):
    return [frozenset(N) for N in oracle.subgroups(G.invariant_factors)]


def scaled(G, m):
    X = oracle.elements(G.invariant_factors)
    mods = np.array(G.invariant_factors, dtype=np.int64)
    return frozenset(map(tuple, (m * X % mods).tolist())) if G.rank else frozenset({()})


def killed(G, m):
    X = oracle.elements(G.invariant_factors)
    mods = np.array(G.invariant_factors, dtype=np.int64)
    if not G.rank:
        return frozenset({()})
    return frozenset(map(tuple, X[np.all(m * X % mods == 0, axis=1)].tolist()))


def ideal_generators(ring, G):
    # ideals of Z and of Z/n are principal; mZ acts on M through m mod exp(M)
    n = ring.modulus or G.exponent
    return range(n + 1)


# --- multiplication and comultiplication ----------------------------------

def test_multiplication_examples():
    assert is_multiplication(scalar_module((12,)))
    assert not is_multiplication(scalar_module((2, 2)))
    assert is_multiplication(scalar_module(()))


def test_comultiplication_examples():
    for q in (2, 8, 27):
        assert is_comultiplication(scalar_module((q,)))
    assert not is_comultiplication(scalar_module((2, 2)))
    assert is_comultiplication(scalar_module(()))


@pytest.mark.parametrize("ring_kind", ["Z", "exp"])
def test_multiplication_and_comultiplication_by_ideal_enumeration(ring_kind):
    for G in groups(60):
        ring = ScalarRing(0 if ring_kind == "Z" or G.order == 1 else G.exponent)
        a = ModuleAction(ring, G)
        subs = as_sets(G)
        ms = ideal_generators(ring, G)
        products = {scaled(G, m) for m in ms}
        annihilated = {killed(G, m) for m in ms}
        assert is_multiplication(a) == all(N in products for N in subs), G
        assert is_comultiplication(a) == all(N in annihilated for N in subs), G


# --- distributivity -------------------------------------------------------

def test_d_module_examples():
    assert is_d_module(scalar_module((12,)))
    assert not is_d_module(scalar_module((2, 2)))
    assert is_d_module(scalar_module(()))


def distributive(subs, factors):
    def join(A, B):
        return frozenset(oracle.closure(np.array(sorted(A | B)), factors))
    for A, B, C in itertools.product(subs, repeat=3):
        if A & join(B, C) != join(A & B, A & C):
            return False
    return True


def test_d_module_matches_definition():
    for G in groups(32):
        subs = as_sets(G)
        assert is_d_module(ModuleAction(ScalarRing(0), G)) == distributive(subs, G.invariant_factors), G


def test_d_module_iff_every_submodule_multiplication():
    for G in groups(64):
        a = ModuleAction(ScalarRing(0), G)
        every = all(is_multiplication(ModuleAction(ScalarRing(0), N.basis_group)) for N in enumerate_subgroups(G))
        assert is_d_module(a) == every, G


# --- self-generators ------------------------------------------------------

def test_self_generator_examples():
    assert is_self_generator(scalar_module((2, 2)))
    assert is_self_generator(scalar_module((9,)))
    assert is_self_generator(scalar_module((2,), 4))


def test_self_generator_matches_brute_force():
    for G in groups(32)[1:]:
        f = G.invariant_factors
        if oracle.hom_count(f, f) > 2 ** 12:
            continue
        H = oracle.end_homs(f)
        X = oracle.elements(f)
        images = [frozenset(map(tuple, img.tolist())) for img in oracle.apply(H, X, f)]
        ok = True
        for N in as_sets(G):
            inside = [im for im in images if im <= N]
            gens = np.array(sorted(set().union(*inside)), dtype=np.int64).reshape(-1, len(f))
            span = frozenset(oracle.closure(gens, f))
            ok &= span == N
        assert is_self_generator(ModuleAction(ScalarRing(0), G)) == ok, G


# --- torsion, trace and generators ------------------------------------------

def test_torsion_subset_examples():
    a = scalar_module((2, 4))
    assert torsion_subset(a) == frozenset(a.carrier.elements())
    assert torsion_subset(scalar_module((6,), 6)) == {(0,), (2,), (3,), (4,)}
    assert torsion_subset(scalar_module(())) == {()}


def test_trace_ideal_examples():
    trace, gen = trace_ideal_and_generator(scalar_module((2, 4), 4))
    assert gen and trace.is_whole()
    trace, gen = trace_ideal_and_generator(scalar_module((2,), 4))
    assert not gen and trace == Subgroup(FinAbGroup.of(4), [(2,)])
    assert trace_ideal_and_generator(scalar_module((12,), 12))[1]
    with pytest.raises(NonScalarRing):
        trace_ideal_and_generator(scalar_module((2,)))
    assert not is_generator(scalar_module((2, 4)))


# --- extendability --------------------------------------------------------

def test_extendability_examples():
    for factors, expected in (((2, 2), True), ((2, 4), False), ((6,), True), ((4, 4), True), ((5,), True)):
        a = scalar_module(factors)
        assert is_endo_extendable(a) == expected, factors
        assert is_quasi_injective(a) == expected, factors


def extension_oracle(G):
    """Count restrictions of End(M) against the number of maps out of each subgroup."""
    f = G.invariant_factors
    H = oracle.end_homs(f)
    ee = qi = True
    for N in oracle.subgroups(f):
        pts = np.array(sorted(N), dtype=np.int64).reshape(-1, len(f))
        imgs = oracle.apply(H, pts, f)
        inside = np.all([[tuple(y) in N for y in img.tolist()] for img in imgs], axis=1)
        t = Subgroup(G, [tuple(p) for p in pts.tolist()]).basis_group.invariant_factors
        restrictions = {img.tobytes() for img in imgs}
        stable = {img.tobytes() for img, ok in zip(imgs, inside) if ok}
        qi &= len(restrictions) == oracle.hom_count(t, f)
        ee &= len(stable) == oracle.hom_count(t, t)
    return ee, qi


def test_extendability_matches_brute_force():
    for G in groups(32)[1:]:
        f = G.invariant_factors
        if oracle.hom_count(f, f) > 2 ** 10:
            continue
        ee, qi = extension_oracle(G)
        a = ModuleAction(ScalarRing(0), G)
        assert is_endo_extendable(a) == ee, G
        assert is_quasi_injective(a) == qi, G


def homogeneous_components(G):
    return all(len(set(P.invariant_factors)) <= 1 for P in primary_components(G).values())


def test_exhaustive_extendability_matches_homogeneity():
    exhaustive = Bounds(extendable_subgroups=10 ** 6)
    for G in groups(64):
        a = ModuleAction(ScalarRing(0), G)
        want = homogeneous_components(G)
        assert is_endo_extendable(a, exhaustive) == want, G
        assert is_quasi_injective(a, exhaustive) == want, G


def test_extendability_bound():
    with pytest.raises(BoundExceeded):
        is_endo_extendable(scalar_module((2, 256)))
    assert classify(scalar_module((2, 256))).endo_extendable is None


# --- semisimplicity -----------------------------------------------------------

def dissimilar_semisimple_oracle(G):
    subs = oracle.subgroups(G.invariant_factors)
    whole = max(subs, key=len)
    zero = min(subs, key=len)

    def join(A, B):
        return frozenset(oracle.closure(np.array(sorted(A | B)), G.invariant_factors))

    semisimple = all(any(A & K == zero and join(A, K) == whole for K in subs) for A in subs)
    minimal_per_prime = {}
    for N in subs:
        if len(N) > 1 and all(len(X) in (1, len(N)) for X in subs if X <= N):
            minimal_per_prime.setdefault(len(N), []).append(N)
    return semisimple and all(len(v) == 1 for v in minimal_per_prime.values())


def test_dissimilar_semisimple_examples():
    assert is_dissimilar_semisimple(scalar_module((30,)))
    assert not is_dissimilar_semisimple(scalar_module((2, 2)))
    assert not is_dissimilar_semisimple(scalar_module((4,)))


def test_dissimilar_semisimple_matches_definition():
    # the complement search is quadratic in the number of subgroups
    for G in (G for G in groups(64) if count_subgroups(G) <= 200):
        assert is_dissimilar_semisimple(ModuleAction(ScalarRing(0), G)) == dissimilar_semisimple_oracle(G), G


def test_ideals_of_squarefree_rings_are_endo_commutative():
    for n in range(2, 101):
        if any(e > 1 for e in factorize(n).values()):
            continue
        for d in range(1, n + 1):
            if n % d == 0:
                ideal = FinAbGroup.of(n // d)
                assert is_endo_commutative(ModuleAction(ScalarRing(n), ideal)), (n, d)


# --- submodule lattices ---------------------------------------------------

def test_lattice_comparison_examples():
    assert submodule_lattice_comparison(scalar_module((12,))) == "coincide"
    assert submodule_lattice_comparison(scalar_module((2, 2))) == "r_strict"
    for G in groups(32):
        assert submodule_lattice_comparison(ModuleAction(ScalarRing(0), G)) != "incomparable"


def test_multiplication_over_end_ring():
    for n in (2, 7, 12):
        assert s_module_multiplication_check(scalar_module((n,)))
    with pytest.raises(HypothesisUnmet):
        s_module_multiplication_check(scalar_module((2, 2)))


# --- report ----------------------------------------------------------------

def test_classifier_report_z2z2():
    r = classify(scalar_module((2, 2)))
    assert not r.multiplication and r.self_generator and not r.d_module
    assert r.endo_extendable and r.quasi_injective
    assert not r.faithful and not r.generator and r.torsion_subset_size == 4


def test_classifier_requires_scalar_ring():
    a = regular_module(scalar_ring_as_finring(4))
    with pytest.raises(NonScalarRing):
        classify(a)
    assert end_ring(a).order == 4
