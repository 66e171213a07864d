"""End-to-end acceptance checks.  Each test prints one ``criterion N: PASS|FAIL`` line."""
import io
import itertools
import os
import re
import time
from math import prod

import numpy as np
import pytest

import oracle
from endocomm.abelian import (
    AbHom, FinAbGroup, abelian_groups_up_to, enumerate_invariant_subgroups, enumerate_subgroups,
)
from endocomm.center import (
    center_of_fully_invariant_submodule_check, center_of_module, commutator_image, is_endo_commutative,
    is_fully_invariant, main_theorem_report,
)
from endocomm.classify import (
    is_comultiplication, is_dissimilar_semisimple, is_endo_extendable, is_generator, is_multiplication,
    is_quasi_injective, submodule_lattice_comparison,
)
from endocomm.cli import main
from endocomm.modules import (
    Bounds, ModuleAction, annihilator_and_faithful, biend, direct_sum_action, end_of_direct_sum_check, end_ring, hom_set,
    is_balanced, scalar_module,
)
from endocomm.rings import ScalarRing
from endocomm.theorems import SUM_SUITES, Context
from endocomm.tower import ecdim, endo_tower, tower_classification


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return emit


def over_z(G):
    return ModuleAction(ScalarRing(0), G)


def over_exp(G):
    return ModuleAction(ScalarRing(G.exponent), G)


# --- 1 --------------------------------------------------------------------------

def test_c1_z2z2_worked_example(report):
    start = time.perf_counter()
    a = scalar_module((2, 2))
    M = a.carrier
    f = AbHom.from_images(M, M, [(1, 0), (0, 0)])
    g = AbHom.from_images(M, M, [(0, 1), (1, 0)])
    fg, gf = f.compose(g), g.compose(f)
    got = {
        "fg(1,0)": fg((1, 0)), "gf(1,0)": gf((1, 0)),
        "fg(0,1)": fg((0, 1)), "gf(0,1)": gf((0, 1)),
        "fg(1,1)": fg((1, 1)), "gf(1,1)": gf((1, 1)),
    }
    expected = {
        "fg(1,0)": (0, 0), "gf(1,0)": (0, 1),
        "fg(0,1)": (1, 0), "gf(0,1)": (0, 0),
        "fg(1,1)": (1, 0), "gf(1,1)": (0, 0),
    }
    center_zero = center_of_module(a).is_trivial()
    elapsed = time.perf_counter() - start
    mismatched = sorted(k for k in expected if repr(got[k]) != repr(expected[k]))
    ok = not mismatched and center_zero and elapsed < 1.0
    report(1, ok, f"mismatched={[(k, got[k], expected[k]) for k in mismatched]} C(M)=0:{center_zero} "
                  f"{elapsed:.3f}s")
    assert center_zero and elapsed < 1.0
    assert not mismatched, f"computed values differ from the reference table: {mismatched}"


def test_c1_composition_is_evaluated_right_to_left():
    # the mathematically forced value of gf(1,1) = g(f(1,1)) = g(1,0)
    M = FinAbGroup.of(2, 2)
    f = AbHom.from_images(M, M, [(1, 0), (0, 0)])
    g = AbHom.from_images(M, M, [(0, 1), (1, 0)])
    assert g.compose(f)((1, 1)) == g(f((1, 1))) == (0, 1)


# --- 2 --------------------------------------------------------------------------

# Every group with |End| <= 2^16 is about 71k groups, mostly large cyclic ones;
# brute force over all of them takes many minutes on one core.  By default the
# corpus stops at order 2048.  ENDOCOMM_FULL_ORACLE=1 runs it all.
FULL_ORACLE = os.environ.get("ENDOCOMM_FULL_ORACLE") == "1"
ORACLE_MAX_ORDER = 65535 if FULL_ORACLE else 2048
ORACLE_MAX_END = 2 ** 16


def oracle_corpus():
    for G in abelian_groups_up_to(ORACLE_MAX_ORDER):
        if oracle.hom_count(G.invariant_factors, G.invariant_factors) <= ORACLE_MAX_END:
            yield G


def flat_codes(homs, o):
    return oracle.encode(np.array([h.entries for h in homs], dtype=np.int64).reshape(len(homs), -1), o.entry_mods)


def point_codes(sub, o):
    if not o.k:
        return np.zeros(len(sub.canonical_generators), dtype=np.int64)
    pts = np.array(sub.canonical_generators, dtype=np.int64).reshape(-1, o.k)
    return oracle.encode(pts, o.mods)


def compare_with_oracle(a, o, center_mask, image_codes, commutant_codes):
    bad = []
    S = end_ring(a, Bounds(carrier=ORACLE_MAX_ORDER))
    if S.order != o.order or not o.contains_maps([h.entries for h in S.generators]):
        bad.append("end_ring")
    C = center_of_module(a, S=S)
    if C.order != int(center_mask.sum()) or (C.canonical_generators and not center_mask[point_codes(C, o)].all()):
        bad.append("center")
    img = commutator_image(a, S=S)
    if img.order != len(image_codes) or not np.isin(point_codes(img, o), image_codes).all():
        bad.append("commutator_image")
    T = biend(a, Bounds(carrier=ORACLE_MAX_ORDER))
    if T.order != len(commutant_codes) or (T.generators and not np.isin(flat_codes(T.generators, o),
                                                                         commutant_codes).all()):
        bad.append("biend")
    return bad


def test_c2_oracle_equivalence(report):
    start = time.perf_counter()
    discrepancies, groups, runs = [], 0, 0
    for G in oracle_corpus():
        groups += 1
        if G.rank == 0:
            # End of the zero group is the zero ring: only one representative ring makes sense
            actions = [over_z(G)]
        else:
            actions = [over_z(G), over_exp(G)]
        o = oracle.EndomorphismOracle(G.invariant_factors)
        mask, image, commutant = o.center_mask(), o.commutator_image_codes(), o.commutant_codes()
        for a in actions:
            runs += 1
            for what in compare_with_oracle(a, o, mask, image, commutant):
                discrepancies.append((G.invariant_factors, a.ring, what))
    elapsed = time.perf_counter() - start
    ok = not discrepancies and elapsed < 120
    report(2, ok, f"groups={groups} runs={runs} scope=|M|<={ORACLE_MAX_ORDER},|End|<={ORACLE_MAX_END} "
                  f"discrepancies={len(discrepancies)} {elapsed:.1f}s")
    assert not discrepancies, discrepancies[:10]
    assert elapsed < 120


# --- 3 --------------------------------------------------------------------------

def test_c3_six_way_and_center_lemma(report):
    start = time.perf_counter()
    violations = []
    groups = list(abelian_groups_up_to(64))
    for G in groups:
        a = over_z(G)
        r = main_theorem_report(a, check=False)
        if len(set(r.predicates.values())) != 1:
            violations.append((G.invariant_factors, "six-way", r.predicates))
        if r.center != r.commutator_kernel or r.center != center_of_module(a):
            violations.append((G.invariant_factors, "center is the commutator kernel"))
        if not r.center_of_S_is_S_cap_T:
            violations.append((G.invariant_factors, "C(S) = S & T"))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 120
    report(3, ok, f"groups={len(groups)} violations={len(violations)} {elapsed:.1f}s")
    assert not violations, violations[:10]
    assert elapsed < 120


# --- 4 --------------------------------------------------------------------------

SUM_BOUNDS = Bounds(carrier=4096, rank=144)


def hom_block_product(parts):
    return prod(hom_set(p, q).order for p in parts for q in parts)


def test_c4_direct_sums(report):
    start = time.perf_counter()
    small = [G for G in abelian_groups_up_to(16) if G.order > 1]
    ctxs = {G: Context(over_z(G), SUM_BOUNDS) for G in small}
    violations, instances = [], 0
    for arity in (2, 3):
        for combo in itertools.combinations_with_replacement(small, arity):
            instances += 1
            parts = [ctxs[G].action for G in combo]
            cs = [ctxs[G] for G in combo]
            key = tuple(G.invariant_factors for G in combo)
            for name, fn in SUM_SUITES.items():
                if fn(parts, cs, SUM_BOUNDS) is False:
                    violations.append((key, name))
            total = direct_sum_action(parts)
            if end_ring(total, SUM_BOUNDS).order != hom_block_product(parts):
                violations.append((key, "block product"))
            if not end_of_direct_sum_check(parts, SUM_BOUNDS):
                violations.append((key, "block decomposition"))
    elapsed = time.perf_counter() - start
    report(4, not violations, f"instances={instances} violations={len(violations)} {elapsed:.1f}s")
    assert not violations, violations[:10]


# --- 5 --------------------------------------------------------------------------

def test_c5_classifier_implications(report):
    start = time.perf_counter()
    violations = []
    groups = list(abelian_groups_up_to(64))
    for G in groups:
        a = over_z(G)
        S = end_ring(a)
        subs = list(enumerate_subgroups(G))
        comm = is_endo_commutative(a, S=S)
        mult = is_multiplication(a, subs=subs)
        key = G.invariant_factors
        if mult and not comm:
            violations.append((key, "multiplication"))
        if is_comultiplication(a, subs=subs) and not comm:
            violations.append((key, "comultiplication"))
        if is_dissimilar_semisimple(a) and not comm:
            violations.append((key, "dissimilar semisimple"))
        if mult and not all(is_fully_invariant(N, a, S=S) for N in subs):
            violations.append((key, "multiplication: full invariance"))
        lattices = submodule_lattice_comparison(a, S=S, subs=subs)
        if mult and lattices != "coincide":
            violations.append((key, "multiplication: lattices"))
        if lattices == "incomparable":
            violations.append((key, "S-submodules are R-submodules"))
        if is_quasi_injective(a, S=S, subs=subs) != is_endo_extendable(a, S=S, subs=subs):
            violations.append((key, "quasi-injective iff endo-extendable"))
        if G.order > 1:
            b = over_exp(G)
            T = biend(b)
            faithful_balanced = annihilator_and_faithful(b).faithful and is_balanced(b, T)
            if is_generator(b) and not faithful_balanced:
                violations.append((key, "generator"))
            if faithful_balanced and not T.is_commutative():
                violations.append((key, "faithful balanced"))
    elapsed = time.perf_counter() - start
    report(5, not violations, f"groups={len(groups)} violations={len(violations)} {elapsed:.1f}s")
    assert not violations, violations[:10]


# --- 6 --------------------------------------------------------------------------

def test_c6_tower(report):
    start = time.perf_counter()
    violations = []
    groups = list(abelian_groups_up_to(64))
    for G in groups:
        a = over_z(G)
        t = endo_tower(a, 6, check=False)
        flags, stages = t.commutative_flags, t.stages
        key = G.invariant_factors
        for i in range(5):
            if flags[i] and not stages[i].issubset(stages[i + 1]):
                violations.append((key, "containment", i + 1))
            if flags[i] and flags[i + 1] and not all(stages[i + 1].same_set(s) for s in stages[i + 2:]):
                violations.append((key, "stability", i + 1))
        for i in range(1, 4):
            if not stages[i].same_set(stages[i + 2]):
                violations.append((key, "period two", i + 1))
        if G.is_cyclic():
            if ecdim(a, tower=t) != 1:
                violations.append((key, "ecdim of a cyclic module"))
            if str(tower_classification(a, tower=t)) != "strongly":
                violations.append((key, "cyclic classification"))
    if ecdim(scalar_module((2, 2))) != 2:
        violations.append(((2, 2), "ecdim"))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 300
    report(6, ok, f"groups={len(groups)} depth=6 violations={len(violations)} {elapsed:.1f}s")
    assert not violations, violations[:10]
    assert elapsed < 300


# --- 7 --------------------------------------------------------------------------

def test_c7_extendable_center_formula(report):
    start = time.perf_counter()
    violations, modules, submods = [], 0, 0
    for G in abelian_groups_up_to(256):
        a = over_z(G)
        S = end_ring(a)
        if not is_endo_extendable(a, S=S):
            continue
        modules += 1
        for N in enumerate_invariant_subgroups(G, S.generators):
            submods += 1
            same_end, same_center = center_of_fully_invariant_submodule_check(N, a, S=S, details=True)
            if not same_end:
                violations.append((G.invariant_factors, "End(N) = S|N"))
            if not same_center:
                violations.append((G.invariant_factors, "C(N) = N & C(M)"))
    elapsed = time.perf_counter() - start
    report(7, not violations, f"modules={modules} submodules={submods} violations={len(violations)} {elapsed:.1f}s")
    assert not violations, violations[:10]


# --- 8 --------------------------------------------------------------------------

LINE = re.compile(r"^(PASS|FAIL) (\S+)\s.*violations=(\d+)")


def test_c8_verify_command(report):
    out = io.StringIO()
    code = main(["verify", "--max-order", "32"], out)
    suites = {}
    for line in out.getvalue().splitlines():
        m = LINE.match(line)
        if m:
            suites[m.group(2)] = (m.group(1), int(m.group(3)))
    clean = all(status == "PASS" and v == 0 for status, v in suites.values())
    mutant = main(["verify", "--max-order", "8", "--mutant"], io.StringIO())
    ok = code == 0 and len(suites) >= 17 and clean and mutant == 3
    report(8, ok, f"exit={code} suites={len(suites)} clean={clean} mutant_exit={mutant}")
    assert code == 0 and clean
    assert len(suites) >= 17
    assert mutant == 3
