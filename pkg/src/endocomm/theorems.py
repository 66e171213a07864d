"""Theorem-verification harness.

Each suite checks one structural fact on every instance of a corpus and
reports how many instances were checked, how many were vacuous (hypotheses
not met) and every violation with a serialized counterexample.
"""
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

from .abelian import Subgroup, abelian_groups_up_to, enumerate_invariant_subgroups
from .center import (center_of_fully_invariant_submodule_check, commutator_kernel,
                     essential_center_lemma_check, is_fully_invariant, main_theorem_report, ring_center_in_end)
from .classify import (annihilator_and_faithful, is_comultiplication, is_dissimilar_semisimple, is_endo_extendable,
                       is_generator, is_multiplication, is_quasi_injective, is_self_generator,
                       s_module_multiplication_check, submodule_lattice_comparison, submodules)
from .errors import BoundExceeded, EndocommError
from .modules import (DEFAULT_BOUNDS, ModuleAction, direct_sum_data, end_of_direct_sum_check, end_ring,
                      hom_set, is_balanced)
from .rings import FinRing, ScalarRing, ring_is_commutative, ring_validate
from .tower import INFINITY, ecdim, endo_tower

DEFAULT_DEPTH = 6


class Context:
    """Lazily computed data for one module, shared by all suites."""

    def __init__(self, action, bounds=DEFAULT_BOUNDS, mutant=False, depth=DEFAULT_DEPTH, seed=0):
        self.action = action
        self.bounds = bounds
        self.mutant = mutant
        self.depth = depth
        self.seed = seed

    @property
    def M(self):
        return self.action.carrier

    @cached_property
    def tower(self):
        return endo_tower(self.action, self.depth, self.bounds, check=False)

    @cached_property
    def S(self):
        return self.tower.stages[0]

    @cached_property
    def T(self):
        return self.tower.stages[1]

    @cached_property
    def S_ring(self):
        R = self.S.ring
        if not self.mutant or R.rank == 0:
            return R
        return corrupt(R)

    @cached_property
    def subs(self):
        return submodules(self.action, self.bounds)

    @cached_property
    def report(self):
        return main_theorem_report(self.action, self.bounds, self.S, self.T, self.S_ring, check=False)

    @cached_property
    def center(self):
        return self.report.center

    @cached_property
    def commutative(self):
        return ring_is_commutative(self.S_ring)

    @cached_property
    def multiplication(self):
        return is_multiplication(self.action, self.bounds, self.subs)

    @cached_property
    def self_generator(self):
        return is_self_generator(self.action, self.bounds, self.S, self.subs)

    @cached_property
    def endo_extendable(self):
        return is_endo_extendable(self.action, self.bounds, self.S)


def corrupt(R):
    """Copy of ``R`` with one structure constant changed (harness self-test)."""
    table = [list(row) for row in R.mult_table]
    i, j = (0, 1) if R.rank > 1 else (0, 0)
    x = list(table[i][j])
    x[-1] += 1
    table[i][j] = R.additive.reduce(x)
    return FinRing(R.additive, tuple(tuple(r) for r in table), R.one)


# ---------------------------------------------------------------------------
# per-module suites: each returns True (holds), False (violated) or None (vacuous)


def _ring_axioms(c):
    return ring_validate(c.S_ring).ok and ring_validate(c.T.ring).ok


def _end_is_commutant(c):
    ops = c.action.operators
    if any(s.compose(op).matrix != op.compose(s).matrix for s in c.S.generators for op in ops):
        return False
    # the structure constants must reproduce composition of basis maps
    R = c.S_ring
    rep = c.S.rep
    for i in range(R.rank):
        for j in range(R.rank):
            if c.S.element_hom(R.mult_table[i][j]).matrix != rep[j].compose(rep[i]).matrix:
                return False
    return R.order == c.S.order


def _center_fully_invariant(c):
    return is_fully_invariant(c.center, c.action, c.bounds, c.S)


def _center_is_commutator_kernel(c):
    M = c.M
    if c.report.center != c.report.commutator_kernel:
        return False
    if c.S.order <= 256:
        # definitional check over every pair of endomorphisms
        homs = list(c.S.homset.elements())
        pts = [x for x in M.elements() if all(f(g(x)) == g(f(x)) for f in homs for g in homs)]
        return Subgroup(M, pts) == c.center and len(pts) == c.center.order
    return True


def _center_random_pairs(c):
    """Sampled endomorphism pairs commute on C(M); a seeded spot check of the definition."""
    rng = random.Random(f"{c.seed}:{c.M.invariant_factors}")
    factors = c.S.additive.invariant_factors
    gens = c.center.canonical_generators
    for _ in range(8):
        f = c.S.element_hom([rng.randrange(d) for d in factors])
        g = c.S.element_hom([rng.randrange(d) for d in factors])
        if any(f(g(x)) != g(f(x)) for x in gens):
            return False
    return True


def _center_of_ring_is_intersection(c):
    return ring_center_in_end(c.S, c.S_ring) == (c.S.homset & c.T.homset)


def _six_way(c):
    return c.report.consistent()


def _end_equals_biend(c):
    if not c.action.is_scalar:
        return None
    return c.S.same_set(c.T) == c.commutative


def _biend_inside_end(c):
    if not c.action.is_scalar:
        return None
    return c.T.issubset(c.S)


def _dissimilar(c):
    if not c.action.is_scalar or not is_dissimilar_semisimple(c.action):
        return None
    return c.commutative


def _multiplication_commutative(c):
    if not c.action.is_scalar:
        return None
    checked = False
    if c.multiplication:
        checked = True
        if not c.commutative:
            return False
        if not all(is_fully_invariant(N, c.action, c.bounds, c.S) for N in c.subs):
            return False
    if is_comultiplication(c.action, c.bounds, c.subs):
        checked = True
        if not c.commutative:
            return False
    return True if checked else None


def _extendable_center(c):
    if not c.action.is_scalar or c.M.order > c.bounds.extendable:
        return None
    if not c.endo_extendable:
        return None
    fi = enumerate_invariant_subgroups(c.M, c.S.generators, c.bounds.subgroups)
    return all(center_of_fully_invariant_submodule_check(N, c.action, c.bounds, c.S) for N in fi)


def _extendable_equivalence(c):
    if not c.action.is_scalar or c.M.order > c.bounds.extendable:
        return None
    return is_quasi_injective(c.action, c.bounds, c.S) == c.endo_extendable


def _essential(c):
    return essential_center_lemma_check(c.action, c.bounds, c.S)


def _balanced_faithful(c):
    a = c.action
    if not a.is_scalar:
        return None
    checked = False
    if a.ring.modulus and is_generator(a):
        checked = True
        if not (annihilator_and_faithful(a).faithful and is_balanced(a, c.T)):
            return False
    if annihilator_and_faithful(a).faithful and is_balanced(a, c.T):
        checked = True
        if not c.T.is_commutative():
            return False
    return True if checked else None


def _srsub(c):
    return submodule_lattice_comparison(c.action, c.bounds, c.S, c.subs) != "incomparable"


def _maj(c):
    if not c.action.is_scalar or not c.multiplication:
        return None
    return submodule_lattice_comparison(c.action, c.bounds, c.S, c.subs) == "coincide"


def _multiplication_over_s(c):
    if not c.action.is_scalar or not (c.multiplication and c.self_generator):
        return None
    ok = s_module_multiplication_check(c.action, c.bounds, c.S, c.subs)
    # such modules are strongly endo-commutative
    return ok and all(c.tower.commutative_flags[:3])


def _tower_theorem(c):
    t = c.tower
    f = t.commutative_flags
    n = len(f)
    for i in range(n - 1):
        if f[i] and not t.containments[i]:
            return False
        if f[i] and f[i + 1] and not all(t.stages[i + 1].same_set(t.stages[j]) for j in range(i + 2, n)):
            return False
    return True


def _triple_commutant(c):
    t = c.tower
    return all(t.stages[i].same_set(t.stages[i + 2]) for i in range(len(t.stages) - 2))


def _ecdim(c):
    e = ecdim(c.action, c.bounds, c.tower)
    f = c.tower.commutative_flags
    if (e == 1) != c.commutative:
        return False
    if (e <= 2) != (f[0] or f[1]):
        return False
    if c.M.is_cyclic() and c.action.is_scalar and e != 1:
        return False
    return e in (1, 2, 3, INFINITY)


MODULE_SUITES = {
    "ring_axioms": _ring_axioms,
    "end_is_commutant": _end_is_commutant,
    "center_fully_invariant": _center_fully_invariant,
    "center_is_commutator_kernel": _center_is_commutator_kernel,
    "center_random_pairs": _center_random_pairs,
    "ring_center_is_end_cap_biend": _center_of_ring_is_intersection,
    "six_way_endo_commutativity": _six_way,
    "end_equals_biend_iff_commutative": _end_equals_biend,
    "biend_inside_end": _biend_inside_end,
    "dissimilar_semisimple_commutative": _dissimilar,
    "multiplication_comultiplication_commutative": _multiplication_commutative,
    "endo_extendable_center_formula": _extendable_center,
    "quasi_injective_iff_endo_extendable": _extendable_equivalence,
    "essential_center_torsion": _essential,
    "balanced_faithful_biend": _balanced_faithful,
    "s_submodules_are_r_submodules": _srsub,
    "multiplication_lattices_coincide": _maj,
    "self_generator_multiplication_over_end": _multiplication_over_s,
    "tower_containment_and_stability": _tower_theorem,
    "triple_commutant": _triple_commutant,
    "ecdim_consistency": _ecdim,
}


# ---------------------------------------------------------------------------
# direct-sum suites: each receives the parts and their contexts


def _dsum_blocks(parts, ctxs, bounds):
    return end_of_direct_sum_check(parts, bounds)


def _cross_homs_vanish(parts):
    return all(hom_set(parts[i], parts[j]).order == 1
               for i in range(len(parts)) for j in range(len(parts)) if i != j)


def _dsum_coprime(parts, ctxs, bounds):
    if not _cross_homs_vanish(parts):
        return None
    a, _, _ = direct_sum_data(parts)
    S = end_ring(a, bounds)
    prod_orders = 1
    for c in ctxs:
        prod_orders *= c.S.order
    return S.order == prod_orders


def _sum_of_centers(parts, ctxs, a, inj):
    gens = []
    for c, lam in zip(ctxs, inj):
        gens.extend(lam(x) for x in c.center.canonical_generators)
    return Subgroup(a.carrier, gens)


def _dsum_center(parts, ctxs, bounds):
    a, inj, _ = direct_sum_data(parts)
    S = end_ring(a, bounds)
    C = commutator_kernel(S.generators, a.carrier)
    total = _sum_of_centers(parts, ctxs, a, inj)
    if not C.issubset(total):
        return False
    if _cross_homs_vanish(parts):
        return C == total
    return True


def _summands_inherit(parts, ctxs, bounds):
    a, _, _ = direct_sum_data(parts)
    whole = end_ring(a, bounds).is_commutative()
    if whole and not all(c.S.is_commutative() for c in ctxs):
        return False
    if _cross_homs_vanish(parts) and all(c.S.is_commutative() for c in ctxs) and not whole:
        return False
    return True


SUM_SUITES = {
    "direct_sum_end_blocks": _dsum_blocks,
    "direct_sum_end_product": _dsum_coprime,
    "direct_sum_center": _dsum_center,
    "direct_sum_summands_inherit": _summands_inherit,
}

SUITE_NAMES = tuple(MODULE_SUITES) + tuple(SUM_SUITES)


# ---------------------------------------------------------------------------
# driver


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    vacuous: int = 0
    violations: int = 0
    counterexamples: list = field(default_factory=list)
    skipped: int = 0

    def as_dict(self):
        return {"checked": self.checked, "vacuous": self.vacuous, "violations": self.violations,
                "skipped": self.skipped, "counterexamples": self.counterexamples}


def corpus(max_order, ring, include_trivial=True):
    """Scalar modules of order at most ``max_order`` (over ``Z/n`` only those killed by ``n``)."""
    out = []
    for G in abelian_groups_up_to(max_order, include_trivial):
        if ring.modulus and ring.modulus % G.exponent:
            continue
        out.append(ModuleAction(ring, G))
    return out


def _run_module(args):
    a, bounds, mutant, depth, names, seed = args
    return run_module_suites(Context(a, bounds, mutant, depth, seed), names)


def run_module_suites(ctx, names=None):
    from .io import action_to_spec

    a = ctx.action
    names = names if names is not None else list(MODULE_SUITES)
    out = {}
    for name in names:
        try:
            res = MODULE_SUITES[name](ctx)
        except BoundExceeded:
            res = "skipped"
        except EndocommError:
            res = False
        out[name] = res
    return action_to_spec(a), out


def _run_sum(args):
    parts, bounds, mutant, depth, seed = args
    from .io import action_to_spec

    ctxs = [Context(p, bounds, mutant, depth, seed) for p in parts]
    out = {}
    for name, fn in SUM_SUITES.items():
        try:
            res = fn(parts, ctxs, bounds)
        except BoundExceeded:
            res = "skipped"
        except EndocommError:
            res = False
        out[name] = res
    return {"direct_sum": [action_to_spec(p) for p in parts]}, out


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get("ENDOCOMM_WORKERS", "1") or 1)
    return max(1, workers)


def _map(fn, tasks, workers):
    if workers == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def sum_instances(modules, max_order, arity=(2, 3)):
    """Direct sums of nontrivial corpus modules whose total order stays within ``max_order``."""
    nontrivial = [a for a in modules if not a.carrier.is_trivial()]
    out = []
    for r in arity:
        for combo in combinations_with_replacement(range(len(nontrivial)), r):
            parts = [nontrivial[i] for i in combo]
            total = 1
            for p in parts:
                total *= p.carrier.order
            if total <= max_order:
                out.append(parts)
    return out


def verify(max_order, ring=ScalarRing(0), bounds=DEFAULT_BOUNDS, depth=DEFAULT_DEPTH, mutant=False,
           workers=None, modules=None, sums=None, suites=None, seed=0):
    """Run every suite over the corpus; returns ``{suite name: SuiteResult}``."""
    modules = modules if modules is not None else corpus(max_order, ring)
    sums = sums if sums is not None else sum_instances(modules, max_order)
    names = [n for n in MODULE_SUITES if suites is None or n in suites]
    results = {n: SuiteResult(n) for n in SUITE_NAMES if suites is None or n in suites}
    w = _workers(workers)
    for spec, out in _map(_run_module, [(a, bounds, mutant, depth, names, seed) for a in modules], w):
        _record(results, spec, out)
    if suites is None or any(n in SUM_SUITES for n in suites):
        for spec, out in _map(_run_sum, [(p, bounds, mutant, depth, seed) for p in sums], w):
            _record(results, spec, {k: v for k, v in out.items() if k in results})
    return results


def _record(results, spec, out):
    for name, res in out.items():
        r = results[name]
        if res == "skipped":
            r.skipped += 1
        elif res is None:
            r.vacuous += 1
            r.checked += 1
        elif res:
            r.checked += 1
        else:
            r.checked += 1
            r.violations += 1
            r.counterexamples.append(spec)


def instance_checklist(ctx):
    """Per-module suites for one instance: ``{name: "pass" | "vacuous" | "fail" | "skipped"}``."""
    _, out = run_module_suites(ctx)
    label = {True: "pass", False: "fail", None: "vacuous", "skipped": "skipped"}
    return {k: label[v if v in (None, "skipped") else bool(v)] for k, v in out.items()}
