"""Decidable module properties: multiplication, comultiplication, distributivity,
self-generation, generators, extendability and friends."""
from dataclasses import dataclass, fields
from itertools import combinations

import numpy as np

from .abelian import (AbHom, FinAbGroup, Subgroup, count_subgroups, enumerate_invariant_subgroups,
                      enumerate_subgroups, factorize, primary_components, quotient_map)
from .errors import BoundExceeded, HypothesisUnmet, NonScalarRing
from .lattice import ModLattice, solve_homogeneous
from .modules import (DEFAULT_BOUNDS, HomSet, ModuleAction, _dtype, _entry_moduli,
                      annihilator_and_faithful, commutant, end_of_set, end_ring, intertwiners,
                      is_balanced, restrict_arrays, restrict_homs, stack_homs)


def _require_scalar(a, allow_integers=True):
    if not a.is_scalar:
        raise NonScalarRing(f"defined only over Z or Z/n, got {a.ring}")
    if not allow_integers and a.ring.modulus == 0:
        raise NonScalarRing("defined only over Z/n with n >= 2")


def submodules(a, bounds=DEFAULT_BOUNDS):
    """All R-submodules of the carrier in the deterministic subgroup order."""
    if a.is_scalar:
        return enumerate_subgroups(a.carrier, bounds.subgroups)
    return enumerate_invariant_subgroups(a.carrier, a.rep, bounds.subgroups)


def scaled_subgroup(M, r):
    """``rM``."""
    return Subgroup(M, [M.scale(r, M.generator(i)) for i in range(M.rank)])


def torsion_part(M, d):
    """``M[d] = {m : d m = 0}``."""
    gens = []
    for i, c in enumerate(M.invariant_factors):
        x = [0] * M.rank
        x[i] = c // np.gcd(c, d)
        gens.append(x)
    return Subgroup(M, gens)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def conductor(N, M):
    """Least ``r > 0`` with ``rM`` inside ``N``; ``(N : M)`` is generated by it."""
    for r in _divisors(M.exponent):
        if scaled_subgroup(M, r).issubset(N):
            return r
    raise AssertionError("exp(M) M = 0 lies in every subgroup")


def exponent_of(N):
    e = 1
    for x in N.canonical_generators:
        e = np.lcm(e, N.ambient.element_order(x))
    return int(e)


def is_multiplication(a, bounds=DEFAULT_BOUNDS, subs=None):
    """Every submodule is ``(N : M) M``."""
    _require_scalar(a)
    M = a.carrier
    subs = subs if subs is not None else submodules(a, bounds)
    return all(scaled_subgroup(M, conductor(N, M)) == N for N in subs)


def is_comultiplication(a, bounds=DEFAULT_BOUNDS, subs=None):
    """Every submodule is the annihilator in ``M`` of its own annihilator ideal."""
    _require_scalar(a)
    M = a.carrier
    subs = subs if subs is not None else submodules(a, bounds)
    return all(torsion_part(M, exponent_of(N)) == N for N in subs)


def is_d_module(a, bounds=DEFAULT_BOUNDS, subs=None):
    """Distributive submodule lattice, checked on all triples (stops at the first failure)."""
    subs = subs if subs is not None else submodules(a, bounds)
    inner = [N for N in subs if not N.is_trivial() and not N.is_whole()]
    for B, C in combinations(inner, 2):
        if B.issubset(C) or C.issubset(B):
            continue
        BC = B + C
        for A in inner:
            # the law is trivial when A is comparable with B or C
            if A.issubset(B) or A.issubset(C) or BC.issubset(A):
                continue
            if A.intersect(BC) != A.intersect(B) + A.intersect(C):
                return False
    return True


def _maps_into(S_basis, S_moduli, M, N):
    """Coordinates (in ``S_basis``) of the endomorphisms with image inside ``N``."""
    Q, q = quotient_map(M, N)
    if Q.rank == 0:
        return None
    dt = _dtype(M, Q)
    Sa = stack_homs(S_basis, M, M, dt)
    qa = np.array(q.matrix, dtype=dt).reshape(Q.rank, M.rank)
    QS = np.matmul(qa, Sa) % np.array(Q.invariant_factors, dtype=dt).reshape(-1, 1)
    coeffs = QS.reshape(len(S_basis), -1)
    return solve_homogeneous(coeffs, _entry_moduli(M, Q), S_moduli)


def sum_of_images(S, coords_lattice, M):
    """``sum f(M)`` over the endomorphisms with the given coordinates in ``S``."""
    if coords_lattice is None:
        return Subgroup.whole(M)
    if not coords_lattice.generators:
        return Subgroup.trivial(M)
    F = S.arrays_from_coords(coords_lattice.generators)
    cols = np.transpose(F, (0, 2, 1)).reshape(-1, M.rank)
    return Subgroup(M, lattice=ModLattice.from_generators(M.invariant_factors, cols))


def trace_of(S, M, N):
    """``I_N M`` where ``I_N`` is the set of endomorphisms in ``S`` with image inside ``N``."""
    return sum_of_images(S, _maps_into(S.rep, S.additive.invariant_factors, M, N), M)


def is_self_generator(a, bounds=DEFAULT_BOUNDS, S=None, subs=None):
    S = S or end_ring(a, bounds)
    M = a.carrier
    subs = subs if subs is not None else submodules(a, bounds)
    return all(trace_of(S, M, N) == N for N in subs)


def torsion_subset(a, bounds=DEFAULT_BOUNDS):
    """Elements with nonzero annihilator."""
    M = a.carrier
    if M.order > bounds.carrier:
        raise BoundExceeded("carrier order", M.order, bounds.carrier)
    if a.is_scalar:
        n = a.ring.modulus
        if n == 0:
            return frozenset(M.elements())
        return frozenset(x for x in M.elements() if M.element_order(x) != n)
    R = a.ring
    out = set()
    for x in M.elements():
        # r -> x r is additive in r; its kernel is ann(x)
        imgs = [op(x) for op in a.rep]
        coeffs = [list(y) for y in imgs]
        ker = solve_homogeneous(coeffs, M.invariant_factors, R.additive.invariant_factors) if M.rank else None
        if ker is None or not ker.is_zero():
            out.add(x)
    return frozenset(out)


def trace_ideal_and_generator(a):
    """Trace ideal of ``M`` in ``Z/n`` as a subgroup, and whether it is all of ``Z/n``."""
    _require_scalar(a, allow_integers=False)
    n = a.ring.modulus
    R = FinAbGroup.of(n)
    H = HomSet.full(a.carrier, R)
    cols = [tuple(row[j] for row in f.matrix) for f in H.generators for j in range(a.carrier.rank)]
    trace = Subgroup(R, cols)
    return trace, trace.is_whole()


def is_generator(a):
    """Over ``Z`` a finite module is never a generator."""
    _require_scalar(a)
    if a.ring.modulus == 0:
        return False
    return trace_ideal_and_generator(a)[1]


# ---------------------------------------------------------------------------
# extendability


def _stabilizer_coords(S, M, X):
    """Coordinates of the endomorphisms in ``S`` mapping ``X`` into itself."""
    Q, q = quotient_map(M, X)
    if Q.rank == 0:
        return None
    dt = _dtype(M, Q)
    Sa = stack_homs(S.rep, M, M, dt)
    qa = np.array(q.matrix, dtype=dt).reshape(Q.rank, M.rank)
    ia = np.array(X.incl.matrix, dtype=dt).reshape(M.rank, X.basis_group.rank)
    QSI = np.matmul(np.matmul(qa, Sa) % np.array(Q.invariant_factors, dtype=dt).reshape(-1, 1), ia)
    QSI %= np.array(Q.invariant_factors, dtype=dt).reshape(-1, 1)
    return solve_homogeneous(QSI.reshape(len(S.rep), -1), _entry_moduli(X.basis_group, Q), S.additive.invariant_factors)


def _extends(a, S, X, kind):
    M = a.carrier
    B = X.basis_group
    if B.rank == 0 or X.is_whole():
        return True
    ops_x = [] if a.is_scalar else restrict_homs(a.rep, X)
    if kind == "hom":
        target = intertwiners(B, M, ops_x, list(a.rep))
        got = HomSet.span(B, M, [s.compose(X.incl) for s in S.generators] + [AbHom.zero(B, M)])
    else:
        target = commutant(B, ops_x)
        stab = _stabilizer_coords(S, M, X)
        if stab is None:
            arr = stack_homs(S.generators, M, M, _dtype(M))
        elif stab.generators:
            arr = S.arrays_from_coords(stab.generators)
        else:
            arr = np.zeros((1, M.rank, M.rank), dtype=_dtype(M))
        got = HomSet.from_arrays(B, B, restrict_arrays(arr, X))
    return got == target


def _homogeneous(G):
    return len(set(G.invariant_factors)) <= 1


def _extendable(a, bounds, kind, S=None, subs=None):
    M = a.carrier
    if M.order > bounds.extendable:
        raise BoundExceeded("carrier order", M.order, bounds.extendable)
    if a.is_scalar and subs is None:
        comps = primary_components(M)
        if len(comps) > 1:
            # End(M) and the subgroup lattice both split over the primes
            return all(_extendable(ModuleAction(a.ring, G), bounds, kind) for G in comps.values())
        if count_subgroups(M) > bounds.extendable_subgroups:
            return _homogeneous(M)
    S = S or end_ring(a, bounds)
    subs = subs if subs is not None else submodules(a, bounds)
    return all(_extends(a, S, X, kind) for X in subs)


def is_endo_extendable(a, bounds=DEFAULT_BOUNDS, S=None, subs=None):
    """Every endomorphism of every submodule extends to an endomorphism of ``M``."""
    return _extendable(a, bounds, "end", S, subs)


def is_quasi_injective(a, bounds=DEFAULT_BOUNDS, S=None, subs=None):
    """Every map from a submodule into ``M`` extends to an endomorphism of ``M``."""
    return _extendable(a, bounds, "hom", S, subs)


def is_dissimilar_semisimple(a):
    """Direct sum of pairwise non-isomorphic simple modules: cyclic of squarefree order."""
    _require_scalar(a)
    M = a.carrier
    return M.rank <= 1 and all(e == 1 for e in factorize(M.order).values())


def submodule_lattice_comparison(a, bounds=DEFAULT_BOUNDS, S=None, subs=None):
    """Compare R-submodules with S-submodules: ``coincide``, ``r_strict`` or ``incomparable``."""
    S = S or end_ring(a, bounds)
    r_subs = set(subs if subs is not None else submodules(a, bounds))
    s_subs = set(enumerate_invariant_subgroups(a.carrier, S.generators, bounds.subgroups))
    if s_subs == r_subs:
        return "coincide"
    if s_subs <= r_subs:
        return "r_strict"
    return "incomparable"


def s_module_multiplication_check(a, bounds=DEFAULT_BOUNDS, S=None, subs=None):
    """Every S-submodule ``X`` satisfies ``I_X M = X``."""
    S = S or end_ring(a, bounds)
    subs = subs if subs is not None else submodules(a, bounds)
    if not (is_self_generator(a, bounds, S, subs) and is_multiplication(a, bounds, subs)):
        raise HypothesisUnmet("requires a self-generator multiplication module")
    M = a.carrier
    s_subs = enumerate_invariant_subgroups(M, S.generators, bounds.subgroups)
    return all(trace_of(S, M, X) == X for X in s_subs)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ClassifierReport:
    multiplication: bool
    comultiplication: bool
    d_module: bool
    self_generator: bool
    dissimilar_semisimple: bool
    endo_extendable: object
    quasi_injective: object
    generator: bool
    faithful: bool
    balanced: bool
    torsion_subset_size: int

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def classify(a, bounds=DEFAULT_BOUNDS, S=None, T=None, subs=None):
    """All predicates for a scalar-ring module.

    Extendability is reported as ``None`` when the carrier is above the
    extendability bound.
    """
    _require_scalar(a)
    S = S or end_ring(a, bounds)
    T = T or end_of_set(a.carrier, S.homset, bounds)
    subs = subs if subs is not None else submodules(a, bounds)
    try:
        ee = is_endo_extendable(a, bounds, S)
        qi = is_quasi_injective(a, bounds, S)
    except BoundExceeded:
        ee = qi = None
    return ClassifierReport(
        multiplication=is_multiplication(a, bounds, subs),
        comultiplication=is_comultiplication(a, bounds, subs),
        d_module=is_d_module(a, bounds, subs),
        self_generator=is_self_generator(a, bounds, S, subs),
        dissimilar_semisimple=is_dissimilar_semisimple(a),
        endo_extendable=ee,
        quasi_injective=qi,
        generator=is_generator(a),
        faithful=annihilator_and_faithful(a).faithful,
        balanced=is_balanced(a, T),
        torsion_subset_size=len(torsion_subset(a, bounds)),
    )
