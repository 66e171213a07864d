"""The center C(M), commutator kernels and images, and endo-commutativity."""
from dataclasses import dataclass

import numpy as np

from .abelian import AbHom, Subgroup, socle_and_essential
from .errors import EquivalenceViolation, HypothesisUnmet
from .lattice import ModLattice, solve_homogeneous
from .modules import (DEFAULT_BOUNDS, HomSet, _dtype, compose_arrays, end_of_set, end_ring,
                      restrict_action, restrict_homs, stack_homs)
from .rings import ring_center, ring_is_commutative


def _commutators(homs, G):
    """Array of ``[h_i, h_j]`` for ``i < j``, zero commutators dropped."""
    if len(homs) < 2 or G.rank == 0:
        return np.zeros((0, G.rank, G.rank), dtype=np.int64)
    A = stack_homs(homs, G, G, _dtype(G))
    e = G.invariant_factors
    AB = compose_arrays(A[:, None], A[None, :], e)
    iu, ju = np.triu_indices(len(homs), 1)
    m = np.array(e, dtype=A.dtype).reshape(-1, 1)
    C = (AB[iu, ju] - AB[ju, iu]) % m
    return C[C.reshape(len(C), -1).any(axis=1)]


def commutator_kernel(homs, G):
    """Common kernel of all pairwise commutators of ``homs``."""
    C = _commutators(homs, G)
    if len(C) == 0:
        return Subgroup.whole(G)
    k = G.rank
    coeffs = np.transpose(C, (2, 0, 1)).reshape(k, -1)
    cond = list(G.invariant_factors) * len(C)
    return Subgroup(G, lattice=solve_homogeneous(coeffs, cond, G.invariant_factors))


def commutator_span_of_images(homs, G):
    """Subgroup generated by the images of all pairwise commutators of ``homs``."""
    C = _commutators(homs, G)
    if len(C) == 0:
        return Subgroup.trivial(G)
    cols = np.transpose(C, (0, 2, 1)).reshape(-1, G.rank)
    cols = np.unique(cols[cols.any(axis=1)], axis=0)
    return Subgroup(G, lattice=ModLattice.from_generators(G.invariant_factors, cols))


def center_of_module(a, bounds=DEFAULT_BOUNDS, S=None):
    """``C(M)``: points where every two endomorphisms commute.

    Uses pairs from a generating set of ``End_R(M)``; the commutator is additive
    in each argument so this is the same as quantifying over all pairs.
    """
    S = S or end_ring(a, bounds)
    return commutator_kernel(S.rep, a.carrier)


def commutator_image(a, bounds=DEFAULT_BOUNDS, S=None):
    S = S or end_ring(a, bounds)
    return commutator_span_of_images(S.generators, a.carrier)


def is_endo_commutative(a, bounds=DEFAULT_BOUNDS, S=None):
    S = S or end_ring(a, bounds)
    return S.is_commutative()


def is_fully_invariant(N, a, bounds=DEFAULT_BOUNDS, S=None):
    S = S or end_ring(a, bounds)
    return all(N.contains(s(x)) for s in S.generators for x in N.generators)


def ring_center_in_end(S, ring=None):
    """The center of ``S`` (computed from its structure constants) as a set of endomorphisms."""
    ring = ring or S.ring
    Z = ring_center(ring)
    M = S.carrier
    return HomSet.span(M, M, [S.element_hom(z) for z in Z.canonical_generators] + [AbHom.zero(M, M)])


@dataclass(frozen=True)
class CenterReport:
    center: Subgroup
    commutator_kernel: Subgroup
    commutator_image: Subgroup
    endo_commutative: bool
    S_order: int
    T_order: int
    S_subset_T: bool
    center_of_S_is_S: bool
    center_of_S_is_S_cap_T: bool

    @property
    def predicates(self):
        M = self.center.ambient
        return {
            "S commutative": self.endo_commutative,
            "C(M) = M": self.center.is_whole(),
            "C(S) = S": self.center_of_S_is_S,
            "Ker{S,S} = M": self.commutator_kernel.is_whole(),
            "Im{S,S} = 0": self.commutator_image.is_trivial(),
            "S in T": self.S_subset_T,
        } if M is not None else {}

    def consistent(self):
        return (len(set(self.predicates.values())) == 1
                and self.center == self.commutator_kernel
                and self.center_of_S_is_S_cap_T)


def main_theorem_report(a, bounds=DEFAULT_BOUNDS, S=None, T=None, ring=None, check=True):
    """Every characterisation of endo-commutativity, each computed on its own.

    ``ring`` overrides the structure constants used for the ring-side
    predicates (the verification harness feeds corrupted tables through it).
    Raises :class:`EquivalenceViolation` when ``check`` is set and the
    predicates disagree.
    """
    S = S or end_ring(a, bounds)
    T = T or end_of_set(a.carrier, S.homset, bounds)
    ring = ring or S.ring
    M = a.carrier
    center = commutator_kernel(S.rep, M)
    ker = commutator_kernel(S.generators, M)
    img = commutator_span_of_images(S.generators, M)
    cs = ring_center_in_end(S, ring)
    report = CenterReport(
        center=center,
        commutator_kernel=ker,
        commutator_image=img,
        endo_commutative=ring_is_commutative(ring),
        S_order=S.order,
        T_order=T.order,
        S_subset_T=S.issubset(T),
        center_of_S_is_S=cs.order == S.order,
        center_of_S_is_S_cap_T=cs == (S.homset & T.homset),
    )
    if check and not report.consistent():
        raise EquivalenceViolation(f"characterisations disagree on {a}: {report.predicates}")
    return report


def center_of_fully_invariant_submodule_check(N, a, bounds=DEFAULT_BOUNDS, S=None, details=False):
    """For fully invariant ``N``: ``End_R(N)`` equals ``S`` restricted to ``N``, and ``C(N) = N & C(M)``."""
    S = S or end_ring(a, bounds)
    if not is_fully_invariant(N, a, bounds, S):
        raise HypothesisUnmet("submodule is not fully invariant")
    B = N.basis_group
    sub = restrict_action(a, N)
    end_n = end_ring(sub, bounds)
    restricted = HomSet.span(B, B, restrict_homs(S.generators, N) + [AbHom.zero(B, B)])
    same_end = end_n.homset == restricted
    cn = center_of_module(sub, bounds, end_n)
    cn_in_m = Subgroup(a.carrier, [N.incl(x) for x in cn.canonical_generators])
    cm = center_of_module(a, bounds, S)
    same_center = cn_in_m == N.intersect(cm, method="pullback")
    if details:
        return same_end, same_center
    return same_end and same_center


def essential_center_lemma_check(a, bounds=DEFAULT_BOUNDS, S=None):
    """``None`` when ``C(M)`` is not essential; otherwise whether the commutator image lies in T(M)."""
    from .classify import torsion_subset

    S = S or end_ring(a, bounds)
    C = center_of_module(a, bounds, S)
    _, essential = socle_and_essential(a.carrier, C)
    if not essential:
        return None
    torsion = torsion_subset(a, bounds)
    return all(x in torsion for x in commutator_image(a, bounds, S).elements())
