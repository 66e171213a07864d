"""Module actions, Hom sets and endomorphism rings as commutants in End_Z(M).

Every set of additive maps ``A -> B`` handled here is a subgroup of the entry
space of ``Hom_Z(A, B)``: matrix entry ``(i, j)`` lives in ``Z/e_i`` (the
``i``-th factor of ``B``) and is flattened to index ``i * rank(A) + j``.
"""
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod

import numpy as np

from .abelian import AbHom, FinAbGroup, Subgroup, direct_sum_group, full_hom_lattice
from .errors import BoundExceeded, CarrierMismatch, InternalInconsistency, RingMismatch
from .lattice import ModLattice, solve_homogeneous
from .rings import FinRing, ScalarRing


@dataclass(frozen=True)
class Bounds:
    """Size guards; every field can be raised from the command line."""

    carrier: int = 4096
    rank: int = 64
    subgroups: int = 4096
    extendable: int = 256
    extendable_subgroups: int = 3000


DEFAULT_BOUNDS = Bounds()


# ---------------------------------------------------------------------------
# array helpers


def _dtype(*groups):
    e = max((G.exponent for G in groups), default=1)
    k = max((G.rank for G in groups), default=1)
    return np.int64 if (k + 1) * e * e < 2**62 else object


def hom_array(h, dtype=np.int64):
    return np.array(h.matrix, dtype=dtype).reshape(h.dst.rank, h.src.rank)


def stack_homs(homs, src, dst, dtype=np.int64):
    if not homs:
        return np.zeros((0, dst.rank, src.rank), dtype=dtype)
    return np.array([h.matrix for h in homs], dtype=dtype).reshape(len(homs), dst.rank, src.rank)


def compose_arrays(A, B, moduli):
    """Batched ``A[x] o B[x]`` (broadcasting) reduced by the row moduli."""
    m = np.array(moduli, dtype=A.dtype).reshape(-1, 1)
    return np.matmul(A, B) % m


def _entry_moduli(src, dst):
    return tuple(e for e in dst.invariant_factors for _ in range(src.rank))


# ---------------------------------------------------------------------------
# sets of homomorphisms


class HomSet:
    """An additive subgroup of ``Hom_Z(src, dst)``."""

    def __init__(self, src, dst, lattice):
        self.src = src
        self.dst = dst
        self.lattice = lattice

    @classmethod
    def full(cls, src, dst):
        return cls(src, dst, full_hom_lattice(src, dst))

    @classmethod
    def from_arrays(cls, src, dst, A):
        moduli = _entry_moduli(src, dst)
        A = np.asarray(A).reshape(-1, len(moduli))
        if len(moduli) == 0:
            return cls(src, dst, ModLattice.full(()))
        return cls(src, dst, ModLattice.from_generators(moduli, A))

    @classmethod
    def span(cls, src, dst, homs):
        moduli = _entry_moduli(src, dst)
        return cls(src, dst, ModLattice.from_generators(moduli, [h.entries for h in homs]))

    @property
    def order(self):
        return self.lattice.order

    @cached_property
    def generators(self):
        """Canonical (Hermite) generating homomorphisms."""
        return [AbHom.from_entries(self.src, self.dst, v) for v in self.lattice.generators]

    @cached_property
    def basis(self):
        """One homomorphism per invariant factor of the additive group."""
        return [AbHom.from_entries(self.src, self.dst, v) for v in self.lattice.basis]

    @cached_property
    def group(self):
        return FinAbGroup(self.lattice.invariant_factors)

    def contains(self, h):
        return self.lattice.contains(h.entries)

    __contains__ = contains

    def issubset(self, other):
        return other.lattice.contains_lattice(self.lattice)

    def __le__(self, other):
        return self.issubset(other)

    def intersect(self, other):
        return HomSet(self.src, self.dst, self.lattice.intersect(other.lattice))

    def __and__(self, other):
        return self.intersect(other)

    def __add__(self, other):
        return HomSet(self.src, self.dst, self.lattice + other.lattice)

    def __eq__(self, other):
        if not isinstance(other, HomSet):
            return NotImplemented
        return (self.src, self.dst, self.lattice) == (other.src, other.dst, other.lattice)

    def __hash__(self):
        return hash((self.src, self.dst, self.lattice))

    def __repr__(self):
        return f"HomSet({self.src} -> {self.dst}, order={self.order})"

    def elements(self):
        for v in self.lattice.elements():
            yield AbHom.from_entries(self.src, self.dst, v)

    def coordinates(self, h):
        return self.lattice.coordinates(h.entries)

    def is_commutative(self):
        return pairwise_commute(self.generators, self.src)


def is_scalar_hom(h):
    if h.src != h.dst:
        return False
    G = h.src
    c = h.matrix[0][0] if G.rank else 0
    return h.matrix == AbHom.scalar(G, c).matrix


def pairwise_commute(homs, G):
    """Do all the given endomorphisms of ``G`` commute with each other?"""
    homs = [h for h in homs if not is_scalar_hom(h)]
    if len(homs) < 2:
        return True
    A = stack_homs(homs, G, G, _dtype(G))
    e = G.invariant_factors
    AB = compose_arrays(A[:, None], A[None, :], e)
    return bool((AB == np.swapaxes(AB, 0, 1)).all())


def intertwiners(src, dst, src_ops, dst_ops):
    """All ``F: src -> dst`` with ``F o src_ops[x] == dst_ops[x] o F`` for every ``x``."""
    if len(src_ops) != len(dst_ops):
        raise ValueError("operator lists differ in length")
    # a scalar commutes with everything, so drop it from commutant systems
    pairs = [(A, B) for A, B in zip(src_ops, dst_ops)
             if not (src == dst and A.matrix == B.matrix and is_scalar_hom(A))]
    if not pairs or src.rank == 0 or dst.rank == 0:
        return HomSet.full(src, dst)
    k, l = src.rank, dst.rank
    d, e = src.invariant_factors, dst.invariant_factors
    dt = _dtype(src, dst)
    u = np.array([[e[s] // gcd(e[s], d[t]) for t in range(k)] for s in range(l)], dtype=dt)
    g = [gcd(e[s], d[t]) for s in range(l) for t in range(k)]
    blocks = []
    for A, B in pairs:
        Aa = hom_array(A, dt)
        Ba = hom_array(B, dt)
        coef = np.zeros((l, k, l, k), dtype=dt)
        for s in range(l):
            coef[s, :, s, :] += u[s, :, None] * Aa
        for t in range(k):
            coef[:, t, :, t] -= Ba.T * u[:, t][:, None]
        blocks.append(coef.reshape(l * k, l * k))
    coeffs = np.concatenate(blocks, axis=1)
    cond = [e[i] for _ in pairs for i in range(l) for _j in range(k)]
    sol = solve_homogeneous(coeffs, cond, g)
    uf = u.reshape(-1)
    moduli = _entry_moduli(src, dst)
    gens = [tuple(int(a) * int(b) for a, b in zip(v, uf)) for v in sol.generators]
    return HomSet(src, dst, ModLattice.from_generators(moduli, gens))


def commutant(G, ops):
    """Additive endomorphisms of ``G`` commuting with every map in ``ops``."""
    return intertwiners(G, G, list(ops), list(ops))


# ---------------------------------------------------------------------------
# module actions


@dataclass(frozen=True)
class ModuleAction:
    """A ring acting on ``carrier``.

    For a :class:`ScalarRing` the action is multiplication by residues and
    ``rep`` is empty.  For a :class:`FinRing`, ``rep[i]`` is the action of the
    ``i``-th additive generator, and the action is on the right: ``r`` then
    ``s`` equals ``r * s``, so ``rep(g_i * g_j) = rep[j] o rep[i]``.
    """

    ring: object
    carrier: FinAbGroup
    rep: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rep", tuple(self.rep))

    @property
    def is_scalar(self):
        return isinstance(self.ring, ScalarRing)

    @property
    def operators(self):
        """Endomorphisms whose commutant is ``End_R(M)``."""
        return list(self.rep)

    def act(self, r):
        """The endomorphism by which ring element ``r`` acts."""
        if self.is_scalar:
            return AbHom.scalar(self.carrier, r if isinstance(r, int) else r[0])
        h = AbHom.zero(self.carrier, self.carrier)
        for c, op in zip(r, self.rep):
            if c:
                h = h + op.scaled(c)
        return h

    def __str__(self):
        return self.label or f"{self.carrier} over {self.ring}"


def scalar_module(factors, modulus=0, label=""):
    return ModuleAction(ScalarRing(modulus), FinAbGroup(tuple(factors)), label=label)


@dataclass(frozen=True)
class ActionValidation:
    ok: bool
    violation: str = ""
    witness: tuple = ()


def validate_action(a):
    M = a.carrier
    if a.is_scalar:
        n = a.ring.modulus
        if n and n % M.exponent:
            return ActionValidation(False, "scalar ring does not annihilate the carrier", (n, M.exponent))
        if a.rep:
            return ActionValidation(False, "scalar action with explicit generators", ())
        return ActionValidation(True)
    R = a.ring
    if len(a.rep) != R.rank:
        return ActionValidation(False, "one action map per ring generator required", (len(a.rep), R.rank))
    for i, op in enumerate(a.rep):
        if op.src != M or op.dst != M:
            return ActionValidation(False, "action map is not an endomorphism of the carrier", (i,))
        if not op.scaled(R.additive.invariant_factors[i]).is_zero():
            return ActionValidation(False, "additive relation of the ring not respected", (i,))
    if a.act(R.one).matrix != AbHom.identity(M).matrix:
        return ActionValidation(False, "unit does not act as the identity", ())
    for i in range(R.rank):
        for j in range(R.rank):
            lhs = a.rep[j].compose(a.rep[i])
            if a.act(R.mult_table[i][j]).matrix != lhs.matrix:
                return ActionValidation(False, "action is not compatible with multiplication", (i, j))
    return ActionValidation(True)


def _check_size(M, bounds):
    if M.order > bounds.carrier:
        raise BoundExceeded("carrier order", M.order, bounds.carrier)
    if M.rank * M.rank > bounds.rank:
        raise BoundExceeded("solution-space rank", M.rank * M.rank, bounds.rank)


# ---------------------------------------------------------------------------
# endomorphism rings


class EndRingResult:
    """A subring of ``End_Z(M)`` with its presentation as a :class:`FinRing`.

    ``rep[i]`` is the endomorphism for the ``i``-th additive generator of
    ``ring``; products follow the right-action convention
    ``g_i * g_j = rep[j] o rep[i]`` so that ``M`` is a right module over
    ``ring`` through ``rep``.
    """

    def __init__(self, carrier, homset):
        self.carrier = carrier
        self.homset = homset

    @property
    def order(self):
        return self.homset.order

    @property
    def lattice(self):
        return self.homset.lattice

    @property
    def generators(self):
        return self.homset.generators

    @property
    def rep(self):
        return self.homset.basis

    @cached_property
    def additive(self):
        return self.homset.group

    def contains(self, h):
        return self.homset.contains(h)

    def is_commutative(self):
        return self.homset.is_commutative()

    def issubset(self, other):
        return self.homset.issubset(other.homset)

    def same_set(self, other):
        return self.homset == other.homset

    def coordinates(self, h):
        try:
            return self.homset.coordinates(h)
        except ValueError:
            raise InternalInconsistency("endomorphism outside the ring") from None

    @cached_property
    def ring(self):
        G = self.carrier
        basis = self.rep
        r = len(basis)
        e = G.invariant_factors
        dt = _dtype(G)
        B = stack_homs(basis, G, G, dt)
        # P[i, j] = rep[j] o rep[i]
        P = compose_arrays(B[None, :], B[:, None], e)
        table = []
        for i in range(r):
            row = []
            for j in range(r):
                v = tuple(int(x) for x in P[i, j].reshape(-1))
                if not self.lattice.contains(v):
                    raise InternalInconsistency("product of basis endomorphisms left the ring")
                row.append(self.lattice.coordinates(v))
            table.append(tuple(row))
        one = self.lattice.coordinates(AbHom.identity(G).entries)
        return FinRing(self.additive, tuple(table), one)

    def arrays_from_coords(self, C):
        """Endomorphism matrices for a batch of coordinate rows, shape ``(m, k, k)``."""
        G = self.carrier
        dt = _dtype(G)
        B = stack_homs(self.rep, G, G, dt)
        C = np.asarray(C, dtype=dt).reshape(-1, len(self.rep))
        if len(self.rep) == 0:
            return np.zeros((len(C), G.rank, G.rank), dtype=dt)
        return np.tensordot(C, B, axes=(1, 0)) % np.array(G.invariant_factors, dtype=dt).reshape(-1, 1)

    def element_hom(self, x):
        """Endomorphism represented by the ring element with coordinates ``x``."""
        h = AbHom.zero(self.carrier, self.carrier)
        for c, b in zip(x, self.rep):
            if c:
                h = h + b.scaled(c)
        return h

    def as_action(self):
        """``M`` as a right module over this ring."""
        return ModuleAction(self.ring, self.carrier, tuple(self.rep))

    def __repr__(self):
        return f"EndRingResult(order={self.order}, on {self.carrier})"


def end_ring(a, bounds=DEFAULT_BOUNDS):
    """``End_R(M)``: the commutant of the action inside ``End_Z(M)``."""
    _check_size(a.carrier, bounds)
    return EndRingResult(a.carrier, commutant(a.carrier, a.operators))


def end_of_set(G, homset, bounds=DEFAULT_BOUNDS):
    """Commutant of a set of endomorphisms, given as a :class:`HomSet`."""
    _check_size(G, bounds)
    return EndRingResult(G, commutant(G, homset.generators))


def biend(a, bounds=DEFAULT_BOUNDS):
    """``End_S(M)`` for ``S = End_R(M)``."""
    S = end_ring(a, bounds)
    return end_of_set(a.carrier, S.homset, bounds)


def hom_module(a, b, bounds=DEFAULT_BOUNDS):
    """R-linear maps between the carriers of ``a`` and ``b``: ``(H, basis)``."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    _check_size(a.carrier, bounds)
    _check_size(b.carrier, bounds)
    hs = hom_set(a, b)
    return hs.group, hs.basis


def hom_set(a, b):
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return intertwiners(a.carrier, b.carrier, a.operators, b.operators)


def action_image(a):
    """Additive span of the action maps: the image of the ring in ``End_Z(M)``."""
    M = a.carrier
    if a.is_scalar:
        return HomSet.span(M, M, [AbHom.identity(M)])
    return HomSet.span(M, M, list(a.rep))


# ---------------------------------------------------------------------------
# annihilators, balance


@dataclass(frozen=True)
class Annihilator:
    """``ann_R(M)``.

    For scalar rings the ideal is principal and ``generator`` is a nonnegative
    integer (``0`` for the zero ideal); for finite rings ``subgroup`` holds the
    kernel of the action map.
    """

    faithful: bool
    generator: int = None
    subgroup: Subgroup = None

    def __str__(self):
        if self.subgroup is not None:
            return f"order {self.subgroup.order}"
        return f"({self.generator})"


def annihilator_and_faithful(a):
    M = a.carrier
    if a.is_scalar:
        n = a.ring.modulus
        e = M.exponent
        if n == 0:
            # e*Z is never zero
            return Annihilator(False, generator=e)
        g = e % n
        return Annihilator(g == 0, generator=g)
    R = a.ring
    k = M.rank
    coeffs = [list(op.entries) for op in a.rep]
    cond = _entry_moduli(M, M)
    ker = solve_homogeneous(coeffs, cond, R.additive.invariant_factors) if k else ModLattice.full(R.additive.invariant_factors)
    sub = Subgroup(R.additive, lattice=ker)
    return Annihilator(sub.is_trivial(), subgroup=sub)


def is_balanced(a, T):
    """Is the canonical map from the ring onto ``T = Biend(M)`` surjective?"""
    if T.carrier != a.carrier:
        raise CarrierMismatch("biendomorphism ring of a different carrier")
    return action_image(a).lattice == T.lattice


# ---------------------------------------------------------------------------
# direct sums and regular modules


def direct_sum_data(parts):
    """``(action, injections, projections)`` for the direct sum of ``parts``."""
    if not parts:
        raise ValueError("direct sum of an empty list")
    ring = parts[0].ring
    for p in parts[1:]:
        if p.ring != ring:
            raise RingMismatch(f"{p.ring} vs {ring}")
    G, inj, proj = direct_sum_group([p.carrier for p in parts])
    rep = ()
    if not parts[0].is_scalar:
        rep = []
        for i in range(ring.rank):
            h = AbHom.zero(G, G)
            for p, lam, pi in zip(parts, inj, proj):
                h = h + lam.compose(p.rep[i]).compose(pi)
            rep.append(h)
    label = " + ".join(f"({p})" for p in parts)
    return ModuleAction(ring, G, tuple(rep), label=label), inj, proj


def direct_sum_action(parts):
    return direct_sum_data(parts)[0]


def end_of_direct_sum_check(parts, bounds=DEFAULT_BOUNDS):
    """Block decomposition of ``End(M_1 + ... + M_n)`` into ``Hom(M_i, M_j)``."""
    a, inj, proj = direct_sum_data(parts)
    S = end_ring(a, bounds)
    blocks = {(i, j): hom_set(parts[i], parts[j]) for i in range(len(parts)) for j in range(len(parts))}
    if S.order != prod(h.order for h in blocks.values()):
        return False
    for phi in S.generators:
        total = AbHom.zero(a.carrier, a.carrier)
        for (i, j), H in blocks.items():
            block = proj[j].compose(phi).compose(inj[i])
            if not H.contains(block):
                return False
            total = total + inj[j].compose(block).compose(proj[i])
        if total.matrix != phi.matrix:
            return False
    # every family of blocks assembles to an endomorphism
    for (i, j), H in blocks.items():
        for b in H.generators:
            if not S.contains(inj[j].compose(b).compose(proj[i])):
                return False
    return True


def regular_module(R):
    """``R`` as a right module over itself (action by right multiplication)."""
    G = R.additive
    k = R.rank
    rep = []
    for i in range(k):
        cols = [R.mult_table[l][i] for l in range(k)]
        rep.append(AbHom.from_images(G, G, cols))
    return ModuleAction(R, G, tuple(rep), label="regular")


def restrict_arrays(A, N):
    """Restrictions to ``N`` of the endomorphism matrices ``A`` (shape ``(m, k, k)``),
    written in the coordinates of ``N.basis_group``."""
    M = N.ambient
    B = N.basis_group
    m = len(A)
    if m == 0 or B.rank == 0:
        return np.zeros((m, B.rank, B.rank), dtype=A.dtype)
    inc = np.array(N.incl.matrix, dtype=A.dtype).reshape(M.rank, B.rank)
    Y = np.matmul(A, inc) % np.array(M.invariant_factors, dtype=A.dtype).reshape(-1, 1)
    # Y[g, :, t] is the image of the t-th basis vector of N
    cols = np.transpose(Y, (0, 2, 1)).reshape(-1, M.rank)
    coords = N.lattice.coordinates_array(cols).reshape(m, B.rank, B.rank)
    return np.transpose(coords, (0, 2, 1))


def restrict_homs(homs, N):
    """Restrictions of endomorphisms mapping ``N`` into itself, in ``N``'s own coordinates."""
    B = N.basis_group
    if not homs:
        return []
    A = stack_homs(homs, N.ambient, N.ambient, _dtype(N.ambient))
    try:
        R = restrict_arrays(A, N)
    except ValueError:
        raise ValueError("endomorphism does not preserve the subgroup") from None
    return [AbHom._raw(B, B, tuple(tuple(int(x) for x in row) for row in r)) for r in R]


def restrict_action(a, N):
    """The submodule ``N`` (an R-submodule) with the restricted action."""
    if a.is_scalar:
        return ModuleAction(a.ring, N.basis_group)
    return ModuleAction(a.ring, N.basis_group, tuple(restrict_homs(a.rep, N)))


def compose_into(h, N):
    """``h`` restricted along the inclusion of ``N``: a map from ``N``'s basis group."""
    return h.compose(N.incl)
