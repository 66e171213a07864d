"""Finite abelian groups, their homomorphisms and subgroups.

Groups are always stored in invariant-factor form ``Z/d_1 + ... + Z/d_k`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``; elements are plain tuples of
coordinates reduced modulo the factors.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, lcm, prod

from .errors import AmbientMismatch, BoundExceeded, InfiniteQuotient, ShapeMismatch
from .lattice import ModLattice
from .snf import smith_normal_form, smith_with_inverse  # noqa: F401 (public re-export)

DEFAULT_SUBGROUP_BOUND = 4096
INTERSECT_CROSSOVER = 512


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {factors} do not form a divisibility chain")
        if any(d < 2 for d in factors):
            raise ValueError(f"invariant factors must be >= 2, got {factors}")

    @classmethod
    def of(cls, *orders):
        """Canonical group isomorphic to ``Z/orders[0] + Z/orders[1] + ...``."""
        orders = [o for o in orders if o != 1]
        if any(o < 1 for o in orders):
            raise ValueError("cyclic orders must be positive")
        G, _ = group_from_presentation([[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)], len(orders))
        return G

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        return prod(self.invariant_factors)

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def zero(self):
        return (0,) * self.rank

    def is_trivial(self):
        return not self.invariant_factors

    def is_cyclic(self):
        return self.rank <= 1

    def reduce(self, x):
        if len(x) != self.rank:
            raise ShapeMismatch(f"element of length {len(x)} in a group of rank {self.rank}")
        return tuple(a % d for a, d in zip(x, self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x):
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k, x):
        return tuple(k * a % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x):
        return lcm(*(d // gcd(a, d) for a, d in zip(x, self.invariant_factors))) if x else 1

    def elements(self):
        return product(*(range(d) for d in self.invariant_factors))

    def generator(self, i):
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def trivial_group():
    return FinAbGroup(())


def cyclic(n):
    return FinAbGroup.of(n)


# ---------------------------------------------------------------------------
# presentations


class _Presentation:
    """``Z^g / rowspan(R)`` in canonical form with coordinate maps both ways."""

    def __init__(self, R, g):
        R = [list(r) for r in R]
        if g == 0:
            self.group = trivial_group()
            self._proj = []
            self._lift = []
            self.g = 0
            return
        _, D, V, Vi = smith_with_inverse(R, g)
        diag = [D[i][i] if i < len(D) else 0 for i in range(g)]
        if any(d == 0 for d in diag):
            raise InfiniteQuotient(f"cokernel of a {len(R)}x{g} relation matrix has a free summand")
        keep = [i for i in range(g) if diag[i] != 1]
        self.g = g
        self.group = FinAbGroup(tuple(diag[i] for i in keep))
        # proj: x -> (x V)[keep]; lift: generator s -> row keep[s] of V^-1
        self._proj = [[V[r][i] for i in keep] for r in range(g)]
        self._lift = [Vi[i] for i in keep]

    def project(self, x):
        if len(x) != self.g:
            raise ShapeMismatch(f"vector of length {len(x)} for {self.g} generators")
        k = self.group.rank
        return self.group.reduce([sum(x[r] * self._proj[r][s] for r in range(self.g)) for s in range(k)])

    def lift(self, y):
        return [sum(y[s] * self._lift[s][r] for s in range(len(y))) for r in range(self.g)]


def group_from_presentation(R, ncols=None):
    """Canonical form of ``Z^g / rowspan(R)``.

    Returns ``(G, proj)`` where ``proj`` maps a length-``g`` integer vector to
    the element of ``G`` it represents.  Raises :class:`InfiniteQuotient` when
    the quotient is infinite.
    """
    g = ncols if ncols is not None else (len(R[0]) if R else 0)
    pres = _Presentation(R, g)
    return pres.group, pres.project


# ---------------------------------------------------------------------------
# homomorphisms


def _hom_moduli(src, dst):
    """Entry-space moduli for matrices ``dst.rank x src.rank``: entry (i, j) lives mod e_i."""
    return tuple(e for e in dst.invariant_factors for _ in range(src.rank))


@dataclass(frozen=True, eq=True)
class AbHom:
    """Additive homomorphism ``src -> dst`` as a matrix.

    Entry ``(i, j)`` is the coefficient of the ``i``-th generator of ``dst`` in
    the image of the ``j``-th generator of ``src``, reduced modulo ``e_i``.
    """

    src: FinAbGroup
    dst: FinAbGroup
    matrix: tuple

    def __post_init__(self):
        k, l = self.src.rank, self.dst.rank
        rows = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(rows) != l or any(len(row) != k for row in rows):
            raise ShapeMismatch(f"matrix shape does not match {l}x{k}")
        rows = tuple(tuple(a % e for a in row) for row, e in zip(rows, self.dst.invariant_factors))
        for i, e in enumerate(self.dst.invariant_factors):
            for j, d in enumerate(self.src.invariant_factors):
                if rows[i][j] * d % e:
                    raise ValueError(f"entry ({i},{j}) = {rows[i][j]} is not well defined: {d} * entry != 0 mod {e}")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def _raw(cls, src, dst, matrix):
        obj = object.__new__(cls)
        object.__setattr__(obj, "src", src)
        object.__setattr__(obj, "dst", dst)
        object.__setattr__(obj, "matrix", matrix)
        return obj

    @classmethod
    def identity(cls, G):
        return cls._raw(G, G, tuple(tuple(1 if i == j else 0 for j in range(G.rank)) for i in range(G.rank)))

    @classmethod
    def zero(cls, src, dst):
        return cls._raw(src, dst, tuple((0,) * src.rank for _ in range(dst.rank)))

    @classmethod
    def scalar(cls, G, c):
        return cls._raw(G, G, tuple(tuple(c % d if i == j else 0 for j in range(G.rank)) for i, d in enumerate(G.invariant_factors)))

    @classmethod
    def from_images(cls, src, dst, images):
        """Homomorphism sending generator ``j`` of ``src`` to ``images[j]``."""
        return cls(src, dst, tuple(tuple(images[j][i] for j in range(src.rank)) for i in range(dst.rank)))

    @classmethod
    def from_entries(cls, src, dst, vec):
        k = src.rank
        return cls._raw(src, dst, tuple(tuple(vec[i * k:(i + 1) * k]) for i in range(dst.rank)))

    @property
    def entries(self):
        return tuple(a for row in self.matrix for a in row)

    def __call__(self, x):
        return tuple(sum(a * b for a, b in zip(row, x)) % e for row, e in zip(self.matrix, self.dst.invariant_factors))

    def compose(self, other):
        """``self o other`` (apply ``other`` first)."""
        if other.dst != self.src:
            raise ShapeMismatch("cannot compose: target of the inner map is not the source of the outer map")
        B = other.matrix
        m = len(B)
        rows = tuple(
            tuple(sum(row[t] * B[t][j] for t in range(m)) % e for j in range(other.src.rank))
            for row, e in zip(self.matrix, self.dst.invariant_factors)
        )
        return AbHom._raw(other.src, self.dst, rows)

    __matmul__ = compose

    def __add__(self, other):
        if (self.src, self.dst) != (other.src, other.dst):
            raise ShapeMismatch("cannot add homomorphisms with different source or target")
        return AbHom._raw(self.src, self.dst, tuple(
            tuple((a + b) % e for a, b in zip(r1, r2))
            for r1, r2, e in zip(self.matrix, other.matrix, self.dst.invariant_factors)))

    def __neg__(self):
        return AbHom._raw(self.src, self.dst, tuple(tuple(-a % e for a in row) for row, e in zip(self.matrix, self.dst.invariant_factors)))

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        return AbHom._raw(self.src, self.dst, tuple(tuple(c * a % e for a in row) for row, e in zip(self.matrix, self.dst.invariant_factors)))

    def is_zero(self):
        return not any(any(row) for row in self.matrix)

    def kernel(self):
        return kernel(self)

    def image(self):
        return image(self)


def hom_ops(h1, h2, kind):
    """Ring operations on homomorphisms: ``compose`` (h1 o h2), ``add``, ``negate`` (of h1) or ``equal``."""
    if kind == "compose":
        return h1.compose(h2)
    if kind == "add":
        return h1 + h2
    if kind == "negate":
        return -h1
    if kind == "equal":
        if (h1.src, h1.dst) != (h2.src, h2.dst):
            raise ShapeMismatch("cannot compare homomorphisms with different source or target")
        return h1.matrix == h2.matrix
    raise ValueError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# subgroups


class Subgroup:
    """Subgroup of ``ambient`` generated by ``generators``.

    The canonical data (Hermite lattice, invariant-factor basis ``basis_group``
    and the injective inclusion ``incl``) are computed on demand.
    """

    def __init__(self, ambient, generators=(), lattice=None):
        self.ambient = ambient
        if lattice is None:
            gens = tuple(ambient.reduce(g) for g in generators)
            self.generators = gens
            self.lattice = ModLattice.from_generators(ambient.invariant_factors, gens)
        else:
            self.lattice = lattice
            self.generators = lattice.generators

    @classmethod
    def whole(cls, G):
        return cls(G, lattice=ModLattice.full(G.invariant_factors))

    @classmethod
    def trivial(cls, G):
        return cls(G, lattice=ModLattice.zero(G.invariant_factors))

    @property
    def order(self):
        return self.lattice.order

    def is_trivial(self):
        return self.lattice.order == 1

    def is_whole(self):
        return self.lattice.is_full()

    @property
    def canonical_generators(self):
        return self.lattice.generators

    @cached_property
    def basis_group(self):
        return FinAbGroup(self.lattice.invariant_factors)

    @cached_property
    def incl(self):
        return AbHom._raw(self.basis_group, self.ambient, tuple(
            tuple(b[i] for b in self.lattice.basis) for i in range(self.ambient.rank)))

    def coordinates(self, x):
        """The element of :attr:`basis_group` that ``incl`` sends to ``x``."""
        return self.lattice.coordinates(x)

    def contains(self, x):
        return self.lattice.contains(x)

    __contains__ = contains

    def elements(self):
        return self.lattice.elements()

    @cached_property
    def element_set(self):
        return frozenset(self.lattice.elements())

    def _check(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatch("subgroups of different ambient groups")

    def __add__(self, other):
        self._check(other)
        return Subgroup(self.ambient, lattice=self.lattice + other.lattice)

    def intersect(self, other, method="auto"):
        self._check(other)
        if method == "auto":
            method = "enumerate" if self.ambient.order <= INTERSECT_CROSSOVER else "pullback"
        if method == "enumerate":
            return Subgroup(self.ambient, lattice=self.lattice.intersect_by_elements(other.lattice))
        if method == "pullback":
            return Subgroup(self.ambient, lattice=self.lattice.intersect(other.lattice))
        raise ValueError(f"unknown intersection method {method!r}")

    __and__ = intersect

    def issubset(self, other):
        self._check(other)
        return other.lattice.contains_lattice(self.lattice)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self.lattice == other.lattice

    def __hash__(self):
        return hash((self.ambient, self.lattice))

    def __repr__(self):
        return f"Subgroup(order={self.order}, generators={list(self.canonical_generators)}, in {self.ambient})"

    def image_under(self, h):
        """``h(self)`` as a subgroup of ``h.dst``."""
        return Subgroup(h.dst, [h(g) for g in self.generators])


def subgroup_algebra(A, B, kind):
    """``sum``/``intersect`` return subgroups; ``contains`` (B within A) and ``equal`` return booleans."""
    if A.ambient != B.ambient:
        raise AmbientMismatch("subgroups of different ambient groups")
    if kind == "sum":
        return A + B
    if kind == "intersect":
        return A.intersect(B)
    if kind == "contains":
        return B.issubset(A)
    if kind == "equal":
        return A == B
    raise ValueError(f"unknown operation {kind!r}")


def kernel(h):
    """Full preimage of zero as a subgroup of ``h.src``."""
    from .lattice import solve_homogeneous

    coeffs = [[h.matrix[i][t] for i in range(h.dst.rank)] for t in range(h.src.rank)]
    sol = solve_homogeneous(coeffs, h.dst.invariant_factors, h.src.invariant_factors)
    return Subgroup(h.src, lattice=sol)


def image(h):
    """Subgroup of ``h.dst`` generated by the images of the source generators."""
    cols = [tuple(h.matrix[i][j] for i in range(h.dst.rank)) for j in range(h.src.rank)]
    return Subgroup(h.dst, cols)


# ---------------------------------------------------------------------------
# subgroup enumeration


def enumerate_subgroups(G, order_bound=DEFAULT_SUBGROUP_BOUND):
    """Every subgroup of ``G`` exactly once.

    Subgroups are produced by walking canonical Hermite bases directly (no
    deduplication needed) and returned sorted by order, then by canonical
    generators.
    """
    if G.order > order_bound:
        raise BoundExceeded("group order", G.order, order_bound)
    c = G.invariant_factors
    n = len(c)
    if n == 0:
        return [Subgroup.trivial(G)]
    divisors = [[h for h in range(1, d + 1) if d % h == 0] for d in c]
    found = []

    def member(rows_below, j, t):
        # is the tail vector t (columns j+1..n-1) in the span of rows_below + (+) c_k e_k?
        v = list(t)
        for idx, row in enumerate(rows_below):
            a = v[idx]
            if a == 0:
                continue
            p = row[idx]
            if a % p:
                return False
            q = a // p
            for k in range(idx, len(v)):
                v[k] -= q * row[k]
        return True

    def build(j, rows_below):
        # rows_below: Hermite rows for columns j+1.. (tails only)
        if j < 0:
            hnf = [r for r in rows_below]
            found.append(hnf)
            return
        width = n - 1 - j
        pivots_below = [rows_below[i][i] for i in range(width)]
        for h in divisors[j]:
            m = c[j] // h
            for tail in product(*(range(p) for p in pivots_below)):
                if member(rows_below, j, [m * x for x in tail]):
                    build(j - 1, [[h] + list(tail)] + [[0] + r for r in rows_below])

    build(n - 1, [])
    subs = [Subgroup(G, lattice=ModLattice(c, hnf)) for hnf in found]
    subs.sort(key=lambda S: (S.order, S.canonical_generators))
    return subs


def enumerate_invariant_subgroups(G, operators, order_bound=DEFAULT_SUBGROUP_BOUND):
    """Subgroups of ``G`` mapped into themselves by every homomorphism in ``operators``.

    Built as joins of the invariant subgroups generated by single elements, so
    the cost tracks the number of invariant subgroups rather than all subgroups.
    """
    if G.order > order_bound:
        raise BoundExceeded("group order", G.order, order_bound)
    operators = [op for op in operators if not _is_scalar(op)]

    def closure(gens):
        L = ModLattice.from_generators(G.invariant_factors, gens)
        while True:
            new = [op(g) for op in operators for g in L.generators]
            L2 = L.add_generators(new)
            if L2 is L:
                return L
            L = L2

    zero = ModLattice.zero(G.invariant_factors)
    cyclic_subs = []
    seen = {zero}
    for x in G.elements():
        if any(x):
            C = closure([x])
            if C not in seen:
                seen.add(C)
                cyclic_subs.append(C)
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic_subs:
                if H.contains_lattice(C):
                    continue
                K = H + C
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    subs = [Subgroup(G, lattice=L) for L in found]
    subs.sort(key=lambda S: (S.order, S.canonical_generators))
    return subs


def _is_scalar(h):
    if h.src != h.dst:
        return False
    G = h.src
    if G.rank == 0:
        return True
    c = h.matrix[0][0]
    return h.matrix == AbHom.scalar(G, c).matrix


# ---------------------------------------------------------------------------
# direct sums, Hom groups, socles


def direct_sum_group(parts):
    """Canonical direct sum with its injections and projections."""
    if not parts:
        raise ValueError("direct sum of an empty list")
    raw = [d for P in parts for d in P.invariant_factors]
    g = len(raw)
    pres = _Presentation([[d if i == j else 0 for j in range(g)] for i, d in enumerate(raw)], g)
    G = pres.group
    injections, projections = [], []
    off = 0
    for P in parts:
        k = P.rank
        imgs = []
        for t in range(k):
            e = [0] * g
            e[off + t] = 1
            imgs.append(pres.project(e))
        injections.append(AbHom.from_images(P, G, imgs))
        pimgs = []
        for s in range(G.rank):
            x = pres.lift(G.generator(s))
            pimgs.append(P.reduce(x[off:off + k]))
        projections.append(AbHom.from_images(G, P, pimgs))
        off += k
    return G, injections, projections


def full_hom_lattice(src, dst):
    """All of ``Hom(src, dst)`` as a lattice in the matrix entry space."""
    k = src.rank
    moduli = _hom_moduli(src, dst)
    gens = []
    for i, e in enumerate(dst.invariant_factors):
        for j, d in enumerate(src.invariant_factors):
            v = [0] * len(moduli)
            v[i * k + j] = e // gcd(e, d)
            gens.append(v)
    # generators are independent and diagonal, so the Hermite form is immediate
    hnf = []
    for idx, m in enumerate(moduli):
        row = [0] * len(moduli)
        row[idx] = gens[idx][idx]
        hnf.append(row)
    return ModLattice(moduli, hnf)


def hom_group(A, B):
    """``Hom(A, B)`` in canonical form with one basis homomorphism per cyclic summand."""
    L = full_hom_lattice(A, B)
    H = FinAbGroup(L.invariant_factors)
    basis = [AbHom.from_entries(A, B, v) for v in L.basis]
    return H, basis


def socle(G):
    gens = []
    for i, d in enumerate(G.invariant_factors):
        for p in prime_factors(d):
            x = [0] * G.rank
            x[i] = d // p
            gens.append(x)
    return Subgroup(G, gens)


def socle_and_essential(G, N):
    """Socle of ``G`` and whether ``N`` is essential (contains the socle)."""
    if N.ambient != G:
        raise AmbientMismatch("subgroup of a different group")
    S = socle(G)
    return S, S.issubset(N)


# ---------------------------------------------------------------------------
# arithmetic helpers and group catalogues


def prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def partitions(n, largest=None):
    """Partitions of ``n`` as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def abelian_groups_of_order(n):
    """Every abelian group of order ``n`` up to isomorphism, in a fixed order."""
    if n == 1:
        return [trivial_group()]
    fac = sorted(factorize(n).items())
    choices = [[(p, lam) for lam in partitions(e)] for p, e in fac]
    groups = []
    for combo in product(*choices):
        length = max(len(lam) for _, lam in combo)
        factors = []
        for i in range(length):
            # i-th largest factor across primes, built from the i-th parts
            factors.append(prod(p ** lam[i] for p, lam in combo if i < len(lam)))
        groups.append(FinAbGroup(tuple(reversed(factors))))
    groups.sort(key=lambda G: (G.rank, G.invariant_factors))
    return groups


def abelian_groups_up_to(n, include_trivial=True):
    out = []
    for k in range(1 if include_trivial else 2, n + 1):
        out.extend(abelian_groups_of_order(k))
    return out


def number_of_abelian_groups(n):
    """Product of partition counts of the prime exponents."""
    return prod(sum(1 for _ in partitions(e)) for e in factorize(n).values()) if n > 1 else 1


def _gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _conjugate(lam):
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0])) if lam else ()


def count_subgroups(G):
    """Number of subgroups, by the closed formula for abelian p-groups (multiplied over primes)."""
    total = 1
    for p, _ in factorize(G.order).items() if G.order > 1 else []:
        lam = tuple(sorted((_valuation(d, p) for d in G.invariant_factors if _valuation(d, p)), reverse=True))
        lc = _conjugate(lam)
        count = 0
        for mu in _subpartitions(lam):
            mc = _conjugate(mu)
            term = 1
            for i in range(len(lc)):
                li = lc[i]
                mi = mc[i] if i < len(mc) else 0
                mn = mc[i + 1] if i + 1 < len(mc) else 0
                term *= p ** (mn * (li - mi)) * _gaussian_binomial(li - mn, mi - mn, p)
            count += term
        total *= count
    return total


def _valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _subpartitions(lam):
    if not lam:
        yield ()
        return

    def rec(i, bound):
        if i == len(lam):
            yield ()
            return
        for part in range(min(lam[i], bound), -1, -1):
            for rest in rec(i + 1, part):
                yield (part,) + rest

    for mu in rec(0, lam[0]):
        yield tuple(x for x in mu if x)


def quotient_map(G, N):
    """Canonical quotient ``G / N`` and the projection onto it."""
    c = G.invariant_factors
    g = G.rank
    rels = [[d if i == j else 0 for j in range(g)] for i, d in enumerate(c)] + [list(x) for x in N.canonical_generators]
    pres = _Presentation(rels, g)
    Q = pres.group
    P = pres._proj
    return Q, AbHom._raw(G, Q, tuple(
        tuple(P[j][i] % e for j in range(g)) for i, e in enumerate(Q.invariant_factors)))


def primary_components(G):
    """``{p: G_p}`` for the primes dividing ``|G|``."""
    out = {}
    for p in prime_factors(G.order) if G.order > 1 else []:
        parts = [p ** _valuation(d, p) for d in G.invariant_factors]
        out[p] = FinAbGroup(tuple(x for x in parts if x > 1))
    return out
