"""Finite rings given by structure constants on a finite abelian group."""
from dataclasses import dataclass

from .abelian import FinAbGroup, Subgroup
from .errors import InvalidModulus
from .lattice import solve_homogeneous


@dataclass(frozen=True)
class ScalarRing:
    """``Z/modulus``; ``modulus == 0`` stands for the integers."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise InvalidModulus(f"scalar ring modulus must be 0 or >= 2, got {self.modulus}")

    @property
    def is_integers(self):
        return self.modulus == 0

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"


Z = ScalarRing(0)


@dataclass(frozen=True, eq=False)
class FinRing:
    """Ring on ``additive`` with ``g_i * g_j = mult_table[i][j]`` and unit ``one``."""

    additive: FinAbGroup
    mult_table: tuple
    one: tuple

    def __post_init__(self):
        table = tuple(tuple(tuple(int(a) for a in x) for x in row) for row in self.mult_table)
        object.__setattr__(self, "mult_table", table)
        object.__setattr__(self, "one", tuple(int(a) for a in self.one))

    def __eq__(self, other):
        if not isinstance(other, FinRing):
            return NotImplemented
        return (self.additive, self.mult_table, self.one) == (other.additive, other.mult_table, other.one)

    def __hash__(self):
        return hash((self.additive, self.mult_table, self.one))

    @property
    def rank(self):
        return self.additive.rank

    @property
    def order(self):
        return self.additive.order

    @property
    def zero(self):
        return self.additive.zero

    def add(self, x, y):
        return self.additive.add(x, y)

    def neg(self, x):
        return self.additive.neg(x)

    def sub(self, x, y):
        return self.additive.add(x, self.additive.neg(y))

    def mul(self, x, y):
        k = self.rank
        out = [0] * k
        T = self.mult_table
        for i in range(k):
            if x[i]:
                row = T[i]
                for j in range(k):
                    if y[j]:
                        c = x[i] * y[j]
                        p = row[j]
                        for l in range(k):
                            out[l] += c * p[l]
        return self.additive.reduce(out)

    def commutator(self, x, y):
        return self.sub(self.mul(x, y), self.mul(y, x))

    def elements(self):
        return self.additive.elements()

    def generator(self, i):
        return self.additive.generator(i)


def scalar_ring_as_finring(n):
    if n < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {n}")
    return FinRing(FinAbGroup((n,)), (((1,),),), (1,))


def opposite(R):
    """Same additive group with the product reversed."""
    k = R.rank
    return FinRing(R.additive, tuple(tuple(R.mult_table[j][i] for j in range(k)) for i in range(k)), R.one)


@dataclass(frozen=True)
class RingValidation:
    ok: bool
    violation: str = ""
    witness: tuple = ()


def ring_validate(R):
    """Check well-definedness, associativity on generator triples and the unit laws."""
    G = R.additive
    k = R.rank
    d = G.invariant_factors
    if len(R.mult_table) != k or any(len(row) != k for row in R.mult_table):
        return RingValidation(False, "shape", ())
    for i in range(k):
        for j in range(k):
            x = R.mult_table[i][j]
            if len(x) != k or G.reduce(x) != x:
                return RingValidation(False, "unreduced product", (i, j))
            if any(d[i] * a % e for a, e in zip(x, d)) or any(d[j] * a % e for a, e in zip(x, d)):
                return RingValidation(False, "well-definedness", (i, j))
    if len(R.one) != k:
        return RingValidation(False, "shape", ())
    gens = [G.generator(i) for i in range(k)]
    for i in range(k):
        for j in range(k):
            ij = R.mult_table[i][j]
            for l in range(k):
                if R.mul(ij, gens[l]) != R.mul(gens[i], R.mult_table[j][l]):
                    return RingValidation(False, "associativity", (i, j, l))
    one = G.reduce(R.one)
    for i in range(k):
        if R.mul(one, gens[i]) != gens[i] or R.mul(gens[i], one) != gens[i]:
            return RingValidation(False, "unit", (i,))
    return RingValidation(True)


def ring_is_commutative(R):
    k = R.rank
    return all(R.mult_table[i][j] == R.mult_table[j][i] for i in range(k) for j in range(i + 1, k))


def ring_center(R):
    """Elements commuting with every generator, as a subgroup of the additive group."""
    k = R.rank
    d = R.additive.invariant_factors
    # x = sum x_i g_i commutes with g_j iff sum_i x_i (g_i g_j - g_j g_i) = 0
    coeffs = [[] for _ in range(k)]
    moduli = []
    for j in range(k):
        for l in range(k):
            moduli.append(d[l])
            for i in range(k):
                coeffs[i].append(R.mult_table[i][j][l] - R.mult_table[j][i][l])
    return Subgroup(R.additive, lattice=solve_homogeneous(coeffs, moduli, d))


def commutator_set(R):
    """Generator-pair commutators and the subgroup they span."""
    k = R.rank
    comms = []
    for i in range(k):
        for j in range(k):
            comms.append(R.additive.reduce([a - b for a, b in zip(R.mult_table[i][j], R.mult_table[j][i])]))
    return comms, Subgroup(R.additive, comms)
