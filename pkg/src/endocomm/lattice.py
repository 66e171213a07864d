"""Subgroups of ``Z/c_1 + ... + Z/c_n`` held as canonical Hermite lattices.

A subgroup ``H`` of ``A = (+) Z/c_j`` is identified with its preimage lattice
``L`` in ``Z^n``; ``L`` contains ``(+) c_j Z`` so it is full rank and has a
unique Hermite basis.  The moduli need not form a divisibility chain, which lets
the same machinery describe subgroups of entry spaces of homomorphism matrices.
"""
from functools import cached_property
from itertools import product
from math import gcd, lcm, prod

import numpy as np

from ._hnf_py import xgcd
from ._kernels import hnf_mod
from .snf import smith_with_inverse


def _lcm_all(values):
    return lcm(*values) if values else 1


class ModLattice:
    """A subgroup of ``(+) Z/moduli[j]`` in Hermite form.

    Instances are immutable; equality and hashing use the Hermite basis, which
    is canonical.
    """

    __slots__ = ("moduli", "hnf", "__dict__")

    def __init__(self, moduli, hnf):
        self.moduli = tuple(moduli)
        self.hnf = tuple(tuple(r) for r in hnf)

    @classmethod
    def from_generators(cls, moduli, gens):
        moduli = tuple(moduli)
        n = len(moduli)
        N = _lcm_all(moduli)
        if isinstance(gens, np.ndarray):
            rows = gens.reshape(-1, n)
            extra = np.diag(np.array(moduli, dtype=rows.dtype))[[j for j, c in enumerate(moduli) if c != N]]
            rows = np.vstack([rows, extra]) if len(extra) else rows
            return cls(moduli, hnf_mod(rows, n, N))
        rows = [list(g) for g in gens]
        for j, c in enumerate(moduli):
            if c != N:
                row = [0] * n
                row[j] = c
                rows.append(row)
        return cls(moduli, hnf_mod(rows, n, N))

    @classmethod
    def full(cls, moduli):
        moduli = tuple(moduli)
        n = len(moduli)
        return cls(moduli, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, moduli):
        moduli = tuple(moduli)
        n = len(moduli)
        return cls(moduli, [[c if i == j else 0 for j in range(n)] for i, c in enumerate(moduli)])

    # -- basic invariants -------------------------------------------------
    @property
    def rank(self):
        return len(self.moduli)

    @cached_property
    def pivots(self):
        return tuple(self.hnf[j][j] for j in range(self.rank))

    @cached_property
    def order(self):
        return prod(c // p for c, p in zip(self.moduli, self.pivots))

    def is_zero(self):
        return self.order == 1

    def is_full(self):
        return all(p == 1 for p in self.pivots)

    def __eq__(self, other):
        if not isinstance(other, ModLattice):
            return NotImplemented
        return self.moduli == other.moduli and self.hnf == other.hnf

    def __hash__(self):
        return hash((self.moduli, self.hnf))

    def __repr__(self):
        return f"ModLattice(moduli={self.moduli}, order={self.order})"

    # -- generators and elements ------------------------------------------
    @cached_property
    def generators(self):
        """Nonzero Hermite rows reduced modulo the moduli (a canonical generating set)."""
        out = []
        for j, row in enumerate(self.hnf):
            if row[j] == self.moduli[j]:
                continue
            out.append(tuple(x % c for x, c in zip(row, self.moduli)))
        return tuple(out)

    def elements(self):
        """Iterate over the elements once each (mixed-radix box over the Hermite rows)."""
        n = self.rank
        ranges = [range(c // p) for c, p in zip(self.moduli, self.pivots)]
        rows = self.hnf
        moduli = self.moduli
        for coeffs in product(*ranges):
            v = [0] * n
            for a, row in zip(coeffs, rows):
                if a:
                    for k in range(n):
                        v[k] += a * row[k]
            yield tuple(x % c for x, c in zip(v, moduli))

    # -- membership and arithmetic ----------------------------------------
    def contains(self, x):
        moduli = self.moduli
        v = [a % c for a, c in zip(x, moduli)]
        for j, row in enumerate(self.hnf):
            a = v[j]
            if a == 0:
                continue
            p = row[j]
            if a % p:
                return False
            q = a // p
            for k in range(j + 1, len(v)):
                v[k] = (v[k] - q * row[k]) % moduli[k]
        return True

    def contains_lattice(self, other):
        return all(self.contains(g) for g in other.generators)

    def __add__(self, other):
        if self.moduli != other.moduli:
            raise ValueError("lattices over different moduli")
        return ModLattice.from_generators(self.moduli, list(self.hnf) + list(other.generators))

    def add_generators(self, gens):
        gens = [g for g in gens if not self.contains(g)]
        if not gens:
            return self
        return ModLattice.from_generators(self.moduli, list(self.hnf) + gens)

    def intersect(self, other):
        """Intersection by Zassenhaus pullback on the doubled lattice."""
        if self.moduli != other.moduli:
            raise ValueError("lattices over different moduli")
        n = self.rank
        if n == 0:
            return self
        N = _lcm_all(self.moduli)
        rows = [list(r) + list(r) for r in self.hnf]
        rows += [list(r) + [0] * n for r in other.hnf]
        H = hnf_mod(rows, 2 * n, N)
        gens = [H[i][n:] for i in range(n, 2 * n)]
        return ModLattice.from_generators(self.moduli, gens)

    def intersect_by_elements(self, other):
        """Intersection by enumerating the smaller side (the oracle path)."""
        small, big = (self, other) if self.order <= other.order else (other, self)
        return ModLattice.from_generators(self.moduli, [x for x in small.elements() if big.contains(x)])

    # -- canonical structure ----------------------------------------------
    @cached_property
    def _structure(self):
        n = self.rank
        H = [list(r) for r in self.hnf]
        # relation lattice (+) c_j e_j written in the Hermite basis
        T = [_solve_upper(H, [c if k == j else 0 for k in range(n)]) for j, c in enumerate(self.moduli)]
        _, D, V, Vinv = smith_with_inverse(T, n)
        diag = [D[i][i] for i in range(n)]
        keep = [i for i in range(n) if diag[i] != 1]
        factors = tuple(diag[i] for i in keep)
        basis = []
        for i in keep:
            vec = [sum(Vinv[i][t] * H[t][k] for t in range(n)) % self.moduli[k] for k in range(n)]
            basis.append(tuple(vec))
        return factors, tuple(basis), V, keep

    @property
    def invariant_factors(self):
        return self._structure[0]

    @property
    def basis(self):
        """Vectors realising the invariant-factor decomposition, in order."""
        return self._structure[1]

    def coordinates(self, x):
        """Coordinates of the member ``x`` with respect to :attr:`basis`."""
        factors, _, V, keep = self._structure
        n = self.rank
        H = self.hnf
        v = [a % c for a, c in zip(x, self.moduli)]
        y = _solve_upper(H, v, strict=False)
        if y is None:
            raise ValueError("vector is not in the lattice")
        return tuple(sum(y[t] * V[t][i] for t in range(n)) % f for i, f in zip(keep, factors))

    def coordinates_array(self, X):
        """Row-wise :meth:`coordinates` for an integer array of members."""
        factors, _, V, keep = self._structure
        n = self.rank
        X = np.asarray(X)
        dt = X.dtype if X.dtype == object else np.int64
        v = X.astype(dt) % np.array(self.moduli, dtype=dt)
        y = np.zeros_like(v)
        for j in range(n):
            p = self.hnf[j][j]
            col = v[:, j]
            if (col % p).any():
                raise ValueError("vector is not in the lattice")
            q = col // p
            y[:, j] = q
            v = v - q[:, None] * np.array(self.hnf[j], dtype=dt)
        Vk = np.array([[V[t][i] for i in keep] for t in range(n)], dtype=object)
        out = (y.astype(object) @ Vk) % np.array(factors, dtype=object) if keep else np.zeros((len(X), 0), dtype=object)
        return out.astype(dt) if dt != object else out


def _solve_upper(H, x, strict=True):
    """Solve ``y H = x`` over the integers for upper-triangular ``H``."""
    n = len(H)
    v = list(x)
    y = [0] * n
    for j in range(n):
        a = v[j]
        if a == 0:
            continue
        p = H[j][j]
        if a % p:
            if strict:
                raise ArithmeticError("not in lattice")
            return None
        q = a // p
        y[j] = q
        row = H[j]
        for k in range(j, n):
            v[k] -= q * row[k]
    return y


def solve_homogeneous(coeffs, cond_moduli, var_moduli):
    """Solutions of a homogeneous linear congruence system.

    Finds every ``b`` in ``(+) Z/var_moduli[t]`` with
    ``sum_t b[t] * coeffs[t][c] == 0 (mod cond_moduli[c])`` for all ``c``.
    Each condition must be well defined, i.e. ``var_moduli[t] * coeffs[t][c]``
    must vanish modulo ``cond_moduli[c]``.  ``coeffs`` may be a nested list or
    an integer array of shape ``(len(var_moduli), len(cond_moduli))``.
    """
    r = len(var_moduli)
    if r == 0:
        return ModLattice.full(())
    if len(cond_moduli) == 0:
        return ModLattice.full(var_moduli)
    N = _lcm_all(tuple(cond_moduli) + tuple(var_moduli))
    # every condition becomes a functional into Z/N
    F = _functionals(coeffs, cond_moduli, N)
    if len(F) == 0:
        return ModLattice.full(var_moduli)
    F = hnf_mod(F, r, N)
    F = [row for j, row in enumerate(F) if row[j] != N or any(row[j + 1:])]
    if not F:
        return ModLattice.full(var_moduli)
    m = len(F)
    rows = [[F[i][t] for i in range(m)] + [1 if s == t else 0 for s in range(r)] for t in range(r)]
    H = hnf_mod(rows, m + r, N)
    gens = [H[i][m:] for i in range(m, m + r)]
    return ModLattice.from_generators(var_moduli, gens)


def _functionals(coeffs, cond_moduli, N):
    """Distinct nonzero rows ``(N / m_c) * coeffs[:, c] mod N``."""
    moduli = np.array(cond_moduli, dtype=object)
    if N < 2**31:
        if isinstance(coeffs, np.ndarray) and coeffs.dtype != object:
            A = coeffs.astype(np.int64) % np.array(cond_moduli, dtype=np.int64)
        else:
            A = (np.array(coeffs, dtype=object).reshape(-1, len(cond_moduli)) % moduli).astype(np.int64)
        F = (A * np.array([N // m for m in cond_moduli], dtype=np.int64)) % N
        F = F.T
        F = F[F.any(axis=1)]
        if len(F) == 0:
            return F
        return np.unique(F, axis=0)
    A = np.array(coeffs, dtype=object).reshape(-1, len(cond_moduli)) % moduli
    scale = np.array([N // m for m in cond_moduli], dtype=object)
    F = (A * scale) % N
    out = {tuple(int(x) for x in col) for col in F.T if any(col)}
    return sorted(out)


def crt_pair(a, m, b, n):
    """Combine ``x = a (mod m)`` and ``x = b (mod n)``; returns ``(x, lcm)`` or None."""
    g, s, _ = xgcd(m, n)
    if (b - a) % g:
        return None
    L = m // g * n
    return (a + (b - a) // g * s % (n // g) * m) % L, L


__all__ = ["ModLattice", "solve_homogeneous", "crt_pair", "gcd"]
