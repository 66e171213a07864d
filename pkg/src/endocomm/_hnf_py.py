"""Pure-Python Hermite normal form kernel.

Reference implementation of :func:`hnf_mod`; the compiled twin in ``_hnf.pyx``
follows the same steps on 64-bit integers.
"""


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_mod(rows, ncols, modulus):
    """Hermite basis of ``span(rows) + modulus * Z^ncols``.

    The result is an upper-triangular ``ncols x ncols`` list of rows with
    positive pivots dividing ``modulus`` and every entry above a pivot reduced
    into ``[0, pivot)``.  It is a canonical form of the lattice.
    """
    n = ncols
    N = modulus
    H = [[0] * n for _ in range(n)]
    for j in range(n):
        H[j][j] = N
    for r in rows:
        v = [x % N for x in r]
        for j in range(n):
            a = v[j]
            if a == 0:
                continue
            p = H[j]
            b = p[j]
            if a % b == 0:
                q = a // b
                for k in range(j, n):
                    v[k] = (v[k] - q * p[k]) % N
                continue
            g, s, t = xgcd(b, a)
            ag = a // g
            bg = b // g
            newp = [0] * n
            for k in range(j, n):
                pk = p[k]
                vk = v[k]
                newp[k] = (s * pk + t * vk) % N
                v[k] = (ag * pk - bg * vk) % N
            newp[j] = g
            H[j] = newp
    # entries above each pivot reduced modulo that pivot
    for k in range(n):
        pk = H[k]
        piv = pk[k]
        for i in range(k):
            row = H[i]
            q = row[k] // piv
            if q:
                for c in range(k, n):
                    row[c] = row[c] - q * pk[c]
                for c in range(k + 1, n):
                    row[c] %= N
    return H
