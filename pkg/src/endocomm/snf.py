"""Smith normal form over the integers with unimodular transforms.

Arithmetic uses Python integers, so no intermediate value can overflow.
"""


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_with_inverse(A, ncols=None):
    """Return ``(U, D, V, V_inv)`` with ``U A V = D`` in Smith form.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``; ``U`` and
    ``V`` are unimodular and ``V_inv`` is the inverse of ``V``.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    D = [list(map(int, row)) for row in A]
    U = _identity(m)
    V = _identity(n)
    Vi = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        # inverse update: row_src -= q * row_dst
        vd, vs = Vi[dst], Vi[src]
        for k in range(n):
            if vd[k]:
                vs[k] -= q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                a = D[i][t]
                if a:
                    add_row(i, t, -(a // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                a = D[t][j]
                if a:
                    add_col(j, t, -(a // p))
                    if D[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t + 1, m):
                    a = D[i][t]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, "r")
                for j in range(t + 1, n):
                    a = D[t][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), j, "c")
                if best[0] < abs(p):
                    if best[2] == "r":
                        swap_rows(best[1], t)
                    else:
                        swap_cols(best[1], t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V, Vi


def smith_normal_form(A, ncols=None):
    """Smith normal form ``(U, D, V)`` of an integer matrix, with ``U A V = D``.

    >>> smith_normal_form([[2, 4], [6, 8]])[1]
    [[2, 0], [0, 4]]
    """
    U, D, V, _ = smith_with_inverse(A, ncols)
    return U, D, V


def matmul(A, B):
    """Integer matrix product for lists of rows."""
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(cols)] for row in A]


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
