"""Integer matrices, Smith normal form, and p-adic elementary divisors.

The exact SNF works over Z with unimodular transforms (U * M * V = D);
pivoting always picks the smallest nonzero absolute value, scanning rows
then columns, so the transforms are reproducible.  The mod-p**M variant
returns only the p-adic valuations of the elementary divisors together
with a certification flag (False when the working precision cannot
separate a divisor from zero).
"""

from __future__ import annotations


class IntegerMatrix:
    """A dense matrix of exact integers (row-major list of lists)."""

    def __init__(self, entries: list[list[int]]):
        if entries:
            width = len(entries[0])
            if any(len(row) != width for row in entries):
                raise ValueError("ragged rows")
        self.entries = [list(row) for row in entries]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerMatrix) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.entries!r})"

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = [
            [
                sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                for j in range(other.cols)
            ]
            for i in range(self.rows)
        ]
        return IntegerMatrix(out)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        # fraction-free Gaussian elimination (Bareiss)
        n = self.rows
        m = [row[:] for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


def _pivot(m: list[list[int]], start: int) -> tuple[int, int] | None:
    best = None
    best_val = None
    for i in range(start, len(m)):
        for j in range(start, len(m[0])):
            v = abs(m[i][j])
            if v and (best_val is None or v < best_val):
                best, best_val = (i, j), v
    return best


def smith_normal_form(
    matrix: IntegerMatrix,
) -> tuple[list[int], IntegerMatrix, IntegerMatrix]:
    """Smith normal form over Z.

    Returns (diag, U, V) with U * matrix * V diagonal, diag[i] | diag[i+1],
    all diag[i] >= 0, and U, V unimodular.
    """
    m = [row[:] for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    u = IntegerMatrix.identity(rows).entries
    v = IntegerMatrix.identity(cols).entries

    def row_op(i, k, q):  # row i -= q * row k
        m[i] = [a - q * b for a, b in zip(m[i], m[k])]
        u[i] = [a - q * b for a, b in zip(u[i], u[k])]

    def col_op(j, k, q):  # col j -= q * col k
        for r in m:
            r[j] -= q * r[k]
        for r in v:
            r[j] -= q * r[k]

    def swap_rows(i, k):
        m[i], m[k] = m[k], m[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in m:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        piv = _pivot(m, t)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    row_op(i, t, q)
                    if m[i][t]:
                        swap_rows(i, t)
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    col_op(j, t, q)
                    if m[t][j]:
                        swap_cols(j, t)
                        done = False
            if done:
                break
        # enforce divisibility of the trailing block by the pivot
        p = m[t][t]
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            # fold the offending row into row t and redo this pivot
            m[t] = [a + b for a, b in zip(m[t], m[bad])]
            u[t] = [a + b for a, b in zip(u[t], u[bad])]
            continue
        t += 1

    diag = []
    for i in range(limit):
        d = m[i][i]
        if d < 0:
            d = -d
            m[i] = [-x for x in m[i]]
            u[i] = [-x for x in u[i]]
        diag.append(d)
    return diag, IntegerMatrix(u), IntegerMatrix(v)


def elementary_divisor_valuations(
    rows: list[list[int]], p: int, precision: int
) -> tuple[list[int], bool]:
    """p-adic valuations of the elementary divisors of an integer matrix.

    Entries are interpreted modulo p**precision.  Returns (valuations,
    certified); certified is False when some divisor could not be separated
    from zero at this precision (its valuation is then reported as
    `precision`, a lower bound).
    """
    mod = p**precision
    m = [[x % mod for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    vals: list[int] = []
    certified = True
    t = 0
    rank_cap = min(nrows, ncols)

    def pval(x: int) -> int:
        if x % mod == 0:
            return precision
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    while t < rank_cap:
        best = None
        best_v = precision
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = pval(m[i][j])
                if v < best_v:
                    best, best_v = (i, j), v
        if best is None:
            # all remaining entries vanish mod p^precision
            vals.extend([precision] * (rank_cap - t))
            certified = False
            break
        pi, pj = best
        m[t], m[pi] = m[pi], m[t]
        for r in m:
            r[t], r[pj] = r[pj], r[t]
        unit = m[t][t] // p**best_v
        inv_unit = pow(unit, -1, mod)
        for i in range(t + 1, nrows):
            if m[i][t]:
                q = (m[i][t] // p**best_v) * inv_unit % mod
                m[i] = [(a - q * b) % mod for a, b in zip(m[i], m[t])]
        for j in range(t + 1, ncols):
            if m[t][j]:
                q = (m[t][j] // p**best_v) * inv_unit % mod
                for r in m:
                    r[j] = (r[j] - q * r[t]) % mod
        vals.append(best_v)
        t += 1
    return vals, certified
