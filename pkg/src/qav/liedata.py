"""Lie-theoretic constants for the orthogonal series B_n and D_n.

All data is exact: half-integer weights are Fractions, matrices over the
rationals are Fraction-valued, and the q-deformed Gram matrix B(q) and its
inverse live over the Scalar field.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, ScalarError, qint, ONE, ZERO


class LieDataError(ValueError):
    pass


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


class AlgebraData:
    """All constants attached to type B_n (N = 2n+1) or D_n (N = 2n)."""

    def __init__(self, type_: str, rank: int):
        if type_ not in ("B", "D"):
            raise LieDataError(f"unknown type {type_!r}")
        if type_ == "B" and rank < 1:
            raise LieDataError("type B requires rank >= 1")
        if type_ == "D" and rank < 2:
            raise LieDataError("type D requires rank >= 2")
        self.type = type_
        self.n = rank
        n = rank
        self.N = 2 * n + 1 if type_ == "B" else 2 * n
        self.xi = Scalar.q_pow(2 - self.N)

        # orthonormal-basis coordinates of the simple roots
        eps = [
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
            for i in range(n)
        ]
        roots = [
            tuple(a - b for a, b in zip(eps[i], eps[i + 1])) for i in range(n - 1)
        ]
        if type_ == "B":
            roots.append(eps[n - 1])
        else:
            roots.append(tuple(a + b for a, b in zip(eps[n - 2], eps[n - 1])))
        self.epsilon = eps
        self.roots = roots

        self.r = [_dot(a, a) / 2 for a in roots]
        self.qi = [Scalar.q_pow(ri) for ri in self.r]
        self.A = [
            [2 * _dot(roots[i], roots[j]) / _dot(roots[i], roots[i]) for j in range(n)]
            for i in range(n)
        ]
        # B = C A with C = diag(r_i); equivalently B_ij = (alpha_i, alpha_j)
        self.Bmat = [[_dot(roots[i], roots[j]) for j in range(n)] for i in range(n)]
        self.Btilde = _fraction_inverse(self.Bmat)

        if type_ == "B":
            bars = [n - i - Fraction(1, 2) for i in range(n)]
            bars += [Fraction(0)]
            bars += [-b for b in reversed(bars[:n])]
        else:
            bars = [Fraction(n - 1 - i) for i in range(n)]
            bars += [Fraction(0)]
            bars += [-b for b in reversed(bars[: n - 1])]
        assert len(bars) == self.N
        self.bars = bars

    def prime(self, i: int) -> int:
        """The index involution i' = N + 1 - i (1-based)."""
        return self.N + 1 - i

    def bar(self, i: int) -> Fraction:
        """The barred weight of the 1-based index i."""
        return self.bars[i - 1]

    def q_bar_diff(self, i: int, j: int) -> Scalar:
        """q^(bar(i) - bar(j)) as an exact Scalar."""
        return Scalar.q_pow(self.bar(i) - self.bar(j))

    def __str__(self):
        return f"{self.type}{self.n}"

    __repr__ = __str__


def algebra(type_: str, rank: int) -> AlgebraData:
    return AlgebraData(type_, rank)


def _fraction_inverse(m):
    """Exact inverse of a square Fraction matrix by Gauss-Jordan."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LieDataError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def bq_matrix(alg: AlgebraData):
    """The q-deformed Gram matrix B(q) with entries [B_ij]_q (Scalars)."""
    n = alg.n

    def ent(i, j):
        b = alg.Bmat[i][j]
        if b.denominator != 1:
            raise ScalarError("B(q) entries need integer B_ij")
        return qint(int(b)) if b >= 0 else -qint(-int(b))

    return [[ent(i, j) for j in range(n)] for i in range(n)]


def btilde_q_closed_form(alg: AlgebraData):
    """The closed-form entries of the inverse of B(q), as a full symmetric
    matrix of Scalars."""
    n = alg.n
    out = [[None] * n for _ in range(n)]

    def setval(i, j, val):
        out[i - 1][j - 1] = val
        out[j - 1][i - 1] = val

    if alg.type == "B":
        denom = qint(n) - qint(n - 1)
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                if i == n:
                    setval(i, j, qint(j) / denom)
                else:
                    setval(i, j, qint(j) * (qint(n - i) - qint(n - i - 1)) / denom)
    else:
        d1 = qint(2, n - 1)
        d2 = qint(2) * d1
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                if j <= i <= n - 2:
                    setval(i, j, qint(j) * qint(2, n - 1 - i) / d1)
                elif j <= n - 2 and i in (n - 1, n):
                    setval(i, j, qint(j) / d1)
                elif i == j >= n - 1:
                    setval(i, j, qint(n) / d2)
                elif i == n and j == n - 1:
                    setval(i, j, qint(n - 2) / d2)
    return out


def btilde_q(alg: AlgebraData):
    """Exact inverse of B(q), checked entrywise against the closed forms."""
    bq = bq_matrix(alg)
    inv = _scalar_inverse(bq)
    closed = btilde_q_closed_form(alg)
    for i in range(alg.n):
        for j in range(alg.n):
            if not (inv[i][j] - closed[i][j]).is_zero():
                raise LieDataError(
                    f"B~(q) closed form mismatch at ({i + 1},{j + 1}): "
                    f"inverse={inv[i][j]} closed={closed[i][j]}"
                )
    return inv


def _scalar_inverse(m):
    """Exact inverse of a square Scalar matrix by Gauss-Jordan."""
    n = len(m)
    a = [
        [x for x in row] + [ONE if i == j else ZERO for j in range(n)]
        for i, row in enumerate(m)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise LieDataError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pinv = a[col][col].inverse()
        a[col] = [x * pinv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def check_cartan(alg: AlgebraData) -> list:
    """Structural checks on the stored Lie data; returns check dicts."""
    checks = []
    n = alg.n

    def add(name, ok, witness=None):
        item = {"name": name, "status": "pass" if ok else "fail"}
        if not ok and witness is not None:
            item["witness"] = witness
        checks.append(item)

    ok = all(
        alg.A[i][j] == 2 * _dot(alg.roots[i], alg.roots[j]) / _dot(alg.roots[i], alg.roots[i])
        for i in range(n)
        for j in range(n)
    )
    add("Cartan matrix reproduced from root coordinates", ok)

    ok = all(alg.bar(i) + alg.bar(alg.prime(i)) == 0 for i in range(1, alg.N + 1))
    add("bars antisymmetric under the index involution", ok)

    ok = all(alg.prime(alg.prime(i)) == i for i in range(1, alg.N + 1))
    add("index involution squares to the identity", ok)

    prod = [
        [sum(alg.Bmat[i][k] * alg.Btilde[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    ok = all(prod[i][j] == int(i == j) for i in range(n) for j in range(n))
    add("B * B~ = identity over the rationals", ok)

    ok = all(alg.Bmat[i][j] == alg.Bmat[j][i] for i in range(n) for j in range(n))
    add("B symmetric", ok)

    try:
        tq = btilde_q(alg)
        ok = all(
            (tq[i][j] - tq[j][i]).is_zero() for i in range(n) for j in range(n)
        )
        add("B~(q) matches closed form and is symmetric", ok)
    except LieDataError as exc:
        add("B~(q) matches closed form and is symmetric", False, str(exc))
    return checks
