"""The N-dimensional vector representation of the Drinfeld generators for
types B and D, as explicit exact matrices, plus a modewise checker for the
defining relations (the central charge acts by 0 here, so q^(c/2) maps to 1).

Generator indices i are 1-based (1..n); mode indices k range over the
integers (k != 0 for the a-generators).  Matrix rows/columns are the
standard basis vectors 1..N, stored 0-based in SparseMat.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, qint, qbinom, ONE
from .series import TruncSeries, AT_ZERO, AT_INFINITY, series_exp
from .tensor import SparseMat


class VecRepError(ValueError):
    pass


def _unit(N, i, j, val):
    """val * e_ij with 1-based matrix-unit indices."""
    return SparseMat(N, N, {i - 1: {j - 1: val}})


def _check_index(alg, i):
    if not 1 <= i <= alg.n:
        raise VecRepError(f"generator index {i} out of range for {alg}")


def _qp(e):
    return Scalar.q_pow(e)


def x_plus(alg, i, k) -> SparseMat:
    _check_index(alg, i)
    n, N = alg.n, alg.N
    if i < n:
        return _unit(N, i + 1, i, -_qp(-i * k)) + _unit(
            N, alg.prime(i), alg.prime(i + 1), _qp(-(N - 2 - i) * k)
        )
    if alg.type == "B":
        w = Scalar.w()
        return _unit(N, n + 1, n, -w * _qp(-n * k)) + _unit(
            N, alg.prime(n), n + 1, w * _qp(-(n - 1) * k)
        )
    c = _qp(-(n - 1) * k)
    return _unit(N, n + 1, n - 1, -c) + _unit(N, n + 2, n, c)


def x_minus(alg, i, k) -> SparseMat:
    _check_index(alg, i)
    n, N = alg.n, alg.N
    if i < n:
        return _unit(N, i, i + 1, -_qp(-i * k)) + _unit(
            N, alg.prime(i + 1), alg.prime(i), _qp(-(N - 2 - i) * k)
        )
    if alg.type == "B":
        w = Scalar.w()
        return _unit(N, n, n + 1, -w * _qp(-n * k)) + _unit(
            N, n + 1, alg.prime(n), w * _qp(-(n - 1) * k)
        )
    c = _qp(-(n - 1) * k)
    return _unit(N, n - 1, n + 1, -c) + _unit(N, n, n + 2, c)


def a_gen(alg, i, k) -> SparseMat:
    _check_index(alg, i)
    if k == 0:
        raise VecRepError("a-generator needs a nonzero mode")
    n, N = alg.n, alg.N
    if i < n:
        coef = qint(k, alg.r[i - 1]) * Scalar.fraction(1, k)
        out = (
            _unit(N, i + 1, i + 1, _qp(-i * k - k))
            + _unit(N, i, i, -_qp(-i * k + k))
            + _unit(N, alg.prime(i), alg.prime(i), _qp(-(N - 2 - i) * k - k))
            + _unit(
                N, alg.prime(i + 1), alg.prime(i + 1), -_qp(-(N - 2 - i) * k + k)
            )
        )
        return out.scale(coef)
    if alg.type == "B":
        coef = qint(2 * k, alg.r[n - 1]) * Scalar.fraction(1, k)
        out = (
            _unit(N, n, n, -_qp(-(n - 1) * k))
            + _unit(N, n + 1, n + 1, _qp(-n * k) - _qp(-(n - 1) * k))
            + _unit(N, alg.prime(n), alg.prime(n), _qp(-n * k))
        )
        return out.scale(coef)
    coef = qint(k, alg.r[n - 1]) * Scalar.fraction(1, k) * _qp(-(n - 1) * k)
    out = (
        _unit(N, n + 1, n + 1, _qp(-k))
        + _unit(N, n + 2, n + 2, _qp(-k))
        + _unit(N, n - 1, n - 1, -_qp(k))
        + _unit(N, n, n, -_qp(k))
    )
    return out.scale(coef)


def k_cartan(alg, i, inv=False) -> SparseMat:
    _check_index(alg, i)
    n, N = alg.n, alg.N
    e = -1 if inv else 1
    if i < n:
        up = {i + 1, alg.prime(i)}
        down = {i, alg.prime(i + 1)}
    elif alg.type == "B":
        up = {alg.prime(n)}
        down = {n}
    else:
        up = {n + 1, n + 2}
        down = {n - 1, n}
    rows = {}
    for j in range(1, N + 1):
        if j in up:
            val = _qp(e)
        elif j in down:
            val = _qp(-e)
        else:
            val = ONE
        rows[j - 1] = {j - 1: val}
    return SparseMat(N, N, rows)


def pi_v(alg, kind, i=None, k=None) -> SparseMat:
    """Dispatcher over generator kinds: xplus, xminus, a, k, kinv, qc."""
    if kind == "qc":
        return SparseMat.identity(alg.N)
    if kind == "xplus":
        return x_plus(alg, i, k)
    if kind == "xminus":
        return x_minus(alg, i, k)
    if kind == "a":
        return a_gen(alg, i, k)
    if kind == "k":
        return k_cartan(alg, i)
    if kind == "kinv":
        return k_cartan(alg, i, inv=True)
    raise VecRepError(f"unknown generator kind {kind!r}")


def psi_phi_modes(alg, i, maxmode):
    """The modewise images of psi_i and phi_i.

    Returns (psi, phi): psi[t] is the image of the u^-t coefficient of
    psi_i(u) = k_i exp((q_i - 1/q_i) sum_{s>=1} a_{i,s} u^-s), and phi[t]
    the image of the u^t coefficient of
    phi_i(u) = 1/k_i exp(-(q_i - 1/q_i) sum_{s>=1} a_{i,-s} u^s),
    for t = 0..maxmode.
    """
    _check_index(alg, i)
    N = alg.N
    qdiff = alg.qi[i - 1] - alg.qi[i - 1].inverse()
    ident = SparseMat.identity(N)
    gplus = TruncSeries(
        AT_INFINITY,
        maxmode,
        {s: a_gen(alg, i, s).scale(qdiff) for s in range(1, maxmode + 1)},
    )
    gminus = TruncSeries(
        AT_ZERO,
        maxmode,
        {s: a_gen(alg, i, -s).scale(-qdiff) for s in range(1, maxmode + 1)},
    )
    ki = k_cartan(alg, i)
    kinv = k_cartan(alg, i, inv=True)
    ep = series_exp(gplus, one=ident)
    em = series_exp(gminus, one=ident)
    zero = SparseMat.zeros(N, N)
    psi = [ki * ep.coeffs.get(t, zero) for t in range(maxmode + 1)]
    phi = [kinv * em.coeffs.get(t, zero) for t in range(maxmode + 1)]
    return psi, phi


def _comm(a, b):
    return a * b - b * a


def check_drinfeld_window(alg, window=3) -> list:
    """Verify every defining relation of the presentation modewise, for all
    mode indices bounded by the window, as exact matrix identities in the
    vector representation (central charge 0)."""
    if window < 1:
        raise VecRepError("window must be >= 1")
    n, N = alg.n, alg.N
    W = window
    modes = range(-W, W + 1)
    amodes = [m for m in modes if m != 0]
    reports = []

    def run(name, instances):
        count = 0
        witness = None
        for label, diff in instances:
            count += 1
            if witness is None and not diff.is_zero():
                r, c, v = diff.first_nonzero()
                witness = {"instance": label, "row": r, "col": c, "value": str(v)}
        reports.append(
            {
                "name": f"{name}, {alg} (window {W})",
                "status": "fail" if witness else "pass",
                "instances": count,
                **({"witness": witness} if witness else {}),
            }
        )

    ks = {i: k_cartan(alg, i) for i in range(1, n + 1)}
    kinvs = {i: k_cartan(alg, i, inv=True) for i in range(1, n + 1)}
    ident = SparseMat.identity(N)

    run(
        "k_i k_i^-1 = 1",
        ((f"i={i}", ks[i] * kinvs[i] - ident) for i in range(1, n + 1)),
    )
    run(
        "k_i k_j = k_j k_i",
        (
            (f"i={i},j={j}", _comm(ks[i], ks[j]))
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        ),
    )
    run(
        "k_i a_{j,m} = a_{j,m} k_i",
        (
            (f"i={i},j={j},m={m}", _comm(ks[i], a_gen(alg, j, m)))
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            for m in amodes
        ),
    )

    def k_conj():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for m in modes:
                    for sgn, xf in ((1, x_plus), (-1, x_minus)):
                        x = xf(alg, j, m)
                        aij = int(alg.A[i - 1][j - 1])
                        coef = alg.qi[i - 1] ** (sgn * aij)
                        diff = ks[i] * x * kinvs[i] - x.scale(coef)
                        yield f"i={i},j={j},m={m},sign={sgn:+d}", diff

    run("k_i x_{j,m} k_i^-1 = q_i^(+-A_ij) x_{j,m}", k_conj())

    run(
        "[a_{i,m}, a_{j,l}] = 0 (central charge 0)",
        (
            (
                f"i={i},j={j},m={m},l={l}",
                _comm(a_gen(alg, i, m), a_gen(alg, j, l)),
            )
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            for m in amodes
            for l in amodes
        ),
    )

    def a_x():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                aij = int(alg.A[i - 1][j - 1])
                for m in amodes:
                    coef = qint(m * aij, alg.r[i - 1]) * Scalar.fraction(1, m)
                    for l in modes:
                        for sgn, xf in ((1, x_plus), (-1, x_minus)):
                            lhs = _comm(a_gen(alg, i, m), xf(alg, j, l))
                            rhs = xf(alg, j, m + l).scale(
                                coef if sgn > 0 else -coef
                            )
                            yield f"i={i},j={j},m={m},l={l},sign={sgn:+d}", lhs - rhs

    run("[a_{i,m}, x_{j,l}] = +-([m A_ij]_{q_i}/m) x_{j,m+l}", a_x())

    def quadratic():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                aij = int(alg.A[i - 1][j - 1])
                for sgn, xf in ((1, x_plus), (-1, x_minus)):
                    coef = alg.qi[i - 1] ** (sgn * aij)
                    for m in range(-W, W):
                        xi1 = xf(alg, i, m + 1)
                        xi0 = xf(alg, i, m)
                        for l in modes:
                            xj0 = xf(alg, j, l)
                            xj1 = xf(alg, j, l + 1)
                            lhs = xi1 * xj0 - (xj0 * xi1).scale(coef)
                            rhs = (xi0 * xj1).scale(coef) - xj1 * xi0
                            yield f"i={i},j={j},m={m},l={l},sign={sgn:+d}", lhs - rhs

    run("quadratic x-x relation", quadratic())

    psis = {}
    phis = {}
    for i in range(1, n + 1):
        psis[i], phis[i] = psi_phi_modes(alg, i, 2 * W)

    def x_mixed():
        zero = SparseMat.zeros(N, N)
        for i in range(1, n + 1):
            qdinv = (alg.qi[i - 1] - alg.qi[i - 1].inverse()).inverse()
            for j in range(1, n + 1):
                for m in modes:
                    for l in modes:
                        lhs = _comm(x_plus(alg, i, m), x_minus(alg, j, l))
                        if i != j:
                            yield f"i={i},j={j},m={m},l={l}", lhs
                            continue
                        t = m + l
                        psi_t = psis[i][t] if t >= 0 else zero
                        phi_t = phis[i][-t] if t <= 0 else zero
                        rhs = (psi_t - phi_t).scale(qdinv)
                        yield f"i={i},j={j},m={m},l={l}", lhs - rhs

    run("[x+_{i,m}, x-_{j,l}] = delta_ij (psi - phi)/(q_i - 1/q_i)", x_mixed())

    def serre():
        from itertools import permutations, product

        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                r = 1 - int(alg.A[i - 1][j - 1])
                binoms = [qbinom(r, l, alg.r[i - 1]) for l in range(r + 1)]
                for shape in product(range(-W, W + 1), repeat=r + 1):
                    if sum(abs(s) for s in shape) > W:
                        continue
                    s, m = shape[:r], shape[r]
                    xi = [x_plus(alg, i, sk) for sk in s]
                    xj = x_plus(alg, j, m)
                    xim = [x_minus(alg, i, sk) for sk in s]
                    xjm = x_minus(alg, j, m)
                    for sign, xs, xo in ((1, xi, xj), (-1, xim, xjm)):
                        acc = None
                        for perm in permutations(range(r)):
                            for l in range(r + 1):
                                term = None
                                for p in perm[:l]:
                                    term = xs[p] if term is None else term * xs[p]
                                term = xo if term is None else term * xo
                                for p in perm[l:]:
                                    term = term * xs[p]
                                term = term.scale(
                                    -binoms[l] if l % 2 else binoms[l]
                                )
                                acc = term if acc is None else acc + term
                        yield f"i={i},j={j},s={s},m={m},sign={sign:+d}", acc

    run("Serre relations", serre())

    def w_structure():
        w_deg = 1 if alg.type == "B" else 0
        for m in modes:
            for label, xf in (("x+", x_plus), ("x-", x_minus)):
                x = xf(alg, n, m)
                ok = all(v.w_degree() == w_deg for _, _, v in x.entries())
                yield f"{label}_{{{n},{m}}}", (
                    SparseMat.zeros(N, N) if ok else x
                )
        for i in range(1, n + 1):
            for m in amodes:
                mats = [a_gen(alg, i, m), ks[i]]
                if i < n:
                    mats += [x_plus(alg, i, m), x_minus(alg, i, m)]
                bad = any(
                    v.w_degree() != 0 for mm in mats for _, _, v in mm.entries()
                )
                yield f"w-free i={i},m={m}", (
                    mats[0] if bad else SparseMat.zeros(N, N)
                )

    run("w-factor structure of the images", w_structure())
    return reports
