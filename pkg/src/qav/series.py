"""Truncated formal Laurent series in one spectral variable.

A TruncSeries holds coefficients for u^0 .. u^K (direction AT_ZERO) or
u^0 .. u^-K (direction AT_INFINITY).  Coefficients are usually Scalars but
any ring element with +, -, * and is_zero() works, including sparse
matrices, which is how matrix-valued series are represented elsewhere.

The module also hosts the coefficient-recursive solvers that replace the
infinite products of the source formulas: the square-root-scaled functional
equation f(u) f(u xi) = r(u), the prefactor series f(u) and g(u), and the
log-expansion coefficients alpha_r.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, ScalarError, ONE, ZERO

AT_ZERO = "zero"
AT_INFINITY = "infinity"


class SeriesError(ArithmeticError):
    pass


def _is_zero(x) -> bool:
    return x.is_zero()


def _scale_coef(x, frac: Fraction):
    """Multiply a coefficient (Scalar or matrix) by a rational number."""
    c = Scalar.fraction(frac.numerator, frac.denominator)
    if isinstance(x, Scalar):
        return x * c
    return x.scale(c)


class TruncSeries:
    """Truncated series sum_m c_m u^(sign*m), m = 0..order."""

    __slots__ = ("direction", "order", "coeffs")

    def __init__(self, direction, order, coeffs=None):
        if direction not in (AT_ZERO, AT_INFINITY):
            raise SeriesError(f"bad direction {direction!r}")
        if order < 0:
            raise SeriesError("order must be >= 0")
        self.direction = direction
        self.order = order
        self.coeffs = {}
        if coeffs:
            for m, c in coeffs.items():
                if m < 0 or m > order:
                    raise SeriesError(f"coefficient index {m} out of range")
                if not _is_zero(c):
                    self.coeffs[m] = c

    @property
    def sign(self) -> int:
        return 1 if self.direction == AT_ZERO else -1

    @staticmethod
    def constant(c, direction, order) -> "TruncSeries":
        return TruncSeries(direction, order, {0: c})

    @staticmethod
    def one(direction, order) -> "TruncSeries":
        return TruncSeries.constant(ONE, direction, order)

    def get(self, exponent: int):
        """Coefficient of u^exponent (signed); zero coefficients return None."""
        m = exponent * self.sign
        if m < 0 or m > self.order:
            return None
        return self.coeffs.get(m)

    def coefficient(self, exponent: int, zero=ZERO):
        c = self.get(exponent)
        return zero if c is None else c

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.direction != other.direction:
            raise SeriesError("direction mismatch")
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        order = self._check(other)
        out = {}
        for m in range(order + 1):
            a, b = self.coeffs.get(m), other.coeffs.get(m)
            if a is None and b is None:
                continue
            out[m] = b if a is None else (a if b is None else a + b)
        return TruncSeries(self.direction, order, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncSeries(
            self.direction, self.order, {m: -c for m, c in self.coeffs.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        order = self._check(other)
        out = {}
        for ma, ca in self.coeffs.items():
            if ma > order:
                continue
            for mb, cb in other.coeffs.items():
                m = ma + mb
                if m > order:
                    continue
                prod = ca * cb
                acc = out.get(m)
                out[m] = prod if acc is None else acc + prod
        return TruncSeries(self.direction, order, out)

    def scale_coeffs(self, c) -> "TruncSeries":
        """Multiply every coefficient by c on the left."""
        return TruncSeries(
            self.direction, self.order, {m: c * x for m, x in self.coeffs.items()}
        )

    def scale_coeffs_right(self, c) -> "TruncSeries":
        return TruncSeries(
            self.direction, self.order, {m: x * c for m, x in self.coeffs.items()}
        )

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs.get(0)
        if c0 is None:
            raise SeriesError("inverse: constant term is zero")
        b0 = c0.inverse()
        out = {0: b0}
        for m in range(1, self.order + 1):
            acc = None
            for j in range(1, m + 1):
                cj = self.coeffs.get(j)
                bj = out.get(m - j)
                if cj is None or bj is None:
                    continue
                term = cj * bj
                acc = term if acc is None else acc + term
            if acc is not None:
                out[m] = -(b0 * acc)
        return TruncSeries(self.direction, self.order, out)

    def scale_arg(self, c: Scalar) -> "TruncSeries":
        """Substitute u -> c*u for an invertible Scalar c."""
        pows = {0: ONE}
        out = {}
        cinv = None
        for m, x in self.coeffs.items():
            e = m * self.sign
            if e >= 0:
                p = c**e
            else:
                if cinv is None:
                    cinv = c.inverse()
                p = cinv ** (-e)
            if isinstance(x, Scalar):
                out[m] = x * p
            else:
                out[m] = x.scale(p)
        return TruncSeries(self.direction, self.order, out)

    def truncate(self, order: int) -> "TruncSeries":
        if order >= self.order:
            return self
        return TruncSeries(
            self.direction, order, {m: c for m, c in self.coeffs.items() if m <= order}
        )

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.direction != other.direction or self.order != other.order:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        for m in keys:
            a = self.coeffs.get(m)
            b = other.coeffs.get(m)
            if a is None or b is None:
                if not (a is None and b is None):
                    return False
            elif not _is_zero(a - b):
                return False
        return True

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            e = m * self.sign
            head = "1" if e == 0 else ("u" if e == 1 else f"u^{e}")
            parts.append(f"({self.coeffs[m]}) * {head}")
        return " + ".join(parts)

    __repr__ = __str__


def expand_scalar(x: Scalar, direction, order) -> TruncSeries:
    """Expand a Scalar, rational in u, as a TruncSeries in the given direction.

    AT_ZERO requires the denominator not to vanish at u = 0; AT_INFINITY
    requires deg_u(num) <= deg_u(den) plus an invertible leading u-block.
    """
    num = _u_slices(x.num, x.den)
    den = _u_slices(x.den, x.den)
    if direction == AT_ZERO:
        if 0 not in den:
            raise SeriesError("expand_scalar: denominator vanishes at u=0")
        nn, dd = num, den
    else:
        dn = max(den)
        dnum = max(num, default=0)
        if num and dnum > dn:
            raise SeriesError("expand_scalar: no expansion at infinity")
        nn = {dn - e: c for e, c in num.items()}
        dd = {dn - e: c for e, c in den.items()}
        if 0 not in dd:
            raise SeriesError("expand_scalar: denominator degenerate at infinity")
    d0inv = dd[0].inverse()
    out = {}
    for m in range(order + 1):
        acc = nn.get(m, ZERO)
        for j in range(1, m + 1):
            dj = dd.get(j)
            bj = out.get(m - j)
            if dj is None or bj is None:
                continue
            acc = acc - dj * bj
        c = acc * d0inv
        if not c.is_zero():
            out[m] = c
    return TruncSeries(direction, order, out)


def _u_slices(p, den):
    """Split polynomial p by u-degree into u-free Scalars p_e (dividing by
    nothing; coefficients are raw polynomial Scalars)."""
    from .scalars import _RING  # noqa: internal ring access

    slices = {}
    for mon, c in p.iterterms():
        ew, ev, eu, es = mon
        sl = slices.setdefault(eu, {})
        key = (ew, ev, 0, es)
        sl[key] = sl.get(key, 0) + c
    return {
        e: Scalar(_RING.from_dict(sl))
        for e, sl in slices.items()
        if any(sl.values())
    }


def series_log(f: TruncSeries, one=ONE) -> TruncSeries:
    """log of a series whose constant term is the ring one."""
    c0 = f.coeffs.get(0)
    if c0 is None or not (c0 - one).is_zero():
        raise SeriesError("series_log: constant term must be 1")
    x = TruncSeries(f.direction, f.order, dict(f.coeffs))
    x.coeffs.pop(0, None)
    out = TruncSeries(f.direction, f.order)
    power = TruncSeries.constant(one, f.direction, f.order)
    for m in range(1, f.order + 1):
        power = power * x
        if power.is_zero():
            break
        out = out + TruncSeries(
            f.direction,
            f.order,
            {
                k: _scale_coef(c, Fraction((-1) ** (m + 1), m))
                for k, c in power.coeffs.items()
            },
        )
    return out


def series_exp(g: TruncSeries, one=ONE) -> TruncSeries:
    """exp of a series with zero constant term."""
    if g.coeffs.get(0) is not None:
        raise SeriesError("series_exp: constant term must be 0")
    out = TruncSeries.constant(one, g.direction, g.order)
    power = TruncSeries.constant(one, g.direction, g.order)
    fact = 1
    for m in range(1, g.order + 1):
        power = power * g
        if power.is_zero():
            break
        fact *= m
        out = out + TruncSeries(
            g.direction,
            g.order,
            {k: _scale_coef(c, Fraction(1, fact)) for k, c in power.coeffs.items()},
        )
    return out


def solve_sqrt_scaled(r: TruncSeries, xi: Scalar, order=None) -> TruncSeries:
    """Solve f(u) f(u xi) = r(u) for f with f(0) = 1.

    Coefficientwise: f_k (1 + xi^k) = r_k - sum_{a+b=k, 0<a,b<k} f_a f_b xi^b.
    """
    if r.direction != AT_ZERO:
        raise SeriesError("solve_sqrt_scaled expects a series at zero")
    K = r.order if order is None else min(order, r.order)
    r0 = r.coeffs.get(0)
    if r0 is None or not r0.is_one():
        raise SeriesError("solve_sqrt_scaled: r(0) must be 1")
    xipow = [ONE]
    for k in range(1, K + 1):
        xipow.append(xipow[-1] * xi)
    f = {0: ONE}
    for k in range(1, K + 1):
        pivot = ONE + xipow[k]
        if pivot.is_zero():
            raise SeriesError(f"solve_sqrt_scaled: pivot 1 + xi^{k} vanishes")
        acc = r.coefficient(k)
        for a in range(1, k):
            b = k - a
            fa, fb = f.get(a), f.get(b)
            if fa is None or fb is None:
                continue
            acc = acc - fa * fb * xipow[b]
        f[k] = acc / pivot
    return TruncSeries(AT_ZERO, K, {m: c for m, c in f.items() if not c.is_zero()})


def f_series(alg, order: int) -> TruncSeries:
    """The normalizing series f(u): the unique solution with f(0)=1 of
    f(u) f(u xi) = 1/((1-u q^-2)(1-u q^2)(1-u xi)(1-u xi^-1))."""
    u = Scalar.u_pow(1)
    prod = (
        (ONE - u * Scalar.q_pow(-2))
        * (ONE - u * Scalar.q_pow(2))
        * (ONE - u * alg.xi)
        * (ONE - u * alg.xi.inverse())
    )
    r = expand_scalar(prod.inverse(), AT_ZERO, order)
    return solve_sqrt_scaled(r, alg.xi, order)


def g_series(alg, order: int) -> TruncSeries:
    """g(u) = f(u) (u - q^-2)(u - xi)."""
    u = Scalar.u_pow(1)
    poly = (u - Scalar.q_pow(-2)) * (u - alg.xi)
    return f_series(alg, order) * expand_scalar(poly, AT_ZERO, order)


def alpha_series(alg, c: int, order: int) -> TruncSeries:
    """The coefficients alpha_r defined by
    exp sum_r alpha_r u^r = g(u q^-c) / g(u q^c); returned as a series with
    alpha_r in the u^r slot (alpha_0 = 0)."""
    g = g_series(alg, order)
    ratio = g.scale_arg(Scalar.q_pow(-c)) * g.scale_arg(Scalar.q_pow(c)).inverse()
    return series_log(ratio)


def verify_fu_product(alg, order_u: int, order_qadic: int) -> dict:
    """Compare the functional-equation solution f(u) against the truncated
    infinite product, coefficient by coefficient, in the q^(-1)-adic
    completion through order `order_qadic`.

    The product is cut at the smallest depth R such that every dropped
    factor can only contribute beyond the comparison order.
    """
    Nm2 = alg.N - 2
    if Nm2 <= 0:
        raise SeriesError("verify_fu_product needs N >= 3")
    R = 1
    while Nm2 * (2 * R + 1 - order_u) <= order_qadic:
        R += 1
    u = Scalar.u_pow(1)
    q2 = Scalar.q_pow(2)
    q2i = Scalar.q_pow(-2)
    xi = alg.xi

    def xipow(k):
        return xi**k if k >= 0 else xi.inverse() ** (-k)

    prod = ONE
    nfactors = 0
    for r in range(R + 1):
        num = (
            (ONE - u * xipow(2 * r))
            * (ONE - u * q2i * xipow(2 * r + 1))
            * (ONE - u * q2 * xipow(2 * r + 1))
            * (ONE - u * xipow(2 * r + 2))
        )
        den = (
            (ONE - u * xipow(2 * r - 1))
            * (ONE - u * xipow(2 * r + 1))
            * (ONE - u * q2 * xipow(2 * r))
            * (ONE - u * q2i * xipow(2 * r))
        )
        prod = prod * (num / den)
        nfactors += 8
    product_side = expand_scalar(prod, AT_ZERO, order_u)
    solver_side = f_series(alg, order_u)

    checks = []
    for k in range(order_u + 1):
        a = solver_side.coefficient(k)
        b = product_side.coefficient(k)
        la, ca = a.qadic_laurent(order_qadic)
        lb, cb = b.qadic_laurent(order_qadic)
        # align the two Laurent windows and compare through q^(-order_qadic)
        ok, witness = True, None
        lo = -order_qadic
        for e in range(max(la, lb), lo - 1, -1):
            va = ca[la - e] if 0 <= la - e <= order_qadic else Fraction(0)
            vb = cb[lb - e] if 0 <= lb - e <= order_qadic else Fraction(0)
            if va != vb:
                ok = False
                witness = {"q_exponent": e, "solver": str(va), "product": str(vb)}
                break
        checks.append(
            {
                "name": f"f_{k} q-adic match",
                "status": "pass" if ok else "fail",
                **({"witness": witness} if witness else {}),
            }
        )
    return {
        "product_depth": R,
        "factor_count": nfactors,
        "qadic_direction": "expansion in powers of 1/q (|q| large)",
        "checks": checks,
    }
