"""Exact arithmetic in the coefficient field Q(s, u, v)[w] / (w^2 - s - 1/s).

Here s stands for q^(1/2), u and v are the two spectral variables, and w is
an adjoined square root of s + 1/s.  Every Scalar is kept in a unique
canonical form: a coprime numerator/denominator pair of integer polynomials
in (s, u, v, w), with the denominator w-free and its leading coefficient
positive, and with every power w^2 rewritten to (s^2 + 1)/s.  Equality is
therefore structural.

The monomial order is graded lexicographic with s < u < v < w; it fixes
which term is "leading" for the sign normalization and the printing order.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import ZZ
from sympy.polys.rings import ring as _mkring

# Generators are declared largest-first, so under grlex: w > v > u > s.
_RING, _W, _V, _U, _S = _mkring("w,v,u,s", ZZ, "grlex")
_ZERO = _RING.zero
_ONE = _RING.one
_S2P1 = _S**2 + 1  # s*(s + 1/s) = s^2 + 1


class ScalarError(ArithmeticError):
    """Raised for invalid field operations (division by zero, bad expansion)."""


def _has_w(p):
    return any(m[0] for m in p.itermonoms())


def _mono_gcd(p, q):
    """gcd when at least one of p, q is a single term."""
    from math import gcd as _igcd

    c = 0
    mins = None
    for poly in (p, q):
        for mon, coef in poly.iterterms():
            c = _igcd(c, int(coef))
            mins = mon if mins is None else tuple(map(min, mins, mon))
    if c == 1 and not any(mins):
        return _ONE
    return _RING.from_dict({mins: c})


def _gcd_fast(p, q):
    """gcd with cheap paths for equal arguments and monomials."""
    if p == q:
        return p if p.LC > 0 else -p
    if len(p) == 1 or len(q) == 1:
        return _mono_gcd(p, q)
    return p.gcd(q)


def _gcd_with_wfree(num, den):
    """gcd of a (possibly w-linear) numerator with a w-free denominator."""
    if not _has_w(num):
        return _gcd_fast(num, den)
    a, b = _w_split(num)
    g = _gcd_fast(b, den)
    if a and g != _ONE:
        g = _gcd_fast(a, g)
    return g


def _div_fast(p, g):
    """Exact division with a cheap path for monomial divisors."""
    if g == _ONE:
        return p
    if len(g) == 1:
        ((gm, gc),) = g.iterterms()
        gc = int(gc)
        return _RING.from_dict(
            {
                tuple(e - ge for e, ge in zip(m, gm)): c // gc
                for m, c in p.iterterms()
            }
        )
    return p.exquo(g)


def _w_reduce(p):
    """Rewrite w^2 -> (s^2+1)/s.  Returns (p2, k) with p == p2 / s^k."""
    kmax = max((m[0] // 2 for m in p.itermonoms()), default=0)
    if kmax == 0:
        return p, 0
    out = _ZERO
    for mon, c in p.iterterms():
        ew, ev, eu, es = mon
        k, r = divmod(ew, 2)
        term = _RING.from_dict({(r, ev, eu, es + kmax - k): c})
        if k:
            term = term * _S2P1**k
        out += term
    return out, kmax


def _w_split(p):
    """Split p (with w-degree <= 1) into (a, b) with p = a + b*w."""
    a, b = _ZERO, _ZERO
    for mon, c in p.iterterms():
        ew, ev, eu, es = mon
        t = _RING.from_dict({(0, ev, eu, es): c})
        if ew:
            b += t
        else:
            a += t
    return a, b


class Scalar:
    """An element of Q(s, u, v)[w]/(w^2 - s - 1/s) in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=_ONE, _normal=False):
        if not _normal:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar(_RING.ground_new(n), _ONE, _normal=True)

    @staticmethod
    def fraction(p: int, q: int) -> "Scalar":
        if q == 0:
            raise ScalarError("fraction: zero denominator")
        return Scalar(_RING.ground_new(p), _RING.ground_new(q))

    @staticmethod
    def s_pow(k: int) -> "Scalar":
        if k >= 0:
            return Scalar(_S**k, _ONE, _normal=True)
        return Scalar(_ONE, _S ** (-k), _normal=True)

    @staticmethod
    def u_pow(k: int) -> "Scalar":
        if k >= 0:
            return Scalar(_U**k, _ONE, _normal=True)
        return Scalar(_ONE, _U ** (-k), _normal=True)

    @staticmethod
    def v_pow(k: int) -> "Scalar":
        if k >= 0:
            return Scalar(_V**k, _ONE, _normal=True)
        return Scalar(_ONE, _V ** (-k), _normal=True)

    @staticmethod
    def w() -> "Scalar":
        return Scalar(_W, _ONE, _normal=True)

    @staticmethod
    def q_pow(r) -> "Scalar":
        """q^r for r an integer or half-integer (q = s^2)."""
        e = Fraction(2) * Fraction(r)
        if e.denominator != 1:
            raise ScalarError(f"q_pow: exponent {r} is not a half-integer")
        return Scalar.s_pow(int(e))

    # -- canonical-form predicates ---------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def w_degree(self) -> int:
        return max((m[0] for m in self.num.itermonoms()), default=0)

    def is_uv_free(self) -> bool:
        return all(
            m[1] == 0 and m[2] == 0
            for p in (self.num, self.den)
            for m in p.itermonoms()
        )

    def is_w_free(self) -> bool:
        return not _has_w(self.num)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar.from_int(x)
        if isinstance(x, Fraction):
            return Scalar.fraction(x.numerator, x.denominator)
        return NotImplemented

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        d1, d2 = self.den, other.den
        if d1 == d2:
            num = self.num + other.num
            if not num:
                return ZERO
            g = _gcd_with_wfree(num, d1)
            if g == _ONE:
                return Scalar(num, d1, _normal=True)
            return Scalar(_div_fast(num, g), _div_fast(d1, g), _normal=True)
        # Knuth's reduced addition: only gcd(t, gcd(d1, d2)) can cancel
        g1 = _gcd_fast(d1, d2)
        if g1 == _ONE:
            num = self.num * d2 + other.num * d1
            if not num:
                return ZERO
            return Scalar(num, d1 * d2, _normal=True)
        d1r = _div_fast(d1, g1)
        d2r = _div_fast(d2, g1)
        t = self.num * d2r + other.num * d1r
        if not t:
            return ZERO
        g2 = _gcd_with_wfree(t, g1)
        if g2 == _ONE:
            return Scalar(t, d1r * d2, _normal=True)
        return Scalar(_div_fast(t, g2), d1r * _div_fast(d2, g2), _normal=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar._coerce(other) - self

    def __neg__(self):
        return Scalar(-self.num, self.den, _normal=True)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if _has_w(self.num) and _has_w(other.num):
            # the product needs w-reduction; take the generic path
            return Scalar(self.num * other.num, self.den * other.den)
        # cross-cancellation keeps the result reduced with small gcds
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d2 != _ONE:
            g = _gcd_with_wfree(n1, d2)
            if g != _ONE:
                n1, d2 = _div_fast(n1, g), _div_fast(d2, g)
        if d1 != _ONE:
            g = _gcd_with_wfree(n2, d1)
            if g != _ONE:
                n2, d1 = _div_fast(n2, g), _div_fast(d1, g)
        num, den = n1 * n2, d1 * d2
        if den.LC < 0:
            num, den = -num, -den
        return Scalar(num, den, _normal=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ScalarError("inverse: division by zero")
        if not _has_w(self.num):
            return Scalar(self.den, self.num)
        a, b = _w_split(self.num)
        conj = a - b * _W
        # (a+bw)(a-bw) = a^2 - b^2 (s + 1/s) = (a^2 s - b^2 (s^2+1)) / s
        newden = a * a * _S - b * b * _S2P1
        return Scalar(self.den * conj * _S, newden)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ScalarError("div: division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- substitution and coefficient extraction --------------------------

    def _subs_var(self, axis: int, t: "Scalar") -> "Scalar":
        """Substitute variable number `axis` (1 = v, 2 = u) by the Scalar t."""
        num = _eval_poly_at(self.num, axis, t)
        den = _eval_poly_at(self.den, axis, t)
        return num / den

    def subs_u(self, t: "Scalar") -> "Scalar":
        return self._subs_var(2, t)

    def subs_v(self, t: "Scalar") -> "Scalar":
        return self._subs_var(1, t)

    def uv_coeffs(self) -> dict:
        """For a Scalar with u,v-free denominator: the map
        (deg_u, deg_v) -> Scalar coefficient (u,v-free)."""
        if any(m[1] or m[2] for m in self.den.itermonoms()):
            raise ScalarError("uv_coeffs: denominator is not u,v-free")
        parts = {}
        for mon, c in self.num.iterterms():
            ew, ev, eu, es = mon
            key = (eu, ev)
            parts[key] = parts.get(key, _ZERO) + _RING.from_dict({(ew, 0, 0, es): c})
        return {
            key: Scalar(p, self.den) for key, p in parts.items() if p
        }

    # -- q-adic expansion --------------------------------------------------

    def qadic_laurent(self, order: int):
        """Expansion of a u,v,w-free Scalar as a Laurent series in q^(-1).

        Returns (lead, coeffs) where the series is
        sum_j coeffs[j] * q^(lead - j), computed through q^(lead - order)
        (i.e. len(coeffs) == order + 1).  Exponents of s must all be even.
        """
        for p in (self.num, self.den):
            for m in p.itermonoms():
                if m[0] or m[1] or m[2]:
                    raise ScalarError("qadic expansion requires a u,v,w-free Scalar")
                if m[3] % 2:
                    raise ScalarError(
                        "qadic expansion requires integer powers of q"
                    )
        if not self.num:
            return 0, [Fraction(0)] * (order + 1)
        num = {m[3] // 2: int(c) for m, c in self.num.iterterms()}
        den = {m[3] // 2: int(c) for m, c in self.den.iterterms()}
        emax_n, emax_d = max(num), max(den)
        lead = emax_n - emax_d
        # In t = 1/q: num = q^emax_n * n(t), den = q^emax_d * d(t), d(0) != 0.
        n = [Fraction(num.get(emax_n - j, 0)) for j in range(order + 1)]
        d = [Fraction(den.get(emax_d - j, 0)) for j in range(order + 1)]
        out = []
        for j in range(order + 1):
            acc = n[j] - sum(d[i] * out[j - i] for i in range(1, j + 1))
            out.append(acc / d[0])
        # strip leading zeros so `lead` is meaningful
        while out[0] == 0 and any(out[1:]):
            out.pop(0)
            out.append(Fraction(0))
            lead -= 1
        return lead, out

    def qadic_expand(self, order: int):
        """First `order`+1 coefficients of the expansion of this Scalar in
        nonnegative powers of q^(-1): [c_0, c_1, ...] with x = sum c_j q^(-j)."""
        lead, coeffs = self.qadic_laurent(order)
        if self.num and lead > 0:
            raise ScalarError(
                f"qadic_expand: expansion has a positive power q^{lead}"
            )
        pad = [Fraction(0)] * (-lead)
        return (pad + coeffs)[: order + 1]

    # -- printing and parsing ---------------------------------------------

    def __str__(self):
        if self.den == _ONE:
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"Scalar({self})"

    @staticmethod
    def parse(text: str) -> "Scalar":
        return _parse_scalar(text)


def _canonicalize(num, den):
    if not den:
        raise ScalarError("zero denominator")
    if _has_w(den):
        raise ScalarError("denominator must be w-free")
    if not num:
        return _ZERO, _ONE
    num, k = _w_reduce(num)
    if k:
        den = den * _S**k
    # cancel the gcd; any common divisor of num and den is w-free,
    # so it divides both the w-free and the w-linear part of num
    g = _gcd_with_wfree(num, den)
    if g != _ONE:
        num = _div_fast(num, g)
        den = _div_fast(den, g)
    if den.LC < 0:
        num, den = -num, -den
    return num, den


def _eval_poly_at(p, axis, t):
    """Evaluate polynomial p at variable `axis` = Scalar t (Horner).
    Returns a Scalar."""
    slices = {}
    for mon, c in p.iterterms():
        e = mon[axis]
        rest = list(mon)
        rest[axis] = 0
        key = tuple(rest)
        sl = slices.setdefault(e, {})
        sl[key] = sl.get(key, 0) + c
    if not slices:
        return ZERO
    exps = sorted(slices, reverse=True)
    acc = ZERO
    prev = None
    for e in exps:
        if prev is not None:
            acc = acc * t ** (prev - e)
        acc = acc + Scalar(_RING.from_dict(slices[e]), _ONE, _normal=True)
        prev = e
    if prev:
        acc = acc * t**prev
    return acc


# -- q-integers ------------------------------------------------------------


def qint(k: int, r=1) -> "Scalar":
    """The q-integer [k]_{q^r} = (q^{rk} - q^{-rk}) / (q^r - q^{-r})."""
    r = Fraction(r)
    if r <= 0:
        raise ScalarError("qint: r must be positive")
    if k < 0:
        return -qint(-k, r)
    out = ZERO
    for j in range(k):
        out = out + Scalar.q_pow(r * (k - 1 - 2 * j))
    return out


def qfact(k: int, r=1) -> "Scalar":
    if k < 0:
        raise ScalarError("qfact: negative argument")
    out = ONE
    for j in range(1, k + 1):
        out = out * qint(j, r)
    return out


def qbinom(k: int, l: int, r=1) -> "Scalar":
    if not 0 <= l <= k:
        raise ScalarError("qbinom: arguments out of range")
    return qfact(k, r) / (qfact(l, r) * qfact(k - l, r))


# -- printing / parsing ----------------------------------------------------

_VAR_NAMES = ("w", "v", "u", "s")


def _mono_str(mon, c):
    factors = []
    for name, e in zip(_VAR_NAMES, mon):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    factors.sort(key=lambda f: "suvw".index(f[0]))
    if not factors:
        return str(abs(c))
    if abs(c) != 1:
        factors.insert(0, str(abs(c)))
    return "*".join(factors)


def _poly_str(p):
    if not p:
        return "0"
    parts = []
    for i, (mon, c) in enumerate(p.terms()):
        sign = "-" if c < 0 else ("+" if i else "")
        parts.append(sign + _mono_str(mon, c))
    return "".join(parts)


def _parse_scalar(text: str) -> Scalar:
    text = text.strip().replace(" ", "")
    if text.startswith("(") and ")/(" in text:
        # split at the top-level ")/("
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    if not text[i + 1 :].startswith("/("):
                        break
                    num = _parse_poly(text[1:i])
                    den = _parse_poly(text[i + 3 : -1])
                    return Scalar(num, den)
    return Scalar(_parse_poly(text), _ONE)


def _parse_poly(text: str):
    if not text:
        raise ScalarError("parse: empty polynomial")
    out = _ZERO
    i, n = 0, len(text)
    while i < n:
        sign = 1
        while i < n and text[i] in "+-":
            if text[i] == "-":
                sign = -sign
            i += 1
        j = i
        while j < n and text[j] not in "+-":
            j += 1
        out += sign * _parse_mono(text[i:j])
        i = j
    return out


def _parse_mono(term: str):
    coeff = 1
    mon = [0, 0, 0, 0]
    for factor in term.split("*"):
        if not factor:
            raise ScalarError(f"parse: bad term {term!r}")
        if factor[0].isdigit():
            coeff *= int(factor)
            continue
        name, _, exp = factor.partition("^")
        if name not in _VAR_NAMES:
            raise ScalarError(f"parse: unknown variable {name!r}")
        mon[_VAR_NAMES.index(name)] += int(exp) if exp else 1
    return _RING.from_dict({tuple(mon): coeff})


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)
