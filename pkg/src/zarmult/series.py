"""Truncated Puiseux series in ``t^(1/m)`` over an exact coefficient domain.

A series stores integer keys ``k`` standing for the exponent ``k/m`` and a
truncation order ``O``: every exponent below ``O`` is known exactly, nothing
is known at or above it.  ``O = inf`` marks an exact (finite) series.

Truncation propagates as follows::

    O(a + b) = min(O(a), O(b))
    O(a * b) = min(v(a) + O(b), v(b) + O(a))

where ``v`` is the valuation, or the truncation order for a series that is
zero to working precision.  Coefficients may themselves be series in another
variable, which gives the towers ``K0 < K1 < K2 < K3``.

Rendering follows a fixed grammar: terms ``c*t^(a/b)`` (the constant term
as ``c`` alone) in increasing exponent order joined by `` + `` / `` - ``,
then `` + O(t^(c/d))`` when the order is finite.
"""

import math
from fractions import Fraction

from .errors import (DomainMismatchError, InvalidInputError, NotInvertibleError,
                     PrecisionInsufficientError, ResourceLimitError)
from .fields import QQ

INF = math.inf
DEFAULT_TERMS = 16
MAX_TOWER_DEPTH = 3


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _frac(q):
    return q if q == INF else Fraction(q)


class SeriesDomain:
    """Coefficient domain whose elements are series in ``var`` over ``base``."""

    is_finite = False
    degree = 1

    def __init__(self, base=QQ, var="t"):
        if tower_depth(base) + 1 > MAX_TOWER_DEPTH:
            raise ResourceLimitError(f"series tower deeper than {MAX_TOWER_DEPTH}")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self.zero = PuiseuxSeries({}, domain=base, var=var)
        self.one = PuiseuxSeries({0: base.one}, domain=base, var=var)

    def convert(self, x):
        if isinstance(x, PuiseuxSeries) and x.var == self.var:
            if x.domain != self.base:
                raise DomainMismatchError(f"series over {x.domain!r}, expected {self.base!r}")
            return x
        return PuiseuxSeries({0: self.base.convert(x)}, domain=self.base, var=self.var)

    def from_fraction(self, q):
        return self.convert(self.base.from_fraction(q))

    def gen(self):
        return PuiseuxSeries({1: self.base.one}, domain=self.base, var=self.var)

    def pth_root(self, a):
        return a.pth_root()

    def __eq__(self, other):
        return isinstance(other, SeriesDomain) and other.var == self.var and other.base == self.base

    def __hash__(self):
        return hash(("series", self.var, self.base))

    def __repr__(self):
        return f"SeriesDomain({self.base!r}, {self.var!r})"


def tower_depth(domain):
    d = 0
    while isinstance(domain, SeriesDomain):
        d += 1
        domain = domain.base
    return d


class PuiseuxSeries:
    __slots__ = ("ramification", "coeffs", "order", "domain", "var")

    def __init__(self, coeffs, ramification=1, order=INF, domain=QQ, var="t"):
        m = ramification
        if m < 1:
            raise InvalidInputError("ramification must be a positive integer")
        order = _frac(order)
        if order != INF and (order * m).denominator != 1:
            m2 = _lcm(m, order.denominator)
            f = m2 // m
            coeffs = {k * f: c for k, c in coeffs.items()}
            m = m2
        self.ramification = m
        self.order = order
        self.domain = domain
        self.var = var
        self.coeffs = {k: c for k, c in coeffs.items()
                       if c and (order == INF or Fraction(k, m) < order)}

    # construction ------------------------------------------------------

    @classmethod
    def from_terms(cls, terms, order=INF, domain=QQ, var="t"):
        """Build from ``{exponent: coefficient}`` with rational exponents."""
        m = 1
        for q in terms:
            m = _lcm(m, Fraction(q).denominator)
        coeffs = {}
        for q, c in terms.items():
            k = int(Fraction(q) * m)
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        return cls(coeffs, m, order, domain, var)

    @classmethod
    def monomial(cls, exponent, coeff=None, domain=QQ, var="t", order=INF):
        c = domain.one if coeff is None else domain.convert(coeff)
        return cls.from_terms({Fraction(exponent): c}, order, domain, var)

    def _like(self, coeffs, m=None, order=None):
        return PuiseuxSeries(coeffs, self.ramification if m is None else m,
                             self.order if order is None else order, self.domain, self.var)

    def rekey(self, m):
        """Coefficient map re-expressed over ramification ``m`` (a multiple of ours)."""
        f, r = divmod(m, self.ramification)
        if r:
            raise InvalidInputError(f"{m} is not a multiple of {self.ramification}")
        return {k * f: c for k, c in self.coeffs.items()}

    def normalize(self):
        """Same series with the smallest admissible ramification index."""
        g = 0
        for k in self.coeffs:
            g = math.gcd(g, k)
        g = math.gcd(g, self.ramification)
        if self.order != INF:
            g = math.gcd(g, int(self.order * self.ramification))
        if g <= 1:
            return self
        return PuiseuxSeries({k // g: c for k, c in self.coeffs.items()},
                             self.ramification // g, self.order, self.domain, self.var)

    # inspection ------------------------------------------------------------

    def terms(self):
        return {Fraction(k, self.ramification): c for k, c in sorted(self.coeffs.items())}

    def valuation(self):
        if not self.coeffs:
            return INF
        return Fraction(min(self.coeffs), self.ramification)

    def val_bound(self):
        """Valuation, or the truncation order when nothing survives."""
        return self.valuation() if self.coeffs else self.order

    @property
    def is_exact(self):
        return self.order == INF

    @property
    def level(self):
        return tower_depth(self.domain) + 1

    def coefficient(self, q):
        q = Fraction(q)
        if self.order != INF and q >= self.order:
            raise PrecisionInsufficientError(
                f"coefficient of {self.var}^({q}) lies beyond O({self.var}^({self.order}))")
        k = q * self.ramification
        if k.denominator != 1:
            return self.domain.zero
        return self.coeffs.get(int(k), self.domain.zero)

    def residue(self):
        v = self.val_bound()
        if v < 0:
            raise InvalidInputError("residue of a series with negative valuation")
        return self.coefficient(0)

    def leading_coefficient(self):
        if not self.coeffs:
            raise PrecisionInsufficientError("series is zero to working precision")
        return self.coeffs[min(self.coeffs)]

    def __bool__(self):
        return bool(self.coeffs)

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PuiseuxSeries) and other.var == self.var:
            if other.domain != self.domain:
                raise DomainMismatchError(f"series over {other.domain!r} and {self.domain!r}")
            return other
        try:
            c = self.domain.convert(other)
        except (DomainMismatchError, TypeError):
            return None
        return PuiseuxSeries({0: c}, 1, INF, self.domain, self.var)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = _lcm(self.ramification, o.ramification)
        a, b = self.rekey(m), o.rekey(m)
        out = dict(a)
        for k, c in b.items():
            out[k] = out[k] + c if k in out else c
        return PuiseuxSeries(out, m, min(self.order, o.order), self.domain, self.var)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.coeffs and o.order == INF or not self.coeffs and self.order == INF:
            return PuiseuxSeries({}, 1, INF, self.domain, self.var)
        order = min(self.val_bound() + o.order, o.val_bound() + self.order)
        m = _lcm(self.ramification, o.ramification)
        a, b = self.rekey(m), o.rekey(m)
        limit = None if order == INF else order * m
        out = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                if limit is not None and k >= limit:
                    continue
                v = c1 * c2
                out[k] = out[k] + v if k in out else v
        return PuiseuxSeries(out, m, order, self.domain, self.var)

    __rmul__ = __mul__

    def shift(self, q):
        """Multiply by ``t^q``."""
        q = Fraction(q)
        m = _lcm(self.ramification, q.denominator)
        s = int(q * m)
        return PuiseuxSeries({k + s: c for k, c in self.rekey(m).items()}, m,
                             self.order + q if self.order != INF else INF, self.domain, self.var)

    def truncate(self, order):
        order = _frac(order)
        return PuiseuxSeries(dict(self.coeffs), self.ramification, min(order, self.order),
                             self.domain, self.var)

    def to_exact(self):
        """Forget the truncation: treat the known terms as the whole series."""
        return PuiseuxSeries(dict(self.coeffs), self.ramification, INF, self.domain, self.var)

    def inverse(self, order=None):
        """Multiplicative inverse.

        The result has order ``O - 2v`` for a truncated input; for an exact
        input ``order`` defaults to 16 steps of ``t^(1/m)`` past ``-v``.
        """
        if not self.coeffs:
            raise NotInvertibleError("series is zero to working precision")
        m = self.ramification
        k0 = min(self.coeffs)
        v = Fraction(k0, m)
        if order is None and self.order == INF and len(self.coeffs) == 1:
            order = INF
        if order is None:
            order = self.order - 2 * v if self.order != INF else -v + Fraction(DEFAULT_TERMS, m)
        order = _frac(order)
        if self.order != INF:
            order = min(order, self.order - 2 * v)
        if order == INF:
            if len(self.coeffs) == 1:
                c = self.coeffs[k0]
                return PuiseuxSeries({-k0: _inv(c)}, m, INF, self.domain, self.var)
            raise InvalidInputError("exact inverse of a non-monomial series needs an order")
        m2 = _lcm(m, Fraction(order).denominator)
        f = m2 // m
        b = {k * f - k0 * f: c for k, c in self.coeffs.items()}
        nterms = int((order + v) * m2)
        if nterms <= 0:
            return PuiseuxSeries({}, m2, order, self.domain, self.var)
        inv_b0 = _inv(b[0])
        c = [inv_b0]
        for n in range(1, nterms):
            acc = None
            for j in range(1, n + 1):
                bj = b.get(j)
                if bj is None:
                    continue
                term = bj * c[n - j]
                acc = term if acc is None else acc + term
            c.append(-(acc * inv_b0) if acc is not None else self.domain.zero)
        return PuiseuxSeries({n - k0 * f: cn for n, cn in enumerate(c)}, m2, order,
                             self.domain, self.var)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = PuiseuxSeries({0: self.domain.one}, 1, INF, self.domain, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def pth_root(self):
        """Inverse Frobenius in characteristic p: exponents and coefficients."""
        p = self.domain.characteristic
        if p == 0:
            raise InvalidInputError("p-th roots of series need characteristic p")
        order = self.order / p if self.order != INF else INF
        return PuiseuxSeries({k: self.domain.pth_root(c) for k, c in self.coeffs.items()},
                             self.ramification * p, order, self.domain, self.var)

    def map_coeffs(self, fn, domain):
        return PuiseuxSeries({k: fn(c) for k, c in self.coeffs.items()}, self.ramification,
                             self.order, domain, self.var)

    # comparison ------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, PuiseuxSeries) else other
        if o is None:
            return NotImplemented
        if o.var != self.var or o.domain != self.domain:
            return False
        a, b = self.normalize(), o.normalize()
        return a.order == b.order and a.ramification == b.ramification and a.coeffs == b.coeffs

    def __hash__(self):
        a = self.normalize()
        return hash((a.var, a.ramification, a.order, frozenset(a.coeffs.items())))

    # rendering --------------------------------------------------------------

    def __str__(self):
        return render_series(self)

    def __repr__(self):
        return f"PuiseuxSeries({render_series(self)!r})"


def _inv(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return c.inverse() if hasattr(c, "inverse") else 1 / c


def _exp_str(q):
    q = Fraction(q)
    return f"({q.numerator})" if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _coeff_text(c):
    s = str(c)
    if isinstance(c, PuiseuxSeries) and (len(c.coeffs) > 1 or c.order != INF):
        return f"({s})"
    if isinstance(c, PuiseuxSeries) and s.startswith("-") and " " not in s:
        return s
    if " " in s and not s.startswith("("):
        return f"({s})"
    return s


def _is_neg(c):
    return isinstance(c, (int, Fraction)) and c < 0


def render_series(s):
    parts = []
    for q, c in s.terms().items():
        neg = _is_neg(c)
        mag = -c if neg else c
        body = _coeff_text(mag) if q == 0 else f"{_coeff_text(mag)}*{s.var}^{_exp_str(q)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    if s.order != INF:
        tail = f"O({s.var}^{_exp_str(s.order)})"
        parts.append(f" + {tail}" if parts else tail)
    return "".join(parts) if parts else "0"


def series_invert(s, order=None):
    return s.inverse(order)


def valuation(s):
    return s.valuation()


def series_from_poly(poly, var="t", domain=None):
    """Convert a MultiPoly in a single variable into an exact series."""
    domain = poly.domain if domain is None else domain
    i = poly.index(var)
    coeffs = {}
    for e, c in poly.terms.items():
        if any(k for j, k in enumerate(e) if j != i):
            raise InvalidInputError(f"{poly} involves variables other than {var}")
        coeffs[e[i] if i is not None else 0] = c
    return PuiseuxSeries(coeffs, 1, INF, domain, var)
