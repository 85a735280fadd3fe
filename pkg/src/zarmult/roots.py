"""Splitting small univariate polynomials over Q, F_p and their small extensions.

Only what branch expansion needs: roots with multiplicity, irreducible
factors of degree <= 4 over the prime field or Q, and whatever is left over.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from . import dense
from .fields import ExtensionField, PrimeField, RationalField

MAX_EXTENSION_DEGREE = 4
MAX_ENUMERATION = 20000


@dataclass
class Splitting:
    roots: list = field(default_factory=list)        # [(root, multiplicity)]
    factors: list = field(default_factory=list)      # [(monic irreducible dense poly, multiplicity)]
    leftover: int = 0                                  # degree not accounted for


def _divisors(n):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _integer_poly(a):
    den = 1
    for c in a:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def _strip_root(a, r, zero):
    """Divide out (x - r) as often as possible; return (quotient, multiplicity)."""
    mult = 0
    lin = [-r, zero + 1]
    while a and not dense.evaluate(a, r, zero):
        a, _ = dense.divmod_(a, lin, zero)
        mult += 1
    return a, mult


def _yun(a, zero):
    """Squarefree decomposition in characteristic 0: [(factor, multiplicity)]."""
    a = dense.monic(a)
    out = []
    b = dense.gcd(a, dense.derivative(a), zero)
    c = dense.divmod_(a, b, zero)[0]
    d = dense.sub(dense.divmod_(dense.derivative(a), b, zero)[0], dense.derivative(c))
    i = 1
    while dense.degree(c) > 0:
        g = dense.gcd(c, d, zero)
        if dense.degree(g) > 0:
            out.append((g, i))
        c = dense.divmod_(c, g, zero)[0]
        d = dense.sub(dense.divmod_(d, g, zero)[0], dense.derivative(c))
        i += 1
    return out


def _quadratic_factor_kronecker(a):
    """A monic quadratic factor over Q of a rational quartic, or None."""
    f = _integer_poly(a)

    def ev(x):
        return sum(c * x ** i for i, c in enumerate(f))

    v0, v1, vm = ev(0), ev(1), ev(-1)
    if 0 in (v0, v1, vm):
        return None
    for d0 in _divisors(v0):
        for s0 in (1, -1):
            c = s0 * d0
            for d1 in _divisors(v1):
                for s1 in (1, -1):
                    for d2 in _divisors(vm):
                        for s2 in (1, -1):
                            p1, p2 = s1 * d1, s2 * d2
                            if (p1 + p2) % 2 or (p1 - p2) % 2:
                                continue
                            qa = (p1 + p2) // 2 - c
                            qb = (p1 - p2) // 2
                            if qa == 0:
                                continue
                            q = [Fraction(c), Fraction(qb), Fraction(qa)]
                            _, r = dense.divmod_([Fraction(x) for x in f], q, Fraction(0))
                            if not r:
                                return dense.monic(q)
    return None


def _split_rational(a):
    zero = Fraction(0)
    out = Splitting()
    for piece, mult in _yun(a, zero):
        rest = piece
        ints = _integer_poly(rest)
        lead, const = ints[-1], ints[0]
        if const == 0:
            rest, _ = _strip_root(rest, zero, zero)
            out.roots.append((zero, mult))
            ints = _integer_poly(rest)
            lead, const = ints[-1], ints[0]
        if dense.degree(rest) > 0:
            for pnum in _divisors(const):
                for qden in _divisors(lead):
                    for sgn in (1, -1):
                        r = Fraction(sgn * pnum, qden)
                        if dense.degree(rest) > 0 and not dense.evaluate(rest, r, zero):
                            rest, _ = _strip_root(rest, r, zero)
                            out.roots.append((r, mult))
        deg = dense.degree(rest)
        if deg <= 0:
            continue
        if deg <= 3:
            out.factors.append((dense.monic(rest), mult))
        elif deg == 4:
            q = _quadratic_factor_kronecker(rest)
            if q is None:
                out.factors.append((dense.monic(rest), mult))
            else:
                other = dense.divmod_(rest, q, zero)[0]
                out.factors.append((q, mult))
                out.factors.append((dense.monic(other), mult))
        else:
            out.leftover += deg * mult
    return out


def _split_finite(a, domain):
    zero = domain.zero
    out = Splitting()
    rest = dense.monic(a)
    size = domain.size
    if size <= MAX_ENUMERATION:
        for r in domain.elements():
            if dense.degree(rest) <= 0:
                break
            rest, mult = _strip_root(rest, r, zero)
            if mult:
                out.roots.append((r, mult))
    else:
        out.leftover = dense.degree(rest)
        return out
    if isinstance(domain, PrimeField):
        for d in range(2, MAX_EXTENSION_DEGREE + 1):
            if dense.degree(rest) < d:
                break
            if size ** d > MAX_ENUMERATION:
                break
            for tail in product(domain.elements(), repeat=d):
                if dense.degree(rest) < d:
                    break
                cand = list(tail) + [domain.one]
                if not cand[0]:
                    continue
                mult = 0
                while dense.degree(rest) >= d:
                    q, r = dense.divmod_(rest, cand, zero)
                    if r:
                        break
                    rest = q
                    mult += 1
                if mult:
                    out.factors.append((cand, mult))
    out.leftover += max(dense.degree(rest), 0)
    return out


def _split_extension(a, domain):
    """Roots in an extension of Q: linear factors, and the defining polynomial's roots."""
    out = Splitting()
    rest = dense.monic(a)
    base = domain.base
    parts = [_base_part(c, base) for c in rest]
    if all(c is not None for c in parts):
        over_base = parts
        sp = _split_rational(over_base) if isinstance(base, RationalField) \
            else _split_finite(over_base, base)
        for r, mult in sp.roots:
            out.roots.append((domain.convert(r), mult))
        for fac, mult in sp.factors:
            if tuple(fac) == domain.modulus:
                for r in conjugate_roots(domain):
                    out.roots.append((r, mult))
                out.leftover += (len(fac) - 1 - len(conjugate_roots(domain))) * mult
            else:
                out.leftover += (len(fac) - 1) * mult
        out.leftover += sp.leftover
        return out
    if dense.degree(rest) == 1:
        out.roots.append((-rest[0], 1))
        return out
    out.leftover = dense.degree(rest)
    return out


def _base_part(c, base):
    if isinstance(getattr(c, "field", None), ExtensionField):
        return c.coeffs[0] if not any(c.coeffs[1:]) else None
    return c


def conjugate_roots(ext):
    """Roots of the defining polynomial of ``ext`` that lie in ``ext`` itself."""
    alpha = ext.generator
    if ext.degree == 2:
        return [alpha, -ext.convert(ext.modulus[1]) - alpha]
    if ext.is_finite:
        p = ext.characteristic
        roots = [alpha]
        for _ in range(ext.degree - 1):
            roots.append(roots[-1] ** p)
        return roots
    return [alpha]


def split(a, domain):
    """Roots and small irreducible factors of dense ``a`` over ``domain``."""
    a = dense.trim(a)
    if dense.degree(a) <= 0:
        return Splitting()
    if isinstance(domain, RationalField):
        return _split_rational(a)
    if isinstance(domain, PrimeField):
        return _split_finite(a, domain)
    if isinstance(domain, ExtensionField):
        if domain.is_finite:
            return _split_finite(a, domain)
        return _split_extension(a, domain)
    raise TypeError(f"cannot split polynomials over {domain!r}")
