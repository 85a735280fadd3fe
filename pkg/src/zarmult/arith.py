"""Polynomial algorithms over Q and F_p: gcd, squarefree part, resultant, discriminant.

Sign convention: ``resultant(f, g, x)`` is the determinant of the Sylvester
matrix with the rows of ``f`` first.  The discriminant carries the usual
factor ``(-1)^(n(n-1)/2) / lc`` so that ``disc(x^2 + b*x + c) = b^2 - 4c``.
"""

import warnings
from fractions import Fraction
from math import gcd as igcd, lcm

from .errors import DomainMismatchError, InseparableInputError, InvalidInputError
from .fields import QQ
from . import dense
from .poly import MultiPoly


class CharacteristicZeroWarning(UserWarning):
    pass


def _one(f):
    return MultiPoly.constant(1, f.variables, f.domain)


def normalize(f):
    """Scale so the lexicographically leading coefficient is 1."""
    if not f:
        return f
    _, c = f.leading_term()
    if c == 1:
        return f
    inv = c.inverse() if hasattr(c, "inverse") else 1 / c
    return f.scale(inv)


def _main_var(f, g):
    for i, v in enumerate(f.variables):
        if any(e[i] for e in f.terms) or any(e[i] for e in g.terms):
            return v
    return None


def content(f, var):
    """gcd of the coefficients of ``f`` viewed in ``K[others][var]``."""
    g = MultiPoly.zero(f.variables, f.domain)
    for c in f.coeffs_in(var).values():
        g = gcd(g, c)
        if g.is_constant() and g:
            return _one(f)
    return g


def primitive_part(f, var):
    if not f:
        return f
    return f.exact_div(content(f, var))


def _scalar_primitive(f):
    """Strip the scalar content; over Q, an integer polynomial with coprime coefficients."""
    if not f:
        return f
    if f.domain is not QQ:
        return normalize(f)
    den = lcm(*(c.denominator for c in f.terms.values()))
    num = igcd(*(c.numerator * den // c.denominator for c in f.terms.values()))
    return f.scale(Fraction(den, num))


def prem(a, b, var):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    db = b.degree(var)
    lb = b.leading_coeff(var)
    x = MultiPoly.var(var, a.variables, a.domain)
    r = a
    e = a.degree(var) - db + 1
    if e <= 0:
        return a
    while r and r.degree(var) >= db:
        d = r.degree(var)
        r = lb * r - r.leading_coeff(var) * (x ** (d - db)) * b
        e -= 1
    return (lb ** e) * r if e else r


def _dense_at(f, var, point):
    dom = f.domain
    out = [dom.zero] * (f.degree(var) + 1)
    for k, c in f.coeffs_in(var).items():
        out[k] = c.evaluate({v: point.get(v, dom.zero) for v in c.variables})
    return out


def _coprime_by_specialization(a, b, var, tries=6):
    """True when a specialization of the other variables proves gcd_var(a, b) = 1.

    At a point where both leading coefficients survive, the gcd can only gain
    degree, so a constant gcd there is conclusive.  False means undecided.
    """
    others = [v for v in a.variables if v != var]
    dom = a.domain
    la, lb = a.leading_coeff(var), b.leading_coeff(var)
    for k in range(tries):
        point = {v: dom.convert((k + 2) ** (i + 1) + k) for i, v in enumerate(others)}
        vals = {v: point.get(v, dom.zero) for v in a.variables}
        if not la.evaluate(vals) or not lb.evaluate(vals):
            continue
        g = dense.gcd(_dense_at(a, var, point), _dense_at(b, var, point), dom.zero)
        return dense.degree(g) == 0
    return False


def gcd(f, g):
    """Greatest common divisor in K[x1, ..., xn], normalized by its leading term."""
    f, g = f._unify(g)
    if not f:
        return normalize(g)
    if not g:
        return normalize(f)
    var = _main_var(f, g)
    if var is None:
        return _one(f)
    cf, cg = content(f, var), content(g, var)
    c = gcd(cf, cg)
    a = _scalar_primitive(f.exact_div(cf))
    b = _scalar_primitive(g.exact_div(cg))
    if a.degree(var) < b.degree(var):
        a, b = b, a
    if b.degree(var) > 0 and _coprime_by_specialization(a, b, var):
        return normalize(c)
    while b and b.degree(var) > 0:
        r = prem(a, b, var)
        a, b = b, (_scalar_primitive(primitive_part(r, var)) if r else r)
    h = a if not b else _one(f)
    if h.degree(var) > 0:
        h = primitive_part(h, var)
    else:
        h = _one(f)
    return normalize(c * h)


def gcd_univariate(f, g, var=None):
    """Monic gcd of ``f`` and ``g`` as polynomials in ``var``.

    Other variables are treated as parameters, i.e. the gcd is taken over
    ``K(others)[var]`` and returned as a primitive polynomial.  When no other
    variable occurs the result is monic.
    """
    if f.domain != g.domain:
        raise DomainMismatchError(f"{f.domain!r} vs {g.domain!r}")
    if f.variables != g.variables:
        raise DomainMismatchError(f"variables {f.variables} vs {g.variables}")
    if var is None:
        used = f.drop_unused().variables + g.drop_unused().variables
        var = used[0] if used else (f.variables[0] if f.variables else None)
    f.check_limits()
    g.check_limits()
    if var is None:
        return _one(f) if (f or g) else f
    if not g:
        h = primitive_part(f, var)
    elif not f:
        h = primitive_part(g, var)
    else:
        h = primitive_part(gcd(f, g), var)
    lc = h.leading_coeff(var)
    if lc.is_constant() and lc:
        c = lc.constant_value()
        h = h.scale(c.inverse() if hasattr(c, "inverse") else 1 / c)
    return normalize(h) if not (lc.is_constant() and lc) else h


def _pth_root_poly(f):
    p = f.domain.characteristic
    return MultiPoly({tuple(k // p for k in e): f.domain.pth_root(c) for e, c in f.terms.items()},
                     f.variables, f.domain)


def squarefree_part(f, var=None):
    """Product of the distinct irreducible factors of ``f``, normalized.

    Works for any number of variables; in characteristic p, factors that
    appear with multiplicity divisible by p or that are inseparable in the
    chosen variable are handled through p-th roots.
    """
    if not f:
        raise InvalidInputError("squarefree part of the zero polynomial")
    f.check_limits()
    if var is not None and f.degree(var) <= 0:
        return normalize(squarefree_part(f)) if not f.is_constant() else _one(f)
    return normalize(_sqf(f, var))


def _sqf(f, prefer=None):
    if f.is_constant():
        return _one(f)
    order = list(f.variables)
    if prefer in order:
        order.remove(prefer)
        order.insert(0, prefer)
    for v in order:
        fv = f.diff(v)
        if fv:
            break
    else:
        # every partial vanishes: f is a p-th power
        return _sqf(_pth_root_poly(f), prefer)
    c = gcd(f, fv)
    w = f.exact_div(c)
    result = _one(f)
    while not w.is_constant():
        y = gcd(w, c)
        z = w.exact_div(y)
        result = result * z
        w = y
        c = c.exact_div(y)
    if not c.is_constant():
        result = result * _sqf(c, prefer)
    return result


def resultant(f, g, var):
    """Sylvester resultant eliminating ``var`` via the subresultant PRS."""
    f, g = f._unify(g)
    if not f or not g:
        return MultiPoly.zero(f.variables, f.domain)
    f.check_limits()
    g.check_limits()
    da, db = f.degree(var), g.degree(var)
    if da == 0:
        return f ** db
    if db == 0:
        return g ** da
    a, b = f, g
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -1
    gg = _one(f)
    h = _one(f)
    while True:
        dA, dB = a.degree(var), b.degree(var)
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        r = prem(a, b, var)
        a = b
        if not r:
            return MultiPoly.zero(f.variables, f.domain)
        b = r.exact_div(gg * h ** delta)
        gg = a.leading_coeff(var)
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = (gg ** delta).exact_div(h ** (delta - 1))
        if b.degree(var) == 0:
            dA = a.degree(var)
            lb = b
            if dA == 1:
                res = lb
            else:
                res = (lb ** dA).exact_div(h ** (dA - 1))
            return res * s


def sylvester_matrix(f, g, var):
    m, n = f.degree(var), g.degree(var)
    zero = MultiPoly.zero(f.variables, f.domain)
    fc = f.coeffs_in(var)
    gc = g.coeffs_in(var)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = fc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = gc.get(k, zero)
        rows.append(row)
    return rows


def bareiss_det(matrix, one):
    """Fraction-free determinant over an integral domain (entries: MultiPoly)."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return one * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def sylvester_resultant(f, g, var):
    """Resultant by direct Sylvester determinant.  Independent check of :func:`resultant`."""
    f, g = f._unify(g)
    if not f or not g:
        return MultiPoly.zero(f.variables, f.domain)
    one = _one(f)
    return bareiss_det(sylvester_matrix(f, g, var), one)


def discriminant(f, var):
    n = f.degree(var)
    if n < 1:
        raise InvalidInputError(f"discriminant needs positive degree in {var}")
    df = f.diff(var)
    if not df:
        raise InseparableInputError(
            f"d/d{var} vanishes identically; apply frobenius_decompose first")
    lc = f.leading_coeff(var)
    r = resultant(f, df, var)
    # formal degree of f' is n - 1 even when its true degree drops in char p
    gap = (n - 1) - df.degree(var)
    if gap:
        r = r * lc ** gap
    d = r.exact_div(lc)
    return -d if (n * (n - 1) // 2) % 2 else d


def frobenius_decompose(f, var, p=None):
    """Write ``f(var) = g(var^(p^n))`` with ``n`` maximal.

    ``g`` is returned in the same variable name.  In characteristic 0 the
    input comes back unchanged with ``n = 0`` and a warning.
    """
    char = f.domain.characteristic
    if p is None:
        p = char
    if char == 0:
        warnings.warn("frobenius_decompose in characteristic 0 is the identity",
                      CharacteristicZeroWarning, stacklevel=2)
        return f, 0
    if p != char:
        raise DomainMismatchError(f"prime {p} does not match characteristic {char}")
    if f.degree(var) <= 0:
        raise InvalidInputError(f"frobenius_decompose needs positive degree in {var}")
    i = f.index(var)
    exps = [e[i] for e in f.terms if e[i]]
    n = 0
    q = p
    while all(k % q == 0 for k in exps):
        n += 1
        q *= p
    if n == 0:
        return f, 0
    pn = p ** n
    g = MultiPoly({e[:i] + (e[i] // pn,) + e[i + 1:]: c for e, c in f.terms.items()},
                  f.variables, f.domain)
    return g, n


def separable_layers(f, var):
    """Split a squarefree ``f`` into separable pieces ``[(h_k, k)]``.

    ``f`` factors as the product of ``h_k(var^(p^k))`` with each ``h_k``
    separable in ``var``; in characteristic 0 the list is ``[(f, 0)]``.
    """
    if f.domain.characteristic == 0 or f.degree(var) <= 0:
        return [(f, 0)]
    layers = []
    k = 0
    cur = f
    p = f.domain.characteristic
    while cur.degree(var) > 0:
        d = cur.diff(var)
        a = gcd(cur, d) if d else cur
        sep = cur.exact_div(a)
        if sep.degree(var) > 0:
            layers.append((sep, k))
        if a.degree(var) <= 0:
            break
        # a only involves var^p: deflate by exactly one Frobenius step
        i = a.index(var)
        cur = MultiPoly({e[:i] + (e[i] // p,) + e[i + 1:]: c for e, c in a.terms.items()},
                        a.variables, a.domain)
        k += 1
    return layers


def distinct_root_count(f, var):
    """Number of distinct roots of ``f`` in ``var`` over the algebraic closure of
    the fraction field of the remaining variables."""
    h = squarefree_part(f, var)
    return sum(layer.degree(var) for layer, _ in separable_layers(h, var))
