"""Newton polygons, root counting by valuation, Puiseux branches, Hensel lifting.

A polynomial in ``x`` over a series field is a plain list of
:class:`~zarmult.series.PuiseuxSeries` coefficients, lowest degree first.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from . import dense
from .arith import separable_layers, squarefree_part
from .errors import (HenselConditionError, InvalidInputError, NotFiniteOverBaseError,
                     PrecisionInsufficientError, ResourceLimitError, UnsupportedBranchError)
from .fields import ExtensionField
from .poly import MultiPoly
from .roots import MAX_EXTENSION_DEGREE, conjugate_roots, split
from .series import INF, PuiseuxSeries, SeriesDomain

MAX_PRECISION_RETRIES = 4


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points ``(i, val(a_i))``.

    ``segments`` holds ``(slope, horizontal length)`` pairs with strictly
    increasing slopes; a segment of slope ``-v`` accounts for that many roots
    of valuation ``v``.
    """

    segments: tuple
    vertices: tuple

    def root_valuations(self):
        return [(-s, n) for s, n in self.segments]

    @property
    def total_length(self):
        return sum(n for _, n in self.segments)


@dataclass(frozen=True)
class BranchExpansion:
    """One root ``x(t)`` of a polynomial over a series field.

    ``precision`` is a lower bound for the valuation of ``F(x(t))``.  Roots whose
    leading coefficient needs a field extension this package does not build
    come back as placeholders (``series is None``) carrying a ``notice``.
    """

    ramification: int
    series: PuiseuxSeries
    extension_used: bool
    precision: object
    notice: str = ""

    @property
    def placeholder(self):
        return self.series is None


# ---------------------------------------------------------------------------
# conversions


def series_poly(poly, x, t="t", domain=None):
    """Coefficient list of ``poly`` (a MultiPoly in ``x`` and ``t``) as exact series."""
    domain = poly.domain if domain is None else domain
    extra = set(poly.drop_unused().variables) - {x, t}
    if extra:
        raise InvalidInputError(f"unexpected variables {sorted(extra)}")
    xi, ti = poly.index(x), poly.index(t)
    n = poly.degree(x)
    coeffs = [dict() for _ in range(max(n, 0) + 1)]
    for e, c in poly.terms.items():
        i = e[xi] if xi is not None else 0
        k = e[ti] if ti is not None else 0
        coeffs[i][k] = c
    return [PuiseuxSeries(c, 1, INF, domain, t) for c in coeffs]


def _common_ramification(coeffs):
    m = 1
    for a in coeffs:
        m = lcm(m, a.ramification)
    return m


def to_multipoly(coeffs, x="x", s="s"):
    """Exact coefficients as a MultiPoly in ``(s, x)`` with ``t = s^M``.

    Negative exponents are cleared by a common power of ``s``.  Returns the
    polynomial and ``M``.
    """
    m = _common_ramification(coeffs)
    low = min((min(a.rekey(m)) for a in coeffs if a.coeffs), default=0)
    shift = -low if low < 0 else 0
    domain = coeffs[0].domain
    variables = tuple(sorted({x, s}))
    xi, si = variables.index(x), variables.index(s)
    terms = {}
    for i, a in enumerate(coeffs):
        for k, c in a.rekey(m).items():
            e = [0, 0]
            e[xi], e[si] = i, k + shift
            terms[tuple(e)] = c
    return MultiPoly(terms, variables, domain), m


def _is_exact(coeffs):
    return all(a.is_exact for a in coeffs)


def _trim_poly(coeffs):
    c = list(coeffs)
    while len(c) > 1 and not c[-1] and c[-1].is_exact:
        c.pop()
    return c


# ---------------------------------------------------------------------------
# Newton polygon


def _lower_hull(points):
    hull = []
    for p in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the chord hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(coeffs):
    coeffs = list(coeffs)
    known = []
    unknown = []
    for i, a in enumerate(coeffs):
        if a.coeffs:
            known.append((i, a.valuation()))
        elif not a.is_exact:
            unknown.append((i, a.order))
    if not known:
        raise PrecisionInsufficientError("every coefficient is zero to working precision")
    hull = _lower_hull(known)
    first, last = hull[0][0], hull[-1][0]
    for i, order in unknown:
        if i < first or i > last:
            raise PrecisionInsufficientError(
                f"coefficient of x^{i} is O(t^({order})) outside the known hull")
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                height = y1 + (y2 - y1) * Fraction(i - x1, x2 - x1)
                if order <= height:
                    raise PrecisionInsufficientError(
                        f"coefficient of x^{i} is O(t^({order})), cannot place it against "
                        f"hull height {height}")
                break
    segments = tuple((Fraction(y2 - y1) / (x2 - x1), x2 - x1)
                     for (x1, y1), (x2, y2) in zip(hull, hull[1:]))
    return NewtonPolygon(segments, tuple(hull))


# ---------------------------------------------------------------------------
# root counting


def valuation_counts(poly, x, t):
    """Distinct roots of ``poly`` in ``x`` grouped by ``t``-adic valuation.

    ``poly`` is an exact MultiPoly; every variable other than ``x`` and ``t``
    is a parameter, so this counts roots over the algebraic closure of
    ``K(params)((t))``.  The root ``x = 0`` is reported with valuation ``inf``.
    """
    if not poly:
        raise InvalidInputError("zero polynomial has no finite root set")
    if poly.degree(x) <= 0:
        return Counter()
    h = squarefree_part(poly, x)
    counts = Counter()
    for layer, k in separable_layers(h, x):
        scale = layer.domain.characteristic ** k if k else 1
        z = layer.ord(x)
        if z:
            counts[INF] += 1
            layer = layer.exact_div(MultiPoly.var(x, layer.variables, layer.domain) ** z)
        cs = layer.coeffs_in(x)
        if len(cs) < 2:
            continue
        pts = [(i, c.ord(t)) for i, c in cs.items()]
        for (x1, y1), (x2, y2) in zip(_lower_hull(pts), _lower_hull(pts)[1:]):
            v = Fraction(y1 - y2, x2 - x1) / scale
            counts[v] += x2 - x1
    return counts


def count_roots_by_valuation(coeffs, positive_only=False):
    """Distinct roots of a polynomial over a series field, by valuation.

    Exact coefficients go through an exact squarefree reduction (and the
    Frobenius layers in characteristic p).  Truncated coefficients are read
    straight off the Newton polygon, so the input must already be squarefree.
    """
    coeffs = _trim_poly(coeffs)
    if all(not a.coeffs and a.is_exact for a in coeffs):
        raise InvalidInputError("zero polynomial")
    if not coeffs[-1].coeffs:
        raise PrecisionInsufficientError("leading coefficient is zero to working precision")
    if _is_exact(coeffs) and not isinstance(coeffs[0].domain, SeriesDomain):
        poly, m = to_multipoly(coeffs, "x", "s")
        raw = valuation_counts(poly, "x", "s")
        counts = {(v / m if v != INF else INF): n for v, n in raw.items()}
    else:
        counts = Counter()
        z = 0
        while z < len(coeffs) and not coeffs[z].coeffs and coeffs[z].is_exact:
            z += 1
        if z:
            counts[INF] += 1 if z else 0
        for v, n in newton_polygon(coeffs[z:]).root_valuations():
            counts[v] += n
    out = sorted(counts.items(), key=lambda kv: kv[0])
    if positive_only:
        out = [(v, n) for v, n in out if v > 0]
    return out


# ---------------------------------------------------------------------------
# Puiseux branches


def _clip(a, limit):
    if limit == INF:
        return a
    if a.is_exact and all(k < limit * a.ramification for k in a.coeffs):
        return a
    return a.truncate(limit)


def _taylor_shift(coeffs, h):
    """Coefficients of G(h + x) from those of G(x)."""
    n = len(coeffs) - 1
    out = []
    powers = [None] * (n + 1)
    one = PuiseuxSeries({0: coeffs[0].domain.one}, 1, INF, coeffs[0].domain, coeffs[0].var)
    powers[0] = one
    for j in range(1, n + 1):
        powers[j] = powers[j - 1] * h
    for k in range(n + 1):
        acc = None
        for i in range(k, n + 1):
            a = coeffs[i]
            if not a.coeffs and a.is_exact:
                continue
            term = a * powers[i - k]
            b = comb(i, k)
            if b != 1:
                term = term * b
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else one * 0)
    return out


def _embed(coeffs, ext):
    return [a.map_coeffs(ext.convert, ext) for a in coeffs]


class _Expander:
    def __init__(self, precision, limit, char):
        self.precision = precision
        self.limit = limit
        self.char = char
        self.branches = []

    def emit(self, G, P, ext, domain):
        a0 = G[0]
        series = PuiseuxSeries.from_terms(P, INF, domain)
        if not a0.coeffs and a0.is_exact:
            order, resid = INF, INF
        else:
            resid = a0.val_bound()
            a1 = G[1] if len(G) > 1 else None
            if a1 is None or not a1.coeffs:
                raise PrecisionInsufficientError("derivative at the branch is zero to precision")
            order = resid - a1.valuation()
        series = series.truncate(order).normalize()
        self.branches.append(BranchExpansion(series.ramification, series, ext, resid))

    def placeholders(self, count, notice):
        for _ in range(count):
            self.branches.append(BranchExpansion(0, None, True, None, notice))

    def expand(self, G, P, v_last, r, ext):
        domain = G[0].domain
        while True:
            G = [_clip(a, self.limit) for a in G]
            a0 = G[0]
            if not a0.coeffs and a0.is_exact:
                # P is an exact root
                self.emit(G, P, ext, domain)
                if r == 1:
                    return
                G = G[1:]
                r -= 1
                continue
            if r == 1 and a0.val_bound() >= self.precision:
                self.emit(G, P, ext, domain)
                return
            if not a0.coeffs:
                raise PrecisionInsufficientError("roots not separated at working precision")
            poly = newton_polygon(G)
            segs = []
            for (x1, y1), (x2, y2) in zip(poly.vertices, poly.vertices[1:]):
                v = Fraction(y1 - y2, x2 - x1)
                if v > v_last:
                    segs.append(((x1, y1), (x2, y2), v))
            if sum(x2 - x1 for (x1, _), (x2, _), _ in segs) != r:
                raise PrecisionInsufficientError("root count changed during expansion")
            if r == 1:
                (x1, y1), (x2, y2), v = segs[0]
                c = -G[x1].coefficient(y1) / G[x2].coefficient(y2)
                h = PuiseuxSeries.from_terms({v: c}, INF, domain)
                P = dict(P)
                P[v] = c
                G = _taylor_shift(G, h)
                v_last = v
                continue
            for (x1, y1), (x2, y2), v in segs:
                self.expand_segment(G, P, v, (x1, y1), (x2, y2), ext)
            return

    def expand_segment(self, G, P, v, start, end, ext):
        domain = G[0].domain
        x1, y1 = start
        x2, _ = end
        if self.char and v.denominator % self.char == 0:
            raise UnsupportedBranchError(
                f"wild ramification: segment from x^{x1} to x^{x2} has slope {-v} "
                f"with denominator divisible by {self.char}")
        phi = []
        for i in range(x1, x2 + 1):
            height = y1 - v * (i - x1)
            a = G[i]
            if a.coeffs and a.valuation() == height:
                phi.append(a.coefficient(height))
            else:
                if not a.is_exact and a.order <= height:
                    raise PrecisionInsufficientError("segment coefficient beyond precision")
                phi.append(domain.zero)
        sp = split(phi, domain)
        for c, mult in sp.roots:
            self._descend(G, P, v, c, mult, ext, domain)
        for fac, mult in sp.factors:
            deg = len(fac) - 1
            if isinstance(domain, ExtensionField) or deg > MAX_EXTENSION_DEGREE:
                self.placeholders(deg * mult, f"leading coefficient needs a root of "
                                              f"a degree-{deg} polynomial over {domain!r}")
                continue
            E = ExtensionField(domain, fac, name="a")
            GE = _embed(G, E)
            PE = {q: E.convert(c) for q, c in P.items()}
            roots = conjugate_roots(E)
            for beta in roots:
                self._descend(GE, PE, v, beta, mult, True, E)
            missing = (deg - len(roots)) * mult
            if missing:
                self.placeholders(missing, f"conjugate branches over {E!r} not expanded")
        if sp.leftover:
            self.placeholders(sp.leftover, f"characteristic polynomial factor of degree "
                                           f"{sp.leftover} not split over {domain!r}")

    def _descend(self, G, P, v, c, mult, ext, domain):
        h = PuiseuxSeries.from_terms({v: c}, INF, domain)
        P2 = dict(P)
        P2[v] = c
        self.expand(_taylor_shift(G, h), P2, v, mult, ext)


def puiseux_branches(coeffs, precision, positive_only=True):
    """Branches ``x(t)`` with positive valuation of a squarefree polynomial.

    Each returned branch satisfies ``val(F(x(t))) >= precision``.  The
    working truncation starts a little above ``precision`` and is widened
    up to four times when roots cannot be separated.
    """
    coeffs = _trim_poly(coeffs)
    precision = Fraction(precision)
    domain = coeffs[0].domain
    if isinstance(domain, SeriesDomain):
        raise InvalidInputError("branch expansion over a series tower is not supported")
    char = domain.characteristic
    n = 0
    if char:
        idx = [i for i, a in enumerate(coeffs) if a.coeffs or not a.is_exact]
        while len(idx) > 1 and all(i % char ** (n + 1) == 0 for i in idx):
            n += 1
        if n:
            q = char ** n
            coeffs = [coeffs[i] for i in range(0, len(coeffs), q)]
    margin = max(Fraction(1), precision)
    last_error = None
    for attempt in range(MAX_PRECISION_RETRIES + 1):
        limit = precision + margin * 2 ** attempt
        exp = _Expander(precision, limit, char)
        try:
            z = 0
            G = list(coeffs)
            while not G[0].coeffs and G[0].is_exact and len(G) > 1:
                G = G[1:]
                z += 1
            if z:
                exp.branches.append(BranchExpansion(
                    1, PuiseuxSeries({}, 1, INF, domain), False, INF))
            counts = count_roots_by_valuation(G, positive_only=True) if len(G) > 1 else []
            r = sum(k for v, k in counts if v != INF)
            if r:
                exp.expand(G, {}, Fraction(0), r, False)
            branches = exp.branches
            break
        except PrecisionInsufficientError as err:
            last_error = err
    else:
        raise PrecisionInsufficientError(
            f"branches not separated after {MAX_PRECISION_RETRIES} retries: {last_error}")
    if n:
        branches = [_frobenius_root(b, n) for b in branches]
    return branches


def _frobenius_root(branch, n):
    if branch.placeholder:
        return branch
    s = branch.series
    for _ in range(n):
        s = s.pth_root()
    s = s.normalize()
    return BranchExpansion(s.ramification, s, branch.extension_used, branch.precision,
                           f"inseparable layer: x = z^(1/{s.domain.characteristic}^{n})")


def substitute(coeffs, x):
    """Evaluate a polynomial with series coefficients at a series ``x``."""
    acc = None
    for a in reversed(coeffs):
        acc = a if acc is None else acc * x + a
    return acc


# ---------------------------------------------------------------------------
# Hensel lifting


def _eval_system(polys, values):
    out = []
    for f in polys:
        v = f.evaluate(values)
        out.append(v)
    return out


def _solve_series(matrix, rhs):
    n = len(matrix)
    a = [list(r) + [b] for r, b in zip(matrix, rhs)]
    for col in range(n):
        best = None
        for row in range(col, n):
            if a[row][col].coeffs:
                v = a[row][col].valuation()
                if best is None or v < best[0]:
                    best = (v, row)
        if best is None:
            raise HenselConditionError("Jacobian lost rank during lifting")
        a[col], a[best[1]] = a[best[1]], a[col]
        inv = a[col][col].inverse()
        for row in range(n):
            if row != col and a[row][col].coeffs:
                f = a[row][col] * inv
                a[row] = [x - f * y for x, y in zip(a[row], a[col])]
        a[col] = [x * inv for x in a[col]]
    return [a[i][n] for i in range(n)]


def _det(matrix, zero):
    m = [list(r) for r in matrix]
    n = len(m)
    det = zero + 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c] if not hasattr(m[c][c], "inverse") else m[c][c].inverse()
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def hensel_lift(system, seed, precision, t="t", unknowns=None):
    """Lift a simple root mod ``t`` of a square system to series roots.

    ``system`` is a list of MultiPoly either over a :class:`SeriesDomain`
    or over Q / F_p with ``t`` as one of the variables.  Newton's iteration
    doubles the ``t``-adic precision each step.
    """
    if not system:
        raise InvalidInputError("empty system")
    precision = Fraction(precision)
    domain = system[0].domain
    series_coeffs = isinstance(domain, SeriesDomain)
    base = domain.base if series_coeffs else domain
    svar = domain.var if series_coeffs else t
    allv = sorted(set().union(*(f.variables for f in system)))
    if unknowns is None:
        unknowns = [v for v in allv if series_coeffs or v != t]
    unknowns = list(unknowns)
    if len(unknowns) != len(system):
        raise InvalidInputError(f"{len(system)} equations in {len(unknowns)} unknowns")
    if len(seed) != len(unknowns):
        raise InvalidInputError("seed length does not match the unknowns")
    system = [f.with_variables(allv) for f in system]
    seed = [base.convert(s) for s in seed]

    def residue_poly(f):
        if series_coeffs:
            return f.map_coeffs(lambda c: c.coefficient(0) if c.val_bound() >= 0 else None, base)
        return f.subs({t: 0}) if t in f.variables else f

    point = dict(zip(unknowns, seed))
    red = [residue_poly(f) for f in system]
    for f in red:
        if f.evaluate({v: point.get(v, base.zero) for v in f.variables}):
            raise InvalidInputError("seed is not a root of the system modulo t")
    jac0 = [[f.diff(v).evaluate({u: point.get(u, base.zero) for u in f.variables})
             for v in unknowns] for f in red]
    if not _det(jac0, base.zero):
        raise HenselConditionError(
            "Jacobian determinant vanishes at the seed; Hensel condition fails")
    jac = [[f.diff(v) for v in unknowns] for f in system]
    X = [PuiseuxSeries({0: s}, 1, precision, base, svar) for s in seed]
    T = PuiseuxSeries({1: base.one}, 1, INF, base, svar)
    for _ in range(64):
        values = dict(zip(unknowns, X))
        if not series_coeffs:
            values[t] = T
        values = {v: values[v] for v in allv}
        R = [_as_series(r, base, svar, precision) for r in _eval_system(system, values)]
        if all(r.val_bound() >= precision for r in R):
            return X
        J = [[_as_series(f.evaluate(values), base, svar, precision) for f in row] for row in jac]
        delta = _solve_series(J, R)
        X = [(x - d).truncate(precision) for x, d in zip(X, delta)]
    raise ResourceLimitError("Newton iteration did not converge")


def _as_series(v, base, var, precision):
    if isinstance(v, PuiseuxSeries):
        return v.truncate(precision)
    return PuiseuxSeries({0: base.convert(v)}, 1, precision, base, var)


# ---------------------------------------------------------------------------
# Weierstrass preparation


@dataclass(frozen=True)
class WeierstrassData:
    degree: int
    polynomial: list = None     # monic factor, coefficients lowest first
    unit: list = None


def weierstrass_data(coeffs, precision=None):
    """Weierstrass degree of ``F(x)`` and, if ``precision`` is given, its monic factor.

    The degree is the order at ``x = 0`` of the residue polynomial ``F(x, 0)``;
    the factor ``G`` with ``F = U * G`` (``U`` a unit) is found by linear
    Hensel lifting of ``F(x, 0) = x^d * U0``.
    """
    coeffs = _trim_poly(coeffs)
    vals = [a.val_bound() for a in coeffs]
    low = min(vals)
    if low < 0:
        raise InvalidInputError("coefficients must have nonnegative valuation")
    if low > 0:
        raise NotFiniteOverBaseError("F(x, 0) vanishes identically")
    d = next(i for i, a in enumerate(coeffs) if a.coeffs and a.valuation() == 0)
    if precision is None:
        return WeierstrassData(d)
    precision = Fraction(precision)
    domain = coeffs[0].domain
    var = coeffs[0].var
    F = [a.truncate(precision) for a in coeffs]
    n = len(F) - 1
    zero = domain.zero
    res = [a.coefficient(0) for a in F]
    U0 = dense.trim(res[d:])
    G0 = [zero] * d + [domain.one]
    # Bezout: s * x^d + u * U0 = 1
    s_, u_ = _bezout(G0, U0, domain)

    def sconst(c):
        return PuiseuxSeries({0: c}, 1, INF, domain, var)

    G = [sconst(c) for c in G0]
    U = [sconst(c) for c in U0]
    for _ in range(256):
        prod_ = _series_mul(G, U, domain, var)
        e = [(F[i] if i < len(F) else sconst(zero)) - (prod_[i] if i < len(prod_) else 0)
             for i in range(max(len(F), len(prod_)))]
        e = [x.truncate(precision) for x in e]
        if all(x.val_bound() >= precision for x in e):
            return WeierstrassData(d, [g.truncate(precision) for g in G],
                                   [x.truncate(precision) for x in U])
        ue = _series_mul([sconst(c) for c in u_], e, domain, var)
        dG = ue[:d] + [sconst(zero)] * max(0, d - len(ue))
        rest = _series_sub(e, _series_mul([sconst(c) for c in U0], dG, domain, var))
        dU = rest[d:n + 1]
        G = _series_add(G, dG + [sconst(zero)])
        U = _series_add(U, dU)
    raise ResourceLimitError("Weierstrass factor did not converge")


def _bezout(a, b, domain):
    zero = domain.zero
    r0, r1 = dense.trim(a), dense.trim(b)
    s0, s1 = [domain.one], []
    t0, t1 = [], [domain.one]
    while r1:
        q, r = dense.divmod_(r0, r1, zero)
        r0, r1 = r1, r
        s0, s1 = s1, dense.sub(s0, dense.mul(q, s1, zero))
        t0, t1 = t1, dense.sub(t0, dense.mul(q, t1, zero))
    if len(r0) != 1:
        raise InvalidInputError("factors are not coprime")
    inv = 1 / r0[0] if not hasattr(r0[0], "inverse") else r0[0].inverse()
    return dense.scale(s0, inv), dense.scale(t0, inv)


def _series_mul(a, b, domain, var):
    if not a or not b:
        return []
    out = [PuiseuxSeries({}, 1, INF, domain, var) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not x.coeffs and x.is_exact:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _series_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        else:
            out.append(a[i] if i < len(a) else b[i])
    return out


def _series_sub(a, b):
    return _series_add(a, [-x for x in b])
