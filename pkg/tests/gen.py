"""Seeded generators for random admissible inputs used across the test suite."""

from fractions import Fraction

from zarmult.fields import QQ
from zarmult.poly import MultiPoly
from zarmult.series import INF, PuiseuxSeries, SeriesDomain


def rand_q(rng, lo=-5, hi=5, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_nonzero_q(rng, lo=-5, hi=5, den=3):
    while True:
        q = rand_q(rng, lo, hi, den)
        if q:
            return q


def monomial(variables, exps, c=1, domain=QQ):
    e = tuple(exps.get(v, 0) for v in sorted(variables))
    return MultiPoly({e: domain.convert(c)}, sorted(variables), domain)


def random_cover_poly(rng, base=("y",), max_deg=6):
    """F(x, y) with F(0) = 0, F(x, 0) != 0 and total degree <= max_deg."""
    V = tuple(sorted({"x", *base}))
    e = rng.randint(1, max_deg)
    F = monomial(V, {"x": e}, rand_nonzero_q(rng))
    for _ in range(rng.randint(1, 5)):
        exps = {}
        budget = rng.randint(1, max_deg)
        for v in base:
            k = rng.randint(0, budget)
            exps[v] = k
            budget -= k
        if all(exps[v] == 0 for v in base):
            exps[base[0]] = 1
            budget -= 1
        exps["x"] = rng.randint(0, max(budget, 0))
        F = F + monomial(V, exps, rand_nonzero_q(rng))
    if rng.random() < 0.5 and e < max_deg:
        F = F + monomial(V, {"x": rng.randint(e + 1, max_deg)}, rand_nonzero_q(rng))
    return F


def random_univariate(rng, var, deg_lo=1, deg_hi=4, domain=QQ):
    V = (var,)
    f = MultiPoly.zero(V, domain)
    while f.degree(var) < deg_lo:
        f = MultiPoly.zero(V, domain)
        for k in range(rng.randint(deg_lo, deg_hi) + 1):
            if rng.random() < 0.7:
                f = f + monomial(V, {var: k}, rand_q(rng))
    return f


def random_series(rng, domain=QQ, var="t", low=-2, high=3, den=2, terms=3):
    coeffs = {}
    m = rng.randint(1, den)
    for _ in range(rng.randint(1, terms)):
        k = rng.randint(low * m, high * m)
        coeffs[k] = domain.convert(rand_nonzero_q(rng))
    s = PuiseuxSeries(coeffs, m, INF, domain, var)
    return s if s.coeffs else PuiseuxSeries({0: domain.one}, 1, INF, domain, var)


def random_depth2_series(rng):
    D1 = SeriesDomain(QQ, "t1")
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        inner = PuiseuxSeries({rng.randint(-2, 2): rand_nonzero_q(rng)}, 1, INF, QQ, "t1")
        k = rng.randint(-2, 2)
        coeffs[k] = coeffs[k] + inner if k in coeffs else inner
    s = PuiseuxSeries(coeffs, 1, INF, D1, "t2")
    return s
