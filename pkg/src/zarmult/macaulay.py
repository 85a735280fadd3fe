"""Local length of an ideal at the origin by linear algebra on truncated multiples.

For polynomials ``p_1, ..., p_r`` vanishing at 0 the quotient
``k[[x]] / (p_1, ..., p_r)`` is computed one degree slice at a time:
``dim k[x] / (I + m^N)`` is the number of monomials of degree ``< N`` minus the
rank of all monomial multiples of the generators truncated below degree
``N``.  Once two consecutive values agree, ``m^N`` lies in ``I`` locally
(Nakayama) and the value is the length.
"""

from itertools import combinations_with_replacement

from .errors import InvalidInputError, ResourceLimitError

MAX_DEGREE = 24


def _monomials(n, below):
    out = []
    for d in range(below):
        block = []
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            block.append(tuple(e))
        out.extend(sorted(block, reverse=True))
    return out


def _inv(c):
    return c.inverse() if hasattr(c, "inverse") else 1 / c


def _rank(rows, order):
    """Rank of sparse rows ``{monomial: coeff}``; pivots on the lowest monomial in ``order``."""
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row, key=order.__getitem__)
            piv = pivots.get(lead)
            if piv is None:
                inv = _inv(row[lead])
                pivots[lead] = {k: c * inv for k, c in row.items()}
                rank += 1
                break
            f = row[lead]
            for k, c in piv.items():
                v = row.get(k)
                v = -(f * c) if v is None else v - f * c
                if v:
                    row[k] = v
                else:
                    row.pop(k, None)
    return rank


def _total(e):
    return sum(e)


def truncated_dimension(polys, variables, n_deg):
    n = len(variables)
    monos = _monomials(n, n_deg)
    order = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        p = p.with_variables(variables)
        low = min(_total(e) for e in p.terms)
        for m in monos:
            if _total(m) + low >= n_deg:
                continue
            row = {}
            for e, c in p.terms.items():
                k = tuple(a + b for a, b in zip(m, e))
                if _total(k) < n_deg:
                    row[k] = c
            if row:
                rows.append(row)
    return len(monos) - _rank(rows, order)


def local_length(polys, variables, point=None, cap=MAX_DEGREE):
    """Length of the local ring of ``V(polys)`` at ``point`` (origin by default)."""
    variables = tuple(sorted(variables))
    polys = [p.with_variables(sorted(set(variables) | set(p.variables))) for p in polys]
    for p in polys:
        extra = set(p.drop_unused().variables) - set(variables)
        if extra:
            raise InvalidInputError(f"unexpected variables {sorted(extra)}")
    if point:
        polys = [p.translate(point) for p in polys]
    polys = [p.drop_unused().with_variables(variables) for p in polys]
    polys = [p for p in polys if p]
    for p in polys:
        if (0,) * len(variables) in p.terms:
            raise InvalidInputError("polynomials do not all vanish at the point")
    prev = None
    for n_deg in range(2, cap + 1):
        d = truncated_dimension(polys, variables, n_deg)
        if d == prev:
            return d
        prev = d
    raise ResourceLimitError(f"local length did not stabilise by degree {cap}")


def intersection_multiplicity_oracle(p1, p2, point, variables=("x", "y")):
    """Intersection multiplicity of two plane curves as a local length."""
    x, y = variables
    return local_length([p1, p2], (x, y), {x: point[0], y: point[1]})
