"""Specialisation of projective points over series fields.

A point over ``K_N`` (series in ``t_N`` over ``K_{N-1}``, down to ``K_0``) is
sent one level down by scaling with ``t^s`` so that the minimum valuation
becomes 0, then taking constant terms.  Composing these steps gives the map
to ``K_0``; a point is infinitesimally near ``a`` when it lands on ``a``.
"""

from .errors import InvalidInputError, PrecisionInsufficientError
from .multiplicity import lift_branches
from .series import INF, PuiseuxSeries


def _level(c):
    return c.level if isinstance(c, PuiseuxSeries) else 0


def _bottom_leading(c):
    """Leading coefficient at the bottom of the tower (a base field element)."""
    while isinstance(c, PuiseuxSeries):
        c = c.leading_coefficient()
    return c


def _is_zero(c):
    if isinstance(c, PuiseuxSeries):
        return not c.coeffs and c.is_exact
    return not c


class ProjPoint:
    """Homogeneous coordinates over a common domain, compared up to scalars."""

    def __init__(self, coords):
        coords = list(coords)
        if len(coords) < 2:
            raise InvalidInputError("a projective point needs at least two coordinates")
        levels = {_level(c) for c in coords}
        series = [c for c in coords if isinstance(c, PuiseuxSeries)]
        if series:
            ref = series[0]
            coords = [c if isinstance(c, PuiseuxSeries)
                      else PuiseuxSeries({0: ref.domain.convert(c)}, 1, INF, ref.domain, ref.var)
                      for c in coords]
            for c in coords:
                if c.var != ref.var or c.domain != ref.domain:
                    raise InvalidInputError("coordinates over different domains")
        elif len(levels) > 1:
            raise InvalidInputError("coordinates at different tower levels")
        if all(_is_zero(c) for c in coords):
            raise InvalidInputError("all coordinates are zero")
        if series and all(not c.coeffs for c in coords):
            raise PrecisionInsufficientError("every coordinate is zero to working precision")
        self.coords = tuple(coords)

    @property
    def dimension(self):
        return len(self.coords) - 1

    @property
    def level(self):
        return _level(self.coords[0])

    def normalized(self):
        """Scale so the first nonzero coordinate of least valuation has leading coefficient 1."""
        if self.level == 0:
            lead = next(c for c in self.coords if c)
        else:
            v = min(c.valuation() for c in self.coords)
            lead = next(c for c in self.coords if c.coeffs and c.valuation() == v)
        inv = _bottom_leading(lead)
        inv = inv.inverse() if hasattr(inv, "inverse") else 1 / inv
        return ProjPoint([c * inv for c in self.coords])

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.dimension != other.dimension:
            return False
        a, b = self.coords, other.coords
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return True

    def __hash__(self):
        return hash(self.dimension)

    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"ProjPoint{self}"


def specialize_point(p):
    """One step down the tower: scale by ``t^s`` and take residues."""
    if not isinstance(p, ProjPoint):
        p = ProjPoint(p)
    if p.level == 0:
        return p.normalized()
    coords = p.coords
    known = [c.valuation() for c in coords if c.coeffs]
    vmin = min(known)
    for c in coords:
        if not c.coeffs and not c.is_exact and c.order <= vmin:
            raise PrecisionInsufficientError(
                f"a coordinate is O({c.var}^({c.order})), cannot certify the minimum valuation")
    out = []
    for c in coords:
        if not c.coeffs and c.is_exact:
            out.append(c.domain.zero)
        else:
            out.append(c.shift(-vmin).coefficient(0))
    return ProjPoint(out).normalized()


def tower_specialize(p, target_level=0):
    if not isinstance(p, ProjPoint):
        p = ProjPoint(p)
    if target_level < 0 or target_level > p.level:
        raise InvalidInputError(f"target level {target_level} outside 0..{p.level}")
    while p.level > target_level:
        p = specialize_point(p)
    return p


def is_infinitesimally_near(a_prime, a):
    if not isinstance(a_prime, ProjPoint):
        a_prime = ProjPoint(a_prime)
    if not isinstance(a, ProjPoint):
        a = ProjPoint(a)
    if a.level != 0:
        raise InvalidInputError("reference point must lie over the base field")
    if a.dimension != a_prime.dimension:
        raise InvalidInputError("points of different dimensions")
    return tower_specialize(a_prime, 0) == a


def lift_in_cover(cover, precision, seed_index=0):
    """Branches ``b'`` over the generic infinitesimal base point near the marked point.

    Returns ``(branches, direction, insep_exponent)`` in translated
    coordinates; :func:`branch_point` turns a branch back into a projective
    point of the cover.
    """
    return lift_branches(cover, precision, seed_index)


def branch_point(cover, branch, direction):
    """``(b + x(t) : a_1 + c_1 t : ... : 1)`` for a branch of the cover."""
    s = branch.series
    dom = s.domain
    t = PuiseuxSeries({1: dom.one}, 1, INF, dom)
    coords = [s + dom.convert(cover.fiber_point)]
    for a, c in zip(cover.base_point, direction):
        coords.append(t * dom.convert(c) + dom.convert(a))
    coords.append(PuiseuxSeries({0: dom.one}, 1, INF, dom))
    return ProjPoint(coords)


def marked_point(cover):
    dom = cover.domain
    return ProjPoint([cover.fiber_point, *cover.base_point, dom.one])

