"""Zariski and algebraic multiplicities of covers, curve maps and plane curve pairs.

A cover is a hypersurface ``F(x, y1, ..., yk) = 0`` over the base ``y``.  Its
Zariski multiplicity at a fiber point counts the distinct solutions ``x``
infinitesimally near the point when the base point moves generically; it is
computed here both as ``ord_x F(x, 0)`` (after Frobenius deflation in
characteristic p) and as a Newton-polygon root count along a certified
direction ``y = c * t``.  Unit factors never change orders or valuations, so
no explicit unit stripping happens anywhere below.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import (discriminant, distinct_root_count, frobenius_decompose, gcd,
                    normalize, resultant, separable_layers, squarefree_part)
from .errors import (CommonComponentError, InternalInconsistencyError,
                     InvalidInputError, NonGenericDirectionError, NotFiniteOverBaseError,
                     NotFiniteOverPerturbationError, NotSmoothError, UnsupportedBranchError,
                     ShearBudgetExhaustedError)
from .fields import FieldDescriptor
from .macaulay import local_length
from .newton import hensel_lift, puiseux_branches, series_poly, valuation_counts
from .poly import MultiPoly
from .series import INF, PuiseuxSeries

DIRECTION_BUDGET = 8
SHEAR_BUDGET = 32
CROSS_CHECK_DEGREE = 12
MAX_BASE_DIM = 3


def _char(domain):
    return domain.characteristic


def _vanishes(f, point):
    vals = {v: point.get(v, 0) for v in f.variables}
    return not f.evaluate({v: f.domain.convert(a) for v, a in vals.items()})


class CoverSpec:
    """A hypersurface cover ``F(x, y) = 0`` with a marked point, moved to the origin.

    ``F`` holds the translated, squarefree polynomial; ``original`` the input
    and ``reduced`` whether the squarefree reduction changed anything.
    """

    def __init__(self, F, fiber_var, base_vars, base_point, fiber_point, field=None):
        base_vars = tuple(base_vars)
        if not 1 <= len(base_vars) <= MAX_BASE_DIM:
            raise InvalidInputError(f"base dimension must be 1..{MAX_BASE_DIM}")
        if fiber_var in base_vars or len(set(base_vars)) != len(base_vars):
            raise InvalidInputError("fiber and base variables must be distinct")
        if len(base_point) != len(base_vars):
            raise InvalidInputError("base point does not match the base variables")
        if not F:
            raise InvalidInputError("cover polynomial is zero")
        extra = set(F.drop_unused().variables) - set(base_vars) - {fiber_var}
        if extra:
            raise InvalidInputError(f"unexpected variables {sorted(extra)}")
        dom = F.domain
        self.field = field or FieldDescriptor(dom.characteristic)
        self.fiber_var = fiber_var
        self.base_vars = base_vars
        self.base_point = tuple(dom.convert(a) for a in base_point)
        self.fiber_point = dom.convert(fiber_point)
        self.original = F.with_variables(sorted(set(F.variables) | set(base_vars) | {fiber_var}))
        shifts = dict(zip(base_vars, self.base_point))
        shifts[fiber_var] = self.fiber_point
        if not _vanishes(self.original, shifts):
            raise InvalidInputError("the marked point does not lie on the cover")
        moved = self.original.translate(shifts)
        sqf = squarefree_part(moved)
        self.reduced = sqf.degree() != moved.degree()
        self.F = sqf

    @property
    def variables(self):
        return self.F.variables

    @property
    def domain(self):
        return self.F.domain

    def at_origin(self, direction=None):
        """``F(x, c * t)`` for a direction ``c`` (a MultiPoly in ``x`` and ``t``)."""
        t = MultiPoly.var("t", (self.fiber_var, "t"), self.domain)
        mapping = {}
        for i, y in enumerate(self.base_vars):
            c = 0 if direction is None else direction[i]
            mapping[y] = t.scale(self.domain.convert(c))
        return self.F.subs(mapping)

    def fiber_poly(self):
        return self.F.subs({y: 0 for y in self.base_vars})

    def __repr__(self):
        return (f"CoverSpec({self.original}, fiber {self.fiber_var}={self.fiber_point}, "
                f"base {dict(zip(self.base_vars, self.base_point))})")


@dataclass(frozen=True)
class MultiplicityReport:
    zariski: int
    insep_exponent: int
    algebraic: int
    char: int
    flags: tuple = ()
    direction: tuple = ()

    def as_dict(self):
        return {"zariski": self.zariski, "insepExponent": self.insep_exponent,
                "algebraic": self.algebraic, "char": self.char,
                "direction": [str(c) for c in self.direction], "flags": list(self.flags)}


def direction(index, k):
    """The deterministic candidate direction ``((j+1)^0, (j+1)^1, ...)`` for ``j = index``."""
    return tuple((index + 1) ** i for i in range(k))


def _separable_part(cover):
    """``(G, n)`` with the local branch of ``F`` equal to ``G(x^(p^n))``, ``G`` separable.

    In characteristic p the squarefree ``F`` splits into Frobenius layers
    ``h_k(x^(p^k))``.  Only layers through the marked point matter locally;
    the others are units there.  Two such layers make the cover genuinely
    mixed, which is refused.
    """
    F = cover.F
    x = cover.fiber_var
    if not _char(cover.domain):
        return F, 0
    origin = (0,) * len(F.variables)
    local = [(h, k) for h, k in separable_layers(F, x) if not h.terms.get(origin)]
    if len(local) != 1:
        raise UnsupportedBranchError(
            "cover mixes separable and inseparable components through the point; "
            "split it into components first")
    return local[0]


def _local_factor(cover):
    """``G(x^(p^n))``: the part of ``F`` through the marked point."""
    G, n = _separable_part(cover)
    if not n:
        return G
    x = cover.fiber_var
    X = MultiPoly.var(x, G.variables, G.domain)
    return G.subs({x: X ** (_char(cover.domain) ** n)})


def certify_direction(G, cover, seed_index=0, budget=DIRECTION_BUDGET):
    """First direction ``c`` along which ``lc_x G`` and ``Disc_x G`` stay nonzero."""
    x = cover.fiber_var
    k = len(cover.base_vars)
    lc = G.leading_coeff(x)
    disc = discriminant(G, x) if G.degree(x) > 1 else None
    dom = cover.domain
    for j in range(seed_index, seed_index + budget):
        c = tuple(dom.convert(a) for a in direction(j, k))
        t = MultiPoly.var("t", ("t",), dom)
        line = {y: t.scale(c[i]) for i, y in enumerate(cover.base_vars)}
        if not lc.subs(line):
            continue
        if disc is not None and not disc.subs(line):
            continue
        return c
    raise NonGenericDirectionError(
        f"no generic direction among {budget} candidates starting at index {seed_index}")


def zariski_multiplicity(cover, seed_index=0):
    """Zariski multiplicity ``e``, inseparable exponent ``n`` and ``d = e * p^n``."""
    x = cover.fiber_var
    R = cover.fiber_poly()
    if not R:
        raise NotFiniteOverBaseError(f"F({x}, 0) vanishes identically")
    p = _char(cover.domain)
    G, n = _separable_part(cover)
    RG = G.subs({y: 0 for y in cover.base_vars})
    e_order = RG.ord(x)
    c = certify_direction(G, cover, seed_index)
    flags = []
    if cover.reduced:
        flags.append("squarefree-reduced")
    if n:
        flags.append(f"inseparable:{n}")
    t = MultiPoly.var("t", (x, "t"), cover.domain)
    line = {y: t.scale(c[i]) for i, y in enumerate(cover.base_vars)}
    P = G.subs(line)
    counts = valuation_counts(P, x, "t")
    e_poly = sum(k for v, k in counts.items() if v > 0)
    if G.degree(x) > CROSS_CHECK_DEGREE:
        flags.append("polygon-only")
        e = e_poly
    else:
        if e_poly != e_order:
            raise InternalInconsistencyError(
                f"order formula gives {e_order}, polygon count gives {e_poly}")
        e = e_order
    return MultiplicityReport(e, n, e * p ** n if p else e, p, tuple(flags), c)


def algebraic_multiplicity_cover(cover):
    """Length of the local ring of the fiber, ``k[[x, y]] / (F, y1, ..., yk)``."""
    if not cover.fiber_poly():
        raise NotFiniteOverBaseError("fiber is not finite")
    ys = [MultiPoly.var(y, cover.variables, cover.domain) for y in cover.base_vars]
    return local_length([cover.F] + ys, cover.variables)


def lift_branches(cover, precision, seed_index=0):
    """Puiseux branches of the cover along its certified direction.

    Returns ``(branches, direction, n)`` with branches in the translated
    coordinates.  In characteristic p the branches of the deflated polynomial
    are pulled back through the inverse Frobenius.
    """
    x = cover.fiber_var
    if not cover.fiber_poly():
        raise NotFiniteOverBaseError(f"F({x}, 0) vanishes identically")
    G, n = _separable_part(cover)
    c = certify_direction(G, cover, seed_index)
    t = MultiPoly.var("t", (x, "t"), cover.domain)
    P = _local_factor(cover).subs({y: t.scale(c[i]) for i, y in enumerate(cover.base_vars)})
    coeffs = series_poly(P, x, "t")
    return puiseux_branches(coeffs, precision), c, n


# ---------------------------------------------------------------------------
# intersection multiplicity


def shear_parameters(seed_index=0):
    """0, 1, -1, 2, -2, ... starting at ``seed_index``."""
    j = seed_index
    while True:
        yield 0 if j == 0 else ((j + 1) // 2 if j % 2 else -(j // 2))
        j += 1


def _check_pair(p1, p2, variables):
    if p1.domain != p2.domain:
        raise InvalidInputError("polynomials over different fields")
    for p in (p1, p2):
        extra = set(p.drop_unused().variables) - set(variables)
        if extra:
            raise InvalidInputError(f"unexpected variables {sorted(extra)}")
        if not p:
            raise InvalidInputError("zero polynomial")


def _strip_common(p1, p2):
    """Remove a common factor that is a unit at the origin."""
    g = gcd(p1, p2)
    if g.is_constant():
        return p1, p2
    if not g.terms.get((0,) * len(g.variables)):
        raise CommonComponentError(f"common component {g} passes through the point")
    return p1.exact_div(g), p2.exact_div(g)


def intersection_multiplicity(p1, p2, point, variables=("x", "y"), seed_index=0,
                              budget=SHEAR_BUDGET):
    """``I(p1, p2)`` at ``point`` as ``ord_y Res_x`` after an admissible shear.

    The shear is ``y -> y + lam * x``; it is admissible when both leading
    ``x``-coefficients survive at ``y = 0`` and the origin is the only common
    root of ``p1(x, 0)`` and ``p2(x, 0)``.
    """
    x, y = variables
    _check_pair(p1, p2, variables)
    V = tuple(sorted(variables))
    dom = p1.domain
    shift = {x: dom.convert(point[0]), y: dom.convert(point[1])}
    p1, p2 = p1.with_variables(V), p2.with_variables(V)
    if not (_vanishes(p1, shift) and _vanishes(p2, shift)):
        raise InvalidInputError("the point is not on both curves")
    a, b = _strip_common(p1.translate(shift), p2.translate(shift))
    if a.is_constant() or b.is_constant():
        raise InvalidInputError("a curve does not pass through the point after removing "
                                "common unit factors")
    X = MultiPoly.var(x, V, dom)
    Y = MultiPoly.var(y, V, dom)
    tried = set()
    gen = shear_parameters(seed_index)
    for _ in range(budget):
        lam = dom.convert(next(gen))
        if lam in tried:
            continue
        tried.add(lam)
        sa = a.subs({y: Y + X.scale(lam)}) if lam else a
        sb = b.subs({y: Y + X.scale(lam)}) if lam else b
        r = _admissible_order(sa, sb, x, y)
        if r is not None:
            return r
    raise ShearBudgetExhaustedError(
        f"no admissible shear among {budget} parameters; try a larger field")


def shear_order(p1, p2, lam, variables=("x", "y")):
    """``ord_y Res_x`` after the shear with parameter ``lam``, or None if inadmissible."""
    x, y = variables
    V = p1.variables
    X = MultiPoly.var(x, V, p1.domain)
    Y = MultiPoly.var(y, V, p1.domain)
    lam = p1.domain.convert(lam)
    return _admissible_order(p1.subs({y: Y + X.scale(lam)}), p2.subs({y: Y + X.scale(lam)}),
                             x, y)


def _admissible_order(a, b, x, y):
    if a.degree(x) <= 0 and b.degree(x) <= 0:
        return None
    for p in (a, b):
        if p.degree(x) > 0 and not p.leading_coeff(x).subs({y: 0}):
            return None
    a0, b0 = a.subs({y: 0}), b.subs({y: 0})
    g = gcd(a0, b0)
    if not g:
        return None
    if g.degree(x) != g.ord(x):
        return None
    res = resultant(a, b, x)
    if not res:
        raise CommonComponentError("curves share a component")
    return res.ord(y)


# ---------------------------------------------------------------------------
# curve maps


@dataclass
class MapSpec:
    """A map from a plane curve (or the affine line) given by polynomial components.

    ``source`` is ``F(x, y)`` or None for the line in ``source_vars[0]``.
    ``target`` is a curve ``G(u, v)`` in ``target_vars`` or None when the
    target is the line (then there is exactly one component).
    """

    components: list
    point: tuple
    source: MultiPoly = None
    target: MultiPoly = None
    source_vars: tuple = ("x", "y")
    target_vars: tuple = ("u", "v")

    def __post_init__(self):
        self.components = list(self.components)
        self.point = tuple(self.point)
        nsrc = 1 if self.source is None else 2
        self.source_vars = tuple(self.source_vars)[:nsrc]
        if len(self.point) != nsrc:
            raise InvalidInputError(f"marked point needs {nsrc} coordinates")
        ntgt = 1 if self.target is None else 2
        if len(self.components) != ntgt:
            raise InvalidInputError(f"map needs {ntgt} components")
        dom = self.components[0].domain
        self.point = tuple(dom.convert(a) for a in self.point)
        if self.source is not None and not _vanishes(self.source, self.point_dict()):
            raise InvalidInputError("marked point is not on the source curve")
        if self.target is not None and not _vanishes(self.target, self.image_dict()):
            raise InvalidInputError("image point is not on the target curve")

    @property
    def domain(self):
        return self.components[0].domain

    def point_dict(self):
        return dict(zip(self.source_vars, self.point))

    def image(self):
        pt = self.point_dict()
        return tuple(c.evaluate({v: self.domain.convert(pt.get(v, 0)) for v in c.variables})
                     for c in self.components)

    def image_dict(self):
        return dict(zip(self.target_vars, self.image()))

    def compose(self, other):
        """``other`` after ``self``."""
        if (self.target is None) != (other.source is None) or \
                (self.target is not None and not _same_curve(self, other)):
            raise InvalidInputError("maps are not composable")
        mapping = dict(zip(other.source_vars, self.components))
        comps = [c.subs(mapping) for c in other.components]
        return MapSpec(comps, self.point, self.source, other.target, self.source_vars,
                       other.target_vars)


def _same_curve(f, g):
    ren = dict(zip(f.target_vars, [MultiPoly.var(v, g.source_vars, f.domain)
                                   for v in g.source_vars]))
    return normalize(f.target.subs(ren)) == normalize(g.source)


def _branch(spec, precision):
    """Local parameterisation ``(x(t), y(t))`` of the source at the marked point."""
    dom = spec.domain
    if spec.source is None:
        (a,) = spec.point
        return {spec.source_vars[0]: PuiseuxSeries({0: a, 1: dom.one}, 1, INF, dom)}
    x, y = spec.source_vars
    F = spec.source.with_variables(sorted(set(spec.source.variables) | {x, y}))
    a, b = spec.point
    pt = {x: a, y: b}
    fy = F.diff(y).evaluate({v: pt.get(v, dom.zero) for v in F.variables})
    fx = F.diff(x).evaluate({v: pt.get(v, dom.zero) for v in F.variables})
    if fy:
        free, solved, seed = x, y, b
    elif fx:
        free, solved, seed = y, x, a
    else:
        raise NotSmoothError("both partial derivatives vanish at the marked point "
                             "(Jacobian test failed)")
    T = MultiPoly.var("t", ("t",), dom)
    G = F.subs({free: T + MultiPoly.constant(pt[free], ("t",), dom)})
    (s,) = hensel_lift([G], [seed], precision, t="t", unknowns=[solved])
    return {free: PuiseuxSeries({0: pt[free], 1: dom.one}, 1, INF, dom), solved: s}


def _uniformiser(spec):
    """Component index whose difference from its value is a uniformiser at the image."""
    if spec.target is None:
        return 0
    u, v = spec.target_vars
    img = spec.image_dict()
    G = spec.target
    vals = {w: img.get(w, spec.domain.zero) for w in G.variables}
    if G.diff(v).evaluate(vals):
        return 0
    if G.diff(u).evaluate(vals):
        return 1
    raise NotSmoothError("target curve is singular at the image point")


def algebraic_multiplicity_curve(spec, precision=8, max_precision=256):
    """Order of the pulled-back uniformiser along the source branch."""
    i = _uniformiser(spec)
    h = (spec.components[i] - spec.image()[i]).drop_unused()
    prec = Fraction(precision)
    while prec <= max_precision:
        br = _branch(spec, prec)
        val = h.evaluate({v: br[v] for v in h.variables}) if h.variables else h.constant_value() if h else h.domain.zero
        if isinstance(val, PuiseuxSeries):
            if val.coeffs:
                return int(val.valuation())
        elif val:
            return 0
        else:
            raise NotFiniteOverBaseError("map is constant on the source curve")
        prec *= 2
    raise NotFiniteOverBaseError("pulled-back uniformiser vanishes to working precision")


def line_cover(f, x="x", u="u", point=0):
    """The cover ``f(x) - u = 0`` of a polynomial map of the line, marked at ``x = point``."""
    dom = f.domain
    V = tuple(sorted({x, u}))
    f = f.with_variables(sorted(set(f.variables) | set(V)))
    a = dom.convert(point)
    b = f.evaluate({v: a if v == x else dom.zero for v in f.variables})
    return CoverSpec(f - MultiPoly.var(u, f.variables, dom), x, (u,), (b,), a)


# ---------------------------------------------------------------------------
# etale and fiber tests


def etale_at(system, point, variables=None):
    """Jacobian test for a square system, or multiplicity one for a curve map."""
    if isinstance(system, MapSpec):
        return algebraic_multiplicity_curve(system) == 1
    system = list(system)
    if variables is None:
        variables = sorted(set().union(*(f.drop_unused().variables for f in system)))
    variables = list(variables)
    if len(system) != len(variables):
        raise InvalidInputError(
            f"Jacobian test needs a square system: {len(system)} functions, "
            f"{len(variables)} variables")
    dom = system[0].domain
    pt = dict(zip(variables, (dom.convert(a) for a in point))) if not isinstance(point, dict) \
        else {k: dom.convert(a) for k, a in point.items()}
    if len(pt) != len(variables):
        raise InvalidInputError("point does not match the variables")
    jac = []
    for f in system:
        row = []
        for v in variables:
            d = f.diff(v)
            row.append(d.evaluate({w: pt.get(w, dom.zero) for w in d.variables}))
        jac.append(row)
    return bool(_det(jac, dom))


def _det(m, dom):
    m = [list(r) for r in m]
    n = len(m)
    det = dom.one
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return dom.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse() if hasattr(m[c][c], "inverse") else 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class FiberTest:
    generic_count: int
    special_count: int
    unramified: bool
    insep_exponent: int = 0

    def as_dict(self):
        return {"genericCount": self.generic_count, "specialCount": self.special_count,
                "unramified": self.unramified, "insepExponent": self.insep_exponent}


def unramified_fiber_test(cover):
    """Compare the generic and special fiber cardinalities over the base point."""
    x = cover.fiber_var
    F = cover.F
    lc = F.leading_coeff(x)
    if F.degree(x) <= 0 or not lc.subs({y: 0 for y in cover.base_vars}):
        raise NotFiniteOverBaseError("leading coefficient vanishes at the base point")
    generic = distinct_root_count(F, x)
    special_poly = cover.fiber_poly()
    special = distinct_root_count(special_poly, x)
    n = _separable_part(cover)[1]
    return FiberTest(generic, special, generic == special, n)


def fiber_points(cover):
    """Roots of ``F(x, base point)`` in the base field, in original coordinates."""
    from .roots import split
    from . import dense
    R = cover.fiber_poly()
    x = cover.fiber_var
    cs = R.drop_unused().coeffs_in(x) if R.drop_unused().variables else {0: R}
    dom = cover.domain
    top = max(cs)
    coeffs = [cs[i].constant_value() if i in cs else dom.zero for i in range(top + 1)]
    sp = split(dense.trim(coeffs), dom)
    return [r + cover.fiber_point for r, _ in sp.roots], sp


# ---------------------------------------------------------------------------
# left/right multiplicity


def _perturbed(F, x, params, point, side):
    l1, l2 = params
    dom = F.domain
    V = tuple(sorted({x, l1, l2}))
    F = F.with_variables(sorted(set(F.variables) | set(V)))
    shift = {x: dom.convert(point[0]), l1: dom.convert(point[1]), l2: dom.convert(point[2])}
    if not _vanishes(F, shift):
        raise InvalidInputError("the point is not on F")
    G = F.translate(shift)
    moving, fixed = (l1, l2) if side == "left" else (l2, l1)
    T = MultiPoly.var("t", (x, "t"), dom)
    return G, G.subs({moving: T, fixed: 0}), shift


def _count_near_zero(P, x, t, what):
    dom = P.domain
    if not P.subs({t: 0}):
        raise NotFiniteOverPerturbationError(f"{what}: F(x, 0) vanishes identically")
    if P.degree(x) <= 0:
        return 0
    H = P
    if dom.characteristic:
        H, _ = frobenius_decompose(P, x)
    if H.degree(x) > 1 and not discriminant(H, x):
        raise NotFiniteOverPerturbationError(
            f"{what}: perturbed fiber is degenerate (discriminant vanishes identically)")
    if not P.leading_coeff(x):
        raise NotFiniteOverPerturbationError(f"{what}: leading coefficient vanishes")
    counts = valuation_counts(P, x, t)
    return sum(k for v, k in counts.items() if v > 0)


def left_right_multiplicity(F, point, side, x="x", params=("l1", "l2")):
    """Distinct roots near the point when only one parameter is perturbed."""
    side = side.lower()
    if side not in ("left", "right"):
        raise InvalidInputError("side must be Left or Right")
    _, P, _ = _perturbed(F, x, params, point, side)
    return _count_near_zero(P, x, "t", side.capitalize())


def two_stage_sum(F, point, x="x", params=("l1", "l2"), precision=8):
    """Sum of Right multiplicities over the Left fiber near the point.

    Each Left branch ``x = a'(t)`` must be an exact series over the base
    field; after ``t = s^m`` it is a polynomial in ``s``, and the Right count
    at that point is taken over ``K(s)((u))``.
    """
    l1, l2 = params
    G, P, _ = _perturbed(F, x, params, point, "left")
    dom = F.domain
    _count_near_zero(P, x, "t", "Left")
    H = squarefree_part(P, x)
    branches = puiseux_branches(series_poly(H, x, "t"), precision)
    V = tuple(sorted({x, "s", "u"}))
    X = MultiPoly.var(x, V, dom)
    S = MultiPoly.var("s", V, dom)
    U = MultiPoly.var("u", V, dom)
    total = 0
    for br in branches:
        if br.placeholder or br.extension_used or not br.series.is_exact:
            raise UnsupportedBranchError("Left fiber point is not defined over the base field")
        m = br.series.ramification
        shift = MultiPoly.zero(V, dom)
        for k, c in br.series.coeffs.items():
            if k < 0:
                raise UnsupportedBranchError("Left branch has a pole")
            shift = shift + (S ** k).scale(c)
        Q = G.subs({x: X + shift, l1: S ** m, l2: U})
        total += _count_near_zero(Q, x, "u", "Right")
    return total, len(branches)


def zariski_of_family(F, point, x="x", params=("l1", "l2")):
    """Zariski multiplicity of ``F`` as a cover over both parameters."""
    l1, l2 = params
    V = sorted(set(F.variables) | {x, l1, l2})
    cover = CoverSpec(F.with_variables(V), x, (l1, l2), (point[1], point[2]), point[0])
    return zariski_multiplicity(cover)
