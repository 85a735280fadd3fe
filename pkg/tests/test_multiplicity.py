import random

import pytest
from hypothesis import given, strategies as st

from gen import rand_nonzero_q, random_cover_poly
from zarmult.arith import frobenius_decompose
from zarmult.errors import (CommonComponentError, InvalidInputError, NotFiniteOverBaseError,
                            NotFiniteOverPerturbationError, NotSmoothError,
                            UnsupportedBranchError)
from zarmult.fields import GF, QQ
from zarmult.macaulay import intersection_multiplicity_oracle, local_length
from zarmult.multiplicity import (CoverSpec, MapSpec, algebraic_multiplicity_cover,
                                  algebraic_multiplicity_curve, etale_at,
                                  intersection_multiplicity, left_right_multiplicity,
                                  shear_order, two_stage_sum, unramified_fiber_test,
                                  zariski_multiplicity)
from zarmult.parser import parse_polynomial
from zarmult.poly import MultiPoly

V = ("x", "y")
L = ("l1", "l2", "x")


def P(text, variables=V, dom=QQ):
    return parse_polynomial(text, variables, dom)


def cover(text, base=("y",), base_point=None, fiber_point=0, dom=QQ):
    F = parse_polynomial(text, ["x", *base], dom)
    return CoverSpec(F, "x", base, base_point or [0] * len(base), fiber_point)


# Zariski and algebraic multiplicity of covers --------------------------------

@pytest.mark.parametrize("m", range(1, 7))
def test_power_map(m):
    rep = zariski_multiplicity(cover(f"x^{m} - y"))
    assert (rep.zariski, rep.insep_exponent, rep.algebraic, rep.char) == (m, 0, m, 0)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_frobenius_cover(p):
    rep = zariski_multiplicity(cover(f"x^{p} - y", dom=GF(p)))
    assert (rep.zariski, rep.insep_exponent, rep.algebraic) == (1, 1, p)
    assert algebraic_multiplicity_cover(cover(f"x^{p} - y", dom=GF(p))) == p


def test_identity_cover_and_translation():
    assert zariski_multiplicity(cover("x - y")).algebraic == 1
    c = cover("(x - 2)^2 - (y - 1)", base_point=[1], fiber_point=2)
    assert zariski_multiplicity(c).zariski == 2


def test_cover_is_reduced_on_construction():
    c = cover("(x^2 - y)^2")
    assert c.reduced
    assert zariski_multiplicity(c).zariski == 2


def test_cover_errors():
    with pytest.raises(NotFiniteOverBaseError):
        zariski_multiplicity(cover("x*y"))
    with pytest.raises(InvalidInputError):
        cover("x - y - 1")


def test_mixed_inseparable_cover_refused():
    with pytest.raises(UnsupportedBranchError):
        zariski_multiplicity(cover("(x^2 - y)*(x - y)", dom=GF(2)))


def test_two_base_variables():
    rep = zariski_multiplicity(cover("x^2 - y*z - y", base=("y", "z")))
    assert rep.zariski == rep.algebraic == 2


seeds = st.integers(0, 10 ** 6)


@given(seeds)
def test_char_zero_equivalence(seed):
    c = CoverSpec(random_cover_poly(random.Random(seed)), "x", ["y"], [0], 0)
    rep = zariski_multiplicity(c)
    assert rep.algebraic == rep.zariski == algebraic_multiplicity_cover(c)


def _random_char_p_cover(rng, p):
    F = GF(p)
    W = ("x", "y")
    n = rng.randint(0, 1)
    e = rng.randint(1, 3)
    f = MultiPoly({(e, 0): F.one}, W, F) + MultiPoly({(0, 1): F.convert(rng.randint(1, p - 1))},
                                                    W, F)
    for _ in range(rng.randint(0, 2)):
        f = f + MultiPoly({(rng.randint(0, 3), rng.randint(1, 2)): F.convert(rng.randint(1, p - 1))},
                          W, F)
    return f.subs({"x": MultiPoly.var("x", W, F) ** (p ** n)})


@given(seeds, st.sampled_from([2, 3, 5]))
def test_char_p_law(seed, p):
    f = _random_char_p_cover(random.Random(seed), p)
    c = CoverSpec(f, "x", ["y"], [0], 0)
    rep = zariski_multiplicity(c)
    assert rep.algebraic == rep.zariski * p ** rep.insep_exponent
    assert rep.algebraic == algebraic_multiplicity_cover(c)
    # the global Frobenius exponent is a lower bound; unit factors may be less inseparable
    g, n = frobenius_decompose(c.F, "x", p)
    assert n <= rep.insep_exponent
    if n == rep.insep_exponent:
        assert rep.zariski == g.subs({"y": 0}).ord("x")


def test_unit_factor_does_not_make_cover_mixed():
    # (x^2 + y)(x*y + 1) over F_2: the second factor is a unit at the origin
    rep = zariski_multiplicity(cover("(x^2 + y)*(x*y + 1)", dom=GF(2)))
    assert (rep.zariski, rep.insep_exponent, rep.algebraic) == (1, 1, 2)


# curve maps ------------------------------------------------------------------

def test_curve_map_examples():
    assert algebraic_multiplicity_curve(MapSpec([P("y")], [0, 0], source=P("y - x^2"))) == 2
    assert algebraic_multiplicity_curve(MapSpec([P("x", ("x",))], [0])) == 1
    assert algebraic_multiplicity_curve(MapSpec([P("x")], [0, 0], source=P("y^2 - x"))) == 2
    with pytest.raises(NotSmoothError):
        algebraic_multiplicity_curve(MapSpec([P("x")], [0, 0], source=P("y^2 - x^3")))


def test_composition_of_line_maps():
    f = MapSpec([P("x^2", ("x",))], [0])
    g = MapSpec([P("u^3 + u^4", ("u",))], [0], source_vars=("u",))
    assert algebraic_multiplicity_curve(f.compose(g)) == 6


def test_etale_examples():
    assert etale_at([P("x^2", ("x",))], [1])
    assert not etale_at([P("x^2", ("x",))], [0])
    for a in range(3):
        assert not etale_at([P("x^3", ("x",), GF(3))], [a])
    assert etale_at([P("x + y^2"), P("y")], [0, 0])
    with pytest.raises(InvalidInputError):
        etale_at([P("x + y")], [0, 0])


def test_fiber_test_examples():
    def counts(ft):
        return ft.generic_count, ft.special_count, ft.unramified

    assert counts(unramified_fiber_test(cover("x^2 - y", base_point=[1], fiber_point=1))) \
        == (2, 2, True)
    assert counts(unramified_fiber_test(cover("x^2 - y"))) == (2, 1, False)
    ft = unramified_fiber_test(cover("x^3 - y", dom=GF(3)))
    assert (ft.generic_count, ft.special_count, ft.unramified, ft.insep_exponent) == \
        (1, 1, True, 1)


# intersections -----------------------------------------------------------------

@pytest.mark.parametrize("a,b,want", [("x", "y", 1), ("y - x^2", "y", 2), ("y^2 - x^3", "y", 3),
                                      ("x^2", "y^2", 4), ("y^2 - x^3", "y^2 - x^2 - x^3", 4)])
def test_intersection_examples(a, b, want):
    p1, p2 = P(a), P(b)
    assert intersection_multiplicity(p1, p2, [0, 0]) == want
    assert intersection_multiplicity_oracle(p1, p2, [0, 0]) == want


def test_macaulay_length_examples():
    assert local_length([P("x"), P("y")], V) == 1
    assert local_length([P("x^2"), P("y^2")], V) == 4
    assert local_length([P("y - x^2"), P("y")], V) == 2


def test_intersection_errors_and_units():
    with pytest.raises(CommonComponentError):
        intersection_multiplicity(P("x^2 - y^2"), P("x - y"), [0, 0])
    with pytest.raises(InvalidInputError):
        intersection_multiplicity(P("x + 1"), P("y"), [0, 0])
    # a common factor that is a unit at the point does not change the answer
    assert intersection_multiplicity(P("(x + 1)*(y - x^2)"), P("(x + 1)*y"), [0, 0]) == 2


def test_intersection_at_translated_point():
    assert intersection_multiplicity(P("y - 1 - (x - 2)^2"), P("y - 1"), [2, 1]) == 2


def _random_pair(rng):
    def curve():
        f = MultiPoly.zero(V)
        while not f:
            f = MultiPoly.zero(V)
            for _ in range(rng.randint(1, 3)):
                e = (rng.randint(0, 3), rng.randint(0, 3))
                if e != (0, 0):
                    f = f + MultiPoly({e: rand_nonzero_q(rng)}, V)
        return f
    return curve(), curve()


@given(seeds)
def test_shear_invariance_and_oracle(seed):
    rng = random.Random(seed)
    p1, p2 = _random_pair(rng)
    try:
        want = intersection_multiplicity(p1, p2, [0, 0])
    except CommonComponentError:
        return
    if want > 12:
        return
    assert want == intersection_multiplicity_oracle(p1, p2, [0, 0])
    for lam in (1, 2, -3):
        got = shear_order(p1, p2, lam, V)
        if got is not None:
            assert got == want


# Left / Right multiplicity -------------------------------------------------------

def test_left_right_examples():
    assert left_right_multiplicity(P("x^2 - l1", L), (0, 0, 0), "left") == 2
    with pytest.raises(NotFiniteOverPerturbationError):
        left_right_multiplicity(P("x^2 - l1", L), (0, 0, 0), "right")
    assert left_right_multiplicity(P("x^2 - l1 - l2", L), (0, 0, 0), "Right") == 2
    with pytest.raises(InvalidInputError):
        left_right_multiplicity(P("x^2 - l1", L), (0, 0, 0), "up")


def test_two_stage_needs_rational_left_points():
    with pytest.raises(UnsupportedBranchError):
        two_stage_sum(P("x^2 - 2*l1 - l2", L), (0, 0, 0))
