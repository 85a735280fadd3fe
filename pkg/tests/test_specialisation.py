import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gen import random_cover_poly, random_depth2_series, random_series
from zarmult.errors import InvalidInputError, PrecisionInsufficientError
from zarmult.fields import GF, QQ
from zarmult.multiplicity import CoverSpec
from zarmult.newton import series_poly, substitute
from zarmult.parser import parse_point as PP, parse_polynomial
from zarmult.specialisation import (ProjPoint, branch_point, is_infinitesimally_near,
                                    lift_in_cover, marked_point, specialize_point,
                                    tower_specialize)


def test_specialize_examples():
    assert specialize_point(PP("(t : 1)")) == PP("(0 : 1)")
    assert specialize_point(PP("(t^(-2) : 1)")) == PP("(1 : 0)")
    assert specialize_point(PP("(1 + t : 2 - t^3)")) == PP("(1 : 2)")


def test_specialize_normalizes_first_minimal_coordinate():
    p = specialize_point(PP("(3*t : 6*t : t^2)"))
    assert p.coords == (1, 2, 0)


def test_specialize_refuses_uncertified_minimum():
    with pytest.raises(PrecisionInsufficientError):
        specialize_point(PP("(O(t^(1)) : t^(2))"))


def test_tower_examples():
    p = PP("(t2 + t1 : 1)")
    assert p.level == 2
    assert tower_specialize(p, 0) == PP("(0 : 1)")
    assert tower_specialize(p, 2) == p
    assert tower_specialize(PP("(t1*t2^(-1) : 1)"), 0) == PP("(1 : 0)")
    with pytest.raises(InvalidInputError):
        tower_specialize(p, 3)


def test_near_examples():
    assert is_infinitesimally_near(PP("(t : 1)"), PP("(0 : 1)"))
    assert not is_infinitesimally_near(PP("(1 + t : 1)"), PP("(0 : 1)"))
    assert is_infinitesimally_near(PP("(t^(1/2) : 1)"), PP("(0 : 1)"))
    with pytest.raises(InvalidInputError):
        is_infinitesimally_near(PP("(t : 1 : 1)"), PP("(0 : 1)"))


def test_point_invariants():
    with pytest.raises(InvalidInputError):
        ProjPoint([0, 0])
    with pytest.raises(InvalidInputError):
        ProjPoint([1])
    assert PP("(2 : 4)") == PP("(1 : 2)")
    assert PP("(t : t^2)") == PP("(1 : t)")


def _cover(text, dom=QQ):
    return CoverSpec(parse_polynomial(text, ["x", "y"], dom), "x", ["y"], [0], 0)


@pytest.mark.parametrize("text,dom,count,n", [("x^2 - y", QQ, 2, 0), ("x - y", QQ, 1, 0),
                                              ("x^2 - y", GF(2), 1, 1)])
def test_lift_examples(text, dom, count, n):
    cover = _cover(text, dom)
    branches, direction, insep = lift_in_cover(cover, 3)
    assert len(branches) == count and insep == n
    base = marked_point(cover)
    for b in branches:
        assert is_infinitesimally_near(branch_point(cover, b, direction), base)


seeds = st.integers(0, 10 ** 6)


@given(seeds)
def test_homomorphism_on_lines(seed):
    # a linear form W vanishing on p vanishes on its specialisation
    rng = random.Random(seed)
    a, b = random_series(rng), random_series(rng)
    c1, c2 = Fraction(rng.randint(-4, 4)), Fraction(rng.randint(1, 4))
    third = a * c1 + b * c2
    p = ProjPoint([a, b, third])
    w = (c1, c2, Fraction(-1))
    q = specialize_point(p)
    assert sum(wi * ci for wi, ci in zip(w, q.coords)) == 0


@given(seeds)
def test_specialize_idempotent_on_base_points(seed):
    rng = random.Random(seed)
    coords = [Fraction(rng.randint(-3, 3)) for _ in range(3)]
    if not any(coords):
        coords[0] = Fraction(1)
    p = ProjPoint(coords)
    assert specialize_point(p) == p
    assert specialize_point(specialize_point(p)).coords == specialize_point(p).coords


@given(seeds)
def test_tower_functoriality(seed):
    rng = random.Random(seed)
    p = ProjPoint([random_depth2_series(rng) for _ in range(2)])
    assert tower_specialize(p, 0) == specialize_point(specialize_point(p))
    assert tower_specialize(tower_specialize(p, 1), 0) == tower_specialize(p, 0)


@given(seeds)
def test_lifted_branches_are_near_and_sound(seed):
    rng = random.Random(seed)
    cover = CoverSpec(random_cover_poly(rng, ("y",), 5), "x", ["y"], [0], 0)
    prec = Fraction(3)
    branches, direction, _ = lift_in_cover(cover, prec)
    base = marked_point(cover)
    G = cover.at_origin(direction)
    coeffs = series_poly(G, "x", "t")
    for b in branches:
        if b.notice:
            continue
        assert is_infinitesimally_near(branch_point(cover, b, direction), base)
        dom = b.series.domain
        lifted = [c.map_coeffs(dom.convert, dom) for c in coeffs]
        assert substitute(lifted, b.series).val_bound() >= prec
