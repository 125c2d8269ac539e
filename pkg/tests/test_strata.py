import pytest
from hypothesis import given
from hypothesis import strategies as st

from cymotive.curves import builtin_curve
from cymotive.motives import HodgeDiamond, convolve
from cymotive.strata import EPoly, StrataError, StrataSpace, char_order_on, generated, trivial_on

E2 = builtin_curve("hyperelliptic_involution", g=1)
E3 = builtin_curve("mu_curve", g=1)


def surface(curve):
    X = StrataSpace.from_curve(curve)
    return X.product(X)


def diamond_of(space):
    return HodgeDiamond.from_mapping(space.dim, space.hodge())


def test_curve_space_has_curve_hodge_numbers():
    X = StrataSpace.from_curve(builtin_curve("mu_curve", g=3))
    assert X.hodge() == {(0, 0): 1, (1, 0): 3, (0, 1): 3, (1, 1): 1}


def test_product_is_kuenneth():
    X = StrataSpace.from_curve(builtin_curve("mu_curve", g=2))
    d = diamond_of(X)
    assert diamond_of(X.product(X)) == convolve(d, d)


def test_point_blow_up_adds_one_class_per_point():
    Y, rep = surface(E3).blow_up((1, 2), None, "E")
    assert rep.hodge == {(0, 0): 9} and rep.stable
    assert Y.hodge()[(1, 1)] == 4 + 9


def test_singular_quotient_is_refused():
    with pytest.raises(StrataError, match="singular"):
        surface(E3).quotient([(1, 2)])


def test_kummer_by_hand():
    Y, _ = surface(E2).blow_up((1, 1), {2}, "E")
    Y, q = Y.quotient([(1, 1)])
    assert q.order == 2 and q.reflection_ok
    assert Y.to_residual().hodge() == {(0, 0): 1, (1, 1): 20, (2, 2): 1, (2, 0): 1, (0, 2): 1}


def test_contraction_undoes_a_point_blow_up():
    X = surface(E3)
    Y, _ = X.blow_up((1, 2), None, "E", track=True)
    Z, rep = Y.blow_down("Ec2")
    assert rep.bundle_ok and rep.fibres > 0
    assert Z.hodge() == X.hodge()


def test_unknown_divisor():
    with pytest.raises(StrataError, match="no divisor"):
        surface(E3).blow_down("nothing")


def test_group_helpers():
    H = generated(9, 2, [(3, 6)])
    assert len(H) == 3
    assert trivial_on((1, 1), H, 9)
    assert not trivial_on((1, 2), H, 9)
    assert char_order_on((1, 0), H, 9) == 3


@given(st.sampled_from([E2, E3, builtin_curve("mu_curve", g=2)]), st.integers(1, 3))
def test_euler_characteristic_is_multiplicative(curve, n):
    X = StrataSpace.from_curve(curve)
    Y = X
    for _ in range(n - 1):
        Y = Y.product(X)
    e = diamond_of(Y).euler()
    assert e == diamond_of(X).euler() ** n


def test_epoly_arithmetic():
    a = EPoly.of([((0,), 0, 0, 1)])
    b = EPoly.of([((1,), 1, 0, 2)])
    assert (a + b - b) == a
    assert a.times_lefschetz([0, 1]).total() == {(1, 1): 1}
