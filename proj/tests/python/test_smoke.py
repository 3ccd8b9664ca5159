import json
from fractions import Fraction

import pytest

import hplus


def test_gcd_and_index_factor():
    r = hplus.gcd_over_pairs(7, 67)
    assert r["gcd"] == Fraction(2**32)
    assert r["gcd_odd_small"] == "1"
    assert r["best_pair"] == (3, 7)
    f = hplus.index_factor(7, 67, 3, 7)
    assert f["factored"]["primes"][2] == 98
    assert f["factored"]["odd_small"] == "17^2"


def test_character_product_is_int():
    v = hplus.character_product(7, 67, 3)
    assert isinstance(v, int) and v != 0


def test_factoring_and_grid():
    fs = hplus.factor_x_pow_minus_one(22, 3)
    assert len(fs) == 6
    assert hplus.degree_grid(7, 67, 3) == [(2, 2), (2, 22)]


def test_frobenius_and_ideals():
    f = hplus.frobenius_polynomial(7, 67, 3, 7, r=7521823, l=3, k=1, d1=2, d2=2)
    assert hplus.quotient_exponent(7, 67, 3, 1, 2, 2, ["x^3*y^33-1", f]) >= 1
    assert hplus.ideal_equal(7, 67, 3, 1, 2, 2, ["y^2-1", "y-x"], ["x-y", "x^2-1"])


def test_verify_power():
    golden = [-1, -1, 1]
    assert not hplus.verify_power(golden, golden, 3)
    # (X - 1) divides X^3 - 1
    assert hplus.verify_power([-1, 1], [-1, 1], 3)


def test_run_469():
    cfg = hplus.RunConfig(7, 67, l_bound=100)
    rep = hplus.run(cfg)
    assert rep.all_resolved()
    assert rep.h_plus == "3^2"
    r3 = next(r for r in rep.l_reports if r.l == 3)
    assert r3.status == "h_plus_l_part_proved"
    assert r3.cells[0].history == [1, 2, 2]
    assert json.loads(rep.to_json())["p"] == 7
    assert rep.to_csv().splitlines()[0] == "f,GCD,l,Degree,h_plus"


def test_errors():
    with pytest.raises(hplus.Error):
        hplus.RunConfig.from_text("colour = red")
    cfg = hplus.RunConfig(67, 7)
    with pytest.raises(hplus.Error):
        cfg.validate()
