import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from roeminimax import (
    ValidationError,
    act_second_min,
    dominance_witness,
    eor_lower_bound,
    eor_value,
    fraction_compare,
    fraction_monotonicity,
    gen_constant_ratio,
    make_distribution,
    point_mass,
    pure_minimax,
    ratio_cost,
    roe_lower_bound,
    roe_value,
    worst_state_pure,
)
from roeminimax.ratio import eor_values, roe_values

from conftest import make_instance

HALF = make_distribution([0.5, 0.5], 2)


def test_ratio_cost(fractions_inst):
    assert ratio_cost(fractions_inst, 0, 0) == pytest.approx(0.4, abs=1e-15)
    inst = make_instance([[0.0, 7.0]], [[1.0, 7.0]])
    assert ratio_cost(inst, 0, 0) == 0.0
    assert ratio_cost(inst, 0, 1) == 1.0
    with pytest.raises(IndexError):
        ratio_cost(inst, 0, 2)
    with pytest.raises(IndexError):
        ratio_cost(inst, 1, 0)


def test_constant_ratio_row_eor_equals_roe(fractions_inst):
    # 1/2 * 4/10 + 1/2 * 2/5 = 2/5 = (1/2*4 + 1/2*2) / (1/2*10 + 1/2*5)
    assert eor_value(fractions_inst, 0, HALF) == pytest.approx(0.4, abs=1e-15)
    assert roe_value(fractions_inst, 0, HALF) == pytest.approx(0.4, abs=1e-15)


def test_eor_and_roe_differ_on_mixed_row():
    inst = make_instance([[1, 3]], [[2, 1]])
    assert eor_value(inst, 0, HALF) == pytest.approx(1.75, abs=1e-15)
    assert roe_value(inst, 0, HALF) == pytest.approx(4 / 3, abs=1e-15)


def test_dimension_mismatch(fractions_inst):
    with pytest.raises(ValidationError, match="dimension mismatch"):
        eor_value(fractions_inst, 0, make_distribution([1 / 3] * 3, 3))


def test_worst_state_pure(fractions_inst):
    assert worst_state_pure(fractions_inst, 0).value == pytest.approx(0.4)
    assert worst_state_pure(fractions_inst, 0).argmax_state == 0  # exact tie 4/10 == 2/5
    w = worst_state_pure(fractions_inst, 1)
    assert (w.value, w.argmax_state) == (3.0, 1)
    assert worst_state_pure(make_instance([[3.0]], [[4.0]]), 0).value == 0.75


def test_pure_minimax(fractions_inst):
    # brute force over the 2x2 table: row maxima (0.4, 3)
    rv = pure_minimax(fractions_inst)
    assert rv.value == pytest.approx(0.4) and rv.argmin_design == 0
    assert pure_minimax(make_instance([[3.0]], [[4.0]])).value == 0.75
    inst = gen_constant_ratio(3, 4, 2.5, seed=1)
    assert pure_minimax(inst).value == pytest.approx(2.5, abs=1e-12)


def test_eor_lower_bound(fractions_inst):
    res = eor_lower_bound(fractions_inst, HALF)
    assert res.value == pytest.approx(0.4) and res.best_design == 0
    assert eor_values(fractions_inst, HALF)[1] == pytest.approx(2.0)
    col = eor_lower_bound(fractions_inst, point_mass(1, 2))
    assert col.value == pytest.approx(fractions_inst.ratios[:, 1].min())


def test_roe_lower_bound(fractions_inst):
    res = roe_lower_bound(fractions_inst, HALF)
    assert res.value == pytest.approx(3 / 7.5) and res.best_design == 0
    assert roe_values(fractions_inst, HALF)[1] == pytest.approx(4.5 / 2.5)
    col = roe_lower_bound(fractions_inst, point_mass(1, 2))
    assert col.value == fractions_inst.ratios[:, 1].min()


def test_constant_ratio_bounds():
    inst = gen_constant_ratio(3, 4, 2.5, seed=1)
    d = make_distribution([0.1, 0.2, 0.3, 0.4], 4)
    assert eor_lower_bound(inst, d).value == pytest.approx(2.5, abs=1e-12)
    assert roe_lower_bound(inst, d).value == pytest.approx(2.5, abs=1e-12)


def test_dominance_witness_examples():
    assert dominance_witness([4, 2], [10, 5], HALF) == 0
    assert dominance_witness([1, 3], [2, 1], HALF) == 1
    assert dominance_witness([1, 3, 2], [2, 1, 1], point_mass(2, 3)) == 2
    # witness must come from the support even when a better ratio sits outside it
    assert dominance_witness([1, 30, 2], [2, 1, 1], make_distribution([0.5, 0, 0.5], 3)) == 2


def test_dominance_witness_validation():
    with pytest.raises(ValidationError):
        dominance_witness([0, 3], [2, 1], HALF)
    assert dominance_witness([0, 3], [2, 1], HALF, allow_zero_numerator=True) == 1
    with pytest.raises(ValidationError):
        dominance_witness([1, 3], [0, 1], HALF)


def test_fraction_compare_examples():
    r = fraction_compare(1, 4, 10, 2, 5)
    assert r.A == pytest.approx(0.4) and r.B == pytest.approx(0.4) and r.Q == pytest.approx(0.4)
    assert r.holds
    r = fraction_compare(1, 3, 1, 1, 2)
    assert (r.A, r.B) == (3, 0.5) and r.Q == pytest.approx(4 / 3) and r.holds
    r = fraction_compare(1000, 1, 1, 2, 1)
    assert abs(r.Q - 1) < 2e-3 and r.holds
    with pytest.raises(ValidationError):
        fraction_compare(0, 1, 1, 1, 1)


def test_fraction_monotonicity_examples():
    r = fraction_monotonicity(1, 1, 2, 1, [1, 2])
    assert r.Q == pytest.approx([1.5, 4 / 3]) and r.direction == "decreasing" and r.holds
    r = fraction_monotonicity(3, 1, 1, 2, [1, 2])
    assert r.Q == pytest.approx([4 / 3, 7 / 4]) and r.direction == "increasing" and r.holds
    r = fraction_monotonicity(4, 10, 2, 5, [0.5, 1, 7])
    assert r.direction == "constant" and r.holds
    with pytest.raises(ValidationError):
        fraction_monotonicity(1, 1, 1, 1, [2, 1])
    with pytest.raises(ValidationError):
        fraction_monotonicity(1, 1, 1, 1, [1])


def test_act_second_min_examples():
    assert act_second_min([(4, 10), (2, 5)]) == (pytest.approx(0.4), 0)
    assert act_second_min([(1, 2), (3, 1)]) == (0.5, 0)
    assert act_second_min([(7, 2)]) == (3.5, 0)
    with pytest.raises(ValidationError):
        act_second_min([])
    with pytest.raises(ValidationError):
        act_second_min([(1, 0)])


# --- properties -----------------------------------------------------------

@st.composite
def inst_and_dist(draw, positive_beta=False):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    lo = 0.1 if positive_beta else 0.0
    vals = st.floats(lo, 10, allow_nan=False)
    beta = np.array(draw(st.lists(vals, min_size=m * n, max_size=m * n))).reshape(m, n)
    alg = np.array(draw(st.lists(st.floats(0.1, 10), min_size=m * n, max_size=m * n))).reshape(m, n)
    w = np.array(draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))) + 1e-9
    w[draw(st.integers(0, n - 1))] += 0.5
    return make_instance(beta, alg), make_distribution(w / w.sum(), n)


@given(inst_and_dist())
@settings(max_examples=200, deadline=None)
def test_lower_bounds_never_exceed_pure_minimax(pair):
    inst, d = pair
    pure = pure_minimax(inst).value
    assert eor_lower_bound(inst, d).value <= pure + 1e-9
    assert roe_lower_bound(inst, d).value <= pure + 1e-9


@given(inst_and_dist())
@settings(max_examples=200, deadline=None)
def test_dominance_property(pair):
    inst, d = pair
    for i in range(inst.n_designs):
        w = dominance_witness(inst.benchmark[i], inst.algorithm[i], d, allow_zero_numerator=True)
        assert d.weights[w] > 0
        assert ratio_cost(inst, i, w) >= roe_value(inst, i, d) - 1e-9


@given(st.floats(0.1, 10), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32), st.data())
@settings(max_examples=50, deadline=None)
def test_constant_ratio_rows_make_eor_equal_roe(c, m, n, seed, data):
    inst = gen_constant_ratio(m, n, c, seed)
    w = np.array(data.draw(st.lists(st.floats(0.01, 1), min_size=n, max_size=n)))
    d = make_distribution(w / w.sum(), n)
    for i in range(m):
        assert eor_value(inst, i, d) == pytest.approx(c, abs=1e-12)
        assert roe_value(inst, i, d) == pytest.approx(c, abs=1e-12)


def test_act_second_min_matches_brute_force_seeded():
    rng = np.random.default_rng(20240601)
    for _ in range(50):
        k = int(rng.integers(1, 9))
        pairs = rng.uniform(0.1, 10, size=(k, 2))
        value, idx = act_second_min(pairs)
        xi = rng.dirichlet(np.ones(k), size=10_000)
        xi = np.vstack([np.eye(k), xi])
        brute = ((xi @ pairs[:, 0]) / (xi @ pairs[:, 1])).min()
        assert abs(brute - value) <= 1e-9
        assert pairs[idx, 0] / pairs[idx, 1] == value


def test_fraction_compare_holds_on_random_tuples_seeded():
    rng = np.random.default_rng(7)
    for row in rng.uniform(0.01, 100, size=(2000, 5)):
        assert fraction_compare(*row).holds
