import dataclasses
import json
import re

import numpy as np
import pytest

from roeminimax import (
    SolverFailure,
    ToleranceConfig,
    check_dominance,
    check_eor_chain,
    check_roe_chain,
    check_weak_equalities,
    gen_constant_ratio,
    gen_random,
    make_distribution,
    point_mass,
    random_corpus,
    random_distribution,
    SplitMix64,
    uniform,
    verify_instance,
)
from roeminimax import solver

from conftest import make_instance

HALF = make_distribution([0.5, 0.5], 2)


def test_roe_chain_constant_ratio():
    inst = gen_constant_ratio(3, 4, 0.7, seed=3)
    rep = check_roe_chain(inst, [uniform(4), point_mass(2, 4)])
    assert rep.overall
    for _, v in rep.quantities:
        assert v == pytest.approx(0.7, abs=1e-9)


def test_roe_chain_fractions(fractions_inst):
    rep = check_roe_chain(fractions_inst, [HALF])
    assert rep.overall
    assert rep.quantity("pure minimax") == pytest.approx(0.4)
    assert rep.quantity("ROE sup-inf") == pytest.approx(0.4)
    assert rep.quantity("ROE(d0)") == pytest.approx(0.4)


def test_roe_chain_ski(ski23):
    rep = check_roe_chain(ski23, [uniform(3)])
    assert rep.overall
    assert rep.quantity("pure minimax") == 1.5
    assert rep.quantity("ROE sup-inf") == pytest.approx(4 / 3, abs=1e-9)
    assert rep.quantity("ROE(d0)") <= 4 / 3


def test_eor_chain_ski_and_trivial(ski23):
    d = make_distribution([0.25, 0.25, 0.5], 3)
    rep = check_eor_chain(ski23, [d])
    assert rep.overall
    assert rep.quantity("EOR sup-inf") == pytest.approx(4 / 3, abs=1e-9)
    assert rep.quantity("EOR(d0)") <= 4 / 3
    one = make_instance([[3.0]], [[4.0]])
    rep = check_eor_chain(one, [point_mass(0, 1)])
    assert rep.overall and all(v == 0.75 for _, v in rep.quantities)


def test_weak_equalities(fractions_inst, ski23):
    for inst, val in ((fractions_inst, 0.4), (ski23, 1.5), (gen_constant_ratio(2, 5, 3.0, 1), 3.0)):
        rep = check_weak_equalities(inst)
        assert rep.overall
        assert [v for _, v in rep.quantities] == pytest.approx([val] * 3)


def test_weak_equalities_deep_search():
    inst = gen_random(4, 5, seed=8)
    rep = check_weak_equalities(inst, deep=True, samples=20_000)
    assert rep.overall
    sampled = [v for k, v in rep.quantities if k.startswith("sampled max ROE")]
    assert len(sampled) == 4


def test_dominance_point_masses_and_fractions(fractions_inst):
    rep = check_dominance(fractions_inst, [point_mass(0, 2), point_mass(1, 2), HALF])
    assert rep.overall
    assert all(c.slack == 0 for c in rep.checks[:4])
    # constant-ratio row 0 under (1/2, 1/2): witness ratio 0.4 against ROE 0.4
    assert rep.checks[4].lhs == pytest.approx(0.4) and rep.checks[4].rhs == pytest.approx(0.4)


def test_dominance_random_instance():
    inst = gen_random(5, 7, seed=42)
    rng = SplitMix64(1)
    rep = check_dominance(inst, [random_distribution(7, rng) for _ in range(100)])
    assert rep.overall and len(rep.checks) == 500


def test_dominance_warns_on_zero_benchmark():
    inst = make_instance([[0.0, 2.0], [1.0, 1.0]], [[1.0, 1.0], [1.0, 2.0]])
    rep = check_dominance(inst, [HALF])
    assert rep.overall and rep.warnings


def test_solver_failure_marks_unverified(monkeypatch, ski23):
    def boom(inst, tol):
        raise SolverFailure("synthetic")
    monkeypatch.setattr(solver, "best_adversary_roe", boom)
    rep = check_roe_chain(ski23, [uniform(3)])
    assert not rep.overall
    assert rep.unverified and not rep.failed
    assert "synthetic" in rep.errors[0]


@pytest.mark.parametrize("name", ["best_adversary_roe", "best_adversary_eor"])
@pytest.mark.parametrize("delta", [+100e-9, -100e-9])
def test_corrupted_solver_is_caught(monkeypatch, name, delta):
    real = getattr(solver, name)
    monkeypatch.setattr(
        solver, name, lambda inst, tol: dataclasses.replace(real(inst, tol), value=real(inst, tol).value + delta)
    )
    check = check_roe_chain if "roe" in name else check_eor_chain
    failed = sum(bool(check(inst, []).failed) for inst in random_corpus(20, seed=5))
    assert failed > 0


def test_report_is_reproducible_and_renderings_agree(ski23):
    a = verify_instance(ski23, [uniform(3)]).to_dict()
    b = verify_instance(ski23, [uniform(3)]).to_dict()
    assert json.dumps(a) == json.dumps(b)
    suite = verify_instance(ski23, [uniform(3)])
    text = suite.render_text()
    json_vals = set()
    for r in suite.to_dict()["reports"]:
        for q in r["quantities"]:
            json_vals.add(f"{q['value']:.12g}")
    for v in json_vals:
        assert re.search(rf"\s{re.escape(v)}(\s|$)", text)


def test_dimension_mismatch_rejected(ski23):
    with pytest.raises(ValueError):
        check_roe_chain(ski23, [HALF])


def test_verify_instance_corpus_smoke():
    tol = ToleranceConfig()
    for inst in random_corpus(25, seed=9):
        rng = SplitMix64(3)
        dists = [random_distribution(inst.n_states, rng) for _ in range(5)]
        assert verify_instance(inst, dists, tol).overall
