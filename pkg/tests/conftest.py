import numpy as np
import pytest

from roeminimax import GameInstance, SkiRentalParams, gen_ski_rental


def make_instance(beta, alg, name="t"):
    beta = np.asarray(beta, dtype=float)
    return GameInstance(
        name=name,
        designs=[f"d{i}" for i in range(beta.shape[0])],
        states=[f"s{j}" for j in range(beta.shape[1])],
        benchmark=beta,
        algorithm=alg,
    )


@pytest.fixture
def fractions_inst():
    # row 0 has constant ratio 0.4 (4/10 = 2/5); row 1 has ratios (1, 3)
    return make_instance([[4, 2], [3, 6]], [[10, 5], [3, 2]], name="fractions")


@pytest.fixture
def ski23():
    return gen_ski_rental(SkiRentalParams(2, 3))


@pytest.fixture
def ski48():
    return gen_ski_rental(SkiRentalParams(4, 8))


_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        verdict = "PASS" if rep.passed else "FAIL"
        _acceptance_lines.append(f"{verdict}  {label}" + (f"  [{detail}]" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
