import json
from importlib import resources

import pytest

from betatiling import betamap, lift, subst1d, tiling2d

FIG1 = {"l": ["l", "s", "s", "s"], "s": ["l"]}
FIB = {"a": ["a", "b"], "b": ["a"]}
DOUBLING = {"a": ["a", "a"]}


def data_path(name):
    return str(resources.files("betatiling") / "data" / name)


def load_rule(name):
    with open(data_path(name), encoding="utf-8") as fh:
        return tiling2d.rule_from_json(json.load(fh))


@pytest.fixture(scope="session")
def fig1():
    return subst1d.build(["l", "s"], FIG1)


@pytest.fixture(scope="session")
def fib():
    return subst1d.build(["a", "b"], FIB)


@pytest.fixture(scope="session")
def doubling():
    return subst1d.build(["a"], DOUBLING)


@pytest.fixture(scope="session")
def fig1_map(fig1):
    return betamap.from_substitution(fig1)


@pytest.fixture(scope="session")
def fib_map(fib):
    return betamap.from_substitution(fib)


@pytest.fixture(scope="session")
def doubling_map(doubling):
    return betamap.from_substitution(doubling)


@pytest.fixture(scope="session")
def fig1_lift(fig1_map):
    return lift.lift_map(fig1_map)


@pytest.fixture(scope="session")
def fib_lift(fib_map):
    return lift.lift_map(fib_map)


@pytest.fixture(scope="session")
def doubling_lift(doubling_map):
    return lift.lift_map(doubling_map)


@pytest.fixture(scope="session")
def fig1_rule():
    return load_rule("fig1.rule.json")


@pytest.fixture(scope="session")
def fib_rule():
    return load_rule("fib_product.rule.json")


@pytest.fixture(scope="session")
def silver_rule():
    return load_rule("silver_misfit.rule.json")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("::")[-1][len("test_criterion_"):]
                num, _, label = name.partition("_")
                lines.append((int(num), f"criterion {num} {label.replace('_', ' ')}: "
                                        f"{'PASS' if outcome == 'passed' else 'FAIL'} ({rep.duration:.2f}s)"))
    if lines:
        terminalreporter.section("acceptance")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
