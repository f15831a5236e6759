import pytest

from feichtinger.checks import Check, equality, inequality, merge
from feichtinger.groups import GroupSpec
from feichtinger.verify import SUITES, run_suite


def test_check_semantics():
    assert equality("a", 1.0, 1.0 + 1e-12).status == "pass"
    assert equality("a", 1.0, 1.1).status == "fail"
    assert inequality("b", 1.0, 2.0).status == "pass"
    assert inequality("b", 2.0, 1.0).status == "fail"
    assert Check("c", 1.0, 0.0, skipped=True).status == "skip"
    c = Check("d", float("nan"), 1.0)
    assert c.status == "fail"


def test_merge_keeps_worst():
    m = merge("x", [Check("x", 0.1, 1.0), Check("x", 2.0, 1.0), Check("x", 0.0, 0.0, skipped=True)])
    assert m.status == "fail" and m.max_abs_err == 2.0
    assert merge("y", []).status == "skip"


@pytest.mark.parametrize("suite", sorted(SUITES))
@pytest.mark.parametrize("spec", ["1", "5", "2x2@1/4", "2x3"])
def test_every_suite_passes(suite, spec):
    r = run_suite(suite, GroupSpec.parse(spec), trials=2, seed=1)
    assert r.passed, [c for c in r.checks if not c.passed]
    assert all(c.name.startswith(f"{suite}: ") for c in r.checks)


def test_all_is_union_of_suites():
    G = GroupSpec((4,))
    everything = run_suite("all", G, 2, 5)
    parts = []
    for s in SUITES:
        parts += run_suite(s, G, 2, 5).checks
    strip = lambda cs: sorted((c.name, c.status, c.max_abs_err) for c in cs)  # noqa: E731
    assert strip(everything.checks) == strip(parts)


def test_run_suite_validation():
    with pytest.raises(ValueError):
        run_suite("bogus", GroupSpec((3,)))
    with pytest.raises(ValueError):
        run_suite("fourier", GroupSpec((3,)), trials=0)
