import json
import math

import jsonschema
import pytest

from afl.embeddings import Verdict
from afl.harness import (
    SuiteReport,
    ap_grid,
    dilated_gaussians,
    homogeneity_slope,
    lemma_suite,
    norm_equivalence_suite,
    run_suite,
    sobolev_query,
    witness_family,
    witness_suite,
)
from afl.schemas import REPORT

SMALL_GRID = [{"s": 0.5, "p": 2.0, "q": 2.0, "gamma": 0.0}, {"s": 1.0, "p": 4.0, "q": 2.0, "gamma": 1.0}]
FAMILY = dilated_gaussians(range(-1, 2))


@pytest.fixture(scope="module")
def small_norm_report():
    return norm_equivalence_suite(SMALL_GRID, FAMILY, mu_max=8, k_max=128)


def test_norm_equivalence_small_grid(small_norm_report):
    rep = small_norm_report
    assert rep.passed and len(rep.cases) == 2
    for case in rep.cases:
        assert case["spread"] < 50 and all(r > 0 for r in case["ratios"])


def test_report_validates_against_schema(small_norm_report, tmp_path):
    jsonschema.validate(small_norm_report.to_dict(), REPORT)
    jpath, cpath = small_norm_report.write(tmp_path)
    jsonschema.validate(json.loads(open(jpath).read()), REPORT)
    lines = open(cpath).read().splitlines()
    assert len(lines) == 3 and "spread" in lines[0]


def test_reports_are_deterministic(small_norm_report):
    again = norm_equivalence_suite(SMALL_GRID, FAMILY, mu_max=8, k_max=128)
    a, b = small_norm_report.to_dict(), again.to_dict()
    a.pop("runtime"), b.pop("runtime")
    assert a == b


def test_report_cleans_infinities():
    rep = SuiteReport("x", [{"p": math.inf}])
    rep.add({"value": float("nan"), "verdict": Verdict.HOLDS}, math.inf, True)
    d = rep.to_dict()
    assert d["grid"][0]["p"] == "inf" and d["cases"][0]["value"] is None
    assert d["cases"][0]["verdict"] == "HoldsBySufficientCondition"
    jsonschema.validate(d, REPORT)


def test_norm_equivalence_tl_kind():
    rep = norm_equivalence_suite(SMALL_GRID[:1], FAMILY, mu_max=8, k_max=128, kind="F")
    assert rep.passed


def test_empty_family_rejected():
    with pytest.raises(ValueError):
        norm_equivalence_suite(SMALL_GRID, [])


def test_homogeneity_slopes():
    assert homogeneity_slope(sobolev_query(q=8.0), "dilation") == pytest.approx(0.125)
    assert homogeneity_slope(sobolev_query(q=6.0), "dilation") == pytest.approx(0.0)
    assert homogeneity_slope(sobolev_query(q=8.0), "modulation") is None


def test_witness_families():
    assert len(witness_family("dilation", range(3))) == 3
    with pytest.raises(ValueError):
        witness_family("spiral", range(3))


@pytest.mark.slow
def test_short_supercritical_witness_grows():
    rep = witness_suite(sobolev_query(q=8.0), "dilation", steps=range(0, 5))
    case = rep.cases[0]
    assert case["check"] == "slope"
    assert all(s > 0 for s in case["step_slopes"])


@pytest.mark.slow
def test_modulation_family_is_recorded():
    rep = witness_suite(sobolev_query(q=8.0, c=1.0), "modulation", steps=range(0, 3))
    assert {c["check"] for c in rep.cases} <= {"recorded", "bounded"}


def test_ap_grid_covers_the_analytic_boundary():
    pts = ap_grid(dims=(3,), ps=(2.0,))
    gammas = [g for _, _, g in pts]
    assert min(gammas) == -2.5 and max(gammas) == 3.5 and 3.0 in gammas


def test_lemma_suite_small():
    rep = lemma_suite(gammas=(0.0, 1.0), eps_values=(0.05,), mu_max=3, k_max=8,
                      ap_points=[(3, 2.0, 1.0), (3, 2.0, 3.0)])
    assert rep.passed
    ident = [c for c in rep.cases if c["check"] == "product-identical"]
    assert ident and all(c["max_ratio"] == 1.0 for c in ident)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
