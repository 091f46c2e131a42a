import json

import pytest

from famlab import verify
from famlab.constructors import build_mk


@pytest.fixture(scope="module")
def full_run():
    return verify.run_suite("all", workers=1)


def test_every_claim_passes(full_run):
    bad = [(r.id, r.params, r.measured) for r in full_run if r.verdict != verify.PASS]
    assert not bad


def test_suite_order_follows_dependencies(full_run):
    ids = list(dict.fromkeys(r.id for r in full_run))
    assert ids == [
        "mk-tau", "mk-uniqueness", "mk-characterization", "degree2-structure", "disjoint-transversals",
        "transversal-of-transversals", "degree3-family", "q4-upper", "q4-length4",
        "q4-case-search", "q3-lower",
    ]


def test_mk_tau_k6(full_run):
    rec = next(r for r in full_run if r.id == "mk-tau" and r.params == {"k": 6})
    assert rec.measured["tau"] == rec.expected["tau"] == 4


def test_q4_upper(full_run):
    rec = next(r for r in full_run if r.id == "q4-upper")
    assert rec.measured["tau"] == 4 and rec.measured["length"] == 9 and rec.measured["q4_at_most"] == 9


def test_transversal_of_transversals_k5(full_run):
    rec = next(r for r in full_run if r.id == "transversal-of-transversals" and r.params == {"k": 5})
    assert rec.measured["tau_all_min_transversals"] == 5
    assert rec.measured["min_transversals"] == 15


def test_degree3_reports_exact_tau(full_run):
    rec = next(r for r in full_run if r.id == "degree3-family" and r.params == {"m": 3})
    assert rec.measured["tau"] >= rec.measured["degree_lower_bound"] == 5


def test_report_schema(full_run):
    data = json.loads(verify.report_json(full_run))
    assert set(data) == {"claims", "summary", "completeness"}
    assert list(data["claims"][0]) == ["id", "anchor", "params", "verdict", "measured", "expected", "elapsed_ms"]
    assert data["summary"] == {"pass": len(full_run), "fail": 0, "error": 0}
    assert all(row["covered"] for row in data["completeness"])


def test_completeness_table_names_real_claims():
    for ids in verify.COMPLETENESS.values():
        assert set(ids) <= set(verify.CLAIM_IDS)
    assert set(verify.CLAIM_IDS) == {i for ids in verify.COMPLETENESS.values() for i in ids}


def test_reports_identical_across_runs_and_workers(full_run):
    again = verify.run_suite("all", workers=4)
    assert verify.report_json(full_run, timings=False) == verify.report_json(again, timings=False)


def test_selection_and_unknown_ids():
    recs = verify.run_suite(["q4-upper", "disjoint-transversals"])
    assert [r.id for r in recs] == ["disjoint-transversals"] * 5 + ["q4-upper"]
    with pytest.raises(ValueError):
        verify.run_suite(["nonexistent-id"])


def test_failures_and_errors_are_recorded(monkeypatch):
    monkeypatch.setattr(verify, "check_q4_upper", lambda: ({"tau": 3}, {"tau": 4}))

    def boom():
        raise RuntimeError("kaput")

    monkeypatch.setattr(verify, "check_length4", boom)
    recs = verify.run_suite(["q4-upper", "q4-length4"])
    assert [r.verdict for r in recs] == [verify.FAIL, verify.ERROR]
    assert "kaput" in recs[1].measured["error"]
    assert verify.exit_code(recs) == 3
    assert verify.exit_code(recs[:1]) == 1


def test_bad_q3_witness_fails_claim():
    recs = verify.run_suite(["q3-lower"], q3_witness=build_mk(3))
    assert recs[0].verdict == verify.FAIL


def test_markdown_render(full_run):
    md = verify.render_markdown(full_run)
    assert md.startswith("| claim |") and f"{len(full_run)} passed" in md
