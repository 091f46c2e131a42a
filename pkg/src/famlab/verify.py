"""Claim reproduction suite.

Each check returns ``(measured, expected)`` dicts; :func:`run_suite` wraps
them into :class:`ClaimRecord` values in a fixed dependency order. All
quantities are integers or booleans and are compared exactly.
"""

from __future__ import annotations

import json
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable

from famlab import constructors as con
from famlab import enumerator as enum
from famlab.errors import BudgetExceeded
from famlab.family import SetFamily, degrees, is_intersecting, pairwise_intersections
from famlab.isomorphism import is_isomorphic
from famlab.solver import exact_tau, transversal_family

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"


@dataclass
class ClaimRecord:
    id: str
    anchor: str
    params: dict
    verdict: str
    measured: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    elapsed_ms: int = 0


@dataclass(frozen=True)
class _Check:
    id: str
    anchor: str
    params: dict
    run: Callable[[], tuple[dict, dict]]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _compare(measured: dict, expected: dict) -> bool:
    return all(measured.get(key) == value for key, value in expected.items())


def check_mk(k: int) -> tuple[dict, dict]:
    mk = con.build_mk(k)
    inter = pairwise_intersections(mk)
    off = {inter[i][j] for i, j in combinations(range(len(mk)), 2)}
    measured = {
        "length": len(mk),
        "vertices": len(mk.vertices),
        "degrees": sorted(set(degrees(mk).values())),
        "pairwise_intersections": sorted(off),
        "intersecting": is_intersecting(mk),
        "tau": exact_tau(mk).tau,
    }
    expected = {
        "length": k + 1,
        "vertices": k * (k + 1) // 2,
        "degrees": [2],
        "pairwise_intersections": [1],
        "intersecting": True,
        "tau": _ceil_div(k + 1, 2),
    }
    return measured, expected


def check_mk_uniqueness(k: int) -> tuple[dict, dict]:
    report = enum.verify_mk_uniqueness(k)
    v = report.verdict
    measured = {key: v[key] for key in ("class_count", "isomorphic_to_mk", "pairwise_intersections_all_one")}
    return measured, {"class_count": 1, "isomorphic_to_mk": True, "pairwise_intersections_all_one": True}


def check_mk_characterization(k: int) -> tuple[dict, dict]:
    """Degree 2 everywhere plus one-point pairwise intersections forces M_k.

    No length is imposed: the search runs to k+2 blocks and must find a
    single class, of length k+1.
    """
    c = enum.EnumerationConstraints(
        k=k, max_blocks=k + 2, intersecting=True, exact_pairwise_intersection=1,
        min_degree=2, max_degree=2,
    )
    fams = enum.enumerate_families(c).families()
    measured = {
        "class_count": len(fams),
        "lengths": sorted(len(f) for f in fams),
        "isomorphic_to_mk": len(fams) == 1 and is_isomorphic(fams[0], con.build_mk(k)),
    }
    return measured, {"class_count": 1, "lengths": [k + 1], "isomorphic_to_mk": True}


def check_degree2_dichotomy(k: int) -> tuple[dict, dict]:
    """Intersecting k-families with every degree <= 2 reach tau = k only as M_2."""
    c = enum.EnumerationConstraints(k=k, max_blocks=k + 2, intersecting=True, max_degree=2)
    report = enum.enumerate_families(c)
    reaching = [fc.family(k) for fc in report.classes if fc.tau >= k]
    measured = {
        "class_count": report.class_count,
        "max_length": max(len(fc.blocks) for fc in report.classes),
        "classes_with_tau_k": len(reaching),
        "all_such_are_m2": all(is_isomorphic(f, con.build_mk(2)) for f in reaching) if k == 2 else not reaching,
    }
    expected = {"classes_with_tau_k": 1 if k == 2 else 0, "all_such_are_m2": True}
    return measured, expected


def check_disjoint_transversals(k: int) -> tuple[dict, dict]:
    ts = con.build_one_factorization(k)
    mk = con.build_mk(k)
    union = [v for t in ts for v in t.vertices]
    measured = {
        "count": len(ts),
        "sizes": sorted({len(t.vertices) for t in ts}),
        "all_cover": all(t.covers() for t in ts),
        "pairwise_disjoint": len(union) == len(set(union)),
        "partition_vertex_set": sorted(union) == list(mk.vertices),
        "tau": exact_tau(mk).tau,
    }
    expected = {
        "count": k,
        "sizes": [(k + 1) // 2],
        "all_cover": True,
        "pairwise_disjoint": True,
        "partition_vertex_set": True,
        "tau": (k + 1) // 2,
    }
    return measured, expected


def check_transversals_of_transversals(k: int) -> tuple[dict, dict]:
    mk = con.build_mk(k)
    tf = transversal_family(mk)
    disjoint = SetFamily((k + 1) // 2, tuple(t.vertices for t in con.build_one_factorization(k)))
    measured = {
        "min_transversals": len(tf),
        "tau_all_min_transversals": exact_tau(tf).tau,
        "tau_disjoint_transversals": exact_tau(disjoint).tau,
    }
    # perfect matchings of k+1 block indices: (k)!! = k * (k-2) * ... * 1
    matchings = 1
    for odd in range(k, 0, -2):
        matchings *= odd
    expected = {"min_transversals": matchings, "tau_all_min_transversals": k, "tau_disjoint_transversals": k}
    return measured, expected


def check_degree3_family(m: int) -> tuple[dict, dict]:
    f = con.build_degree3_family(m)
    k = 2**m - 1
    res = exact_tau(f)
    measured = {
        "k": f.k,
        "length": len(f),
        "vertices": len(f.vertices),
        "degrees": sorted(set(degrees(f).values())),
        "intersecting": is_intersecting(f),
        "degree_lower_bound": res.degree_lower_bound,
        "tau": res.tau,
        "tau_at_least_bound": res.tau >= _ceil_div(2 * k + 1, 3),
    }
    expected = {
        "k": k,
        "length": 2 * k + 1,
        "degrees": [3],
        "intersecting": True,
        "degree_lower_bound": _ceil_div(2 * k + 1, 3),
        "tau_at_least_bound": True,
    }
    if m == 2:
        expected["tau"] = 3
        expected["isomorphic_to_fano"] = True
        measured["isomorphic_to_fano"] = is_isomorphic(f, con.fano_plane())
    return measured, expected


def check_q4_upper() -> tuple[dict, dict]:
    f = con.example_family()
    res = exact_tau(f)
    measured = {
        "k": f.k,
        "length": len(f),
        "vertices": len(f.vertices),
        "intersecting": is_intersecting(f),
        "tau": res.tau,
        "first5_isomorphic_to_m4": is_isomorphic(f.subfamily(range(5)), con.build_mk(4)),
        "q4_at_most": len(f) if res.tau == 4 else None,
    }
    expected = {
        "k": 4, "length": 9, "vertices": 11, "intersecting": True, "tau": 4,
        "first5_isomorphic_to_m4": True, "q4_at_most": 9,
    }
    return measured, expected


def check_length4() -> tuple[dict, dict]:
    v = enum.verify_length4_claim().verdict
    return {"class_count": v["class_count"], "max_tau": v["max_tau"], "pass": v["pass"]}, {"pass": True}


def check_q4_case_search() -> tuple[dict, dict]:
    r = enum.q4_case_search()
    measured = {
        "cover_count": r.cover_count,
        "candidates_examined": r.candidates_examined,
        "expected_candidates": r.expected_candidates,
        "max_tau": r.max_tau,
        "covering_triples_using_fresh_vertices": r.fresh_vertex_check["covering_triples_using_fresh_vertices"],
        "total_pairs": r.pair_checks["total_pairs"],
        "max_pairs_in_blocks": r.pair_checks["max_pairs_in_blocks"],
        "pair_bound_holds": r.pair_checks["holds_for_all_candidates"],
        "assumptions": r.assumptions,
        "pass": r.passed,
    }
    expected = {
        "candidates_examined": r.expected_candidates,
        "max_tau": 3,
        "covering_triples_using_fresh_vertices": 0,
        "total_pairs": 55,
        "max_pairs_in_blocks": 48,
        "pair_bound_holds": True,
        "pass": True,
    }
    return measured, expected


def check_q3_lower(witness: SetFamily | None = None) -> tuple[dict, dict]:
    v = enum.verify_q3_lower_bound(witness).verdict
    measured = {key: v[key] for key in ("class_count", "classes_with_tau_3", "max_tau", "witness_length", "witness_tau")}
    fano = con.fano_plane()
    measured["fano_tau"] = exact_tau(fano).tau
    measured["fano_minus_any_line_tau"] = sorted(
        {exact_tau(fano.subfamily([j for j in range(7) if j != i])).tau for i in range(7)}
    )
    expected = {
        "classes_with_tau_3": 0, "witness_length": 6, "witness_tau": 3,
        "fano_tau": 3, "fano_minus_any_line_tau": [3],
    }
    return measured, expected


def _checks(q3_witness: SetFamily | None = None) -> list[_Check]:
    out = [
        _Check("mk-tau", "M_k: k+1 blocks, k(k+1)/2 vertices, degrees 2, tau = ceil((k+1)/2)", {"k": k},
               lambda k=k: check_mk(k))
        for k in range(2, 13)
    ]
    out += [
        _Check("mk-uniqueness", "M_k is the only all-degree-2 family with its length and tau", {"k": k},
               lambda k=k: check_mk_uniqueness(k))
        for k in (3, 4)
    ]
    out += [
        _Check("mk-characterization", "degree 2 plus one-point pairwise intersections forces M_k", {"k": k},
               lambda k=k: check_mk_characterization(k))
        for k in (2, 3, 4)
    ]
    out += [
        _Check("degree2-structure", "without a degree-3 vertex, tau = k happens only for M_2", {"k": k},
               lambda k=k: check_degree2_dichotomy(k))
        for k in (2, 3, 4)
    ]
    out += [
        _Check("disjoint-transversals", "M_k has k pairwise disjoint transversals for odd k", {"k": k},
               lambda k=k: check_disjoint_transversals(k))
        for k in (3, 5, 7, 9, 11)
    ]
    out += [
        _Check("transversal-of-transversals", "the transversals of M_k form a family with tau = k", {"k": k},
               lambda k=k: check_transversals_of_transversals(k))
        for k in (3, 5)
    ]
    out += [
        _Check("degree3-family", "(2^m-1)-uniform intersecting family, 2k+1 blocks, degrees 3, tau >= (2k+1)/3",
               {"m": m}, lambda m=m: check_degree3_family(m))
        for m in (2, 3)
    ]
    out += [
        _Check("q4-upper", "the 9-block example has tau 4 and contains M_4, so q(4) <= 9", {}, check_q4_upper),
        _Check("q4-length4", "intersecting 4-families of length <= 4 have tau <= 2", {}, check_length4),
        _Check("q4-case-search", "M_4 plus three blocks through a new vertex always has tau <= 3", {},
               check_q4_case_search),
        _Check("q3-lower", "no intersecting 3-family of length <= 5 has tau 3; q(3) = 6", {},
               lambda: check_q3_lower(q3_witness)),
    ]
    return out


CLAIM_IDS = tuple(dict.fromkeys(c.id for c in _checks()))

# numbered statement -> claim ids that check it
COMPLETENESS = {
    "M_k construction (length, vertices, tau)": ["mk-tau"],
    "uniqueness of M_k up to relabelling": ["mk-uniqueness"],
    "degree-2 one-point-intersection characterization": ["mk-characterization"],
    "degree-3 vertex dichotomy (consequences used for q(4))": ["degree2-structure", "q4-length4"],
    "q(4) = 9": ["q4-upper", "q4-length4", "q4-case-search"],
    "q(3) = 6": ["q3-lower"],
    "k disjoint transversals of M_k": ["disjoint-transversals"],
    "transversal family of M_k has tau k": ["transversal-of-transversals"],
    "degree-3 family for k = 2^m - 1": ["degree3-family"],
    "9-block example with embedded M_4": ["q4-upper"],
}


def _run_one(check: _Check) -> ClaimRecord:
    start = time.perf_counter()
    try:
        measured, expected = check.run()
        verdict = PASS if _compare(measured, expected) else FAIL
    except BudgetExceeded as exc:
        measured, expected, verdict = {"error": str(exc), "stats": exc.stats}, {}, ERROR
    except Exception as exc:  # noqa: BLE001 - the suite must always complete
        measured = {"error": f"{type(exc).__name__}: {exc}", "traceback": traceback.format_exc(limit=3)}
        expected, verdict = {}, ERROR
    elapsed = int((time.perf_counter() - start) * 1000)
    return ClaimRecord(check.id, check.anchor, dict(check.params), verdict, measured, expected, elapsed)


def run_suite(selection="all", workers: int | None = None, q3_witness: SetFamily | None = None) -> list[ClaimRecord]:
    """Run the selected claims; records come back in the fixed suite order.

    ``selection`` is ``"all"`` or an iterable of claim ids. Unknown ids raise
    ValueError before anything runs.
    """
    checks = _checks(q3_witness)
    if selection != "all":
        wanted = list(selection)
        unknown = [s for s in wanted if s not in CLAIM_IDS]
        if unknown:
            raise ValueError(f"unknown claim id(s): {', '.join(unknown)}")
        checks = [c for c in checks if c.id in wanted]
    workers = enum.default_workers() if workers is None else max(1, workers)
    if workers == 1:
        return [_run_one(c) for c in checks]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(_run_one, checks))


def summarize(records: list[ClaimRecord]) -> dict:
    return {
        "pass": sum(r.verdict == PASS for r in records),
        "fail": sum(r.verdict == FAIL for r in records),
        "error": sum(r.verdict == ERROR for r in records),
    }


def report_dict(records: list[ClaimRecord], timings: bool = True) -> dict:
    claims = []
    for r in records:
        d = asdict(r)
        if not timings:
            del d["elapsed_ms"]
        claims.append(d)
    covered = {r.id for r in records}
    table = [
        {"statement": s, "claims": ids, "covered": all(i in covered for i in ids)}
        for s, ids in COMPLETENESS.items()
    ]
    return {"claims": claims, "summary": summarize(records), "completeness": table}


def report_json(records: list[ClaimRecord], timings: bool = True) -> str:
    return json.dumps(report_dict(records, timings), indent=2) + "\n"


def render_markdown(records: list[ClaimRecord]) -> str:
    lines = ["| claim | params | verdict | ms |", "|---|---|---|---|"]
    for r in records:
        params = ", ".join(f"{k}={v}" for k, v in r.params.items()) or "-"
        lines.append(f"| {r.id} | {params} | {r.verdict} | {r.elapsed_ms} |")
    s = summarize(records)
    lines.append("")
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['error']} errors")
    return "\n".join(lines) + "\n"


def exit_code(records: list[ClaimRecord]) -> int:
    s = summarize(records)
    if s["error"]:
        return 3
    return 1 if s["fail"] else 0

