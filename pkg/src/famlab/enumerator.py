"""Isomorph-free generation of small uniform families.

Families grow one block at a time. A child ``C = P + B`` of a class
representative ``P`` is kept only when ``B`` is a canonical deletion of
``C``: removing the block that the canonical labelling of ``C`` puts last
must give a family isomorphic to ``P``. Siblings from the same parent are
deduplicated by canonical form. Each isomorphism class is therefore reached
from exactly one parent, and no global table of seen classes is needed.

Representatives are stored in canonical labelling (vertices 1..n).
"""

from __future__ import annotations

import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

from famlab.errors import BudgetExceeded
from famlab.family import Block, SetFamily
from famlab.isomorphism import canonical_form
from famlab.solver import exact_tau


@dataclass(frozen=True)
class EnumerationConstraints:
    k: int
    max_blocks: int
    min_blocks: int = 1
    max_vertices: int | None = None
    intersecting: bool = False
    min_degree: int | None = None
    max_degree: int | None = None
    exact_pairwise_intersection: int | None = None
    min_tau: int | None = None
    max_tau: int | None = None
    node_budget: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.max_blocks < 1 or self.min_blocks < 0 or self.min_blocks > self.max_blocks:
            raise ValueError("need 0 <= min_blocks <= max_blocks and max_blocks >= 1")
        if self.max_vertices is not None and self.max_vertices < self.k:
            raise ValueError("max_vertices must be at least k")
        if self.exact_pairwise_intersection is not None and not 0 <= self.exact_pairwise_intersection < self.k:
            raise ValueError("exact_pairwise_intersection must lie in [0, k)")

    def vertex_cap(self) -> int:
        cap = self.k * self.max_blocks
        return cap if self.max_vertices is None else min(cap, self.max_vertices)

    def satisfied_by(self, family: tuple[Block, ...] | SetFamily, tau: int) -> bool:
        """Check every constraint from scratch on a finished family."""
        blocks = family.blocks if isinstance(family, SetFamily) else family
        if not self.min_blocks <= len(blocks) <= self.max_blocks:
            return False
        if any(len(set(b)) != self.k for b in blocks) or len(set(blocks)) != len(blocks):
            return False
        deg = _degrees(blocks)
        if self.max_vertices is not None and len(deg) > self.max_vertices:
            return False
        sets = [set(b) for b in blocks]
        if self.intersecting and any(not a & b for a, b in combinations(sets, 2)):
            return False
        if self.exact_pairwise_intersection is not None and any(
            len(a & b) != self.exact_pairwise_intersection for a, b in combinations(sets, 2)
        ):
            return False
        if self.min_degree is not None and any(d < self.min_degree for d in deg.values()):
            return False
        if self.max_degree is not None and any(d > self.max_degree for d in deg.values()):
            return False
        if self.min_tau is not None and tau < self.min_tau:
            return False
        if self.max_tau is not None and tau > self.max_tau:
            return False
        return True


@dataclass
class FamilyClass:
    blocks: tuple[Block, ...]
    tau: int

    def family(self, k: int) -> SetFamily:
        return SetFamily(k, self.blocks)


@dataclass
class SearchReport:
    constraints: EnumerationConstraints
    classes: list[FamilyClass]
    nodes: int
    generated_per_length: dict[int, int]
    verdict: dict = field(default_factory=dict)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def families(self) -> list[SetFamily]:
        return [c.family(self.constraints.k) for c in self.classes]

    def to_dict(self) -> dict:
        return {
            "constraints": asdict(self.constraints),
            "class_count": self.class_count,
            "generated_per_length": {str(n): c for n, c in sorted(self.generated_per_length.items())},
            "nodes": self.nodes,
            "classes": [{"blocks": [list(b) for b in c.blocks], "tau": c.tau} for c in self.classes],
            "verdict": self.verdict,
        }


def _degrees(blocks) -> dict[int, int]:
    deg: dict[int, int] = {}
    for b in blocks:
        for v in b:
            deg[v] = deg.get(v, 0) + 1
    return deg


def _children(parent: tuple[Block, ...], c: EnumerationConstraints) -> tuple[list[tuple[Block, ...]], int]:
    """Accepted canonical children of one representative, plus candidates examined."""
    n = max((v for b in parent for v in b), default=0)
    deg = _degrees(parent)
    parent_sets = [set(b) for b in parent]
    existing = set(parent)
    cap = c.vertex_cap()
    accepted: dict[tuple[Block, ...], None] = {}
    examined = 0
    for old in range(c.k, -1, -1):
        fresh = c.k - old
        if n + fresh > cap:
            continue
        tail = tuple(range(n + 1, n + fresh + 1))
        for s in combinations(range(1, n + 1), old):
            block = s + tail
            if block in existing:
                continue
            ss = set(s)
            if c.intersecting and not all(ss & b for b in parent_sets):
                continue
            if c.exact_pairwise_intersection is not None and any(
                len(ss & b) != c.exact_pairwise_intersection for b in parent_sets
            ):
                continue
            if c.max_degree is not None and any(deg.get(v, 0) >= c.max_degree for v in s):
                continue
            examined += 1
            child = parent + (block,)
            form = canonical_form(SetFamily(c.k, child))
            if form.canonical_blocks in accepted:
                continue
            # canonical deletion: the block labelled last must be isomorphic to the new one
            last = form.canonical_blocks[-1]
            inverse = {p: v for v, p in form.certificate.items()}
            deleted = tuple(sorted(inverse[p] for p in last))
            rest = tuple(b for b in child if b != deleted)
            if deleted != block and canonical_form(SetFamily(c.k, rest)).canonical_blocks != parent:
                continue
            accepted[form.canonical_blocks] = None
    return list(accepted), examined


def _expand(args):
    parent, c = args
    return _children(parent, c)


def default_workers() -> int:
    raw = os.environ.get("FAMLAB_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"FAMLAB_THREADS must be an integer, got {raw!r}") from None
    return 1


def enumerate_families(c: EnumerationConstraints, workers: int | None = None) -> SearchReport:
    """One canonical representative per isomorphism class of families meeting ``c``.

    Classes are reported sorted by (length, canonical block list), so the
    report is the same for every worker count.
    """
    workers = default_workers() if workers is None else max(1, workers)
    level: list[tuple[Block, ...]] = [()]
    per_length = {0: 1}
    emitted: list[FamilyClass] = []
    nodes = 0
    pool = ProcessPoolExecutor(workers, mp_context=multiprocessing.get_context("spawn")) if workers > 1 else None
    try:
        for length in range(0, c.max_blocks + 1):
            for fam in level:
                if length >= c.min_blocks:
                    tau = exact_tau(SetFamily(c.k, fam)).tau
                    if c.satisfied_by(fam, tau):
                        emitted.append(FamilyClass(fam, tau))
            if length == c.max_blocks:
                break
            jobs = [(p, c) for p in level]
            if pool is not None and len(jobs) > 1:
                results = list(pool.map(_expand, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
            else:
                results = [_expand(j) for j in jobs]
            nxt: list[tuple[Block, ...]] = []
            for kids, examined in results:
                nodes += examined
                nxt.extend(kids)
            if c.node_budget is not None and nodes > c.node_budget:
                raise BudgetExceeded(
                    f"enumeration node budget {c.node_budget} exceeded at length {length + 1}",
                    {"nodes": nodes, "generated_per_length": per_length, "emitted": len(emitted)},
                )
            nxt.sort()
            level = nxt
            per_length[length + 1] = len(level)
            if not level:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    emitted.sort(key=lambda fc: (len(fc.blocks), fc.blocks))
    return SearchReport(c, emitted, nodes, per_length)


# -- claim checks ------------------------------------------------------------


def verify_length4_claim(workers: int | None = None) -> SearchReport:
    """Every intersecting 4-family with at most 4 blocks has tau <= 2."""
    report = enumerate_families(EnumerationConstraints(k=4, max_blocks=4, intersecting=True), workers)
    max_tau = max(fc.tau for fc in report.classes)
    report.verdict = {
        "claim": "intersecting 4-families of length <= 4 have tau <= 2",
        "class_count": report.class_count,
        "max_tau": max_tau,
        "pass": max_tau <= 2,
    }
    return report


def verify_mk_uniqueness(k: int, workers: int | None = None) -> SearchReport:
    """Intersecting k-families of length k+1, all degrees 2, tau = ceil((k+1)/2) form one class, M_k."""
    from famlab.constructors import build_mk
    from famlab.isomorphism import is_isomorphic

    if k not in (3, 4):
        raise ValueError("uniqueness is checked for k = 3 and k = 4 only")
    tau = -(-(k + 1) // 2)
    c = EnumerationConstraints(
        k=k, min_blocks=k + 1, max_blocks=k + 1, intersecting=True,
        min_degree=2, max_degree=2, min_tau=tau, max_tau=tau,
    )
    report = enumerate_families(c, workers)
    fams = report.families()
    pairwise_one = all(
        len(set(a) & set(b)) == 1 for f in fams for a, b in combinations(f.blocks, 2)
    )
    iso = len(fams) == 1 and is_isomorphic(fams[0], build_mk(k))
    report.verdict = {
        "claim": f"M_{k} is the unique such family up to relabelling",
        "class_count": report.class_count,
        "isomorphic_to_mk": iso,
        "pairwise_intersections_all_one": pairwise_one,
        "pass": report.class_count == 1 and iso and pairwise_one,
    }
    return report


def fano_minus_line() -> SetFamily:
    from famlab.constructors import fano_plane

    f = fano_plane()
    return f.subfamily(range(1, 7), "Fano plane minus its first line")


def verify_q3_lower_bound(witness: SetFamily | None = None, workers: int | None = None) -> SearchReport:
    """No intersecting 3-family of length <= 5 has tau 3; a length-6 witness with tau 3 exists."""
    from famlab.family import is_intersecting

    witness = witness if witness is not None else fano_minus_line()
    report = enumerate_families(EnumerationConstraints(k=3, max_blocks=5, intersecting=True), workers)
    hits = [fc for fc in report.classes if fc.tau >= 3]
    w_tau = exact_tau(witness).tau
    w_ok = witness.k == 3 and len(witness) == 6 and is_intersecting(witness) and w_tau == 3
    report.verdict = {
        "claim": "q(3) = 6",
        "class_count": report.class_count,
        "classes_with_tau_3": len(hits),
        "max_tau": max(fc.tau for fc in report.classes),
        "witness_length": len(witness),
        "witness_tau": w_tau,
        "witness_ok": w_ok,
        "pass": not hits and w_ok,
    }
    return report


@dataclass
class CaseSearchReport:
    cover_count: int
    covers: list[tuple[int, ...]]
    fresh_vertex_check: dict
    candidates_examined: int
    expected_candidates: int
    max_tau: int
    tau_histogram: dict[int, int]
    pair_checks: dict
    assumptions: list[str]
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["covers"] = [list(t) for t in self.covers]
        d["tau_histogram"] = {str(t): n for t, n in sorted(self.tau_histogram.items())}
        return d


def q4_case_search(node_limit: int | None = 10**6) -> CaseSearchReport:
    """Exhaust the M_4 + three blocks through a new vertex x case of the q(4) > 8 argument.

    Assumes (and the report lists) the reductions checked elsewhere: the
    minimal family has a vertex x of degree exactly 3, and deleting the
    blocks through x leaves a copy of M_4.
    """
    from famlab.constructors import build_mk
    from famlab.solver import enumerate_covers_of_size

    mk = build_mk(4)
    old = mk.vertices
    x = max(old) + 1
    covers = enumerate_covers_of_size(mk, 3)

    # a block through x has three further vertices; they must meet all of M_4
    fresh = (x + 1, x + 2, x + 3)
    mk_sets = [set(b) for b in mk.blocks]
    covering_triples = [
        t for t in combinations(old + fresh, 3) if all(set(t) & b for b in mk_sets)
    ]
    with_fresh = [t for t in covering_triples if set(t) & set(fresh)]
    fresh_check = {
        "triples_examined": comb(len(old) + len(fresh), 3),
        "covering_triples": len(covering_triples),
        "covering_triples_using_fresh_vertices": len(with_fresh),
        "covering_triples_equal_cover_list": sorted(covering_triples) == covers,
    }

    total_pairs = comb(len(old) + 1, 2)
    max_present = comb(4, 2) * 8
    hist: dict[int, int] = {}
    examined = 0
    pair_ok = True
    worst_present = 0
    for trio in combinations(covers, 3):
        examined += 1
        fam = SetFamily(4, mk.blocks + tuple((x,) + t for t in trio))
        present = {p for b in fam.blocks for p in combinations(b, 2)}
        worst_present = max(worst_present, len(present))
        pair_ok &= len(fam.vertices) == 11 and len(present) <= max_present and total_pairs - len(present) >= 7
        tau = exact_tau(fam, node_limit).tau
        hist[tau] = hist.get(tau, 0) + 1

    expected = comb(len(covers), 3)
    max_tau = max(hist)
    pair_checks = {
        "vertices": len(old) + 1,
        "total_pairs": total_pairs,
        "max_pairs_in_blocks": max_present,
        "max_pairs_observed": worst_present,
        "min_unused_pairs_bound": total_pairs - max_present,
        "holds_for_all_candidates": pair_ok,
    }
    passed = (
        max_tau <= 3
        and examined == expected
        and not with_fresh
        and fresh_check["covering_triples_equal_cover_list"]
        and pair_ok
        and total_pairs - max_present >= 7
    )
    return CaseSearchReport(
        cover_count=len(covers),
        covers=covers,
        fresh_vertex_check=fresh_check,
        candidates_examined=examined,
        expected_candidates=expected,
        max_tau=max_tau,
        tau_histogram=hist,
        pair_checks=pair_checks,
        assumptions=[
            "a minimal intersecting 4-family with tau 4 and length 8 has a vertex x of degree 3 (q4-length4, degree2-structure)",
            "the blocks avoiding x form a copy of M_4 (mk-uniqueness)",
        ],
        passed=passed,
    )
