"""Deterministic builders for the families studied in famlab.

Every builder returns vertices labelled by consecutive integers starting at 1,
so repeated calls serialize byte for byte identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from famlab.family import SetFamily

FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))

EXAMPLE_BLOCKS = (
    (1, 2, 3, 4), (1, 5, 6, 7), (2, 5, 8, 9),
    (3, 6, 8, 10), (4, 7, 9, 10), (1, 8, 9, 11),
    (2, 6, 7, 11), (3, 4, 5, 11), (1, 2, 5, 10),
)


@dataclass(frozen=True)
class TransversalSet:
    vertices: tuple[int, ...]
    target: SetFamily

    def covers(self) -> bool:
        s = set(self.vertices)
        return all(s.intersection(b) for b in self.target.blocks)


def build_mk(k: int) -> SetFamily:
    """Intersecting k-family of k+1 blocks in which every vertex has degree 2.

    Block m+1 takes, from each earlier block, its smallest vertex that has
    so far appeared only once, then fills up with k-m fresh integers.
    """
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"build_mk needs k >= 2, got {k!r}")
    blocks = [list(range(1, k + 1))]
    deg = {v: 1 for v in blocks[0]}
    fresh = k + 1
    for m in range(1, k + 1):
        new = []
        for b in blocks:
            v = min(u for u in b if deg[u] == 1)
            new.append(v)
        new.extend(range(fresh, fresh + k - m))
        fresh += k - m
        for v in new:
            deg[v] = deg.get(v, 0) + 1
        blocks.append(new)
    return SetFamily(k, tuple(tuple(b) for b in blocks), f"M_{k}")


def mk_vertex_pairs(mk: SetFamily) -> dict[tuple[int, int], int]:
    """Map each pair (i, j) of 1-based block indices to the vertex they share."""
    where: dict[int, list[int]] = {}
    for idx, b in enumerate(mk.blocks, start=1):
        for v in b:
            where.setdefault(v, []).append(idx)
    pairs = {}
    for v, idxs in where.items():
        if len(idxs) != 2:
            raise ValueError(f"vertex {v} has degree {len(idxs)}, expected 2")
        pairs[tuple(idxs)] = v
    return pairs


def round_robin_rounds(n: int) -> list[list[tuple[int, int]]]:
    """Circle-method 1-factorization of the complete graph on nodes 1..n (n even)."""
    if n < 2 or n % 2:
        raise ValueError(f"need an even number of nodes, got {n}")
    k = n - 1
    rounds = []
    for r in range(k):
        matching = [(r + 1, n)]
        for i in range(1, (k - 1) // 2 + 1):
            a, b = (r + i) % k + 1, (r - i) % k + 1
            matching.append((min(a, b), max(a, b)))
        rounds.append(sorted(matching))
    return rounds


def build_one_factorization(k: int) -> list[TransversalSet]:
    """k pairwise disjoint minimum transversals of ``build_mk(k)`` for odd k."""
    if not isinstance(k, int) or k < 3 or k % 2 == 0:
        raise ValueError(f"build_one_factorization needs odd k >= 3, got {k!r}")
    mk = build_mk(k)
    pairs = mk_vertex_pairs(mk)
    return [
        TransversalSet(tuple(sorted(pairs[p] for p in matching)), mk)
        for matching in round_robin_rounds(k + 1)
    ]


def fano_plane() -> SetFamily:
    return SetFamily(3, FANO_LINES, "Fano plane")


def build_degree3_family(m: int) -> SetFamily:
    """Intersecting (2^m - 1)-uniform family of length 2^(m+1) - 1, all degrees 3.

    For m = 2 this is the Fano plane. For larger m, the blocks of M_k are
    followed by T_i + B_i, where T_1..T_k are disjoint transversals of M_k
    and B_1..B_k are the blocks of the m-1 family on shifted labels.
    """
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"build_degree3_family needs m >= 2, got {m!r}")
    if m == 2:
        return SetFamily(3, FANO_LINES, "degree-3 family m=2")
    k = 2**m - 1
    mk = build_mk(k)
    transversals = build_one_factorization(k)
    inner = build_degree3_family(m - 1)
    offset = k * (k + 1) // 2
    extra = tuple(
        t.vertices + tuple(v + offset for v in b) for t, b in zip(transversals, inner.blocks)
    )
    return SetFamily(k, mk.blocks + extra, f"degree-3 family m={m}")


def example_family() -> SetFamily:
    return SetFamily(4, EXAMPLE_BLOCKS, "example: length 9, tau 4")
