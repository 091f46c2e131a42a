"""Exact minimum transversals (minimum hitting sets) of set families.

Vertices and blocks are packed into integer bitmasks: ``vmask[i]`` holds the
blocks containing vertex ``i`` and ``bmask[j]`` the vertices of block ``j``,
with vertices indexed in ascending id order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from famlab.errors import BudgetExceeded, InvalidFamilyError
from famlab.family import SetFamily, Violation, validate


@dataclass(frozen=True)
class TransversalResult:
    tau: int
    witness: tuple[int, ...]
    degree_lower_bound: int
    search_nodes: int


class _Index:
    def __init__(self, f: SetFamily):
        problems = validate(f)
        problems += [
            Violation(i, "empty-block", "blocks must be nonempty") for i, b in enumerate(f.blocks) if not b
        ]
        if problems:
            raise InvalidFamilyError(problems)
        self.ids = f.vertices
        pos = {v: i for i, v in enumerate(self.ids)}
        self.nblocks = len(f.blocks)
        self.full = (1 << self.nblocks) - 1
        self.vmask = [0] * len(self.ids)
        self.bmask = [0] * self.nblocks
        for j, b in enumerate(f.blocks):
            for v in b:
                self.vmask[pos[v]] |= 1 << j
                self.bmask[j] |= 1 << pos[v]
        self.max_degree = max((m.bit_count() for m in self.vmask), default=0)

    def ids_of(self, indices) -> tuple[int, ...]:
        return tuple(self.ids[i] for i in indices)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def degree_lower_bound(f: SetFamily) -> int:
    """ceil(length / max degree): no vertex can hit more blocks than its degree."""
    idx = _Index(f)
    if not idx.nblocks:
        return 0
    return -(-idx.nblocks // idx.max_degree)


def greedy_cover(f: SetFamily) -> tuple[int, ...]:
    idx = _Index(f)
    uncovered = idx.full
    chosen = []
    while uncovered:
        best = max(range(len(idx.ids)), key=lambda i: ((idx.vmask[i] & uncovered).bit_count(), -i))
        chosen.append(best)
        uncovered &= ~idx.vmask[best]
    return tuple(sorted(idx.ids_of(chosen)))


class _Counter:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.nodes = 0

    def tick(self, what: str, **stats) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded(f"{what}: node budget {self.limit} exceeded", {"nodes": self.nodes, **stats})


def _min_cover_size(idx: _Index, upper: int, counter: _Counter) -> int:
    """Branch and bound on the size of a minimum cover, starting from a known cover size."""
    best = upper

    def search(size: int, uncovered: int, excluded: int) -> None:
        nonlocal best
        counter.tick("exact_tau", best_so_far=best)
        if not uncovered:
            best = size
            return
        branch_block, branch_vertices = -1, 0
        for j in _bits(uncovered):
            free = idx.bmask[j] & ~excluded
            if branch_block < 0 or free.bit_count() < branch_vertices.bit_count():
                branch_block, branch_vertices = j, free
            if not free:
                return
        allowed = ~excluded
        maxdeg = 0
        for i in range(len(idx.ids)):
            if allowed >> i & 1:
                maxdeg = max(maxdeg, (idx.vmask[i] & uncovered).bit_count())
        if size + -(-uncovered.bit_count() // maxdeg) >= best:
            return
        for i in _bits(branch_vertices):
            search(size + 1, uncovered & ~idx.vmask[i], excluded)
            excluded |= 1 << i
            if size + 1 >= best:
                return

    search(0, idx.full, 0)
    return best


def _covers_of_size(idx: _Index, t: int, counter: _Counter) -> Iterator[tuple[int, ...]]:
    """Yield every t-subset of vertices that hits all blocks, in lexicographic order."""
    n = len(idx.ids)
    chosen: list[int] = []

    def rec(start: int, uncovered: int) -> Iterator[tuple[int, ...]]:
        counter.tick("enumerate_covers")
        remaining = t - len(chosen)
        if remaining == 0:
            if not uncovered:
                yield tuple(chosen)
            return
        if n - start < remaining:
            return
        if uncovered:
            tail = ~((1 << start) - 1)
            maxdeg = 0
            for j in _bits(uncovered):
                if not idx.bmask[j] & tail:
                    return
            for i in range(start, n):
                maxdeg = max(maxdeg, (idx.vmask[i] & uncovered).bit_count())
            if remaining * maxdeg < uncovered.bit_count():
                return
        for i in range(start, n - remaining + 1):
            chosen.append(i)
            yield from rec(i + 1, uncovered & ~idx.vmask[i])
            chosen.pop()

    yield from rec(0, idx.full)


def exact_tau(f: SetFamily, node_limit: int | None = None) -> TransversalResult:
    """Exact transversal number with the lexicographically smallest minimum cover.

    Raises BudgetExceeded when ``node_limit`` search nodes are not enough.
    """
    idx = _Index(f)
    if not idx.nblocks:
        return TransversalResult(0, (), 0, 0)
    counter = _Counter(node_limit)
    greedy = greedy_cover(f)
    tau = _min_cover_size(idx, len(greedy), counter)
    witness = next(_covers_of_size(idx, tau, counter))
    lower = -(-idx.nblocks // idx.max_degree)
    return TransversalResult(tau, idx.ids_of(witness), lower, counter.nodes)


def enumerate_covers_of_size(f: SetFamily, t: int, node_limit: int | None = None) -> list[tuple[int, ...]]:
    if t < 0:
        raise ValueError("cover size must be nonnegative")
    idx = _Index(f)
    counter = _Counter(node_limit)
    return [idx.ids_of(c) for c in _covers_of_size(idx, t, counter)]


def enumerate_min_transversals(f: SetFamily, node_limit: int | None = None) -> list[tuple[int, ...]]:
    return enumerate_covers_of_size(f, exact_tau(f, node_limit).tau, node_limit)


def transversal_family(f: SetFamily, node_limit: int | None = None) -> SetFamily:
    """The tau-uniform family whose blocks are all minimum transversals of ``f``."""
    if not f.blocks:
        raise ValueError("the empty family has no nonempty transversals")
    covers = enumerate_min_transversals(f, node_limit)
    return SetFamily(len(covers[0]), tuple(covers), f"minimum transversals of {f.comment or 'family'}")

