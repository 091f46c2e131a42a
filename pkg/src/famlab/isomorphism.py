"""Canonical labelling and isomorphism testing for uniform set families.

The canonical form is found by individualization-refinement: vertex
partitions are refined by block incidence until stable, a vertex of the
first non-singleton cell is individualized, and the search recurses. Every
leaf yields a vertex ordering; the canonical block list is the smallest
relabelled block list over all leaves. The search tree depends only on the
structure of the family, so isomorphic families get identical forms.

Branches are skipped when an automorphism (twin swap, or one found at an
earlier leaf) maps them onto a branch already explored.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from famlab.family import Block, SetFamily, require_valid


@dataclass(frozen=True)
class CanonicalForm:
    k: int
    canonical_blocks: tuple[Block, ...]
    certificate: dict[int, int] = field(compare=False, hash=False)
    leaves: int = field(default=0, compare=False)

    def family(self) -> SetFamily:
        return SetFamily(self.k, self.canonical_blocks)


def _common_prefix(a: list[int], b: list[int]) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


class _Canonizer:
    def __init__(self, f: SetFamily):
        self.ids = f.vertices
        pos = {v: i for i, v in enumerate(self.ids)}
        self.blocks = [tuple(pos[v] for v in b) for b in f.blocks]
        self.incidence: list[list[int]] = [[] for _ in self.ids]
        for j, b in enumerate(self.blocks):
            for i in b:
                self.incidence[i].append(j)
        self.twin_key = [tuple(inc) for inc in self.incidence]
        self.first: tuple[Block, ...] | None = None
        self.first_order: list[int] | None = None
        self.first_path: list[int] = []
        self.best: tuple[Block, ...] | None = None
        self.best_path: list[int] = []
        self.best_order: list[int] | None = None
        self.generators: list[tuple[int, ...]] = []
        self.leaves = 0

    def refine(self, cells: list[list[int]]) -> list[list[int]]:
        n = len(self.ids)
        while True:
            cell_of = [0] * n
            for c, cell in enumerate(cells):
                for i in cell:
                    cell_of[i] = c
            block_sig = [tuple(sorted(cell_of[i] for i in b)) for b in self.blocks]
            out: list[list[int]] = []
            split = False
            for cell in cells:
                if len(cell) == 1:
                    out.append(cell)
                    continue
                groups: dict[tuple, list[int]] = {}
                for i in cell:
                    sig = tuple(sorted(block_sig[j] for j in self.incidence[i]))
                    groups.setdefault(sig, []).append(i)
                if len(groups) > 1:
                    split = True
                out.extend(groups[s] for s in sorted(groups))
            cells = out
            if not split:
                return cells

    def leaf(self, cells: list[list[int]], path: list[int]) -> int | None:
        """Record a leaf; return the depth to backtrack to if it repeats a known leaf."""
        self.leaves += 1
        order = [cell[0] for cell in cells]
        label = [0] * len(order)
        for p, i in enumerate(order, start=1):
            label[i] = p
        cert = tuple(sorted(tuple(sorted(label[i] for i in b)) for b in self.blocks))
        if self.first is None:
            self.first, self.first_order, self.first_path = cert, order, path
            self.best, self.best_order, self.best_path = cert, order, path
            return None
        jumps = []
        if cert == self.first:
            self.add_automorphism(self.first_order, order)
            jumps.append(_common_prefix(path, self.first_path))
        if cert < self.best:
            self.best, self.best_order, self.best_path = cert, order, path
        elif cert == self.best and self.best_order is not self.first_order:
            self.add_automorphism(self.best_order, order)
            jumps.append(_common_prefix(path, self.best_path))
        return min(jumps) if jumps else None

    def add_automorphism(self, src: list[int], dst: list[int]) -> None:
        # equal certificates: the position-by-position map is an automorphism
        perm = [0] * len(src)
        for a, b in zip(src, dst):
            perm[a] = b
        self.generators.append(tuple(perm))

    def orbit_roots(self, path: list[int], cell: list[int]) -> dict[int, int]:
        parent = {i: i for i in cell}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            if all(g[p] == p for p in path):
                for i in cell:
                    a, b = find(i), find(g[i])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return {i: find(i) for i in cell}

    def search(self, cells: list[list[int]], path: list[int]) -> int | None:
        cells = self.refine(cells)
        target = next((c for c, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            return self.leaf(cells, path)
        cell = cells[target]
        explored: list[int] = []
        seen_twins: set[tuple] = set()
        for v in sorted(cell):
            if self.twin_key[v] in seen_twins:
                continue
            roots = self.orbit_roots(path, cell)
            if any(roots[v] == roots[u] for u in explored):
                continue
            seen_twins.add(self.twin_key[v])
            explored.append(v)
            rest = [u for u in cell if u != v]
            child = cells[:target] + [[v], rest] + cells[target + 1 :]
            # a repeated leaf proves the subtree below the common ancestor is
            # an automorphic image of one already explored
            jump = self.search(child, path + [v])
            if jump is not None and jump < len(path):
                return jump
        return None

    def run(self) -> CanonicalForm:
        self.search([list(range(len(self.ids)))], [])
        cert = {self.ids[i]: p for p, i in enumerate(self.best_order, start=1)}
        return CanonicalForm(len(self.blocks[0]), self.best, cert, self.leaves)


def canonical_form(f: SetFamily) -> CanonicalForm:
    require_valid(f)
    if not f.blocks:
        return CanonicalForm(f.k, (), {}, 0)
    return _Canonizer(f).run()


def invariants(f: SetFamily) -> tuple:
    """Cheap isomorphism invariants: k, length, degree and intersection-size multisets."""
    deg = Counter(v for b in f.blocks for v in b)
    sets = [set(b) for b in f.blocks]
    inter = sorted(len(a & b) for a, b in combinations(sets, 2))
    return (f.k, len(f.blocks), tuple(sorted(deg.values())), tuple(inter))


def find_isomorphism(a: SetFamily, b: SetFamily) -> dict[int, int] | None:
    """Vertex bijection mapping the blocks of ``a`` onto those of ``b``, or None."""
    require_valid(a)
    require_valid(b)
    if invariants(a) != invariants(b):
        return None
    ca, cb = canonical_form(a), canonical_form(b)
    if ca.canonical_blocks != cb.canonical_blocks:
        return None
    back = {p: v for v, p in cb.certificate.items()}
    return {v: back[p] for v, p in sorted(ca.certificate.items())}


def is_isomorphic(a: SetFamily, b: SetFamily) -> bool:
    return find_isomorphism(a, b) is not None
