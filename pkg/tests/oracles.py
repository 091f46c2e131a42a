"""Brute-force reference implementations, deliberately naive and independent of famlab internals."""

from itertools import combinations, permutations


def brute_tau(blocks):
    """Smallest cover by trying vertex subsets in increasing size, lexicographically."""
    sets = [set(b) for b in blocks]
    verts = sorted(set().union(*sets)) if sets else []
    for t in range(len(verts) + 1):
        for combo in combinations(verts, t):
            s = set(combo)
            if all(s & b for b in sets):
                return t, combo
    raise AssertionError("unreachable")


def brute_covers(blocks, t):
    sets = [set(b) for b in blocks]
    verts = sorted(set().union(*sets))
    return [c for c in combinations(verts, t) if all(set(c) & b for b in sets)]


def brute_isomorphic(a, b):
    """Try every bijection between the vertex sets."""
    va = sorted({v for blk in a for v in blk})
    vb = sorted({v for blk in b for v in blk})
    if len(va) != len(vb) or len(a) != len(b):
        return False
    target = {frozenset(blk) for blk in b}
    for perm in permutations(vb):
        m = dict(zip(va, perm))
        if {frozenset(m[v] for v in blk) for blk in a} == target:
            return True
    return False


def perfect_matchings(nodes):
    nodes = list(nodes)
    if not nodes:
        yield []
        return
    first, rest = nodes[0], nodes[1:]
    for i, other in enumerate(rest):
        for m in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + m


def labeled_families(k, n, min_blocks, max_blocks, intersecting):
    """Every family of distinct k-subsets of {1..n} with a block count in range."""
    all_blocks = list(combinations(range(1, n + 1), k))
    for m in range(min_blocks, max_blocks + 1):
        for fam in combinations(all_blocks, m):
            if intersecting and any(not set(x) & set(y) for x, y in combinations(fam, 2)):
                continue
            yield fam
