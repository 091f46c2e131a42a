"""Uniform set families: data model, validation and the .fam / JSON formats."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from famlab.errors import FamilyParseError, InvalidFamilyError

Block = tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    block_index: int | None
    rule: str
    message: str

    def __str__(self) -> str:
        where = "family" if self.block_index is None else f"block {self.block_index}"
        return f"{where}: {self.rule}: {self.message}"


@dataclass(frozen=True)
class SetFamily:
    """An ordered list of k-uniform blocks over positive integer vertices.

    Blocks are stored as ascending tuples. Construction never rejects
    input; call :func:`validate` (or any operation, which validates) to
    find out whether the invariants hold.
    """

    k: int
    blocks: tuple[Block, ...] = ()
    comment: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for b in self.blocks for v in b}))

    def subfamily(self, indices: Iterable[int], comment: str = "") -> SetFamily:
        return SetFamily(self.k, tuple(self.blocks[i] for i in indices), comment)

    def relabel(self, mapping) -> SetFamily:
        """Apply a vertex map (dict or callable) to every block."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return SetFamily(self.k, tuple(tuple(f(v) for v in b) for b in self.blocks), self.comment)

    def normalized(self) -> SetFamily:
        """Relabel vertices to 1..n preserving their relative order."""
        rank = {v: i for i, v in enumerate(self.vertices, start=1)}
        return self.relabel(rank)


def validate(f: SetFamily) -> list[Violation]:
    out: list[Violation] = []
    if not isinstance(f.k, int) or f.k < 1:
        out.append(Violation(None, "uniformity", f"k must be a positive integer, got {f.k!r}"))
    seen: dict[Block, int] = {}
    for i, b in enumerate(f.blocks):
        if len(b) != f.k:
            out.append(Violation(i, "uniformity", f"has {len(b)} vertices, expected {f.k}"))
        if any(not isinstance(v, int) or v < 1 for v in b):
            out.append(Violation(i, "vertex-id", "vertex ids must be positive integers"))
        if len(set(b)) != len(b):
            out.append(Violation(i, "duplicate-vertex", f"repeats a vertex in {list(b)}"))
        if b in seen:
            out.append(Violation(i, "duplicate-block", f"equals block {seen[b]}"))
        else:
            seen[b] = i
    return out


def require_valid(f: SetFamily) -> None:
    problems = validate(f)
    if problems:
        raise InvalidFamilyError(problems)


def is_intersecting(f: SetFamily) -> bool:
    require_valid(f)
    sets = [set(b) for b in f.blocks]
    return all(a & b for a, b in combinations(sets, 2))


def degrees(f: SetFamily) -> dict[int, int]:
    """Map each vertex to the number of blocks containing it."""
    require_valid(f)
    return dict(sorted(Counter(v for b in f.blocks for v in b).items()))


def pairwise_intersections(f: SetFamily) -> list[list[int]]:
    require_valid(f)
    sets = [set(b) for b in f.blocks]
    return [[len(a & b) for b in sets] for a in sets]


def degree_summary(f: SetFamily) -> str:
    """Compact degree profile such as ``2x10`` or ``2x1,3x10``."""
    hist = Counter(degrees(f).values())
    return ",".join(f"{d}x{c}" for d, c in sorted(hist.items())) or "-"


# -- text format -------------------------------------------------------------


def format_fam(f: SetFamily) -> str:
    g = f.normalized()
    lines = [f"# {line}" for line in f.comment.splitlines()]
    lines.append(f"k {g.k}")
    lines.extend("b " + " ".join(map(str, b)) for b in g.blocks)
    return "\n".join(lines) + "\n"


def parse_fam(text: str) -> SetFamily:
    k = None
    blocks: list[Block] = []
    block_lines: list[int] = []
    comments: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        head, *rest = line.split()
        if head == "k":
            if k is not None:
                raise FamilyParseError(lineno, "duplicate k header")
            if blocks:
                raise FamilyParseError(lineno, "k header must precede blocks")
            if len(rest) != 1:
                raise FamilyParseError(lineno, "k header takes exactly one integer")
            k = _parse_int(rest[0], lineno)
        elif head == "b":
            if k is None:
                raise FamilyParseError(lineno, "block before k header")
            blocks.append(tuple(_parse_int(tok, lineno) for tok in rest))
            block_lines.append(lineno)
        else:
            raise FamilyParseError(lineno, f"unknown directive {head!r}")
    if k is None:
        raise FamilyParseError(0, "missing k header")
    fam = SetFamily(k, tuple(blocks), "\n".join(comments))
    _raise_first_violation(fam, block_lines)
    return fam


def _parse_int(tok: str, lineno: int) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise FamilyParseError(lineno, f"not an integer: {tok!r}") from None
    if value < 1:
        raise FamilyParseError(lineno, f"vertex ids and k must be positive, got {value}")
    return value


def _raise_first_violation(fam: SetFamily, block_lines: Sequence[int]) -> None:
    problems = validate(fam)
    if problems:
        v = problems[0]
        line = block_lines[v.block_index] if v.block_index is not None else 0
        raise FamilyParseError(line, f"{v.rule}: {v.message}")


# -- JSON format -------------------------------------------------------------


def family_to_dict(f: SetFamily) -> dict:
    g = f.normalized()
    d: dict = {"k": g.k, "blocks": [list(b) for b in g.blocks]}
    if f.comment:
        d["comment"] = f.comment
    return d


def format_json(f: SetFamily) -> str:
    return json.dumps(family_to_dict(f)) + "\n"


def parse_json(text: str) -> SetFamily:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyParseError(exc.lineno, exc.msg) from None
    if not isinstance(data, dict) or "k" not in data or "blocks" not in data:
        raise FamilyParseError(1, 'expected an object with "k" and "blocks"')
    k, blocks = data["k"], data["blocks"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise FamilyParseError(1, "k must be a positive integer")
    if not isinstance(blocks, list) or not all(
        isinstance(b, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in b)
        for b in blocks
    ):
        raise FamilyParseError(1, "blocks must be a list of integer lists")
    comment = data.get("comment") or ""
    if not isinstance(comment, str):
        raise FamilyParseError(1, "comment must be a string")
    fam = SetFamily(k, tuple(tuple(b) for b in blocks), comment)
    problems = validate(fam)
    if problems:
        raise FamilyParseError(1, str(problems[0]))
    return fam


def _format_for(path: Path, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "json" if path.suffix.lower() == ".json" else "fam"


def read_family(path: str | Path, fmt: str | None = None) -> SetFamily:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_json(text) if _format_for(path, fmt) == "json" else parse_fam(text)


def dumps(f: SetFamily, fmt: str = "fam") -> str:
    if fmt == "json":
        return format_json(f)
    if fmt == "fam":
        return format_fam(f)
    raise ValueError(f"unknown format {fmt!r}")


def write_family(path: str | Path, f: SetFamily, fmt: str | None = None) -> None:
    path = Path(path)
    path.write_text(dumps(f, _format_for(path, fmt)), encoding="utf-8")
