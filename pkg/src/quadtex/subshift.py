"""Finite rectangular patches of the tile shift, with transfer-matrix counts.

Tiles glue horizontally when right(left tile) == left(right tile) and
vertically when bottom(upper tile) == top(lower tile); the same adjacency
that drives the graded word gluing.  Rectangles are finite admissible
patches only; nothing here decides anything about infinite configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import CrossCheckFailure, PatternSpaceTooLarge
from .textile import TextileSystem, Tile

DEFAULT_ROW_CAP = 200_000
BRUTE_FORCE_CELLS = 9


def glue(direction: str, first: Tile, second: Tile) -> bool:
    """Can ``second`` sit to the right of (or below) ``first``?"""
    if direction == "horizontal":
        return first.right == second.left
    if direction == "vertical":
        return first.bottom == second.top
    raise ValueError(f"direction must be 'horizontal' or 'vertical', got {direction!r}")


@dataclass(frozen=True)
class Rectangle:
    """k x l array of tiles satisfying both gluing conditions."""

    cells: tuple[tuple[Tile, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cells), len(self.cells[0])

    def validate(self) -> None:
        for row in self.cells:
            for left, right in zip(row, row[1:]):
                if not glue("horizontal", left, right):
                    raise ValueError(f"horizontal gluing fails between {left!r} and {right!r}")
        for upper, lower in zip(self.cells, self.cells[1:]):
            for top_tile, bottom_tile in zip(upper, lower):
                if not glue("vertical", top_tile, bottom_tile):
                    raise ValueError(
                        f"vertical gluing fails between {top_tile!r} and {bottom_tile!r}"
                    )


def _rows_of_width(ts: TextileSystem, width: int, cap: int) -> list[tuple[Tile, ...]]:
    rows: list[tuple[Tile, ...]] = [(t,) for t in ts.tiles]
    for _ in range(width - 1):
        extended = []
        for row in rows:
            for tile in ts.tiles:
                if glue("horizontal", row[-1], tile):
                    extended.append(row + (tile,))
                    if len(extended) > cap:
                        raise PatternSpaceTooLarge(
                            f"more than {cap} admissible rows of width {width}"
                        )
        rows = extended
    return rows


def _brute_force_count(ts: TextileSystem, height: int, width: int) -> int:
    cells = [[None] * width for _ in range(height)]

    def fill(pos: int) -> int:
        if pos == height * width:
            return 1
        i, j = divmod(pos, width)
        total = 0
        for tile in ts.tiles:
            if j > 0 and not glue("horizontal", cells[i][j - 1], tile):
                continue
            if i > 0 and not glue("vertical", cells[i - 1][j], tile):
                continue
            cells[i][j] = tile
            total += fill(pos + 1)
            cells[i][j] = None
        return total

    return fill(0)


def count_rectangles(
    ts: TextileSystem, height: int, width: int, cap: int = DEFAULT_ROW_CAP
) -> int:
    """Number of admissible height x width patches.

    Counted by transfer over whole rows: the next row is determined up to
    admissibility by its top profile, so one pass aggregates row weights by
    bottom profile.  For small patches the count is re-derived by brute
    force and the two must agree.
    """
    if height < 1 or width < 1:
        raise ValueError("rectangle sides must be positive")
    rows = _rows_of_width(ts, width, cap)
    weights = {row: 1 for row in rows}
    for _ in range(height - 1):
        by_bottom: dict[tuple, int] = {}
        for row, weight in weights.items():
            profile = tuple(t.bottom for t in row)
            by_bottom[profile] = by_bottom.get(profile, 0) + weight
        weights = {
            row: by_bottom.get(tuple(t.top for t in row), 0) for row in rows
        }
    total = sum(weights.values())
    if height * width <= BRUTE_FORCE_CELLS:
        brute = _brute_force_count(ts, height, width)
        if brute != total:
            raise CrossCheckFailure(
                f"transfer count {total} != brute-force count {brute} "
                f"for a {height}x{width} patch"
            )
    return total


def enumerate_rectangles(
    ts: TextileSystem,
    height: int,
    width: int,
    limit: int | None = None,
    cap: int = DEFAULT_ROW_CAP,
) -> Iterator[Rectangle]:
    """Yield admissible patches in row-major lexicographic tile order."""
    if height < 1 or width < 1:
        raise ValueError("rectangle sides must be positive")
    rows = _rows_of_width(ts, width, cap)
    by_top: dict[tuple, list] = {}
    for row in rows:
        by_top.setdefault(tuple(t.top for t in row), []).append(row)

    count = 0

    def extend(stack: list) -> Iterator[Rectangle]:
        nonlocal count
        if limit is not None and count >= limit:
            return
        if len(stack) == height:
            count += 1
            yield Rectangle(cells=tuple(stack))
            return
        profile = tuple(t.bottom for t in stack[-1])
        for row in by_top.get(profile, []):
            yield from extend(stack + [row])

    for first in rows:
        yield from extend([first])
        if limit is not None and count >= limit:
            return


def wang_tile_list(ts: TextileSystem) -> list[dict]:
    """Tile alphabet as generic Wang-tile records."""
    return [
        {
            "id": i,
            "top": t.top.id,
            "right": t.right.id,
            "left": t.left.id,
            "bottom": t.bottom.id,
            "vertex": t.vertex,
        }
        for i, t in enumerate(ts.tiles)
    ]
