"""Uniqueness-checking solver: counts completions of a clue set up to a
limit and keeps the first two found.

Propagation is naked singles plus hidden singles only, then guessing on a
cell with the fewest candidates (lowest index on ties, digits ascending),
which makes the outcome deterministic for a fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .backend import kernels
from .errors import InconsistentCluesError
from .grid import Grid, GridShape, Puzzle, digits_valid
from ._pykernels import givens_consistent


@dataclass(frozen=True)
class SolveOutcome:
    """Completion count (saturated at the requested limit) and up to two
    completions in discovery order."""

    count: int
    completions: Tuple[Grid, ...]


def count_completions(
    shape: GridShape, cells: Sequence[int], limit: int = 2
) -> SolveOutcome:
    """Count completions of the given clue cells, stopping at `limit`.

    `cells` is row-major with 0 for blanks.  Raises InconsistentCluesError
    when two givens collide inside a unit (that is malformed input, not a
    puzzle with zero completions).
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if len(cells) != shape.cell_count:
        raise ValueError(f"expected {shape.cell_count} cells")
    if not givens_consistent(shape.box_rows, shape.box_cols, cells):
        raise InconsistentCluesError("duplicate digit inside a unit")
    count, first, second = kernels.solve_limit(
        shape.box_rows, shape.box_cols, tuple(cells), limit
    )
    completions = []
    if first is not None:
        completions.append(Grid(shape, tuple(first)))
    if second is not None:
        completions.append(Grid(shape, tuple(second)))
    return SolveOutcome(count, tuple(completions))


def puzzle_outcome(puzzle: Puzzle, limit: int = 2) -> SolveOutcome:
    return count_completions(puzzle.grid.shape, puzzle.cells(), limit)


def is_proper(puzzle: Puzzle) -> bool:
    """True iff the clue set determines its grid uniquely."""
    return puzzle_outcome(puzzle, 2).count == 1


def verify_two_completions(
    shape: GridShape, cells: Sequence[int], outcome: SolveOutcome
) -> bool:
    """Double-check a multiple-solutions verdict.

    Confirms that both saved completions extend the clue set, are valid
    grids, and differ from each other.  Pure check; does not raise on
    failure.
    """
    if outcome.count < 2 or len(outcome.completions) < 2:
        return False
    a, b = outcome.completions[0], outcome.completions[1]
    for comp in (a, b):
        if comp.shape != shape or len(comp.digits) != shape.cell_count:
            return False
        if not digits_valid(shape, comp.digits):
            return False
        if any(d and comp.digits[c] != d for c, d in enumerate(cells)):
            return False
    return a.digits != b.digits


def solve_line_outcome(shape: GridShape, cells: Sequence[int],
                       limit: int = 2) -> Optional[SolveOutcome]:
    """count_completions variant for stream processing: returns None
    instead of raising on inconsistent givens."""
    try:
        return count_completions(shape, cells, limit)
    except InconsistentCluesError:
        return None
