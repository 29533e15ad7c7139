"""Minimal unavoidable sets of a solution grid, degree verification, and
clique-built higher-degree sets.

A subset X of a grid is unavoidable when deleting it leaves a puzzle with
multiple completions; every proper puzzle must then take at least one clue
from X.  Minimal sets are found by a digit-subset search: for each small
set D of digits, blank every cell holding a digit of D and enumerate the
alternate completions whose difference from the grid stays within bounds.
Each alternate completion witnesses its difference set as unavoidable, and
every minimal set of size <= max_size (which involves at most max_size/2
distinct digits, each appearing at least twice) is witnessed under its own
digit set.  Subset-minimality filtering across the candidates then yields
exactly the minimal sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Optional, Tuple

from .backend import kernels
from .errors import BudgetExceededError
from .grid import CellSet, Grid
from .solver import count_completions


@dataclass(frozen=True)
class UnavoidableSet:
    cells: CellSet
    degree: int = 1

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class UnavoidableFamily:
    """Collection of unavoidable sets of one degree.

    Degree-1 families are ordered by ascending size (selection depends on
    it); clique families keep their enumeration order.
    """

    degree: int
    sets: Tuple[UnavoidableSet, ...]
    cap: Optional[int] = None

    def __post_init__(self) -> None:
        if self.degree == 1:
            sizes = [len(s) for s in self.sets]
            if sizes != sorted(sizes):
                raise ValueError(
                    "degree-1 family must be ordered by ascending size"
                )
        if any(s.degree != self.degree for s in self.sets):
            raise ValueError("all sets in a family share its degree")

    def __len__(self) -> int:
        return len(self.sets)

    def masks(self) -> List[int]:
        return [s.cells.mask for s in self.sets]

    def truncated(self, cap: int) -> "UnavoidableFamily":
        """Keep the `cap` smallest sets under the deterministic order."""
        return UnavoidableFamily(self.degree, self.sets[:cap], cap)


def puzzle_cells_without(grid: Grid, removed_mask: int) -> tuple:
    return tuple(
        0 if (removed_mask >> c) & 1 else d for c, d in enumerate(grid.digits)
    )


def is_unavoidable(grid: Grid, cells: CellSet) -> bool:
    """True iff deleting `cells` leaves a puzzle with multiple completions."""
    if cells.shape != grid.shape:
        raise ValueError("cell set shape differs from grid shape")
    outcome = count_completions(
        grid.shape, puzzle_cells_without(grid, cells.mask), 2
    )
    return outcome.count == 2


def is_minimal(grid: Grid, cells: CellSet) -> bool:
    """True iff no proper subset of `cells` is unavoidable.

    Checking single-cell removals suffices: unavoidability is monotone
    under supersets, so any unavoidable proper subset is contained in one
    of them.
    """
    if not is_unavoidable(grid, cells):
        return False
    for c in cells:
        if is_unavoidable(grid, CellSet(grid.shape, cells.mask ^ (1 << c))):
            return False
    return True


def _sort_key(shape, mask: int):
    return (mask.bit_count(), tuple(CellSet(shape, mask)))


def find_minimal_unavoidable(grid: Grid, max_size: int = 12) -> UnavoidableFamily:
    """All minimal unavoidable sets of the grid with at most `max_size`
    cells, ordered by ascending size, ties by ascending cell sequence."""
    if max_size < 4:
        return UnavoidableFamily(1, ())
    shape = grid.shape
    n = shape.side
    digits = grid.digits
    cells_of_digit = [0] * (n + 1)
    for c, d in enumerate(digits):
        cells_of_digit[d] |= 1 << c

    candidates = set()
    for dcount in range(2, min(n, max_size // 2) + 1):
        per_digit = max_size - 2 * (dcount - 1)
        for dset in combinations(range(1, n + 1), dcount):
            blank = 0
            for d in dset:
                blank |= cells_of_digit[d]
            candidates.update(
                kernels.enumerate_diffs(
                    shape.box_rows,
                    shape.box_cols,
                    digits,
                    blank,
                    max_size,
                    per_digit,
                )
            )

    kept: List[int] = []
    for mask in sorted(candidates, key=lambda m: _sort_key(shape, m)):
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    sets = tuple(UnavoidableSet(CellSet(shape, m), 1) for m in kept)
    return UnavoidableFamily(1, sets)


def recheck_family(grid: Grid, family: UnavoidableFamily) -> int:
    """Re-test every set of a degree-1 family by running its complement
    through the solver; return the number of failures (0 when healthy)."""
    failures = 0
    for s in family.sets:
        if not is_unavoidable(grid, s.cells):
            failures += 1
    return failures


def verify_degree(
    grid: Grid, cells: CellSet, degree: int, budget: int = 10**6
) -> bool:
    """Check that every removal of degree-1 cells leaves an unavoidable
    set.  Refuses (raises) when that would take more than `budget` solver
    calls; refusal is not a verdict."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    size = len(cells)
    if size < degree:
        raise ValueError("set smaller than its claimed degree")
    n_combos = comb(size, degree - 1)
    if n_combos > budget:
        raise BudgetExceededError(
            f"{n_combos} removals exceed the budget of {budget}"
        )
    cell_list = list(cells)
    for removal in combinations(cell_list, degree - 1):
        removed = cells.mask
        for c in removal:
            removed ^= 1 << c
        if not is_unavoidable(grid, CellSet(grid.shape, removed)):
            return False
    return True


def default_clique_start(k: int, degree: int) -> int:
    """Index below which cliques are skipped: those would be hit anyway by
    the time the degree check fires.  Matches 27 for degree 4 at k=16."""
    return max(degree - 1, 2 * (k - degree + 1) + 1)


def build_cliques(
    family: UnavoidableFamily,
    degree: int,
    start: int,
    cap: int,
) -> UnavoidableFamily:
    """Unions of `degree` pairwise-disjoint family members, enumerated in
    the nested loop order with index floors start, start-1, ...; at most
    `cap` cliques are produced."""
    if family.degree != 1:
        raise ValueError("cliques are built over a degree-1 family")
    if degree < 2:
        raise ValueError("clique degree must be at least 2")
    if start < degree - 1:
        raise ValueError("start must be at least degree - 1")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    masks = family.masks()
    m = len(masks)
    shape = None
    for s in family.sets:
        shape = s.cells.shape
        break
    out: List[int] = []

    def scan(level: int, upper: int, acc: int) -> bool:
        for idx in range(start - level, upper):
            mask = masks[idx]
            if mask & acc:
                continue
            if level == degree - 1:
                out.append(acc | mask)
                if len(out) == cap:
                    return True
            elif scan(level + 1, idx, acc | mask):
                return True
        return False

    if m > start:
        scan(0, m, 0)
    sets = tuple(
        UnavoidableSet(CellSet(shape, mask), degree) for mask in out
    )
    return UnavoidableFamily(degree, sets, cap)
