import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from minclue import solver  # noqa: E402
from minclue.backend import available_backends  # noqa: E402
from minclue.grid import SHAPE_4X4, SHAPE_9X9, Grid, GridShape  # noqa: E402
from minclue.symmetry import representatives  # noqa: E402


def random_solution_grid(shape: GridShape, rng: random.Random) -> Grid:
    """Random first row, then the solver's first completion; deterministic
    for a fixed seed."""
    n = shape.side
    row0 = list(range(1, n + 1))
    rng.shuffle(row0)
    cells = tuple(row0) + (0,) * (shape.cell_count - n)
    return solver.count_completions(shape, cells, 1).completions[0]


def clue_cells(grid: Grid, mask: int) -> tuple:
    return tuple(d if (mask >> c) & 1 else 0 for c, d in enumerate(grid.digits))


def brute_force_count(grid_shape: GridShape, cells, limit: int) -> int:
    """Independent completion counter: try every digit in every blank with
    plain validity checking, no propagation."""
    from minclue.grid import all_units

    n = grid_shape.side
    board = list(cells)
    blanks = [c for c, d in enumerate(board) if d == 0]
    units_of = [[] for _ in range(grid_shape.cell_count)]
    for unit in all_units(grid_shape):
        for c in unit:
            units_of[c].append(unit)
    count = 0

    def ok(c: int, d: int) -> bool:
        for unit in units_of[c]:
            for other in unit:
                if other != c and board[other] == d:
                    return False
        return True

    def rec(i: int) -> None:
        nonlocal count
        if count >= limit:
            return
        if i == len(blanks):
            count += 1
            return
        c = blanks[i]
        for d in range(1, n + 1):
            if ok(c, d):
                board[c] = d
                rec(i + 1)
                board[c] = 0
                if count >= limit:
                    return

    rec(0)
    return count


@pytest.fixture(scope="session")
def reps_4x4():
    return representatives(SHAPE_4X4)


@pytest.fixture(scope="session")
def backends():
    return available_backends()


@pytest.fixture(scope="session")
def native_required(backends):
    if "native" not in backends:
        pytest.skip("compiled kernels unavailable; 9x9-scale checks need them")
    return backends["native"]


@pytest.fixture(scope="session")
def nine_grids():
    """Five deterministic 9x9 solution grids for shared module tests."""
    rng = random.Random(90210)
    return [random_solution_grid(SHAPE_9X9, rng) for _ in range(5)]


@pytest.fixture(scope="session")
def nine_families(nine_grids, native_required):
    from minclue.unavoidable import find_minimal_unavoidable

    return [(g, find_minimal_unavoidable(g, 12)) for g in nine_grids]
