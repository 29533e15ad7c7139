"""Per-grid search pipeline: build the unavoidable-set families, enumerate
candidate k-clue puzzles as hitting sets, and confirm properness with the
solver.

Correctness does not depend on how many unavoidable sets are used: any
subfamily yields a superset of candidates and the solver keeps exactly the
proper ones.  The family sizes, clique caps and engine schedule only steer
how much work the enumeration does.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from .errors import GridFormatError
from .grid import CellSet, Grid, GridShape, parse_grid
from .hitting import EngineConfig, HittingInstance, enumerate_hitting_sets
from .solver import count_completions, verify_two_completions
from .unavoidable import (
    build_cliques,
    default_clique_start,
    find_minimal_unavoidable,
    recheck_family,
)

logger = logging.getLogger(__name__)

CHECKER_VERSION = "1"

_DEFAULT_MAX_SET_SIZE = {16: 8, 36: 10, 81: 12}
DEFAULT_CLIQUE_CAPS = {2: 8192, 3: 16384, 4: 32768, 5: 32768, 6: 16384}


@dataclass(frozen=True)
class SearchConfig:
    """Tunables of the per-grid search; all caps are configurable, the
    defaults target 9x9 with k=16."""

    max_set_size: Optional[int] = None  # None: 8 / 10 / 12 by shape
    family_cap: int = 384
    clique_degrees: Tuple[int, ...] = (2, 3, 4, 5)
    clique_caps: Dict[int, int] = field(
        default_factory=lambda: dict(DEFAULT_CLIQUE_CAPS)
    )
    clique_starts: Dict[int, int] = field(default_factory=dict)
    engine: EngineConfig = EngineConfig()

    def resolved_max_set_size(self, shape: GridShape) -> int:
        if self.max_set_size is not None:
            return self.max_set_size
        return _DEFAULT_MAX_SET_SIZE.get(shape.cell_count, 12)

    def clique_start(self, k: int, degree: int) -> int:
        return self.clique_starts.get(degree, default_clique_start(k, degree))


def baseline_config() -> SearchConfig:
    """The unimproved engine: dead-cell dedup only, no degree pruning, no
    consolidation, first-unhit selection."""
    return SearchConfig(
        clique_degrees=(),
        engine=EngineConfig(
            enable_degree_pruning=False,
            enable_consolidation=False,
            enable_effective_size=False,
        ),
    )


@dataclass(frozen=True)
class GridSearchReport:
    grid: str
    k: int
    minimal_sets_found: int
    candidates: int
    proper_found: int
    proper_puzzles: Tuple[CellSet, ...]
    elapsed_ms: int
    safety_failures: int = 0


@dataclass(frozen=True)
class GridSearchError:
    """Per-line failure record for stream processing."""

    line_no: int
    message: str


ReportOrError = Union[GridSearchReport, GridSearchError]


def search_grid(
    grid: Grid, k: int, config: SearchConfig = SearchConfig()
) -> GridSearchReport:
    """Exhaustively search one grid for proper k-clue puzzles."""
    shape = grid.shape
    if not 1 <= k <= shape.cell_count:
        raise ValueError(f"k must be in 1..{shape.cell_count}")
    started = time.perf_counter()
    safety_failures = 0

    family = find_minimal_unavoidable(grid, config.resolved_max_set_size(shape))
    safety_failures += recheck_family(grid, family)
    if safety_failures:
        logger.warning(
            "grid %s: %d unavoidable sets failed the solver recheck",
            grid,
            safety_failures,
        )
    minimal_found = len(family)
    working = family.truncated(config.family_cap)
    if minimal_found > config.family_cap:
        logger.info(
            "grid %s: keeping the %d smallest of %d minimal sets",
            grid,
            config.family_cap,
            minimal_found,
        )

    families = {1: tuple(working.masks())}
    for degree in config.clique_degrees:
        if degree >= 2 and degree <= k:
            cliques = build_cliques(
                working,
                degree,
                config.clique_start(k, degree),
                config.clique_caps.get(degree, DEFAULT_CLIQUE_CAPS[degree]),
            )
            if len(cliques):
                families[degree] = tuple(cliques.masks())

    instance = HittingInstance(shape.cell_count, k, families)

    digits = grid.digits
    proper: List[CellSet] = []
    candidates = 0

    def check_candidate(cells: Tuple[int, ...]) -> None:
        nonlocal candidates, safety_failures
        candidates += 1
        clue_mask = 0
        for c in cells:
            clue_mask |= 1 << c
        puzzle_cells = tuple(
            d if (clue_mask >> c) & 1 else 0 for c, d in enumerate(digits)
        )
        outcome = count_completions(shape, puzzle_cells, 2)
        if outcome.count == 1:
            if outcome.completions[0].digits != digits:
                safety_failures += 1
                logger.error(
                    "grid %s: unique completion of %s differs from the grid",
                    grid,
                    cells,
                )
                return
            proper.append(CellSet(shape, clue_mask))
        elif not verify_two_completions(shape, puzzle_cells, outcome):
            safety_failures += 1
            logger.error(
                "grid %s: solver double-check failed on candidate %s",
                grid,
                cells,
            )

    enumerate_hitting_sets(instance, config.engine, check_candidate)

    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return GridSearchReport(
        grid=str(grid),
        k=k,
        minimal_sets_found=minimal_found,
        candidates=candidates,
        proper_found=len(proper),
        proper_puzzles=tuple(proper),
        elapsed_ms=elapsed_ms,
        safety_failures=safety_failures,
    )


def search_catalog(
    lines: Iterable[str],
    k: int,
    config: SearchConfig = SearchConfig(),
    sink: Optional[Callable[[ReportOrError], None]] = None,
    shape: Optional[GridShape] = None,
) -> List[ReportOrError]:
    """One report per input line, in input order; malformed lines produce
    error records and processing continues."""
    out: List[ReportOrError] = []
    deliver = sink if sink is not None else out.append
    for line_no, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            grid = parse_grid(line, shape)
        except GridFormatError as exc:
            record: ReportOrError = GridSearchError(line_no, str(exc))
        else:
            record = search_grid(grid, k, config)
        deliver(record)
        if sink is not None:
            out.append(record)
    return out


# ---------------------------------------------------------------------------
# report text format

def format_report(report: ReportOrError) -> str:
    """Tab-separated main line, then one indented line per proper puzzle."""
    if isinstance(report, GridSearchError):
        return f"!error\t{report.line_no}\t{report.message}"
    lines = [
        f"{report.grid}\t{report.k}\t{report.minimal_sets_found}"
        f"\t{report.candidates}\t{report.proper_found}\t{report.elapsed_ms}"
    ]
    for puzzle in report.proper_puzzles:
        lines.append("\t" + ",".join(str(c) for c in puzzle))
    return "\n".join(lines)


def parse_report(block: str) -> ReportOrError:
    lines = block.splitlines()
    if not lines:
        raise ValueError("empty report block")
    if lines[0].startswith("!error\t"):
        _tag, line_no, message = lines[0].split("\t", 2)
        return GridSearchError(int(line_no), message)
    head = lines[0].split("\t")
    if len(head) != 6:
        raise ValueError(f"bad report line {lines[0]!r}")
    grid_text, k, minimal, cand, proper, ms = head
    grid = parse_grid(grid_text)
    puzzles = []
    for extra in lines[1:]:
        cells = [int(tok) for tok in extra.strip().split(",") if tok]
        puzzles.append(CellSet.from_cells(grid.shape, cells))
    return GridSearchReport(
        grid=grid_text,
        k=int(k),
        minimal_sets_found=int(minimal),
        candidates=int(cand),
        proper_found=int(proper),
        proper_puzzles=tuple(puzzles),
        elapsed_ms=int(ms),
    )


def config_header_lines(config: SearchConfig, k: int) -> List[str]:
    """Key=value lines recording the exact configuration of a run."""
    eng = config.engine
    pairs = [
        ("version", CHECKER_VERSION),
        ("k", k),
        ("max_set_size", config.max_set_size if config.max_set_size is not None else "auto"),
        ("family_cap", config.family_cap),
        ("clique_degrees", ",".join(map(str, config.clique_degrees))),
        ("dedup", int(eng.enable_dedup)),
        ("degree_pruning", int(eng.enable_degree_pruning)),
        ("consolidation", int(eng.enable_consolidation)),
        ("effective_size", int(eng.enable_effective_size)),
    ]
    for d in sorted(config.clique_caps):
        pairs.append((f"clique_cap.{d}", config.clique_caps[d]))
    for d in sorted(eng.consolidation):
        trigger, cap = eng.consolidation[d]
        pairs.append((f"consolidate.{d}", f"{trigger}:{cap}"))
    sel = eng.selection
    pairs.append(
        (
            "selection",
            f"{'auto' if sel.full_through is None else sel.full_through}"
            f":{sel.window_width}:{sel.short_width}",
        )
    )
    return [f"# {key}={value}" for key, value in pairs]
