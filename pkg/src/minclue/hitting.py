"""Hitting-set enumeration over degree-stratified set families.

The engine walks a search tree drawing one cell per level from a not-yet-
hit degree-1 set, tracking hits with per-degree bit rows.  Higher-degree
families only prune: a degree-d set still unhit when fewer than d draws
remain kills its branch.  The dead-cell rule (cells of the drawn-from set
below the chosen cell are excluded from the subtree) makes every hitting
set come out exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .backend import kernels
from .bitrows import con8, con8_table
from .errors import BudgetExceededError
from ._pykernels import SEL_FIRST_M, SEL_FIRST_UNHIT, SEL_FIRST_UNHIT_M, SEL_FULL

MAX_UNIVERSE = 128


@dataclass(frozen=True)
class BitRow:
    """A fixed-width binary row; slot i is bit i of `value`."""

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.value < 0 or (self.width < self.value.bit_length()):
            raise ValueError("value has bits beyond the row width")

    def all_ones(self) -> bool:
        return self.value == (1 << self.width) - 1

    def all_zeros(self) -> bool:
        return self.value == 0

    def slots(self) -> Tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.width))


@dataclass(frozen=True)
class HittingInstance:
    """Universe size, target cardinality k, and per-degree set families.

    The degree-1 list is kept sorted ascending by size (stable, so equal
    sizes preserve input order); other degrees keep their given order.
    """

    universe_size: int
    k: int
    families: Mapping[int, Tuple[int, ...]]  # degree -> cell masks

    def __post_init__(self) -> None:
        if not 1 <= self.universe_size <= MAX_UNIVERSE:
            raise ValueError(f"universe size must be in 1..{MAX_UNIVERSE}")
        if self.k < 1 or self.k > self.universe_size:
            raise ValueError("k must be in 1..universe_size")
        limit = 1 << self.universe_size
        clean = {}
        for degree, masks in sorted(self.families.items()):
            if degree < 1:
                raise ValueError("degrees start at 1")
            masks = tuple(masks)
            if any(m < 0 or m >= limit for m in masks):
                raise ValueError("set mask outside the universe")
            if degree == 1:
                masks = tuple(sorted(masks, key=lambda m: m.bit_count()))
            clean[degree] = masks
        object.__setattr__(self, "families", clean)

    @classmethod
    def from_sets(
        cls, universe_size: int, k: int, families: Mapping[int, Sequence]
    ) -> "HittingInstance":
        as_masks = {}
        for degree, sets in families.items():
            masks = []
            for s in sets:
                mask = 0
                for c in s:
                    mask |= 1 << c
                masks.append(mask)
            as_masks[degree] = tuple(masks)
        return cls(universe_size, k, as_masks)

    def degree_one(self) -> Tuple[int, ...]:
        return self.families.get(1, ())


@dataclass(frozen=True)
class SelectionSchedule:
    """Which degree-1 set to draw from, by clue position t (1-based):
    minimum effective size over all unhit sets through t = full_through,
    then over the first window_width sets, then over the first short_width
    unhit sets, then simply the first unhit set.

    full_through = None derives the default k - 6 at resolve time, placing
    the two bounded scans at k - 5 and k - 4.
    """

    full_through: Optional[int] = None
    window_width: int = 64
    short_width: int = 5


DEFAULT_CONSOLIDATION: Mapping[int, Tuple[int, int]] = {
    1: (7, 128),
    2: (5, 1536),
    3: (5, 1536),
    4: (5, 1536),
    5: (5, 1536),
    6: (5, 1536),
}


@dataclass(frozen=True)
class EngineConfig:
    enable_dedup: bool = True
    enable_degree_pruning: bool = True
    enable_consolidation: bool = True
    enable_effective_size: bool = True
    consolidation: Mapping[int, Tuple[int, int]] = field(
        default_factory=lambda: dict(DEFAULT_CONSOLIDATION)
    )
    selection: SelectionSchedule = SelectionSchedule()

    def flags(self) -> Tuple[bool, bool, bool, bool]:
        return (
            self.enable_dedup,
            self.enable_degree_pruning,
            self.enable_consolidation,
            self.enable_effective_size,
        )


def check_level(k: int, degree: int) -> int:
    """Level (clues drawn) at which a degree-d family proves a branch dead:
    with k - (k - d + 1) = d - 1 draws left, an unhit set cannot reach d."""
    return max(k - degree + 1, 0)


def resolve_plan(instance: HittingInstance, config: EngineConfig):
    """Flatten instance + config into the positional kernel arguments."""
    k = instance.k
    degrees = sorted(instance.families)
    masks_by_degree = [list(instance.families[d]) for d in degrees]

    check_levels: Dict[int, int] = {}
    if config.enable_degree_pruning:
        for d in degrees:
            if d >= 2 and instance.families[d]:
                check_levels[d] = check_level(k, d)

    consolidations: Dict[int, Tuple[int, int]] = {}
    if config.enable_consolidation:
        for d, (trigger, cap) in config.consolidation.items():
            if trigger < 1 or cap < 1:
                raise ValueError("consolidation triggers and caps must be >= 1")
            if trigger >= k:
                continue
            if d not in instance.families or not instance.families[d]:
                continue
            if d >= 2 and trigger >= check_level(k, d):
                continue  # the degree is checked once, earlier consolidation only
            consolidations[d] = (trigger, cap)

    modes: List[Tuple[int, int]] = []
    if config.enable_effective_size:
        full_through = config.selection.full_through
        if full_through is None:
            full_through = k - 6
        for level in range(k):
            t = level + 1
            if t <= full_through:
                modes.append((SEL_FULL, 0))
            elif t == full_through + 1:
                modes.append((SEL_FIRST_M, config.selection.window_width))
            elif t == full_through + 2:
                modes.append((SEL_FIRST_UNHIT_M, config.selection.short_width))
            else:
                modes.append((SEL_FIRST_UNHIT, 0))
    else:
        modes = [(SEL_FIRST_UNHIT, 0)] * k

    return (
        instance.universe_size,
        k,
        degrees,
        masks_by_degree,
        config.enable_dedup,
        check_levels,
        consolidations,
        modes,
    )


def enumerate_hitting_sets(
    instance: HittingInstance,
    config: EngineConfig = EngineConfig(),
    sink: Optional[Callable[[Tuple[int, ...]], None]] = None,
    stats: Optional[dict] = None,
) -> int:
    """Feed every k-subset hitting all degree-1 sets to `sink`, each
    exactly once, in a deterministic order; returns the number emitted.

    The sink must not re-enter the engine.  Without the dead-cell rule
    (enable_dedup False) the raw traversal reaches sets repeatedly, so a
    seen-set guard keeps emission exactly-once in that mode too.
    """
    plan = resolve_plan(instance, config)
    emitted = 0

    if sink is None:
        sink = lambda cells: None

    if config.enable_dedup:
        def emit(cells: Tuple[int, ...]) -> None:
            nonlocal emitted
            emitted += 1
            sink(cells)
    else:
        seen = set()

        def emit(cells: Tuple[int, ...]) -> None:
            nonlocal emitted
            if cells in seen:
                return
            seen.add(cells)
            emitted += 1
            sink(cells)

    run_stats = kernels.run_hitting(*plan, emit)
    if stats is not None:
        stats.update(run_stats)
        stats["unique_emitted"] = emitted
    return emitted


def brute_force_hitting_sets(instance: HittingInstance) -> List[Tuple[int, ...]]:
    """Oracle: all k-subsets intersecting every degree-1 member, sorted.

    Refuses instances with more than 10**7 candidate subsets.
    """
    n, k = instance.universe_size, instance.k
    if comb(n, k) > 10**7:
        raise BudgetExceededError(
            f"C({n},{k}) exceeds the 10^7 subset budget"
        )
    needed = instance.degree_one()
    out = []
    for combo in combinations(range(n), k):
        mask = 0
        for c in combo:
            mask |= 1 << c
        if all(mask & s for s in needed):
            out.append(combo)
    return out


# ---------------------------------------------------------------------------
# hitting-vector plumbing (the engine inlines these; exposed for reuse and
# for direct testing)

def init_hitting_vectors(instance: HittingInstance) -> Dict[int, Tuple[BitRow, ...]]:
    """Per degree: for each cell, the membership row over the family."""
    tables = {}
    for degree, masks in instance.families.items():
        m = len(masks)
        rows = []
        for c in range(instance.universe_size):
            value = 0
            for i, mask in enumerate(masks):
                if (mask >> c) & 1:
                    value |= 1 << i
            rows.append(BitRow(value, m))
        tables[degree] = tuple(rows)
    return tables


def consolidate(
    statevec: BitRow, hitvec_table: Sequence[BitRow], cap: int
) -> Tuple[Tuple[BitRow, ...], Tuple[int, ...]]:
    """Gather the unhit slots (zeros of `statevec`) of every row, in slot
    order, truncated to `cap`; returns the new table and the index map
    from new slot to original slot.

    Works a byte at a time through the con8 table, mirroring how the
    engine backends compact their vectors mid-search.
    """
    table = con8_table()
    m = statevec.width
    index_map = []
    for i in range(m):
        if not (statevec.value >> i) & 1:
            index_map.append(i)
            if len(index_map) == cap:
                break
    new_m = len(index_map)
    n_bytes = (m + 7) // 8
    new_rows = []
    for row in hitvec_table:
        out = 0
        cnt = 0
        for b in range(n_bytes):
            if cnt >= cap:
                break
            mask_byte = (statevec.value >> (8 * b)) & 0xFF
            if b == n_bytes - 1 and m % 8:
                mask_byte |= ~((1 << (m % 8)) - 1) & 0xFF  # pad slots count as hit
            bits_byte = (row.value >> (8 * b)) & 0xFF
            gathered = table[(mask_byte << 8) | bits_byte]
            out |= gathered << cnt
            cnt += 8 - mask_byte.bit_count()
        out &= (1 << new_m) - 1
        new_rows.append(BitRow(out, new_m))
    return tuple(new_rows), tuple(index_map)


def effective_size(set_mask: int, deadvec: int) -> int:
    """Number of cells of the set that are not dead."""
    return (set_mask & ~deadvec).bit_count()


def select_set(
    level: int,
    masks: Sequence[int],
    deadvec: int,
    statevec: BitRow,
    modes: Sequence[Tuple[int, int]],
    universe_size: int,
) -> int:
    """The engine's selection rule as a standalone operation: index of the
    degree-1 set to draw from, or -1 when the branch is cut (an unhit set
    is fully dead)."""
    mode, param = modes[level]
    sv = statevec.value
    m = len(masks)
    alive = ((1 << universe_size) - 1) & ~deadvec
    if mode == SEL_FIRST_UNHIT:
        for i in range(m):
            if not (sv >> i) & 1:
                return i
        return -1
    best, best_eff = -1, 1 << 30
    if mode == SEL_FULL:
        candidates = (i for i in range(m) if not (sv >> i) & 1)
    elif mode == SEL_FIRST_M:
        window = min(param, m)
        in_window = [i for i in range(window) if not (sv >> i) & 1]
        if not in_window:
            for i in range(window, m):
                if not (sv >> i) & 1:
                    return i
            return -1
        candidates = iter(in_window)
    else:  # SEL_FIRST_UNHIT_M
        unhit = [i for i in range(m) if not (sv >> i) & 1]
        candidates = iter(unhit[:param])
    for i in candidates:
        eff = (masks[i] & alive).bit_count()
        if eff < best_eff:
            best, best_eff = i, eff
            if eff == 0:
                break
    if best_eff == 0:
        return -1
    return best


# ---------------------------------------------------------------------------
# generic instance file format

def parse_instance(text: str) -> HittingInstance:
    """Line 1: `universe k`; then one set per line as `d: c1,c2,...`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty instance")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'universe k'")
    universe, k = int(head[0]), int(head[1])
    families: Dict[int, list] = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise ValueError(f"bad set line {ln!r}")
        d_part, cells_part = ln.split(":", 1)
        degree = int(d_part)
        cells = [int(tok) for tok in cells_part.split(",") if tok.strip() != ""]
        mask = 0
        for c in cells:
            mask |= 1 << c
        families.setdefault(degree, []).append(mask)
    families.setdefault(1, [])
    return HittingInstance(universe, k, {d: tuple(v) for d, v in families.items()})


def format_hitting_set(cells: Tuple[int, ...]) -> str:
    return ",".join(str(c) for c in cells)
