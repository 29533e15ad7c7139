"""Flat key=value run configuration: parsing, serialization, and mapping
onto SearchConfig/EngineConfig.

The same keys appear in report headers, so a run can be reproduced from
its own output.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Dict, Optional, Tuple

from .checker import SearchConfig
from .hitting import SelectionSchedule


def parse_config_text(text: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def _parse_bool(value: str) -> bool:
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def build_search_config(pairs: Dict[str, str]) -> Tuple[SearchConfig, Optional[int]]:
    """Returns the search configuration plus k when the file pins one."""
    config = SearchConfig()
    engine = config.engine
    k: Optional[int] = None
    consolidation = dict(engine.consolidation)
    clique_caps = dict(config.clique_caps)
    clique_starts = dict(config.clique_starts)
    selection = engine.selection

    for key, value in pairs.items():
        if key == "k":
            k = int(value)
        elif key == "version":
            pass  # informational
        elif key == "max_set_size":
            config = replace(
                config, max_set_size=None if value == "auto" else int(value)
            )
        elif key == "family_cap":
            config = replace(config, family_cap=int(value))
        elif key == "clique_degrees":
            degrees = tuple(int(tok) for tok in value.split(",") if tok)
            config = replace(config, clique_degrees=degrees)
        elif key == "dedup":
            engine = replace(engine, enable_dedup=_parse_bool(value))
        elif key == "degree_pruning":
            engine = replace(engine, enable_degree_pruning=_parse_bool(value))
        elif key == "consolidation":
            engine = replace(engine, enable_consolidation=_parse_bool(value))
        elif key == "effective_size":
            engine = replace(engine, enable_effective_size=_parse_bool(value))
        elif key.startswith("clique_cap."):
            clique_caps[int(key.split(".", 1)[1])] = int(value)
        elif key.startswith("clique_start."):
            clique_starts[int(key.split(".", 1)[1])] = int(value)
        elif key.startswith("consolidate."):
            trigger, cap = value.split(":")
            consolidation[int(key.split(".", 1)[1])] = (int(trigger), int(cap))
        elif key == "selection":
            full, window, short = value.split(":")
            selection = SelectionSchedule(
                None if full == "auto" else int(full), int(window), int(short)
            )
        else:
            raise ValueError(f"unknown configuration key {key!r}")

    engine = replace(engine, consolidation=consolidation, selection=selection)
    config = replace(
        config, engine=engine, clique_caps=clique_caps, clique_starts=clique_starts
    )
    return config, k


def load_config_file(path) -> Tuple[SearchConfig, Optional[int]]:
    with open(path, encoding="utf-8") as fh:
        return build_search_config(parse_config_text(fh.read()))
