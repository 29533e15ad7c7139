import random
from dataclasses import replace
from itertools import combinations

import pytest

from conftest import clue_cells, random_solution_grid
from minclue.checker import (
    GridSearchError,
    GridSearchReport,
    SearchConfig,
    baseline_config,
    config_header_lines,
    format_report,
    parse_report,
    search_catalog,
    search_grid,
)
from minclue.grid import SHAPE_4X4, SHAPE_9X9
from minclue.solver import count_completions
from minclue.symmetry import apply, apply_cells, random_transformation


def oracle_proper_masks(grid, k):
    out = []
    for combo in combinations(range(grid.shape.cell_count), k):
        mask = 0
        for c in combo:
            mask |= 1 << c
        cells = clue_cells(grid, mask)
        if count_completions(grid.shape, cells, 2).count == 1:
            out.append(mask)
    return sorted(out)


class TestSearchGrid4x4:
    def test_k3_finds_nothing(self, reps_4x4):
        for rep in reps_4x4:
            report = search_grid(rep, 3)
            assert report.proper_found == 0
            assert report.safety_failures == 0

    def test_k4_matches_exhaustive_oracle(self, reps_4x4):
        for rep in reps_4x4:
            report = search_grid(rep, 4)
            got = sorted(p.mask for p in report.proper_puzzles)
            assert got == oracle_proper_masks(rep, 4)
            assert report.proper_found == len(got)
            assert report.candidates >= report.proper_found
            assert report.minimal_sets_found > 0

    def test_determinism(self, reps_4x4):
        a = search_grid(reps_4x4[0], 4)
        b = search_grid(reps_4x4[0], 4)
        assert a.proper_puzzles == b.proper_puzzles
        assert a.candidates == b.candidates

    def test_k_validation(self, reps_4x4):
        with pytest.raises(ValueError):
            search_grid(reps_4x4[0], 0)
        with pytest.raises(ValueError):
            search_grid(reps_4x4[0], 17)


class TestSubfamilyRobustness:
    def test_any_prefix_gives_same_proper_sets_4x4(self, reps_4x4):
        for rep in reps_4x4:
            expected = None
            for cap in (1, 2, 5, 384):
                config = SearchConfig(family_cap=cap)
                report = search_grid(rep, 4, config)
                masks = sorted(p.mask for p in report.proper_puzzles)
                if expected is None:
                    expected = masks
                else:
                    assert masks == expected

    def test_two_configurations_agree_on_9x9_k10(self, native_required):
        rng = random.Random(55)
        grid = random_solution_grid(SHAPE_9X9, rng)
        full = search_grid(grid, 10)
        tiny = search_grid(grid, 10, SearchConfig(family_cap=24))
        assert sorted(p.mask for p in full.proper_puzzles) == sorted(
            p.mask for p in tiny.proper_puzzles
        )
        assert tiny.candidates >= full.candidates


class TestCandidateCounts:
    def test_full_config_not_more_candidates_than_baseline(self, reps_4x4):
        for rep in reps_4x4:
            full = search_grid(rep, 4)
            base = search_grid(rep, 4, baseline_config())
            assert full.candidates <= base.candidates
            assert sorted(p.mask for p in full.proper_puzzles) == sorted(
                p.mask for p in base.proper_puzzles
            )

    def test_9x9_k10(self, native_required):
        rng = random.Random(56)
        grid = random_solution_grid(SHAPE_9X9, rng)
        full = search_grid(grid, 10)
        base = search_grid(grid, 10, baseline_config())
        assert full.candidates <= base.candidates


class TestEquivalenceInvariance:
    def test_4x4_k4_sample(self, reps_4x4):
        rng = random.Random(57)
        for _ in range(10):
            rep = reps_4x4[rng.randrange(2)]
            t = random_transformation(SHAPE_4X4, rng)
            image = apply(t, rep)
            a = search_grid(rep, 4)
            b = search_grid(image, 4)
            assert a.proper_found == b.proper_found
            mapped = sorted(
                apply_cells(t, SHAPE_4X4, p.mask) for p in a.proper_puzzles
            )
            assert mapped == sorted(p.mask for p in b.proper_puzzles)


class TestSearchCatalog:
    def test_empty_input(self):
        assert search_catalog([], 4) == []

    def test_both_representatives_k3(self, reps_4x4):
        lines = [str(rep) for rep in reps_4x4]
        reports = search_catalog(lines, 3)
        assert len(reports) == 2
        assert all(r.proper_found == 0 for r in reports)

    def test_malformed_line_produces_error_record(self, reps_4x4):
        lines = [str(reps_4x4[0]), "11112222333344445", str(reps_4x4[1])]
        reports = search_catalog(lines, 3)
        assert len(reports) == 3
        assert isinstance(reports[1], GridSearchError)
        assert isinstance(reports[0], GridSearchReport)
        assert isinstance(reports[2], GridSearchReport)

    def test_duplicate_lines_identical_reports(self, reps_4x4):
        line = str(reps_4x4[0])
        a, b = search_catalog([line, line], 4)
        assert replace(a, elapsed_ms=0) == replace(b, elapsed_ms=0)


class TestReportFormat:
    def test_round_trip_with_puzzles(self, reps_4x4):
        report = search_grid(reps_4x4[0], 4)
        back = parse_report(format_report(report))
        assert back.grid == report.grid
        assert back.k == report.k
        assert back.proper_found == report.proper_found
        assert [tuple(p) for p in back.proper_puzzles] == [
            tuple(p) for p in report.proper_puzzles
        ]

    def test_error_record_round_trip(self):
        err = GridSearchError(3, "wrong length")
        assert parse_report(format_report(err)) == err

    def test_header_lines_parse_back(self):
        from minclue.config import build_search_config, parse_config_text

        config = SearchConfig(max_set_size=9, family_cap=100)
        text = "\n".join(
            line[2:] for line in config_header_lines(config, 12)
        )
        rebuilt, k = build_search_config(parse_config_text(text))
        assert k == 12
        assert rebuilt.max_set_size == 9
        assert rebuilt.family_cap == 100
        assert rebuilt.engine.enable_dedup


class TestSafetyPath:
    def test_clean_grid_reports_zero_failures(self, reps_4x4):
        assert search_grid(reps_4x4[0], 4).safety_failures == 0
