"""Figure table: CSV schema, series content, sweep anchors, determinism."""

import csv
import io
import json

import pytest

from cdmacap.errors import DomainError
from cdmacap.figures import (
    CSV_COLUMNS,
    CsvRow,
    FIGURE_DEFAULTS,
    SweepSpec,
    format_csv,
    generate_figure,
)

FAST_OVERRIDES = {
    5: {"ebn0_stop": 4.0, "ebn0_step": 2.0},
    7: {"ebn0_stop": 4.0, "ebn0_step": 2.0, "beta_values": (2.0, 8.0)},
}


def rows_to_dicts(rows):
    parsed = csv.DictReader(io.StringIO(format_csv(rows)))
    return list(parsed)


class TestSweepSpec:
    def test_validation(self):
        SweepSpec("n", (1, 2, 3), {})
        with pytest.raises(DomainError):
            SweepSpec("n", (), {})
        with pytest.raises(DomainError):
            SweepSpec("n", (1, 1, 2), {})
        with pytest.raises(DomainError):
            SweepSpec("users", (1, 2), {})


class TestSchema:
    def test_header_and_column_order(self):
        text = format_csv(generate_figure(5, FAST_OVERRIDES[5]))
        header = text.splitlines()[0]
        assert header == ",".join(CSV_COLUMNS)

    def test_params_is_canonical_json(self):
        for record in rows_to_dicts(generate_figure(5, FAST_OVERRIDES[5])):
            payload = json.loads(record["params"])
            assert record["params"] == json.dumps(payload, sort_keys=True,
                                                  separators=(",", ":"))

    def test_y_is_bits_per_user(self):
        for record in rows_to_dicts(generate_figure(5, FAST_OVERRIDES[5])):
            assert record["y_name"] == "bits_per_user"
            assert 0.0 <= float(record["y"]) <= 1.0

    def test_unknown_figure_and_override(self):
        with pytest.raises(DomainError):
            generate_figure(11)
        with pytest.raises(DomainError):
            generate_figure(5, {"nonsense": 1})

    def test_all_figures_have_defaults_and_builders(self):
        assert sorted(FIGURE_DEFAULTS) == list(range(1, 11))


class TestFigureContent:
    def test_fig1_high_user_anchor(self):
        rows = generate_figure(1)
        hits = [row for row in rows
                if row.series == "lower" and row.x == 239
                and json.loads(row.params)["m"] == 64]
        assert len(hits) == 1
        assert hits[0].y >= 0.9

    def test_fig1_series_per_spreading_gain(self):
        rows = generate_figure(1, {"n_stop": 16})
        groups = {(row.series, row.params) for row in rows}
        assert len(groups) == 6  # lower + upper for each of three m values

    def test_fig5_bpsk_reaches_one_at_high_snr(self):
        rows = generate_figure(5)
        bpsk = [row for row in rows if row.series == "bpsk_actual"]
        assert bpsk[-1].x == 20.0
        assert bpsk[-1].y > 0.999

    def test_fig7_replica_value_between_bounds(self):
        rows = generate_figure(7, {"ebn0_stop": 16.0, "ebn0_step": 16.0,
                                   "beta_values": (8.0,)})
        by_series = {row.series: row.y for row in rows if row.x == 16.0}
        assert by_series["asympt_lower"] <= by_series["tanaka"] \
            <= by_series["asympt_upper"] + 0.02

    def test_fig2_envelope_dominates_members(self):
        rows = generate_figure(2, {"n_stop": 32, "n_step": 16,
                                   "gamma_values": (1e-3, 1.0)})
        for x in {row.x for row in rows}:
            envelope = [row.y for row in rows
                        if row.series == "lower_envelope" and row.x == x]
            members = [row.y for row in rows
                       if row.series == "family_member" and row.x == x]
            assert all(envelope[0] >= y - 1e-12 for y in members)

    def test_fig8_finite_envelope_near_limit_at_large_m(self):
        rows = generate_figure(8, {"ebn0_start": 8.0, "ebn0_stop": 8.0,
                                   "ebn0_step": 1.0, "m_values": (64,)})
        finite = next(row.y for row in rows if row.series == "finite_envelope")
        limit = next(row.y for row in rows if row.series == "asympt_lower")
        assert abs(finite - limit) < 0.02

    def test_fig9_has_all_series(self):
        rows = generate_figure(9, {"m_values": (8,), "n_step_small": 8,
                                   "n_max_factor": 2})
        assert {row.series for row in rows} == {
            "finite_lower", "finite_upper", "asympt_lower", "asympt_upper", "tanaka"}


class TestDeterminism:
    def test_threads_do_not_change_bytes(self):
        one = format_csv(generate_figure(7, FAST_OVERRIDES[7], threads=1))
        four = format_csv(generate_figure(7, FAST_OVERRIDES[7], threads=4))
        assert one == four

    def test_repeat_runs_identical(self):
        first = format_csv(generate_figure(5, FAST_OVERRIDES[5]))
        second = format_csv(generate_figure(5, FAST_OVERRIDES[5]))
        assert first == second
