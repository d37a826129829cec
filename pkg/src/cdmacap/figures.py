"""Declarative figure table and CSV emission for the bound-sweep charts.

Every chart the CLI can emit is described by one entry in FIGURE_DEFAULTS
(the single source of truth for parameter defaults; plot scripts and docs
reference it) plus one builder that turns the resolved parameters into
CsvRow records.  All y values are bits per user.  Row generation is pure and
rows are assembled in deterministic order, so repeated runs are byte
identical regardless of the thread budget.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .asymptotic import (
    LoadPoint,
    asympt_lower_gaussian,
    asympt_upper,
    physical_branch,
    tanaka_capacity,
)
from .errors import DomainError
from .finite_bounds import SystemSize, conjectured_upper, noiseless_lower, noisy_lower_envelope, noisy_lower_gamma
from .noise import EbN0, NoiseModel
from .oracle import bpsk_reference

CSV_COLUMNS = ("figure", "series", "x_name", "x", "y_name", "y", "params")
Y_NAME = "bits_per_user"


@dataclass(frozen=True)
class CsvRow:
    figure: int
    series: str
    x_name: str
    x: float
    y_name: str
    y: float
    params: str  # canonical JSON of the series' fixed parameters


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable with all other parameters held fixed."""

    variable: str
    values: tuple
    fixed: dict

    def __post_init__(self):
        if self.variable not in ("n", "m", "ebn0_db", "beta"):
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        vals = tuple(self.values)
        if not vals:
            raise DomainError("sweep values must be nonempty")
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        if any(d <= 0 for d in diffs) and any(d >= 0 for d in diffs):
            raise DomainError("sweep values must be strictly monotone")


def _params_json(**kwargs) -> str:
    return json.dumps(kwargs, sort_keys=True, separators=(",", ":"))


def _ordered_map(fn, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _frange(start: float, stop: float, step: float) -> tuple:
    count = int(round((stop - start) / step))
    return tuple(start + i * step for i in range(count + 1))


def _n_sweep(params: dict) -> SweepSpec:
    values = tuple(range(params["n_start"], params["n_stop"] + 1, params["n_step"]))
    fixed = {k: v for k, v in params.items() if not k.startswith("n_")}
    return SweepSpec("n", values, fixed)


def _ebn0_sweep(params: dict) -> SweepSpec:
    values = _frange(params["ebn0_start"], params["ebn0_stop"], params["ebn0_step"])
    fixed = {k: v for k, v in params.items() if not k.startswith("ebn0_")}
    return SweepSpec("ebn0_db", values, fixed)


FIGURE_DEFAULTS: dict[int, dict] = {
    # Noiseless lower/upper vs n for several spreading gains.
    1: {"m_values": (16, 32, 64), "n_start": 1, "n_stop": 320, "n_step": 1},
    # Fixed-gamma family members and their envelope vs n, one (m, Eb/N0).
    2: {"m": 64, "ebn0_db": 8.0, "gamma_values": (1e-3, 1e-2, 1e-1, 1.0, 10.0),
        "n_start": 4, "n_stop": 256, "n_step": 4},
    # Envelope + conjectured upper vs n for two noise levels.
    3: {"m": 64, "ebn0_db_values": (4.0, 16.0), "n_start": 4, "n_stop": 256, "n_step": 4},
    # Envelope + conjectured upper vs Eb/N0 for several user counts.
    4: {"m": 64, "n_values": (32, 64, 128, 192),
        "ebn0_start": 0.0, "ebn0_stop": 20.0, "ebn0_step": 1.0},
    # Asymptotic bounds, replica value and the exact orthogonal baseline.
    5: {"beta": 0.5, "ebn0_start": -2.0, "ebn0_stop": 20.0, "ebn0_step": 0.5},
    6: {"beta": 1.0, "ebn0_start": -2.0, "ebn0_stop": 20.0, "ebn0_step": 0.5},
    # Asymptotic sandwich for overloaded systems.
    7: {"beta_values": (2.0, 4.0, 8.0),
        "ebn0_start": 0.0, "ebn0_stop": 20.0, "ebn0_step": 0.5},
    # Finite envelope at growing m against its large-system limit.
    8: {"beta": 2.0, "m_values": (8, 16, 32, 64),
        "ebn0_start": 0.0, "ebn0_stop": 20.0, "ebn0_step": 1.0},
    # Finite bounds vs the asymptotic bounds extrapolated to finite n.
    9: {"m_values": (8, 64), "ebn0_db": 16.0, "n_step_small": 2, "n_step_large": 8,
        "n_max_factor": 4},
    10: {"m_values": (8, 64), "ebn0_db": 4.0, "n_step_small": 2, "n_step_large": 8,
         "n_max_factor": 4},
}


def _fig1(params: dict, threads: int) -> list[CsvRow]:
    noiseless = NoiseModel.noiseless()
    n_values = _n_sweep(params).values
    rows: list[CsvRow] = []
    for m in params["m_values"]:
        tag = _params_json(m=m, noise="none")

        def point(n, m=m):
            size = SystemSize(m, n)
            return (noiseless_lower(size).bits_per_user,
                    conjectured_upper(size, noiseless).bits_per_user)

        results = _ordered_map(point, n_values, threads)
        for n, (lo, up) in zip(n_values, results):
            rows.append(CsvRow(1, "lower", "n", n, Y_NAME, lo, tag))
            rows.append(CsvRow(1, "upper", "n", n, Y_NAME, up, tag))
    return rows


def _fig2(params: dict, threads: int) -> list[CsvRow]:
    m = params["m"]
    model = EbN0(params["ebn0_db"]).to_model()
    n_values = _n_sweep(params).values
    rows: list[CsvRow] = []
    for gamma in params["gamma_values"]:
        tag = _params_json(m=m, ebn0_db=params["ebn0_db"], gamma=gamma)
        values = _ordered_map(
            lambda n, g=gamma: noisy_lower_gamma(SystemSize(m, n), model, g).bits_per_user,
            n_values, threads)
        rows.extend(CsvRow(2, "family_member", "n", n, Y_NAME, y, tag)
                    for n, y in zip(n_values, values))
    tag = _params_json(m=m, ebn0_db=params["ebn0_db"])
    values = _ordered_map(
        lambda n: noisy_lower_envelope(SystemSize(m, n), model).bits_per_user,
        n_values, threads)
    rows.extend(CsvRow(2, "lower_envelope", "n", n, Y_NAME, y, tag)
                for n, y in zip(n_values, values))
    return rows


def _fig3(params: dict, threads: int) -> list[CsvRow]:
    m = params["m"]
    n_values = _n_sweep(params).values
    rows: list[CsvRow] = []
    for db in params["ebn0_db_values"]:
        model = EbN0(db).to_model()
        tag = _params_json(m=m, ebn0_db=db)

        def point(n, model=model):
            size = SystemSize(m, n)
            return (noisy_lower_envelope(size, model).bits_per_user,
                    conjectured_upper(size, model).bits_per_user)

        results = _ordered_map(point, n_values, threads)
        for n, (lo, up) in zip(n_values, results):
            rows.append(CsvRow(3, "lower_envelope", "n", n, Y_NAME, lo, tag))
            rows.append(CsvRow(3, "conjectured_upper", "n", n, Y_NAME, up, tag))
    return rows


def _fig4(params: dict, threads: int) -> list[CsvRow]:
    m = params["m"]
    db_values = _ebn0_sweep(params).values
    rows: list[CsvRow] = []
    for n in params["n_values"]:
        size = SystemSize(m, n)
        tag = _params_json(m=m, n=n)

        def point(db, size=size):
            model = EbN0(db).to_model()
            return (noisy_lower_envelope(size, model).bits_per_user,
                    conjectured_upper(size, model).bits_per_user)

        results = _ordered_map(point, db_values, threads)
        for db, (lo, up) in zip(db_values, results):
            rows.append(CsvRow(4, "lower_envelope", "ebn0_db", db, Y_NAME, lo, tag))
            rows.append(CsvRow(4, "conjectured_upper", "ebn0_db", db, Y_NAME, up, tag))
    return rows


def _asymptotic_point(beta: float, db: float) -> dict[str, float]:
    sigma2 = EbN0(db).sigma2
    load = LoadPoint.from_beta(beta)
    return {
        "asympt_lower": asympt_lower_gaussian(load, sigma2),
        "asympt_upper": asympt_upper(load, NoiseModel.gaussian(sigma2)),
        "tanaka": physical_branch(tanaka_capacity(load, sigma2)).c_per_user,
    }


def _fig_beta_sweep(figure: int, beta: float, params: dict, threads: int,
                    include_bpsk: bool) -> list[CsvRow]:
    db_values = _ebn0_sweep(params).values
    tag = _params_json(beta=beta)
    results = _ordered_map(lambda db: _asymptotic_point(beta, db), db_values, threads)
    rows: list[CsvRow] = []
    for series in ("asympt_lower", "asympt_upper", "tanaka"):
        rows.extend(CsvRow(figure, series, "ebn0_db", db, Y_NAME, r[series], tag)
                    for db, r in zip(db_values, results))
    if include_bpsk:
        rows.extend(CsvRow(figure, "bpsk_actual", "ebn0_db", db, Y_NAME,
                           bpsk_reference(EbN0(db).sigma2), tag)
                    for db in db_values)
    return rows


def _fig5(params: dict, threads: int) -> list[CsvRow]:
    return _fig_beta_sweep(5, params["beta"], params, threads, include_bpsk=True)


def _fig6(params: dict, threads: int) -> list[CsvRow]:
    return _fig_beta_sweep(6, params["beta"], params, threads, include_bpsk=True)


def _fig7(params: dict, threads: int) -> list[CsvRow]:
    rows: list[CsvRow] = []
    for beta in params["beta_values"]:
        rows.extend(_fig_beta_sweep(7, beta, params, threads, include_bpsk=False))
    return rows


def _fig8(params: dict, threads: int) -> list[CsvRow]:
    beta = params["beta"]
    db_values = _ebn0_sweep(params).values
    rows: list[CsvRow] = []
    for m in params["m_values"]:
        size = SystemSize(m, int(round(beta * m)))
        tag = _params_json(beta=beta, m=m, n=size.n)
        values = _ordered_map(
            lambda db, size=size: noisy_lower_envelope(size, EbN0(db).to_model()).bits_per_user,
            db_values, threads)
        rows.extend(CsvRow(8, "finite_envelope", "ebn0_db", db, Y_NAME, y, tag)
                    for db, y in zip(db_values, values))
    tag = _params_json(beta=beta)
    values = _ordered_map(
        lambda db: asympt_lower_gaussian(LoadPoint.from_beta(beta), EbN0(db).sigma2),
        db_values, threads)
    rows.extend(CsvRow(8, "asympt_lower", "ebn0_db", db, Y_NAME, y, tag)
                for db, y in zip(db_values, values))
    return rows


def _fig_finite_vs_extrapolated(figure: int, params: dict, threads: int) -> list[CsvRow]:
    db = params["ebn0_db"]
    model = EbN0(db).to_model()
    sigma2 = EbN0(db).sigma2
    rows: list[CsvRow] = []
    for m in params["m_values"]:
        step = params["n_step_small"] if m <= 16 else params["n_step_large"]
        sweep = SweepSpec("n", tuple(range(step, params["n_max_factor"] * m + 1, step)),
                          {"m": m, "ebn0_db": db})
        n_values = sweep.values
        tag = _params_json(m=m, ebn0_db=db)

        def point(n, m=m):
            size = SystemSize(m, n)
            load = LoadPoint.from_beta(n / m)
            return {
                "finite_lower": noisy_lower_envelope(size, model).bits_per_user,
                "finite_upper": conjectured_upper(size, model).bits_per_user,
                "asympt_lower": asympt_lower_gaussian(load, sigma2),
                "asympt_upper": asympt_upper(load, NoiseModel.gaussian(sigma2)),
                "tanaka": physical_branch(tanaka_capacity(load, sigma2)).c_per_user,
            }

        results = _ordered_map(point, n_values, threads)
        for series in ("finite_lower", "finite_upper", "asympt_lower",
                       "asympt_upper", "tanaka"):
            rows.extend(CsvRow(figure, series, "n", n, Y_NAME, r[series], tag)
                        for n, r in zip(n_values, results))
    return rows


def _fig9(params: dict, threads: int) -> list[CsvRow]:
    return _fig_finite_vs_extrapolated(9, params, threads)


def _fig10(params: dict, threads: int) -> list[CsvRow]:
    return _fig_finite_vs_extrapolated(10, params, threads)


_BUILDERS = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig4, 5: _fig5,
             6: _fig6, 7: _fig7, 8: _fig8, 9: _fig9, 10: _fig10}


def generate_figure(figure_id: int, overrides: dict | None = None,
                    threads: int = 1) -> list[CsvRow]:
    """Rows for one figure, with optional parameter overrides."""
    if figure_id not in _BUILDERS:
        raise DomainError(f"figure id must be 1..10, got {figure_id}")
    params = dict(FIGURE_DEFAULTS[figure_id])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise DomainError(f"figure {figure_id} has no parameter {key!r} "
                              f"(valid: {sorted(params)})")
        default = params[key]
        if isinstance(default, tuple):
            value = tuple(value) if isinstance(value, (list, tuple)) else (value,)
        elif isinstance(default, int) and not isinstance(value, bool):
            value = int(value)
        else:
            value = float(value)
        params[key] = value
    return _BUILDERS[figure_id](params, threads)


def format_csv(rows: Iterable[CsvRow]) -> str:
    """RFC-4180-style text: fixed header, dot decimals, quoted JSON params."""
    import csv
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([row.figure, row.series, row.x_name, f"{row.x:.12g}",
                         row.y_name, f"{row.y:.12g}", row.params])
    return buffer.getvalue()
