from __future__ import annotations

import numpy as np
import pytest

from xenopower.engine import EngineError, PowerJob, minimal_designs, run_power_grid
from xenopower.io import PowerReport, power_csv_text
from xenopower.types import (
    AnovaParams,
    DesignGrid,
    FrailtyParams,
    PowerRow,
    PowerTable,
    ValidationError,
)

ANOVA_PILOT = AnovaParams(beta0=0.0653, beta=0.7299, tau2=0.0332, sigma2=0.386)

# power-by-cell table from the pilot-driven log-normal run (sim=500),
# used as a fixed input for frontier logic
PILOT_POWER_TABLE = {
    3: [49.6, 67.0, 77.4, 87.2, 94.2, 96.0, 98.2],
    4: [64.6, 79.6, 88.0, 96.0, 98.2, 99.4, 99.8],
    5: [72.6, 86.8, 94.8, 98.6, 99.2, 99.8, 100.0],
    6: [80.4, 92.8, 97.4, 99.8, 100.0, 100.0, 100.0],
    7: [85.6, 96.2, 99.4, 100.0, 100.0, 100.0, 100.0],
    8: [89.0, 98.4, 100.0, 100.0, 100.0, 100.0, 100.0],
    9: [92.2, 98.8, 99.8, 100.0, 100.0, 100.0, 100.0],
    10: [95.8, 99.4, 99.8, 100.0, 100.0, 100.0, 100.0],
}


def table_from_powers(powers_by_n, m_values=range(2, 9)) -> PowerTable:
    rows = tuple(
        PowerRow(n=n, m=m, total_animals=2 * n * m, power=p, convergence=100.0)
        for n, row in sorted(powers_by_n.items())
        for m, p in zip(m_values, row)
    )
    return PowerTable(rows=rows, model="anova", params=ANOVA_PILOT, sim=500,
                      alpha=0.05, seed=1)


def small_anova_job(workers=1, sim=40, seed=2024):
    grid = DesignGrid(n_values=(3, 4), m_values=(2, 3), sim=sim, alpha=0.05, seed=seed)
    return PowerJob(grid=grid, model=ANOVA_PILOT, worker_count=workers)


class TestDeterminism:
    def test_identical_output_across_worker_counts(self):
        tables = [run_power_grid(small_anova_job(workers=w)) for w in (1, 2, 8)]
        assert tables[0].rows == tables[1].rows == tables[2].rows
        texts = {power_csv_text(t) for t in tables}
        assert len(texts) == 1

    def test_counting_identity(self):
        table = run_power_grid(small_anova_job())
        for row in table.rows:
            converged = row.convergence / 100.0 * table.sim
            rejections = row.power / 100.0 * converged
            assert converged == pytest.approx(round(converged), abs=1e-9)
            assert rejections == pytest.approx(round(rejections), abs=1e-9)

    def test_header_round_trip(self):
        table = run_power_grid(small_anova_job())
        report = PowerReport(table=table, frontier=tuple(minimal_designs(table, 0.8)),
                             target_power=0.8)
        h = report.header
        params = AnovaParams(beta0=h["beta0"], beta=h["beta"], tau2=h["tau2"],
                             sigma2=h["sigma2"])
        grid = DesignGrid(n_values=(3, 4), m_values=(2, 3), sim=h["sim"],
                          alpha=h["alpha"], seed=h["seed"])
        rerun = run_power_grid(PowerJob(grid=grid, model=params, worker_count=1))
        assert rerun.rows == table.rows


class TestProgress:
    def test_callback_counts_cells(self):
        seen = []
        run_power_grid(small_anova_job(), progress=lambda done, total: seen.append((done, total)))
        assert seen == [(1, 4), (2, 4), (3, 4), (4, 4)]


class TestConvergenceHandling:
    def test_all_censored_cell_is_an_error(self):
        grid = DesignGrid(n_values=(2,), m_values=(2,), sim=10, alpha=0.05, seed=5)
        model = FrailtyParams(lam=1e-6, nu=1.0, beta=0.0, tau2=0.0, censor=True, ct=1.0)
        with pytest.raises(EngineError, match=r"cell \(n=2, m=2\)"):
            run_power_grid(PowerJob(grid=grid, model=model, worker_count=1))

    def test_partial_convergence_warns(self):
        grid = DesignGrid(n_values=(2,), m_values=(2,), sim=60, alpha=0.05, seed=5)
        model = FrailtyParams(lam=0.8, nu=1.0, beta=0.0, tau2=0.0, censor=True, ct=1.0)
        with pytest.warns(RuntimeWarning, match="below 99%"):
            table = run_power_grid(PowerJob(grid=grid, model=model, worker_count=1))
        row = table.rows[0]
        assert 50.0 <= row.convergence < 99.0


class TestFrailtyColumns:
    def test_censoring_column_present_for_frailty_runs(self):
        grid = DesignGrid(n_values=(3,), m_values=(2,), sim=30, alpha=0.05, seed=9)
        model = FrailtyParams(lam=0.2888113, nu=1.0, beta=-1.098612, tau2=0.1,
                              censor=True, ct=12.0)
        table = run_power_grid(PowerJob(grid=grid, model=model, worker_count=1))
        assert table.has_censoring
        assert 0.0 < table.rows[0].censoring < 100.0

    def test_censoring_column_absent_for_anova_runs(self):
        table = run_power_grid(small_anova_job())
        assert not table.has_censoring
        assert all(r.censoring is None for r in table.rows)


class TestMinimalDesigns:
    def test_pilot_table_frontier(self):
        table = table_from_powers(PILOT_POWER_TABLE)
        assert minimal_designs(table, 0.80) == [(3, 5), (4, 4), (5, 3), (6, 2)]

    def test_all_full_power_keeps_smallest_cell(self):
        powers = {n: [100.0] * 7 for n in range(3, 11)}
        table = table_from_powers(powers)
        assert minimal_designs(table, 0.80) == [(3, 2)]

    def test_nothing_qualifies_gives_empty_list(self):
        powers = {n: [0.0] * 7 for n in range(3, 11)}
        table = table_from_powers(powers)
        assert minimal_designs(table, 0.80) == []

    def test_selection_uses_unrounded_power(self):
        powers = {3: [79.96, 81.0], 4: [80.04, 99.0]}
        table = table_from_powers(powers, m_values=(2, 3))
        # 79.96 displays as 80.0 but does not qualify
        assert minimal_designs(table, 0.80) == [(3, 3), (4, 2)]

    def test_frontier_soundness_on_random_tables(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            powers = {n: list(np.round(rng.uniform(0, 100, size=4), 1)) for n in (3, 4, 5)}
            table = table_from_powers(powers, m_values=(2, 3, 4, 5))
            frontier = minimal_designs(table, 0.7)
            qualifying = {(r.n, r.m) for r in table.rows if r.power >= 70.0}
            for cell in frontier:
                assert cell in qualifying
            for a in frontier:
                for b in frontier:
                    if a != b:
                        assert not (a[0] <= b[0] and a[1] <= b[1])
            for cell in qualifying - set(frontier):
                assert any(
                    f[0] <= cell[0] and f[1] <= cell[1] and f != cell for f in frontier
                )


class TestJobValidation:
    def test_target_power_bounds(self):
        grid = DesignGrid(n_values=(3,), m_values=(2,), sim=10, alpha=0.05, seed=1)
        with pytest.raises(ValidationError, match="target_power"):
            PowerJob(grid=grid, model=ANOVA_PILOT, target_power=1.0)

    def test_worker_count_checked(self):
        grid = DesignGrid(n_values=(3,), m_values=(2,), sim=10, alpha=0.05, seed=1)
        with pytest.raises(ValidationError, match="worker_count"):
            PowerJob(grid=grid, model=ANOVA_PILOT, worker_count=0)

    def test_model_type_checked(self):
        grid = DesignGrid(n_values=(3,), m_values=(2,), sim=10, alpha=0.05, seed=1)
        with pytest.raises(ValidationError, match="model"):
            PowerJob(grid=grid, model="anova")

    def test_invalid_grid_rejected_at_run(self):
        grid = DesignGrid(n_values=(3,), m_values=(2,), sim=10, alpha=2.0, seed=1)
        with pytest.raises(ValidationError, match="alpha"):
            run_power_grid(PowerJob(grid=grid, model=ANOVA_PILOT, worker_count=1))
