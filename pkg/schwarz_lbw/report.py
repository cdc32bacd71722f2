""" file:    report.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: Per-step statistics of a run and comparison tables
"""

from dataclasses import dataclass, field
import json
import logging
import os

import numpy as np
import pandas as pd

LOGGER = logging.getLogger('schwarz_lbw')

STEP_COLUMNS = ('step', 'time', 'newton_iters', 'gmres_iters_mean', 'coarse_dim',
                't_assemble', 't_pc', 't_solve')
COMPARISON_COLUMNS = ('pc_type', 'coarse', 'it_gmres', 'it_newton', 't_pc', 't_solve', 't_total')
TIMING_COLUMNS = ('t_assemble', 't_pc', 't_solve', 't_coarse', 't_total')


@dataclass(frozen=True)
class StepRecord:

    """
    Statistics of one time step

    Parameters:
        step - the step number, starting at 1
        time - the time at the end of the step, in s
        newton_iters - Newton iterations of the step
        gmres_iters - GMRES iterations of every linear solve in the step
        coarse_dim - the coarse space dimension (0 for one level)
        t_assemble, t_pc, t_solve, t_coarse - wall times in s
    """

    step: int
    time: float
    newton_iters: int
    gmres_iters: tuple
    coarse_dim: int
    t_assemble: float = 0.0
    t_pc: float = 0.0
    t_solve: float = 0.0
    t_coarse: float = 0.0

    @property
    def gmres_iters_mean(self):
        return float(np.mean(self.gmres_iters)) if self.gmres_iters else 0.0


@dataclass
class RunReport:

    """
    Statistics of a run

    Parameters:
        name - the scenario name
        label - the coarse space label (or 'one-level')
        records - a list of StepRecord
        aborted - the failure message if the run stopped early
        t_total - wall time of the whole run, in s
    """

    name: str
    label: str
    records: list = field(default_factory=list)
    aborted: str = None
    t_total: float = 0.0

    def add(self, record):
        self.records.append(record)

    @property
    def n_steps(self):
        return len(self.records)

    def frame(self):
        "Per-step table with the standard column order"
        rows = [{'step': rec.step, 'time': rec.time, 'newton_iters': rec.newton_iters,
                 'gmres_iters_mean': rec.gmres_iters_mean, 'coarse_dim': rec.coarse_dim,
                 't_assemble': rec.t_assemble, 't_pc': rec.t_pc, 't_solve': rec.t_solve}
                for rec in self.records]
        return pd.DataFrame(rows, columns=list(STEP_COLUMNS))

    def summary(self):
        """
        Aggregates over the run

        it_gmres is the mean over all linear solves, it_newton the mean
        Newton count per step; T_* are totals in s.
        """
        solves = [its for rec in self.records for its in rec.gmres_iters]
        newton_total = sum(rec.newton_iters for rec in self.records)
        t_total = self.t_total
        return {
            'name': self.name,
            'label': self.label,
            'n_steps': self.n_steps,
            'coarse_dim': max((rec.coarse_dim for rec in self.records), default=0),
            'it_gmres': float(np.mean(solves)) if solves else 0.0,
            'it_newton': newton_total / self.n_steps if self.n_steps else 0.0,
            'T_PC': sum(rec.t_pc for rec in self.records),
            'T_Ass': sum(rec.t_assemble for rec in self.records),
            'T_Sol': sum(rec.t_solve for rec in self.records),
            'T_Coarse': sum(rec.t_coarse for rec in self.records),
            'T_Tot': t_total,
            'T_Navg': t_total / newton_total if newton_total else 0.0,
            'T_Tot_per_step': t_total / self.n_steps if self.n_steps else 0.0,
            'aborted': self.aborted,
        }

    def write(self, directory):
        """
        Write <name>.csv (per step) and <name>.json (summary) to a directory

        Returns:
            the two file names
        """
        os.makedirs(directory, exist_ok=True)
        csv_name = os.path.join(directory, f'{self.name}.csv')
        json_name = os.path.join(directory, f'{self.name}.json')
        self.frame().to_csv(csv_name, index=False)
        with open(json_name, 'w') as sink:
            json.dump(self.summary(), sink, indent=2)
        LOGGER.info(f'Wrote report to {csv_name} and {json_name}')
        return csv_name, json_name


def comparison_row(report):
    "One row of a comparison table from a RunReport"
    summary = report.summary()
    return {'pc_type': report.label, 'coarse': summary['coarse_dim'],
            'it_gmres': summary['it_gmres'], 'it_newton': summary['it_newton'],
            't_pc': summary['T_PC'], 't_solve': summary['T_Sol'], 't_total': summary['T_Tot']}


def comparison_frame(reports):
    "Comparison table over several runs"
    return pd.DataFrame([comparison_row(rep) for rep in reports],
                        columns=list(COMPARISON_COLUMNS))


def write_comparison(reports, directory, filename='comparison.csv'):
    "Write the comparison table of several runs as CSV"
    os.makedirs(directory, exist_ok=True)
    name = os.path.join(directory, filename)
    comparison_frame(reports).to_csv(name, index=False)
    LOGGER.info(f'Wrote comparison of {len(reports)} runs to {name}')
    return name
