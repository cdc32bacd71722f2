""" file:    test_driver.py (tests)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: Tests for the laser and load schedules, Newton and the time loop
"""

from dataclasses import replace
import os
import tempfile
import unittest

import meshio
import numpy as np

from schwarz_lbw.assembly import State
from schwarz_lbw.config import scenario_from_dict
from schwarz_lbw.driver import SolverContext, _diverging, compare, laser_center, \
    laser_constraints, load_displacement, newton_solve, time_loop
from schwarz_lbw.dofs import THETA
from schwarz_lbw.mesh import build_box_mesh
from schwarz_lbw.presets import CTW

from .oracles import linear_table

# A 2 x 2 x 1 decomposition of a small block, laser in the middle
TINY = {
    'name': 'tiny',
    'mesh': {'extent': [2.0, 2.0, 1.0], 'cells': [4, 4, 2]},
    'decomposition': {'grid': [2, 2, 1], 'overlap': 1},
    'coarse': {'space': 'GDSW*(T+R)-RGDSW'},
    'solver': {'gmres': {'rtol': 1e-8}},
    'time': {'dt': 1e-3, 'total': 2e-3},
    'laser': {'center': [1.0, 1.0], 'radius': 0.6},
}


def tiny(**overrides):
    return scenario_from_dict(TINY).replace(**overrides)


class TestSchedules(unittest.TestCase):

    "Laser and load schedules"

    def test_laser_center(self):
        "The laser rests during initialization, then moves along x"
        scenario = tiny(laser={'center': [0.0, 7.5], 'velocity': 16.67, 'init_duration': 0.1})
        self.assertTrue(np.allclose(laser_center(scenario.laser, 0.05), [0.0, 7.5]))
        self.assertTrue(np.allclose(laser_center(scenario.laser, 0.2), [1.667, 7.5]))

    def test_laser_constraints(self):
        "Covered nodes ramp by rate * dt up to the melting temperature"
        scenario = tiny()
        mesh = build_box_mesh((2.0, 2.0, 1.0), (4, 4, 2))
        theta_prev = np.full(mesh.n_nodes, 725.6)
        hot = mesh.node_index(2, 2, 1)
        theta_prev[hot] = 1455.0
        constraints = laser_constraints(scenario, 1e-3, mesh, theta_prev)
        # a plus of five node columns, three layers deep
        self.assertEqual(len(constraints), 15)
        self.assertTrue(np.all(constraints.dofs % 4 == THETA))
        values = dict(zip(constraints.dofs // 4, constraints.values))
        self.assertAlmostEqual(values[hot], 1460.0)
        self.assertAlmostEqual(values[mesh.node_index(1, 2, 0)], 740.0)
        self.assertNotIn(mesh.node_index(1, 1, 0), values)

    def test_laser_disabled(self):
        "No constraints without laser"
        scenario = tiny(laser={'enabled': False})
        mesh = build_box_mesh((2.0, 2.0, 1.0), (4, 4, 2))
        self.assertEqual(len(laser_constraints(scenario, 1e-3, mesh, np.zeros(mesh.n_nodes))), 0)

    def test_load(self):
        "The load ramps with the strain rate up to the final strain, scaled by l_y"
        scenario = tiny()
        self.assertAlmostEqual(load_displacement(scenario, 0.1), 0.006 * 2.0)
        self.assertAlmostEqual(load_displacement(scenario, 1.0), 0.03 * 2.0)
        delayed = tiny(load={'start_time': 0.1})
        self.assertEqual(load_displacement(delayed, 0.05), 0.0)
        plain = tiny(load={'interpret': 'displacement'})
        self.assertAlmostEqual(load_displacement(plain, 1.0), 0.03)

    def test_diverging(self):
        "Divergence means growth over the whole window"
        self.assertTrue(_diverging([1.0, 2.0, 3.0, 4.0], 3))
        self.assertFalse(_diverging([1.0, 2.0, 1.5, 4.0], 3))
        self.assertFalse(_diverging([1.0, 2.0], 3))


class TestNewton(unittest.TestCase):

    "Newton iterations of one step"

    def test_rest(self):
        "Without laser and load the resting state needs no iteration"
        scenario = tiny(laser={'enabled': False}, load={'strain': 0.0})
        context = SolverContext.from_scenario(scenario)
        state = State.initial(context.mesh.n_nodes, 20.0, 1e-3).advance()
        new_state, stats = newton_solve(state, context)
        self.assertEqual(stats.iterations, 0)
        self.assertEqual(stats.coarse_dim, 0)
        self.assertTrue(np.array_equal(new_state.d, state.d))

    def test_linear(self):
        "A linear material converges in one iteration"
        scenario = tiny(solver={'gmres': {'rtol': 1e-10}, 'newton': {'atol': 1e-2}})
        context = replace(SolverContext.from_scenario(scenario), table=linear_table())
        state = State.initial(context.mesh.n_nodes, 20.0, 1e-3).advance()
        _, stats = newton_solve(state, context)
        self.assertEqual(stats.iterations, 1)
        self.assertEqual(len(stats.residuals), 2)
        self.assertEqual(stats.coarse_dim, 31)
        self.assertEqual(set(stats.timings), {'assemble', 'pc', 'solve', 'coarse'})

    def test_nonlinear(self):
        "The real material converges and satisfies the constraints"
        context = SolverContext.from_scenario(tiny())
        state = State.initial(context.mesh.n_nodes, 20.0, 1e-3).advance()
        constraints = context.constraints(state)
        new_state, stats = newton_solve(state, context, constraints)
        self.assertGreaterEqual(stats.iterations, 1)
        self.assertLessEqual(stats.residuals[-1], context.scenario.solver.newton.atol)
        self.assertTrue(np.allclose(new_state.d[constraints.dofs], constraints.values,
                                    atol=1e-3))
        self.assertEqual(len(stats.gmres_iterations), stats.iterations)


class TestTimeLoop(unittest.TestCase):

    "Backward Euler runs"

    def test_run(self):
        "Two steps heat the laser nodes twice"
        context = SolverContext.from_scenario(tiny())
        report = time_loop(context.scenario, context=context)
        self.assertIsNone(report.aborted)
        self.assertEqual(report.n_steps, 2)
        self.assertEqual(report.label, 'GDSW*(T+R)-RGDSW')
        self.assertTrue(all(rec.newton_iters >= 1 for rec in report.records))
        self.assertAlmostEqual(context.last_state.t, 2e-3)
        centre = context.mesh.node_index(2, 2, 1)
        self.assertAlmostEqual(context.last_state.theta[centre], 20.0 + 2 * 14.4, delta=1e-3)
        self.assertGreater(report.t_total, 0.0)

    def test_one_level(self):
        "Without coarse level the label and dimension say so"
        report = time_loop(tiny(decomposition={'two_level': False}, time={'total': 1e-3}))
        self.assertEqual(report.label, 'one-level')
        self.assertEqual(report.records[0].coarse_dim, 0)

    def test_zero_total(self):
        "No steps, an empty report"
        report = time_loop(tiny(time={'total': 0.0}))
        self.assertEqual(report.n_steps, 0)
        self.assertEqual(report.summary()['it_newton'], 0.0)

    def test_abort(self):
        "A failed step ends the run and is recorded"
        scenario = tiny(solver={'newton': {'max_iter': 1, 'atol': 1e-30}})
        with self.assertLogs('schwarz_lbw', level='ERROR'):
            report = time_loop(scenario)
        self.assertEqual(report.n_steps, 0)
        self.assertIn('time step 1 failed', report.aborted)

    def test_dump(self):
        "Fields are written per step"
        with tempfile.TemporaryDirectory() as tmpdir:
            time_loop(tiny(time={'total': 1e-3}), directory=tmpdir, dump=True)
            self.assertEqual(sorted(os.listdir(tmpdir)), ['tiny_0000.vtk', 'tiny_0001.vtk'])
            dumped = meshio.read(os.path.join(tmpdir, 'tiny_0001.vtk'))
        self.assertEqual(set(dumped.point_data), {'theta', 'u', 'u_magnitude'})
        self.assertIn('e22', dumped.cell_data)
        self.assertGreater(dumped.point_data['theta'].max(), 20.0)

    def test_compare(self):
        "One report per coarse space"
        scenario = tiny(time={'total': 1e-3})
        reports = compare(scenario, labels=['RGDSW(T)-RGDSW', 'GDSW(T)-GDSW'])
        self.assertEqual([rep.label for rep in reports], ['RGDSW(T)-RGDSW', 'GDSW(T)-GDSW'])
        self.assertEqual([rep.records[0].coarse_dim for rep in reports], [4, 20])



class TestWeldabilityPreset(unittest.TestCase):

    "The weldability test plate on a coarse mesh"

    def setUp(self):
        self.scenario = scenario_from_dict(CTW).replace(
            mesh={'cells': [16, 4, 2]}, decomposition={'grid': [4, 2, 1]},
            time={'total': 3e-3})

    def test_setup(self):
        "A 2D decomposition of the plate with a recycled GDSW(T)-RGDSW coarse space"
        scenario = scenario_from_dict(CTW)
        self.assertEqual(scenario.mesh.extent, (44.6, 8.0, 1.0))
        self.assertEqual(scenario.decomposition.grid[2], 1)
        self.assertEqual(scenario.coarse.config().label, 'GDSW(T)-RGDSW')
        self.assertEqual(scenario.coarse.recycle, 'reuse-all')
        self.assertEqual(scenario.time.n_steps, 1000)

    def test_load_schedule(self):
        "No pull before 0.8 s, then eps_22 grows at 0.03 per second"
        for t, strain in ((0.5, 0.0), (0.8, 0.0), (0.9, 0.003), (2.0, 0.03)):
            with self.subTest(t=t):
                self.assertAlmostEqual(load_displacement(self.scenario, t), strain * 8.0)

    def test_run(self):
        "A few steps heat the edge with a constant coarse dimension"
        context = SolverContext.from_scenario(self.scenario)
        report = time_loop(self.scenario, context=context)
        self.assertIsNone(report.aborted)
        self.assertEqual(report.n_steps, 3)
        self.assertEqual(report.label, 'GDSW(T)-RGDSW')
        dims = {rec.coarse_dim for rec in report.records}
        self.assertEqual(len(dims), 1)
        self.assertGreater(dims.pop(), 0)
        edge = context.mesh.node_index(0, 2, 1)
        self.assertAlmostEqual(context.last_state.theta[edge], 20.0 + 3 * 14.4, delta=1e-3)


if __name__ == '__main__':
    unittest.main()
