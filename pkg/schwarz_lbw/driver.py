""" file:    driver.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: Laser and load schedules, Newton iteration and the backward
        Euler time loop of the welding scenario
"""

from dataclasses import dataclass
import logging
import os
import time

import numpy as np
from tqdm import tqdm

from .assembly import State, assemble, element_strains
from .decomposition import (build_components, classify_interface, grow_overlap,
                            node_adjacency, partition_structured)
from .dofs import BoundarySpec, Constraints, DOFS_PER_NODE, THETA, build_dof_map, \
    static_constraints
from .errors import StepFailure
from .krylov import gmres
from .mesh import build_box_mesh, write_vtk
from .report import RunReport, StepRecord
from .schwarz import RecyclePolicy, SchwarzOptions, SchwarzPreconditioner
from .utilities import timed

LOGGER = logging.getLogger('schwarz_lbw')


def laser_center(laser, t):
    "Centre (x, y) of the laser cylinder at time t"
    x0, y0 = laser.center
    return np.array([x0 + laser.velocity * max(0.0, t - laser.init_duration), y0])


def laser_constraints(scenario, t, mesh, theta_prev):
    """
    Temperature constraints of the melting pool at time t

    Nodes within the vertical cylinder around the laser axis are constrained.
    Each covered node ramps from its previous temperature by rate * dt per
    step, clamped at the melting temperature. Constraints are rebuilt every
    step, so nodes the cylinder has left are released.

    Parameters:
        scenario - a Scenario
        t - the time at the end of the step, in s
        mesh - the Mesh
        theta_prev - nodal temperatures of the previous step

    Returns:
        Constraints on temperature DOFs
    """
    laser = scenario.laser
    if not laser.enabled:
        return Constraints()
    center = laser_center(laser, t)
    distance = np.hypot(mesh.coords[:, 0] - center[0], mesh.coords[:, 1] - center[1])
    nodes = np.flatnonzero(distance <= laser.radius * (1 + 1e-12))
    values = np.minimum(laser.melt_temperature,
                        np.asarray(theta_prev)[nodes] + laser.rate * scenario.time.dt)
    return Constraints(dofs=DOFS_PER_NODE * nodes + THETA, values=values)


def load_displacement(scenario, t):
    """
    Prescribed displacement u_D(t) = min(eps_22, eps_dot_22 * (t - start))

    The strain is scaled by l_y unless the load is interpreted as a
    displacement.
    """
    load = scenario.load
    value = min(load.strain, load.strain_rate * max(0.0, t - load.start_time))
    if load.interpret == 'strain':
        value *= scenario.mesh.extent[1]
    return value


@dataclass
class SolverContext:

    """
    Everything a time loop needs besides the state

    Parameters:
        scenario - the Scenario
        mesh, dofmap, table - discretization and materials
        partition - the Partition with overlap grown
        component_sets - a dict with 'u' and 'theta' ComponentSets
        options - the SchwarzOptions
        policy - the RecyclePolicy inside a time step
    """

    scenario: object
    mesh: object
    dofmap: object
    table: object
    partition: object
    component_sets: dict
    options: SchwarzOptions
    policy: RecyclePolicy = RecyclePolicy.REUSE_ALL
    last_state: object = None

    @classmethod
    def from_scenario(cls, scenario):
        "Build mesh, DOF map, decomposition and components of a scenario"
        mesh = build_box_mesh(scenario.mesh.extent, scenario.mesh.cells)
        dofmap = build_dof_map(mesh, BoundarySpec(clamp_y0=scenario.boundary.clamp_y0,
                                                  load_face=scenario.boundary.load_face))
        decomposition = scenario.decomposition
        partition = grow_overlap(partition_structured(mesh, decomposition.grid),
                                 decomposition.overlap)
        coarse = scenario.coarse.config()
        adjacency = node_adjacency(mesh)
        component_sets = {}
        for field_name, variant in (('u', coarse.u_variant), ('theta', coarse.theta_variant)):
            classes = classify_interface(partition, dofmap, field_name)
            component_sets[field_name] = build_components(
                classes, variant, adjacency=adjacency, field_name=field_name)
        options = SchwarzOptions(two_level=decomposition.two_level,
                                 first_level=decomposition.first_level,
                                 overlap=decomposition.overlap, coarse=coarse,
                                 threads=scenario.threads)
        return cls(scenario=scenario, mesh=mesh, dofmap=dofmap,
                   table=scenario.material_table(), partition=partition,
                   component_sets=component_sets, options=options,
                   policy=RecyclePolicy(scenario.coarse.recycle))

    @property
    def label(self):
        return self.options.coarse.label if self.options.two_level else 'one-level'

    def constraints(self, state):
        "Static load constraints plus the laser at the time of the state"
        static = static_constraints(self.dofmap, load_displacement(self.scenario, state.t))
        laser = laser_constraints(self.scenario, state.t, self.mesh, state.theta_prev)
        return static.merge(laser)


@dataclass(frozen=True)
class NewtonStats:

    """
    Outcome of one Newton solve

    Parameters:
        iterations - Newton updates performed
        gmres_iterations - GMRES iterations per update
        residuals - ||R|| before every update and at convergence
        coarse_dim - the coarse dimension of the preconditioner (0 if none)
        timings - accumulated 'assemble', 'pc', 'solve' and 'coarse' wall times
    """

    iterations: int
    gmres_iterations: tuple
    residuals: tuple
    coarse_dim: int
    timings: dict


def _diverging(residuals, window):
    "True if the residual grew in each of the last `window` iterations"
    if len(residuals) <= window:
        return False
    tail = residuals[-(window + 1):]
    return all(later > earlier for earlier, later in zip(tail[:-1], tail[1:]))


def newton_solve(state, context, constraints=None, step=0):
    """
    Full Newton iteration for one time step

    The first iteration builds a fresh preconditioner, later ones update it
    following the recycle policy of the context.

    Parameters:
        state - the State at the current time (d holds the initial guess)
        context - a SolverContext
        constraints - the Constraints of the step. Optional, defaults to
            context.constraints(state).
        step - the step number, for diagnostics

    Returns:
        (State, NewtonStats)

    Raises:
        StepFailure if the residual grows for several consecutive iterations
        or the iteration cap is reached
    """
    scenario = context.scenario
    newton, krylov = scenario.solver.newton, scenario.solver.gmres
    if constraints is None:
        constraints = context.constraints(state)
    timings = {'assemble': 0.0, 'pc': 0.0, 'solve': 0.0, 'coarse': 0.0}
    residuals, gmres_iterations = [], []
    precond = None

    for iteration in range(newton.max_iter + 1):
        with timed(timings, 'assemble'):
            matrix, rhs = assemble(state, context.mesh, context.dofmap, context.table,
                                   constraints=constraints, tangent=newton.tangent,
                                   threads=scenario.threads)
        residuals.append(float(np.linalg.norm(rhs)))
        LOGGER.info(f'Step {step} Newton iteration {iteration}: ||R|| = {residuals[-1]:.3e}')
        if residuals[-1] <= newton.atol:
            break
        if iteration == newton.max_iter:
            LOGGER.warning(f'Newton iteration cap {newton.max_iter} reached in step {step}')
            raise StepFailure(step, residuals, 'iteration cap reached')
        if _diverging(residuals, newton.divergence_window):
            raise StepFailure(step, residuals, 'residual diverging')

        with timed(timings, 'pc'):
            if precond is None:
                precond = SchwarzPreconditioner.build(
                    matrix, context.partition, context.component_sets, context.options)
            else:
                precond = precond.update(matrix, context.policy)
        with timed(timings, 'solve'):
            delta, stats = gmres(matrix, rhs, precond, rtol=krylov.rtol, atol=krylov.atol,
                                 max_iter=krylov.max_iter, restart=krylov.restart)
        timings['coarse'] += precond.timings['coarse']
        gmres_iterations.append(stats.iterations)
        state = state.increment(delta)

    return state, NewtonStats(
        iterations=len(gmres_iterations), gmres_iterations=tuple(gmres_iterations),
        residuals=tuple(residuals), coarse_dim=precond.coarse_dim if precond else 0,
        timings=timings)


def dump_fields(context, state, step, directory):
    "Write temperature, displacement and e22 of a state as legacy VTK"
    nodal = state.d.reshape(-1, DOFS_PER_NODE)
    filename = os.path.join(directory, f'{context.scenario.name}_{step:04d}.vtk')
    return write_vtk(
        context.mesh, filename,
        point_data={'theta': nodal[:, THETA], 'u': nodal[:, :THETA],
                    'u_magnitude': np.linalg.norm(nodal[:, :THETA], axis=1)},
        cell_data={'e22': element_strains(state, context.mesh)[:, 1]})


def time_loop(scenario, context=None, directory=None, show_progress=None, dump=None):
    """
    Run the backward Euler time loop of a scenario

    Parameters:
        scenario - a Scenario
        context - a prebuilt SolverContext. Optional.
        directory - where field dumps go. Optional, defaults to the
            scenario output directory.
        show_progress - show a progress bar. Optional, defaults to the
            scenario output setting.
        dump - write VTK field dumps per step. Optional, defaults to the
            scenario output setting.

    Returns:
        a RunReport; a failed step ends the run and is recorded in
        `aborted`
    """
    start = time.perf_counter()
    context = context or SolverContext.from_scenario(scenario)
    directory = directory or scenario.output.directory
    show_progress = scenario.output.show_progress if show_progress is None else show_progress
    dump = scenario.output.dump_fields if dump is None else dump
    report = RunReport(name=scenario.name, label=context.label)

    state = State.initial(context.mesh.n_nodes, scenario.laser.initial_temperature,
                          scenario.time.dt)
    if dump:
        os.makedirs(directory, exist_ok=True)
        dump_fields(context, state, 0, directory)

    steps = range(1, scenario.time.n_steps + 1)
    for step in tqdm(steps, desc=f'Time steps ({context.label})', disable=not show_progress):
        state = state.advance()
        try:
            state, stats = newton_solve(state, context, step=step)
        except StepFailure as err:
            LOGGER.error(f'Aborting run: {err}')
            report.aborted = str(err)
            break
        record = StepRecord(
            step=step, time=state.t, newton_iters=stats.iterations,
            gmres_iters=stats.gmres_iterations, coarse_dim=stats.coarse_dim,
            t_assemble=stats.timings['assemble'], t_pc=stats.timings['pc'],
            t_solve=stats.timings['solve'], t_coarse=stats.timings['coarse'])
        report.add(record)
        LOGGER.info(f'Step {step} t={state.t:.4f}s: {stats.iterations} Newton iterations, '
                    f'mean GMRES {record.gmres_iters_mean:.1f}')
        if dump:
            dump_fields(context, state, step, directory)

    report.t_total = time.perf_counter() - start
    context.last_state = state
    return report


def compare(scenario, labels=None, show_progress=False):
    """
    Run a scenario once per coarse space combination

    Parameters:
        scenario - the base Scenario
        labels - coarse space labels. Optional, defaults to the scenario's
            `compare` list or the full comparison matrix.
        show_progress - show a progress bar over the combinations

    Returns:
        a list of RunReport, in label order
    """
    from .presets import COMPARISON_MATRIX

    labels = labels or scenario.compare or COMPARISON_MATRIX
    reports = []
    for label in tqdm(labels, desc='Coarse spaces', disable=not show_progress):
        variant = scenario.replace(coarse={'space': label})
        reports.append(time_loop(variant, show_progress=False, dump=False))
    return reports
