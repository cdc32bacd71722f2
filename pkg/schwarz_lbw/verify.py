""" file:    verify.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: Self checks on small built-in fixtures, run by the
        `verify` command
"""

from dataclasses import dataclass
import logging

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import norm as sparse_norm
from tqdm import tqdm

from .assembly import State, assemble
from .coarse_space import CoarseConfig, build_coarse_basis, extend, interface_values
from .decomposition import (EDGE, FACE, VARIANTS, VERTEX, build_components,
                            classify_interface, count_kinds, grow_overlap,
                            node_adjacency, partition_structured)
from .dofs import BoundarySpec, build_dof_map, static_constraints
from .krylov import gmres
from .materials import MaterialTable
from .mesh import build_box_mesh
from .schwarz import SchwarzOptions, SchwarzPreconditioner
from .utilities import relative_difference

LOGGER = logging.getLogger('schwarz_lbw')

# Coarse dimensions of a Dirichlet-free cube on a 2 x 2 x 2 grid
CUBE_COARSE_DIMS = {
    'GDSW(T)-GDSW': 76,
    'GDSW(T+R)-GDSW': 133,
    'GDSW*(T)-GDSW*': 52,
    'RGDSW(T)-RGDSW': 4,
}
CUBE_KINDS = {FACE: 12, EDGE: 6, VERTEX: 1}
PLATE_GRID, PLATE_ROOTS = (16, 64, 1), 945


@dataclass(frozen=True)
class CheckResult:

    """
    Outcome of one self check

    Parameters:
        name - the check name
        passed - True if the check holds
        detail - a one line description of what was measured
    """

    name: str
    passed: bool
    detail: str


def _cube(cells=4, grid=2, boundary=False):
    mesh = build_box_mesh((1.0, 1.0, 1.0), (cells,) * 3)
    dofmap = build_dof_map(mesh, BoundarySpec() if boundary else None)
    partition = partition_structured(mesh, (grid,) * 3)
    return mesh, dofmap, partition


def _component_sets(partition, dofmap, config, adjacency):
    return {field_name: build_components(classify_interface(partition, dofmap, field_name),
                                         variant, adjacency=adjacency, field_name=field_name)
            for field_name, variant in (('u', config.u_variant),
                                        ('theta', config.theta_variant))}


def check_combinatorics():
    "Interface classes and coarse dimensions of the 2 x 2 x 2 cube"
    mesh, dofmap, partition = _cube()
    kinds = count_kinds(classify_interface(partition, dofmap))
    adjacency = node_adjacency(mesh)
    dims = {}
    for label in CUBE_COARSE_DIMS:
        config = CoarseConfig.parse(label)
        basis = interface_values(_component_sets(partition, dofmap, config, adjacency),
                                 config, mesh.coords)
        dims[label] = basis.n_phi
    passed = kinds == CUBE_KINDS and dims == CUBE_COARSE_DIMS
    return CheckResult('combinatorics', passed, f'kinds {kinds}, coarse dimensions {dims}')


def check_rgdsw_roots():
    "RGDSW component count of a 16 x 64 x 1 decomposition"
    mesh = build_box_mesh((16.0, 64.0, 1.0), PLATE_GRID)
    partition = partition_structured(mesh, PLATE_GRID)
    components = build_components(classify_interface(partition), 'RGDSW')
    return CheckResult('rgdsw-roots', len(components) == PLATE_ROOTS,
                       f'{len(components)} roots, expected {PLATE_ROOTS}')


def check_partition_of_unity():
    "Component weights sum to one on every interface node, for every variant"
    mesh, dofmap, partition = _cube()
    classes = classify_interface(partition, dofmap)
    indicator = np.zeros(mesh.n_nodes)
    indicator[np.concatenate([cls.nodes for cls in classes])] = 1.0
    adjacency = node_adjacency(mesh)
    errors = {}
    for variant in VARIANTS:
        sums = build_components(classes, variant, adjacency=adjacency).weight_sums(mesh.n_nodes)
        errors[variant] = float(np.max(np.abs(sums - indicator)))
    passed = all(err <= 1e-12 for err in errors.values())
    return CheckResult('partition-of-unity', passed, f'max deviation {errors}')


def check_harmonic_extension():
    "Every extended column solves K_II phi_I = -K_IG phi_G"
    mesh, dofmap, partition = _cube(boundary=True)
    state = State.initial(mesh.n_nodes, 300.0, 1e-3)
    matrix, _ = assemble(state, mesh, dofmap, MaterialTable(),
                         constraints=static_constraints(dofmap, 0.01), tangent='consistent')
    config = CoarseConfig()
    component_sets = _component_sets(partition, dofmap, config, node_adjacency(mesh))
    _, split = build_coarse_basis(matrix, partition, component_sets, config)
    basis = extend(split, interface_values(component_sets, config, mesh.coords,
                                           matrix.constrained), decouple=False)
    phi = basis.phi.tocsr()
    residual = split.k_ii @ phi[split.interior] + split.k_ig @ phi[split.interface]
    scale = sparse_norm(split.k_ig @ phi[split.interface], axis=0)
    worst = float(np.max(sparse_norm(residual, axis=0) / np.maximum(scale, 1e-300)))
    return CheckResult('harmonic-extension', worst <= 1e-10,
                       f'worst relative residual {worst:.2e} over {basis.n_phi} columns')


def check_exact_preconditioner():
    "One subdomain: the one-level preconditioner is K^-1 and GMRES needs one step"
    mesh, dofmap, partition = _cube(cells=3, grid=1, boundary=True)
    state = State.initial(mesh.n_nodes, 20.0, 1e-3)
    matrix, rhs = assemble(state, mesh, dofmap, MaterialTable(),
                           constraints=static_constraints(dofmap, 0.01))
    precond = SchwarzPreconditioner.build(matrix, grow_overlap(partition, 1),
                                          options=SchwarzOptions(two_level=False))
    x, stats = gmres(matrix, rhs, precond)
    error = relative_difference(matrix.matrix @ x, rhs)
    return CheckResult('exact-preconditioner', stats.iterations == 1 and error <= 1e-6,
                       f'{stats.iterations} GMRES iterations, relative residual {error:.2e}')


def check_gmres_identity():
    "GMRES on the identity returns the right hand side after one iteration"
    rhs = np.linspace(1.0, 2.0, 17)
    x, stats = gmres(sparse.identity(len(rhs), format='csr'), rhs)
    error = relative_difference(x, rhs)
    return CheckResult('gmres-identity', stats.iterations == 1 and error <= 1e-12,
                       f'{stats.iterations} iterations, error {error:.2e}')


CHECKS = {
    'combinatorics': check_combinatorics,
    'rgdsw-roots': check_rgdsw_roots,
    'partition-of-unity': check_partition_of_unity,
    'harmonic-extension': check_harmonic_extension,
    'exact-preconditioner': check_exact_preconditioner,
    'gmres-identity': check_gmres_identity,
}


def run_checks(names=None, show_progress=False):
    """
    Run a selection of self checks

    Parameters:
        names - check names. Optional, defaults to all of them.
        show_progress - show a progress bar. Optional.

    Returns:
        a list of CheckResult, in the order given
    """
    names = list(names or CHECKS)
    results = []
    for name in tqdm(names, desc='Checks', disable=not show_progress):
        result = CHECKS[name]()
        level = logging.INFO if result.passed else logging.ERROR
        LOGGER.log(level, f'{name}: {"ok" if result.passed else "FAILED"} ({result.detail})')
        results.append(result)
    return results
