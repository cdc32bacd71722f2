""" file:    assembly.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Wednesday, 14 October 2026

    description: Monolithic thermo-elastic finite element assembly (Q1-Q1, B-bar,
        backward Euler)
"""

from dataclasses import dataclass, replace
import itertools
import logging

import numpy as np
from scipy import sparse

from . import materials as mat
from .dofs import Constraints, DOFS_PER_NODE, THETA, static_constraints
from .errors import InvalidArgumentError
from .shape import gauss_rule, shape_eval
from .utilities import chunks, ordered_map

LOGGER = logging.getLogger('schwarz_lbw')

# Volumetric projector in Voigt notation
M_VECTOR = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])

# Local DOF order of an element block: 24 displacement DOFs (node-major,
# component-minor) followed by 8 temperatures
N_U_LOCAL, N_THETA_LOCAL = 24, 8
TANGENTS = ('printed', 'consistent')

# Every assembled matrix gets a fresh stamp
_STAMPS = itertools.count(1)


@dataclass(frozen=True)
class State:

    """
    Current Newton iterate and previous time step of the coupled problem

    Parameters:
        d - the full DOF vector (u_x, u_y, u_z, theta interleaved per node)
        d_prev - the converged DOF vector of the previous time step
        t - the time at the end of the current step, in s
        dt - the step size, in s
    """

    d: np.ndarray
    d_prev: np.ndarray
    t: float
    dt: float

    def __post_init__(self):
        if len(self.d) != len(self.d_prev):
            raise InvalidArgumentError('current and previous state differ in length')
        if not self.dt > 0:
            raise InvalidArgumentError(f'time step must be positive, got {self.dt}')

    @classmethod
    def initial(cls, n_nodes, temperature, dt, t=0.0):
        "A resting state at uniform temperature"
        d = np.zeros(DOFS_PER_NODE * n_nodes)
        d[THETA::DOFS_PER_NODE] = temperature
        return cls(d=d, d_prev=d.copy(), t=t, dt=dt)

    @property
    def u(self):
        "Nodal displacements as an (n_nodes, 3) array"
        return self.d.reshape(-1, DOFS_PER_NODE)[:, :THETA]

    @property
    def theta(self):
        "Nodal temperatures"
        return self.d[THETA::DOFS_PER_NODE]

    @property
    def u_prev(self):
        return self.d_prev.reshape(-1, DOFS_PER_NODE)[:, :THETA]

    @property
    def theta_prev(self):
        return self.d_prev[THETA::DOFS_PER_NODE]

    def increment(self, delta):
        "The state after a Newton update d <- d + delta"
        return replace(self, d=self.d + delta)

    def advance(self, dt=None):
        "Commit the current iterate and move to the next time step"
        dt = self.dt if dt is None else dt
        return State(d=self.d.copy(), d_prev=self.d.copy(), t=self.t + dt, dt=dt)


@dataclass(frozen=True)
class BlockMatrix:

    """
    Monolithic sparse operator with field tags

    Parameters:
        matrix - a square scipy CSR matrix over all DOFs
        field - an int8 array, 0 for displacement and 1 for temperature DOFs
        constrained - a boolean mask of the DOFs eliminated as identity rows
        stamp - an integer identifying this assembly
    """

    matrix: sparse.csr_matrix
    field: np.ndarray
    constrained: np.ndarray
    stamp: int

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def free_dofs(self):
        return np.flatnonzero(~self.constrained)

    def block(self, row_field, col_field):
        """
        Extract a field block

        Parameters:
            row_field, col_field - each 'u' or 'theta'
        """
        tag = {'u': 0, 'theta': 1}
        rows = np.flatnonzero(self.field == tag[row_field])
        cols = np.flatnonzero(self.field == tag[col_field])
        return self.matrix[rows][:, cols]


@dataclass(frozen=True)
class ElementBlocks:

    """
    Element matrices and weak-form residuals of a batch of elements

    Parameters:
        uu, u_theta, theta_u, theta_theta - (n_elements, ., .) blocks
        f_u - (n_elements, 24) displacement residuals
        f_theta - (n_elements, 8) temperature residuals
    """

    uu: np.ndarray
    u_theta: np.ndarray
    theta_u: np.ndarray
    theta_theta: np.ndarray
    f_u: np.ndarray
    f_theta: np.ndarray

    @property
    def matrix(self):
        "The (n_elements, 32, 32) element tangents in local [u, theta] order"
        top = np.concatenate([self.uu, self.u_theta], axis=2)
        bottom = np.concatenate([self.theta_u, self.theta_theta], axis=2)
        return np.concatenate([top, bottom], axis=1)

    @property
    def residual(self):
        "The (n_elements, 32) weak-form residuals"
        return np.concatenate([self.f_u, self.f_theta], axis=1)


def strain_operator(gradients):
    """
    Standard small-strain operator B_u from shape function gradients

    Parameters:
        gradients - an (..., 8, 3) array of physical shape gradients

    Returns:
        an (..., 6, 24) array mapping element displacements to Voigt strains
        [e11 e22 e33 g13 g12 g23]
    """
    grads = np.asarray(gradients)
    op = np.zeros(grads.shape[:-2] + (6, N_U_LOCAL))
    for comp in range(3):
        op[..., comp, comp::3] = grads[..., comp]
    op[..., 3, 0::3] = grads[..., 2]
    op[..., 3, 2::3] = grads[..., 0]
    op[..., 4, 0::3] = grads[..., 1]
    op[..., 4, 1::3] = grads[..., 0]
    op[..., 5, 1::3] = grads[..., 2]
    op[..., 5, 2::3] = grads[..., 1]
    return op


def bbar_strain_operator(element_coords, rule=None, shape=None):
    """
    Mean-dilatation strain operator B-bar

    The volumetric part of B_u at each quadrature point is replaced by its
    element average, the deviatoric part is kept.

    Parameters:
        element_coords - an (8, 3) array or (n_elements, 8, 3) batch
        rule - a QuadratureRule. Optional, defaults to 2x2x2 Gauss.
        shape - precomputed ShapeValues for these coordinates. Optional.

    Returns:
        an (n_elements, n_points, 6, 24) array
    """
    if shape is None:
        shape = shape_eval(rule or gauss_rule(), element_coords)
    grads = shape.gradients
    n_elements, n_points = grads.shape[:2]
    op = strain_operator(grads)

    # divergence row: local DOF 3a + c carries dN_a/dx_c
    div = grads.reshape(n_elements, n_points, N_U_LOCAL)
    mean_div = np.einsum('eqi,eq->ei', div, shape.volumes) \
        / shape.volumes.sum(axis=1)[:, None]
    op[..., :3, :] += ((mean_div[:, None, :] - div) / 3)[:, :, None, :]
    return op


def _gamma_and_slope(table, theta):
    "Stress temperature modulus and its temperature derivative"
    youngs, poisson = mat.interpolate(table, 'E', theta), mat.interpolate(table, 'nu', theta)
    alpha = mat.interpolate(table, 'alpha', theta)
    kappa = mat.bulk_modulus(youngs, poisson)
    d_youngs, d_poisson = mat.derivative(table, 'E', theta), mat.derivative(table, 'nu', theta)
    d_kappa = d_youngs / (3 * (1 - 2 * poisson)) \
        + 2 * youngs * d_poisson / (3 * (1 - 2 * poisson) ** 2)
    gamma = mat.stress_temp_modulus(alpha, kappa)
    d_gamma = 3 * (mat.derivative(table, 'alpha', theta) * kappa + alpha * d_kappa)
    return gamma, d_gamma


def _lame_slopes(table, theta):
    "Temperature derivatives of the Lame parameters"
    youngs, poisson = mat.interpolate(table, 'E', theta), mat.interpolate(table, 'nu', theta)
    d_youngs, d_poisson = mat.derivative(table, 'E', theta), mat.derivative(table, 'nu', theta)
    denom = (1 + poisson) * (1 - 2 * poisson)
    g = poisson / denom
    dg = (1 + 2 * poisson ** 2) / denom ** 2
    d_lam = d_youngs * g + youngs * dg * d_poisson
    d_mu = d_youngs / (2 * (1 + poisson)) - youngs * d_poisson / (2 * (1 + poisson) ** 2)
    return d_lam, d_mu


def element_blocks(elements, state, mesh, table, tangent='printed', rule=None):
    """
    Element tangents and residuals of the coupled thermo-elastic problem

    The weak-form residual is
        f_u     = int B^T (C eps - gamma (theta - theta_ref) m)
        f_theta = int [-lambda grad N . grad theta - gamma tr(eps_dot) theta N
                       - rho c (theta - theta_prev) / dt N]
    and the blocks are
        K_uu = int B^T C B
        K_ut = -int B^T gamma m N
        K_tu = -(1/dt) int theta gamma N m^T B
        K_tt = -int lambda G G^T - int gamma tr(eps_dot) N N^T - (1/dt) int rho c N N^T
    with B the B-bar operator and all material parameters evaluated at the
    quadrature point temperature of the current iterate. With
    tangent='consistent' the temperature derivatives of the material curves
    are added, which makes the blocks the exact Jacobian of the residual.

    Parameters:
        elements - an element index or array of element indices
        state - the current State
        mesh - the Mesh
        table - a MaterialTable
        tangent - 'printed' or 'consistent'. Optional, defaults to 'printed'.
        rule - a QuadratureRule. Optional, defaults to 2x2x2 Gauss.

    Returns:
        an ElementBlocks instance (batched even for a single element)
    """
    if tangent not in TANGENTS:
        raise InvalidArgumentError(f'unknown tangent {tangent!r}, expected one of {TANGENTS}')
    elements = np.atleast_1d(np.asarray(elements, dtype=int))
    conn = mesh.elements[elements]
    n_elements = len(elements)
    shape = shape_eval(rule or gauss_rule(), mesh.coords[conn])
    N, grads, dV = shape.values, shape.gradients, shape.volumes
    op = bbar_strain_operator(None, shape=shape)
    div = op[..., :3, :].sum(axis=2)            # m^T B, (e, q, 24)

    # Element DOF values
    nodal, nodal_prev = state.d.reshape(-1, DOFS_PER_NODE), state.d_prev.reshape(-1, DOFS_PER_NODE)
    u_e = nodal[conn, :THETA].reshape(n_elements, N_U_LOCAL)
    u_prev_e = nodal_prev[conn, :THETA].reshape(n_elements, N_U_LOCAL)
    theta_e, theta_prev_e = nodal[conn, THETA], nodal_prev[conn, THETA]

    # Quadrature point fields
    theta = np.einsum('qa,ea->eq', N, theta_e)
    theta_prev = np.einsum('qa,ea->eq', N, theta_prev_e)
    grad_theta = np.einsum('eqai,ea->eqi', grads, theta_e)
    strain = np.einsum('eqij,ej->eqi', op, u_e)
    trace_rate = (np.einsum('eqj,ej->eq', div, u_e)
                  - np.einsum('eqj,ej->eq', div, u_prev_e)) / state.dt
    dtheta = theta - table.reference_temperature

    # Material parameters
    youngs, poisson = mat.interpolate(table, 'E', theta), mat.interpolate(table, 'nu', theta)
    tangent_c = mat.elastic_tangent(youngs, poisson)
    gamma, d_gamma = _gamma_and_slope(table, theta)
    conductivity = mat.interpolate(table, 'lambda', theta) * table.conductivity_scale
    heat = mat.interpolate(table, 'c_rho', theta) * table.heat_capacity_scale

    # Residuals
    stress = np.einsum('eqij,eqj->eqi', tangent_c, strain) - (gamma * dtheta)[..., None] * M_VECTOR
    f_u = np.einsum('eqki,eqk,eq->ei', op, stress, dV)
    source = gamma * trace_rate * theta + heat * (theta - theta_prev) / state.dt
    f_theta = -np.einsum('eqai,eqi,eq->ea', grads, grad_theta, conductivity * dV) \
        - np.einsum('qa,eq->ea', N, source * dV)

    # Printed blocks
    c_op = np.einsum('eqkl,eqlj->eqkj', tangent_c, op)
    k_uu = np.einsum('eqki,eqkj,eq->eij', op, c_op, dV, optimize=True)
    k_ut = -np.einsum('eqi,qa,eq->eia', div, N, gamma * dV)
    k_tu = -np.einsum('qa,eqj,eq->eaj', N, div, theta * gamma * dV) / state.dt
    k_tt = -np.einsum('eqai,eqbi,eq->eab', grads, grads, conductivity * dV, optimize=True) \
        - np.einsum('qa,qb,eq->eab', N, N, (gamma * trace_rate + heat / state.dt) * dV)

    if tangent == 'consistent':
        d_lam, d_mu = _lame_slopes(table, theta)
        d_stress = np.einsum('eqij,eqj->eqi', mat.isotropic_tensor(d_lam, d_mu), strain) \
            - (d_gamma * dtheta)[..., None] * M_VECTOR
        k_ut = k_ut + np.einsum('eqki,eqk,qa,eq->eia', op, d_stress, N, dV, optimize=True)
        d_conductivity = mat.derivative(table, 'lambda', theta) * table.conductivity_scale
        d_heat = mat.derivative(table, 'c_rho', theta) * table.heat_capacity_scale
        flux_slope = np.einsum('eqai,eqi->eqa', grads, grad_theta)
        k_tt = k_tt - np.einsum('eqa,qb,eq->eab', flux_slope, N, d_conductivity * dV) \
            - np.einsum('qa,qb,eq->eab', N, N,
                        (d_gamma * trace_rate * theta
                         + d_heat * (theta - theta_prev) / state.dt) * dV)

    return ElementBlocks(uu=k_uu, u_theta=k_ut, theta_u=k_tu, theta_theta=k_tt,
                         f_u=f_u, f_theta=f_theta)


def element_dofs(connectivity):
    """
    Global DOFs of elements in local [u, theta] order

    Parameters:
        connectivity - an (n_elements, 8) array of node indices

    Returns:
        an (n_elements, 32) array
    """
    conn = np.asarray(connectivity, dtype=int)
    u_dofs = (DOFS_PER_NODE * conn[:, :, None] + np.arange(3)[None, None, :])\
        .reshape(len(conn), N_U_LOCAL)
    return np.concatenate([u_dofs, DOFS_PER_NODE * conn + THETA], axis=1)


def assemble(state, mesh, dofmap, table, constraints=None, tangent='printed',
             rule=None, threads=1, chunk_size=4096):
    """
    Assemble the monolithic tangent and Newton right hand side

    The Newton system is K delta = R with R = -F the negative weak-form
    residual. Dirichlet DOFs are eliminated symmetrically: their rows and
    columns become identity rows, R carries the constraint increment
    (prescribed value - current value) there, and the free rows of R are
    corrected by -K_fc increment.

    Parameters:
        state - the current State
        mesh - the Mesh
        dofmap - the DofMap
        table - a MaterialTable
        constraints - the Constraints of the current step. Optional,
            defaults to the static constraints of dofmap at zero load.
        tangent - 'printed' or 'consistent'. Optional.
        rule - a QuadratureRule. Optional.
        threads - the number of assembly workers. Optional, defaults to 1.
        chunk_size - elements per work item. Optional.

    Returns:
        (BlockMatrix K, residual R)
    """
    n_dofs = dofmap.n_dofs
    if len(state.d) != n_dofs or dofmap.n_nodes != mesh.n_nodes:
        raise InvalidArgumentError(
            f'state of length {len(state.d)} does not match {n_dofs} DOFs')
    if constraints is None:
        constraints = static_constraints(dofmap)

    # Element contributions, chunked; results come back in element order
    def work(piece):
        elements = np.arange(mesh.n_elements)[piece]
        blocks = element_blocks(elements, state, mesh, table, tangent=tangent, rule=rule)
        return element_dofs(mesh.elements[elements]), blocks.matrix, blocks.residual

    results = ordered_map(work, chunks(mesh.n_elements, chunk_size), threads=threads)
    dofs = np.concatenate([res[0] for res in results])
    local_k = np.concatenate([res[1] for res in results])
    local_f = np.concatenate([res[2] for res in results])

    size = dofs.shape[1]
    rows = np.broadcast_to(dofs[:, :, None], (len(dofs), size, size)).ravel()
    cols = np.broadcast_to(dofs[:, None, :], (len(dofs), size, size)).ravel()
    stiffness = sparse.coo_matrix((local_k.ravel(), (rows, cols)),
                                  shape=(n_dofs, n_dofs)).tocsr()
    weak_residual = np.bincount(dofs.ravel(), weights=local_f.ravel(), minlength=n_dofs)

    # Dirichlet elimination
    mask = constraints.mask(n_dofs)
    increment = np.zeros(n_dofs)
    increment[constraints.dofs] = np.asarray(constraints.values, float) - state.d[constraints.dofs]
    rhs = -weak_residual - stiffness @ increment
    rhs[mask] = increment[mask]
    keep = sparse.diags((~mask).astype(float))
    stiffness = (keep @ stiffness @ keep + sparse.diags(mask.astype(float))).tocsr()
    stiffness.eliminate_zeros()

    LOGGER.debug(f'Assembled {n_dofs} DOFs, {stiffness.nnz} nonzeros, '
                 f'{int(mask.sum())} constrained')
    return BlockMatrix(matrix=stiffness, field=dofmap.field_of_dof, constrained=mask,
                       stamp=next(_STAMPS)), rhs


def weak_residual(state, mesh, dofmap, table, rule=None):
    "The unconstrained weak-form residual F (so that R = -F without Dirichlet DOFs)"
    _, rhs = assemble(state, mesh, dofmap, table, constraints=Constraints(), rule=rule)
    return -rhs


@dataclass(frozen=True)
class InterfaceSplit:

    """
    (I, Gamma) partition of a matrix

    Parameters:
        interior - interior DOF indices, grouped by subdomain when groups were given
        interface - sorted interface DOF indices
        k_ii, k_ig, k_gi, k_gg - the four sparse blocks (CSR)
        offsets - start of each subdomain group within interior (len n_groups + 1),
            or None
    """

    interior: np.ndarray
    interface: np.ndarray
    k_ii: sparse.csr_matrix
    k_ig: sparse.csr_matrix
    k_gi: sparse.csr_matrix
    k_gg: sparse.csr_matrix
    offsets: np.ndarray = None

    @property
    def permutation(self):
        "The [interior, interface] ordering of all DOFs"
        return np.concatenate([self.interior, self.interface])

    def interior_block(self, group):
        "Interior DOFs and diagonal block of one subdomain group"
        start, stop = self.offsets[group], self.offsets[group + 1]
        return self.interior[start:stop], self.k_ii[start:stop, start:stop]


def split_interface(matrix, interface_dofs, groups=None):
    """
    Partition a BlockMatrix into interior and interface blocks

    Parameters:
        matrix - a BlockMatrix
        interface_dofs - the interface DOF indices; all must be free
        groups - the owning subdomain of every DOF. Optional; when given the
            interior DOFs are ordered by group so K_II is block diagonal
            for a consistent ownership.

    Returns:
        an InterfaceSplit
    """
    n_dofs = matrix.shape[0]
    interface = np.unique(np.asarray(interface_dofs, dtype=int))
    if np.any((interface < 0) | (interface >= n_dofs)):
        raise InvalidArgumentError('interface DOF out of range')
    if np.any(matrix.constrained[interface]):
        raise InvalidArgumentError('interface set contains Dirichlet DOFs')

    is_interface = np.zeros(n_dofs, dtype=bool)
    is_interface[interface] = True
    interior = np.flatnonzero(~is_interface)
    offsets = None
    if groups is not None:
        groups = np.asarray(groups, dtype=int)
        interior = interior[np.lexsort((interior, groups[interior]))]
        offsets = np.searchsorted(groups[interior], np.arange(groups.max() + 2))

    csr = matrix.matrix.tocsr()
    rows_i, rows_g = csr[interior], csr[interface]
    return InterfaceSplit(
        interior=interior, interface=interface,
        k_ii=rows_i[:, interior].tocsr(), k_ig=rows_i[:, interface].tocsr(),
        k_gi=rows_g[:, interior].tocsr(), k_gg=rows_g[:, interface].tocsr(),
        offsets=offsets)


def element_strains(state, mesh, rule=None):
    """
    Volume-averaged B-bar strain of every element

    Returns:
        an (n_elements, 6) array in Voigt order [e11 e22 e33 g13 g12 g23]
    """
    shape = shape_eval(rule or gauss_rule(), mesh.coords[mesh.elements])
    op = bbar_strain_operator(None, shape=shape)
    u_e = state.d.reshape(-1, DOFS_PER_NODE)[mesh.elements, :THETA]\
        .reshape(mesh.n_elements, N_U_LOCAL)
    strain = np.einsum('eqij,ej->eqi', op, u_e)
    return np.einsum('eqi,eq->ei', strain, shape.volumes) / shape.volumes.sum(axis=1)[:, None]
