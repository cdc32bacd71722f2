""" file:    dofs.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Monolithic DOF numbering and Dirichlet bookkeeping
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

# Node-interleaved DOF layout: four DOFs per node
U_X, U_Y, U_Z, THETA = 0, 1, 2, 3
DOFS_PER_NODE = 4
FIELD_COMPONENTS = {'u': (U_X, U_Y, U_Z), 'theta': (THETA,)}

# Value schedules for constrained DOFs
ZERO, LOAD = 'zero', 'load'
SCHEDULES = (ZERO, LOAD)


@dataclass(frozen=True)
class BoundarySpec:

    """
    Static boundary conditions of the welding scenario

    Parameters:
        clamp_y0 - if True, set u_y = 0 on the face y = 0, u_x = 0 on its
            line x = 0 and u_z = 0 on its line z = 0
        load_face - if True, the face y = l_y carries u_y = u_D(t)
        extra - additional (node, component, schedule) constraints
    """

    clamp_y0: bool = True
    load_face: bool = True
    extra: tuple = ()


@dataclass(frozen=True)
class DofMap:

    """
    Monolithic DOF map with static Dirichlet sets

    DOF 4n + c is component c (u_x, u_y, u_z, theta) of node n.

    Parameters:
        n_nodes - the number of mesh nodes
        constraint_nodes, constraint_components - arrays describing each
            constrained (node, component) pair
        constraint_schedules - an array of schedule ids ('zero' or 'load')
    """

    n_nodes: int
    constraint_nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    constraint_components: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    constraint_schedules: np.ndarray = field(default_factory=lambda: np.zeros(0, object))

    @property
    def n_dofs(self):
        "Total number of DOFs"
        return DOFS_PER_NODE * self.n_nodes

    def dof(self, node, component):
        "Global DOF index of a node component"
        return DOFS_PER_NODE * np.asarray(node) + np.asarray(component)

    def node_dofs(self, nodes, field_name=None):
        """
        DOFs belonging to a set of nodes

        Parameters:
            nodes - an array of node indices
            field_name - 'u', 'theta' or None for all four components
        """
        comps = FIELD_COMPONENTS[field_name] if field_name else range(DOFS_PER_NODE)
        nodes = np.asarray(nodes, dtype=int)
        return (DOFS_PER_NODE * nodes[:, None] + np.asarray(comps)[None, :]).ravel()

    @property
    def field_of_dof(self):
        "Field tag per DOF: 0 for displacement, 1 for temperature"
        tags = np.zeros(self.n_dofs, dtype=np.int8)
        tags[THETA::DOFS_PER_NODE] = 1
        return tags

    @property
    def constrained_dofs(self):
        "Sorted static Dirichlet DOFs"
        return np.sort(self.dof(self.constraint_nodes, self.constraint_components))

    def constraint_values(self, load_value):
        """
        Prescribed values of the static constraints

        Parameters:
            load_value - the current value of the 'load' schedule, u_D(t)

        Returns:
            (dofs, values) arrays
        """
        dofs = self.dof(self.constraint_nodes, self.constraint_components)
        values = np.where(self.constraint_schedules == LOAD, load_value, 0.0).astype(float)
        return dofs, values

    def fully_constrained_nodes(self, field_name):
        """
        Nodes whose every DOF of the given field is statically constrained

        These form the pure-Dirichlet part of the boundary for that field.
        """
        comps = FIELD_COMPONENTS[field_name]
        mask = np.isin(self.constraint_components, comps)
        nodes, counts = np.unique(self.constraint_nodes[mask], return_counts=True)
        return nodes[counts == len(comps)]


def build_dof_map(mesh, bc_spec=None):
    """
    Number the DOFs of a mesh and collect its static Dirichlet constraints

    Parameters:
        mesh - a Mesh
        bc_spec - a BoundarySpec. Optional, if None there are no constraints.

    Returns:
        a DofMap
    """
    if bc_spec is None:
        return DofMap(n_nodes=mesh.n_nodes)

    entries = []
    if bc_spec.clamp_y0:
        face = mesh.nodes_where(1, 0.0)
        on_x0 = np.abs(mesh.coords[face, 0]) <= 1e-9 * max(mesh.spacing)
        on_z0 = np.abs(mesh.coords[face, 2]) <= 1e-9 * max(mesh.spacing)
        entries += [(n, U_Y, ZERO) for n in face]
        entries += [(n, U_X, ZERO) for n in face[on_x0]]
        entries += [(n, U_Z, ZERO) for n in face[on_z0]]
    if bc_spec.load_face:
        entries += [(n, U_Y, LOAD) for n in mesh.nodes_where(1, mesh.extent[1])]
    entries += list(bc_spec.extra)

    # Validate
    seen = set()
    for node, comp, schedule in entries:
        if not 0 <= node < mesh.n_nodes:
            raise InvalidArgumentError(f'constraint on non-existent node {node}')
        if comp not in range(DOFS_PER_NODE):
            raise InvalidArgumentError(f'invalid component {comp} for node {node}')
        if schedule not in SCHEDULES:
            raise InvalidArgumentError(f'unknown value schedule {schedule!r}')
        if (node, comp) in seen:
            raise InvalidArgumentError(f'node {node} component {comp} constrained twice')
        seen.add((node, comp))

    if not entries:
        return DofMap(n_nodes=mesh.n_nodes)
    nodes, comps, schedules = zip(*entries)
    return DofMap(
        n_nodes=mesh.n_nodes,
        constraint_nodes=np.asarray(nodes, dtype=int),
        constraint_components=np.asarray(comps, dtype=int),
        constraint_schedules=np.asarray(schedules, dtype=object)
    )


@dataclass(frozen=True)
class Constraints:

    """
    Prescribed values for a set of DOFs at the current time

    Parameters:
        dofs - an array of constrained DOF indices (no repeats)
        values - the prescribed values, same length as dofs
    """

    dofs: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if len(self.dofs) != len(self.values):
            raise InvalidArgumentError('constraint dofs and values differ in length')
        if len(np.unique(self.dofs)) != len(self.dofs):
            raise InvalidArgumentError('a DOF is constrained twice')

    def __len__(self):
        return len(self.dofs)

    def merge(self, other):
        "Combine two disjoint constraint sets"
        return Constraints(
            dofs=np.concatenate([np.asarray(self.dofs, int), np.asarray(other.dofs, int)]),
            values=np.concatenate([np.asarray(self.values, float),
                                   np.asarray(other.values, float)]))

    def mask(self, n_dofs):
        "Boolean mask of the constrained DOFs"
        mask = np.zeros(n_dofs, dtype=bool)
        mask[np.asarray(self.dofs, int)] = True
        return mask


def static_constraints(dofmap, load_value=0.0):
    """
    The static Dirichlet constraints of a DofMap at a given load

    Parameters:
        dofmap - a DofMap
        load_value - the current prescribed load displacement u_D(t)
    """
    dofs, values = dofmap.constraint_values(load_value)
    return Constraints(dofs=np.asarray(dofs, int), values=values)
