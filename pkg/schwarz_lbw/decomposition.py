""" file:    decomposition.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Wednesday, 14 October 2026

    description: Structured nonoverlapping partitions, overlap growth and the
        interface components of the GDSW family
"""

from collections import defaultdict
from dataclasses import dataclass, field, replace
import json
import logging

import numpy as np
from scipy import sparse

from .dofs import DOFS_PER_NODE, FIELD_COMPONENTS
from .errors import InvalidArgumentError

LOGGER = logging.getLogger('schwarz_lbw')

# Interface class kinds and component variants
FACE, EDGE, VERTEX = 'face', 'edge', 'vertex'
GDSW, GDSW_STAR, RGDSW = 'GDSW', 'GDSW*', 'RGDSW'
VARIANTS = (GDSW, GDSW_STAR, RGDSW)


def node_element_incidence(mesh):
    "Sparse (n_nodes, n_elements) incidence matrix"
    n_elements = mesh.n_elements
    cols = np.repeat(np.arange(n_elements), mesh.elements.shape[1])
    data = np.ones(len(cols), dtype=np.int32)
    return sparse.csr_matrix((data, (mesh.elements.ravel(), cols)),
                             shape=(mesh.n_nodes, n_elements))


def node_adjacency(mesh):
    "Sparse boolean matrix of nodes sharing at least one element"
    incidence = node_element_incidence(mesh)
    return (incidence @ incidence.T).astype(bool).tocsr()


@dataclass(frozen=True)
class Partition:

    """
    A nonoverlapping element partition with optional overlap

    Parameters:
        mesh - the partitioned Mesh
        grid - subdomain counts (N_x, N_y, N_z)
        element_subdomain - the subdomain of each element
        node_owner - the subdomain owning each node in the nonoverlapping
            sense (nodes on a cut plane belong to the upper subdomain)
        node_subdomains - sparse (n_nodes, n_subdomains) boolean incidence of
            subdomain closures
        overlap - the number of element layers grown, or None
        overlap_nodes - per subdomain, the sorted nodes of the overlapping
            subdomain (empty until grown)
    """

    mesh: object
    grid: tuple
    element_subdomain: np.ndarray
    node_owner: np.ndarray
    node_subdomains: sparse.csr_matrix
    overlap: int = None
    overlap_nodes: list = field(default_factory=list)

    @property
    def n_subdomains(self):
        return int(np.prod(self.grid))

    def subdomain_elements(self, subdomain):
        "Elements of one nonoverlapping subdomain"
        return np.flatnonzero(self.element_subdomain == subdomain)

    def closure_nodes(self, subdomain):
        "Nodes of the closure of one nonoverlapping subdomain"
        return self.node_subdomains[:, subdomain].nonzero()[0]

    @property
    def multiplicity(self):
        "The number of subdomain closures containing each node"
        return np.asarray(self.node_subdomains.sum(axis=1)).ravel()

    @property
    def interface_nodes(self):
        "Nodes shared by two or more subdomains, before removing Dirichlet nodes"
        return np.flatnonzero(self.multiplicity >= 2)

    def overlap_dofs(self, subdomain):
        "All DOFs of the nodes of an overlapping subdomain"
        if self.overlap is None:
            raise InvalidArgumentError('overlap has not been grown for this partition')
        nodes = self.overlap_nodes[subdomain]
        return (DOFS_PER_NODE * nodes[:, None] + np.arange(DOFS_PER_NODE)).ravel()

    def dof_owner(self):
        "The owning subdomain of every DOF"
        return np.repeat(self.node_owner, DOFS_PER_NODE)


def partition_structured(mesh, grid):
    """
    Cut a structured mesh into a grid of equally sized element boxes

    Parameters:
        mesh - a Mesh
        grid - subdomain counts (N_x, N_y, N_z); each must divide the mesh
            cell count along its axis

    Returns:
        a Partition without overlap
    """
    grid = tuple(int(n) for n in grid)
    cells = np.asarray(mesh.cells)
    if len(grid) != 3 or any(n < 1 for n in grid):
        raise InvalidArgumentError(f'subdomain grid must hold three positive counts, got {grid}')
    if np.any(cells % np.asarray(grid)):
        raise InvalidArgumentError(f'cells {tuple(cells)} are not divisible by grid {grid}')
    sub_cells = cells // np.asarray(grid)

    # Element -> subdomain, x fastest
    box = mesh.element_grid_indices() // sub_cells
    element_subdomain = box[:, 0] + grid[0] * (box[:, 1] + grid[1] * box[:, 2])

    # Node ownership by index arithmetic on the node lattice
    n_x, n_y, _ = mesh.cells
    nodes = np.arange(mesh.n_nodes)
    lattice = np.column_stack([nodes % (n_x + 1),
                               (nodes // (n_x + 1)) % (n_y + 1),
                               nodes // ((n_x + 1) * (n_y + 1))])
    owner_box = np.minimum(lattice // sub_cells, np.asarray(grid) - 1)
    node_owner = owner_box[:, 0] + grid[0] * (owner_box[:, 1] + grid[1] * owner_box[:, 2])

    element_indicator = sparse.csr_matrix(
        (np.ones(mesh.n_elements, dtype=np.int32),
         (np.arange(mesh.n_elements), element_subdomain)),
        shape=(mesh.n_elements, int(np.prod(grid))))
    node_subdomains = (node_element_incidence(mesh) @ element_indicator).astype(bool).tocsr()

    LOGGER.debug(f'Partitioned {mesh.cells} cells into {grid} subdomains')
    return Partition(mesh=mesh, grid=grid, element_subdomain=element_subdomain,
                     node_owner=node_owner, node_subdomains=node_subdomains)


def grow_overlap(partition, k=1):
    """
    Grow every subdomain by k layers of elements

    One layer adds all elements sharing at least one node with the current
    subdomain.

    Parameters:
        partition - a Partition
        k - the number of element layers, k >= 0. Optional, defaults to 1.

    Returns:
        a Partition carrying the overlapping node sets
    """
    if k < 0:
        raise InvalidArgumentError(f'overlap must be nonnegative, got {k}')
    mesh = partition.mesh
    incidence = node_element_incidence(mesh).astype(bool)
    members = sparse.csr_matrix(
        (np.ones(mesh.n_elements, dtype=bool),
         (np.arange(mesh.n_elements), partition.element_subdomain)),
        shape=(mesh.n_elements, partition.n_subdomains))
    for _ in range(k):
        members = (incidence.T @ (incidence @ members)).astype(bool)
    nodes = (incidence @ members).astype(bool).tocsc()
    overlap_nodes = [np.sort(nodes[:, sub].nonzero()[0]) for sub in range(partition.n_subdomains)]
    return replace(partition, overlap=int(k), overlap_nodes=overlap_nodes)


@dataclass(frozen=True)
class InterfaceClass:

    """
    Interface nodes sharing exactly the same set of subdomains

    Parameters:
        subdomains - the sorted tuple of subdomain ids
        nodes - the sorted member node indices
        kind - 'face', 'edge' or 'vertex'
    """

    subdomains: tuple
    nodes: np.ndarray
    kind: str

    @property
    def n_nodes(self):
        return len(self.nodes)


def class_kind(n_subdomains, n_nodes):
    "Face for two subdomains, otherwise edge or vertex by node count"
    if n_subdomains == 2:
        return FACE
    return EDGE if n_nodes >= 2 else VERTEX


def classify_node_sets(node_sets):
    """
    Group interface nodes by their exact subdomain sets

    Parameters:
        node_sets - a mapping node -> iterable of subdomain ids (only nodes
            with two or more subdomains are classified)

    Returns:
        a list of InterfaceClass sorted by subdomain set
    """
    groups = defaultdict(list)
    for node, subdomains in node_sets.items():
        key = tuple(sorted(int(s) for s in subdomains))
        if len(key) >= 2:
            groups[key].append(int(node))
    return [InterfaceClass(subdomains=key, nodes=np.array(sorted(nodes), dtype=int),
                           kind=class_kind(len(key), len(nodes)))
            for key, nodes in sorted(groups.items())]


def interface_nodes(partition, dofmap, field_name='u'):
    """
    The interface of one field

    Nodes in two or more subdomain closures, minus the nodes whose every DOF
    of the field is statically constrained.
    """
    if field_name not in FIELD_COMPONENTS:
        raise InvalidArgumentError(f'unknown field {field_name!r}')
    shared = partition.interface_nodes
    if dofmap is None:
        return shared
    return np.setdiff1d(shared, dofmap.fully_constrained_nodes(field_name))


def classify_interface(partition, dofmap=None, field_name='u'):
    """
    Split the interface of a field into faces, edges and vertices

    Parameters:
        partition - a Partition with at least two subdomains
        dofmap - the DofMap providing static Dirichlet constraints. Optional.
        field_name - 'u' or 'theta'. Optional, defaults to 'u'.

    Returns:
        a list of InterfaceClass, sorted by subdomain set
    """
    nodes = interface_nodes(partition, dofmap, field_name)
    incidence = partition.node_subdomains[nodes].tolil()
    classes = classify_node_sets(dict(zip(nodes, incidence.rows)))
    counts = count_kinds(classes)
    LOGGER.debug(f'Interface of {field_name}: {len(nodes)} nodes, '
                 f'M_V={counts[VERTEX]} M_E={counts[EDGE]} M_F={counts[FACE]}')
    return classes


def count_kinds(classes):
    "Number of classes of each kind"
    counts = {FACE: 0, EDGE: 0, VERTEX: 0}
    for cls in classes:
        counts[cls.kind] += 1
    return counts


@dataclass(frozen=True)
class InterfaceComponent:

    """
    One coarse interface component with its node weights

    Parameters:
        subdomains - the subdomain set of the root class
        kind - the kind of the root class
        nodes - the member nodes (sorted)
        weights - the inverse multiplicity weight of each member node
        classes - indices of the classes merged into this component
    """

    subdomains: tuple
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    classes: tuple

    @property
    def n_nodes(self):
        return len(self.nodes)


@dataclass(frozen=True)
class ComponentSet:

    """
    The interface components of one field under one variant

    Parameters:
        variant - 'GDSW', 'GDSW*' or 'RGDSW'
        components - a list of InterfaceComponent
        counts - the class counts {'vertex': M_V, 'edge': M_E, 'face': M_F}
        field_name - the field the classes were built for
    """

    variant: str
    components: list
    counts: dict
    field_name: str = 'u'

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def weight_sums(self, n_nodes):
        "Sum of component weights per node; one on the interface, zero elsewhere"
        sums = np.zeros(n_nodes)
        for comp in self.components:
            np.add.at(sums, comp.nodes, comp.weights)
        return sums


def _make_component(classes, root, members):
    """
    members - a list of (class index, weight) pairs including the root
    """
    nodes = np.concatenate([classes[idx].nodes for idx, _ in members])
    weights = np.concatenate([np.full(classes[idx].n_nodes, weight) for idx, weight in members])
    order = np.argsort(nodes, kind='stable')
    return InterfaceComponent(subdomains=classes[root].subdomains, kind=classes[root].kind,
                              nodes=nodes[order], weights=weights[order],
                              classes=tuple(idx for idx, _ in members))


def _by_subdomain(classes, selected):
    "Index the selected classes by each of their subdomains"
    index = defaultdict(list)
    for idx in selected:
        for sub in classes[idx].subdomains:
            index[sub].append(idx)
    return index


def _supersets(classes, idx, index):
    "Classes in index whose subdomain set is a proper superset of class idx's"
    own = set(classes[idx].subdomains)
    first = classes[idx].subdomains[0]
    return [other for other in index.get(first, ())
            if other != idx and own < set(classes[other].subdomains)]


def _incident(classes, first, second, adjacency):
    "True if a node of one class shares an element with a node of the other"
    if adjacency is None:
        return True
    block = adjacency[classes[first].nodes][:, classes[second].nodes]
    return block.nnz > 0


def build_components(classes, variant=GDSW, adjacency=None, field_name='u'):
    """
    Build the interface components of a GDSW-type coarse space

    GDSW
        one component per class, all weights one.
    GDSW*
        each vertex merged with its adjacent edges (subdomain set of the
        edge contained in that of the vertex and geometrically incident);
        an edge adjacent to several vertices is shared with weight
        1/(number of vertices). Faces and edges without adjacent vertex
        stay on their own.
    RGDSW
        roots are the classes whose subdomain set is not contained in that of
        any other class; every other class is shared by all roots with a
        superset subdomain set, weight 1/(number of such roots). A class
        without covering root stays on its own.

    Components are emitted in class order, a merged component at the
    position of its root, so GDSW and GDSW* coincide where there are no
    vertices.

    Parameters:
        classes - the list of InterfaceClass of one field
        variant - 'GDSW', 'GDSW*' or 'RGDSW'. Optional, defaults to 'GDSW'.
        adjacency - sparse node adjacency for the GDSW* incidence check.
            Optional; without it only the subset relation is used.
        field_name - recorded on the result. Optional.

    Returns:
        a ComponentSet
    """
    if variant not in VARIANTS:
        raise InvalidArgumentError(f'unknown coarse space variant {variant!r}')
    counts = count_kinds(classes)
    n_classes = len(classes)

    if variant == GDSW:
        parts = [[(idx, 1.0)] for idx in range(n_classes)]
        roots = list(range(n_classes))

    elif variant == GDSW_STAR:
        vertices = [idx for idx, cls in enumerate(classes) if cls.kind == VERTEX]
        index = _by_subdomain(classes, vertices)
        owners = {}
        for idx, cls in enumerate(classes):
            if cls.kind == EDGE:
                owners[idx] = [vtx for vtx in _supersets(classes, idx, index)
                               if _incident(classes, idx, vtx, adjacency)]
        absorbed = defaultdict(list)
        for edge, vtxs in owners.items():
            for vtx in vtxs:
                absorbed[vtx].append((edge, 1.0 / len(vtxs)))
        roots = [idx for idx, cls in enumerate(classes)
                 if cls.kind != EDGE or not owners[idx]]
        parts = [[(idx, 1.0)] + absorbed.get(idx, []) for idx in roots]

    else:
        everything = _by_subdomain(classes, range(n_classes))
        is_root = [not _supersets(classes, idx, everything) for idx in range(n_classes)]
        index = _by_subdomain(classes, [idx for idx in range(n_classes) if is_root[idx]])
        absorbed = defaultdict(list)
        orphans = set()
        for idx in range(n_classes):
            if is_root[idx]:
                continue
            covering = _supersets(classes, idx, index)
            if not covering:
                orphans.add(idx)
            for root in covering:
                absorbed[root].append((idx, 1.0 / len(covering)))
        roots = [idx for idx in range(n_classes) if is_root[idx] or idx in orphans]
        parts = [[(idx, 1.0)] + absorbed.get(idx, []) for idx in roots]

    components = [_make_component(classes, root, members) for root, members in zip(roots, parts)]
    LOGGER.debug(f'{variant} on {field_name}: {len(components)} components from '
                 f'{n_classes} classes')
    return ComponentSet(variant=variant, components=components, counts=counts,
                        field_name=field_name)


def dump_classes(classes, sink):
    """
    Write interface classes as JSON lines (kind, subdomains, node count)

    Parameters:
        classes - a list of InterfaceClass (or InterfaceComponent)
        sink - a path or an open text stream
    """
    lines = [json.dumps({'kind': cls.kind, 'subdomains': [int(s) for s in cls.subdomains],
                         'n_nodes': int(cls.n_nodes)}) for cls in classes]
    text = '\n'.join(lines) + ('\n' if lines else '')
    if hasattr(sink, 'write'):
        sink.write(text)
    else:
        with open(sink, 'w') as stream:
            stream.write(text)
    return sink
