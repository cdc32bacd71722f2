""" file:    mesh.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Structured hexahedral meshes of box domains
"""

from dataclasses import dataclass
import logging

import numpy as np
import meshio

from .errors import InvalidArgumentError

LOGGER = logging.getLogger('schwarz_lbw')

# Corners of the reference hex [-1, 1]^3, counterclockwise on the bottom
# face then the top face. This is the VTK_HEXAHEDRON ordering.
REFERENCE_CORNERS = np.array([
    (-1, -1, -1), (1, -1, -1), (1, 1, -1), (-1, 1, -1),
    (-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1)
], dtype=float)


@dataclass(frozen=True)
class Mesh:

    """
    A hexahedral mesh

    Parameters:
        extent - the box side lengths (l_x, l_y, l_z) in mm
        cells - element counts (n_x, n_y, n_z) per axis
        coords - an (n_nodes, 3) array of node coordinates
        elements - an (n_elements, 8) array of node indices per element
    """

    extent: tuple
    cells: tuple
    coords: np.ndarray
    elements: np.ndarray

    @property
    def n_nodes(self):
        "The number of nodes"
        return self.coords.shape[0]

    @property
    def n_elements(self):
        "The number of elements"
        return self.elements.shape[0]

    @property
    def n_dofs(self):
        "Four DOFs (u_x, u_y, u_z, theta) per node"
        return 4 * self.n_nodes

    @property
    def spacing(self):
        "The element edge lengths per axis"
        return tuple(l / n for l, n in zip(self.extent, self.cells))

    @property
    def centroid(self):
        "The centre of the box"
        return np.asarray(self.extent, dtype=float) / 2

    def node_index(self, i, j, k):
        "Lexicographic node number of grid point (i, j, k), x fastest"
        n_x, n_y, _ = self.cells
        return i + (n_x + 1) * (j + (n_y + 1) * k)

    def element_index(self, i, j, k):
        "Lexicographic element number of grid cell (i, j, k), x fastest"
        n_x, n_y, _ = self.cells
        return i + n_x * (j + n_y * k)

    def element_grid_indices(self):
        "Return an (n_elements, 3) array of the (i, j, k) cell indices of each element"
        n_x, n_y, n_z = self.cells
        k, j, i = np.meshgrid(np.arange(n_z), np.arange(n_y), np.arange(n_x), indexing='ij')
        return np.column_stack([i.ravel(), j.ravel(), k.ravel()])

    def nodes_where(self, axis, value, tol=None):
        """
        Return the nodes lying on a coordinate plane

        Parameters:
            axis - 0, 1 or 2 for x, y or z
            value - the plane coordinate
            tol - matching tolerance. Optional, defaults to a small fraction
                of the mesh spacing.
        """
        if tol is None:
            tol = 1e-9 * max(self.spacing)
        return np.flatnonzero(np.abs(self.coords[:, axis] - value) <= tol)


def build_box_mesh(extent, cells):
    """
    Build a uniform hexahedral mesh of the box [0, l_x] x [0, l_y] x [0, l_z]

    Nodes are numbered lexicographically with x running fastest.

    Parameters:
        extent - the side lengths (l_x, l_y, l_z), in mm
        cells - the number of elements (n_x, n_y, n_z) along each axis

    Returns:
        a Mesh
    """
    extent = tuple(float(l) for l in extent)
    cells = tuple(int(n) for n in cells)
    if len(extent) != 3 or len(cells) != 3:
        raise InvalidArgumentError('extent and cells must both have three entries')
    if any(l <= 0 or not np.isfinite(l) for l in extent):
        raise InvalidArgumentError(f'extents must be positive, got {extent}')
    if any(n < 1 for n in cells):
        raise InvalidArgumentError(f'cell counts must be at least one, got {cells}')

    # Node coordinates, x fastest
    axes = [np.linspace(0, l, n + 1) for l, n in zip(extent, cells)]
    z, y, x = np.meshgrid(axes[2], axes[1], axes[0], indexing='ij')
    coords = np.column_stack([x.ravel(), y.ravel(), z.ravel()])

    # Connectivity from the lower corner of each cell
    n_x, n_y, n_z = cells
    k, j, i = np.meshgrid(np.arange(n_z), np.arange(n_y), np.arange(n_x), indexing='ij')
    i, j, k = i.ravel(), j.ravel(), k.ravel()
    node = lambda di, dj, dk: (i + di) + (n_x + 1) * ((j + dj) + (n_y + 1) * (k + dk))
    offsets = ((REFERENCE_CORNERS + 1) // 2).astype(int)
    elements = np.column_stack([node(*offset) for offset in offsets])

    LOGGER.debug(f'Built box mesh {cells} with {coords.shape[0]} nodes')
    return Mesh(extent=extent, cells=cells, coords=coords, elements=elements)


def write_vtk(mesh, filename, point_data=None, cell_data=None):
    """
    Dump a mesh and nodal/element fields to a legacy VTK (ASCII) file

    Parameters:
        mesh - the Mesh to write
        filename - the output path
        point_data - a dict of name -> (n_nodes,) or (n_nodes, k) arrays. Optional.
        cell_data - a dict of name -> (n_elements,) arrays. Optional.

    Returns:
        the name of the output file
    """
    sink = meshio.Mesh(
        points=mesh.coords,
        cells=[('hexahedron', mesh.elements)],
        point_data={key: np.asarray(val, dtype=float)
                    for key, val in (point_data or {}).items()},
        cell_data={key: [np.asarray(val, dtype=float)]
                   for key, val in (cell_data or {}).items()}
    )
    meshio.write(str(filename), sink, file_format='vtk', binary=False)
    return filename
