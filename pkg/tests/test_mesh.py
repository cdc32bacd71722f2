""" file:    test_mesh.py (tests)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Tests for structured box meshes
"""

import unittest
from pathlib import Path
import tempfile

import meshio
import numpy as np

from schwarz_lbw.errors import InvalidArgumentError
from schwarz_lbw.mesh import build_box_mesh, write_vtk
from schwarz_lbw.shape import gauss_rule, shape_eval


class TestBoxMesh(unittest.TestCase):

    "Unit tests for build_box_mesh"

    def setUp(self):
        self.mesh = build_box_mesh((3.0, 2.0, 1.0), (3, 4, 2))

    def test_sizes(self):
        "Node and element counts follow the cell counts"
        self.assertEqual(self.mesh.n_nodes, 4 * 5 * 3)
        self.assertEqual(self.mesh.n_elements, 3 * 4 * 2)
        self.assertEqual(self.mesh.n_dofs, 4 * self.mesh.n_nodes)
        self.assertEqual(self.mesh.elements.shape, (24, 8))

    def test_numbering(self):
        "Nodes are numbered lexicographically with x fastest"
        for i, j, k in ((0, 0, 0), (3, 0, 0), (1, 2, 1), (3, 4, 2)):
            with self.subTest(i=i, j=j, k=k):
                node = self.mesh.node_index(i, j, k)
                self.assertTrue(np.allclose(self.mesh.coords[node],
                                            (i * 1.0, j * 0.5, k * 0.5)))

    def test_positive_volumes(self):
        "Every element has positive Jacobians and the volumes add up to the box"
        shape = shape_eval(gauss_rule(), self.mesh.coords[self.mesh.elements])
        self.assertTrue(np.all(shape.determinants > 0))
        self.assertAlmostEqual(shape.volumes.sum(), 6.0)

    def test_element_index(self):
        "Element grid indices agree with element_index"
        indices = self.mesh.element_grid_indices()
        for elem in (0, 5, 23):
            with self.subTest(element=elem):
                self.assertEqual(self.mesh.element_index(*indices[elem]), elem)

    def test_nodes_where(self):
        "Faces of the box are found by coordinate"
        self.assertEqual(len(self.mesh.nodes_where(1, 0.0)), 4 * 3)
        self.assertEqual(len(self.mesh.nodes_where(0, 3.0)), 5 * 3)
        self.assertEqual(len(self.mesh.nodes_where(2, 0.25)), 0)

    def test_spacing_and_centroid(self):
        "Spacing and centroid of the box"
        self.assertTrue(np.allclose(self.mesh.spacing, (1.0, 0.5, 0.5)))
        self.assertTrue(np.allclose(self.mesh.centroid, (1.5, 1.0, 0.5)))

    def test_invalid(self):
        "Bad extents or cell counts raise"
        for extent, cells in (((1, 1), (1, 1, 1)), ((1, -1, 1), (1, 1, 1)),
                              ((1, 1, 1), (1, 0, 1))):
            with self.subTest(extent=extent, cells=cells):
                with self.assertRaises(InvalidArgumentError):
                    build_box_mesh(extent, cells)


class TestWriteVTK(unittest.TestCase):

    "Legacy VTK output"

    def test_write_and_read(self):
        "Point and cell data survive a write through meshio"
        mesh = build_box_mesh((1.0, 1.0, 1.0), (2, 2, 2))
        theta = np.arange(mesh.n_nodes, dtype=float)
        with tempfile.TemporaryDirectory() as tmp:
            filename = Path(tmp) / 'fields.vtk'
            write_vtk(mesh, filename, point_data={'theta': theta},
                      cell_data={'e22': np.ones(mesh.n_elements)})
            self.assertTrue(filename.exists())
            result = meshio.read(str(filename))
        self.assertEqual(len(result.points), mesh.n_nodes)
        self.assertTrue(np.allclose(result.point_data['theta'], theta))


if __name__ == '__main__':
    unittest.main()
