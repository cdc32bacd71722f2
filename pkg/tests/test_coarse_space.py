""" file:    test_coarse_space.py (tests)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: Tests for the coarse bases and the coarse solver
"""

import json
import os
import tempfile
import unittest

import numpy as np
from scipy import sparse

from schwarz_lbw.assembly import assemble
from schwarz_lbw.coarse_space import CoarseBasis, CoarseConfig, CoarseSolver, \
    build_coarse_basis, extend, galerkin, interface_dofs, interface_values, \
    remove_coupling, truncate
from schwarz_lbw.decomposition import GDSW, GDSW_STAR, RGDSW, build_components, \
    classify_interface, node_adjacency, partition_structured
from schwarz_lbw.dofs import THETA, BoundarySpec, Constraints, build_dof_map, \
    static_constraints
from schwarz_lbw.errors import FactorizationError, InvalidArgumentError
from schwarz_lbw.materials import MaterialTable
from schwarz_lbw.mesh import build_box_mesh

from .oracles import random_state


def component_sets(mesh, partition, dofmap, u_variant, theta_variant):
    "Interface components of both fields"
    adjacency = node_adjacency(mesh)
    return {name: build_components(classify_interface(partition, dofmap, name), variant,
                                   adjacency, name)
            for name, variant in (('u', u_variant), ('theta', theta_variant))}


class TestCoarseConfig(unittest.TestCase):

    "Coarse space labels"

    def test_parse(self):
        "Labels parse into per-field variants and back"
        for label, expected in (('GDSW*(T+R)-RGDSW', (GDSW_STAR, RGDSW, True)),
                                ('GDSW(T)-GDSW', (GDSW, GDSW, False)),
                                ('RGDSW(T+R)-GDSW*', (RGDSW, GDSW_STAR, True))):
            with self.subTest(label=label):
                config = CoarseConfig.parse(label)
                self.assertEqual((config.u_variant, config.theta_variant, config.rotations),
                                 expected)
                self.assertEqual(config.label, label)

    def test_parse_extras(self):
        "Further fields pass through"
        config = CoarseConfig.parse(' GDSW (T) - RGDSW ', truncation=0.0, center=(1, 2, 3))
        self.assertEqual(config.truncation, 0.0)
        self.assertEqual(config.center, (1, 2, 3))
        self.assertEqual(config.label, 'GDSW(T)-RGDSW')

    def test_invalid(self):
        "Unknown variants and modes raise"
        for label in ('GDSW(R)-RGDSW', 'BDDC(T)-GDSW', 'GDSW*(T+R)', ''):
            with self.subTest(label=label):
                with self.assertRaises(InvalidArgumentError):
                    CoarseConfig.parse(label)
        with self.assertRaises(InvalidArgumentError):
            CoarseConfig(u_variant='FETI')
        with self.assertRaises(InvalidArgumentError):
            CoarseConfig(truncation=-1.0)


class TestInterfaceValues(unittest.TestCase):

    "Coarse dimensions and interface values on the 2 x 2 x 2 cube"

    def setUp(self):
        self.mesh = build_box_mesh((1.0, 1.0, 1.0), (4, 4, 4))
        self.partition = partition_structured(self.mesh, (2, 2, 2))

    def basis(self, label, dofmap=None, constrained=None):
        config = CoarseConfig.parse(label)
        sets = component_sets(self.mesh, self.partition, dofmap, config.u_variant,
                              config.theta_variant)
        return interface_values(sets, config, self.mesh.coords, constrained)

    def test_dimensions(self):
        "Dimensions for the standard combinations"
        for label, n_u, n_theta in (('GDSW(T)-GDSW', 57, 19), ('GDSW(T+R)-GDSW', 114, 19),
                                    ('GDSW*(T)-GDSW*', 39, 13), ('RGDSW(T)-RGDSW', 3, 1)):
            with self.subTest(label=label):
                basis = self.basis(label)
                self.assertEqual((basis.n_u, basis.n_theta), (n_u, n_theta))
                self.assertEqual(basis.n_phi, n_u + n_theta)
                self.assertEqual(len(basis.columns('theta', 'const_theta')), n_theta)

    def test_translation_unity(self):
        "Translations of GDSW* sum to one on the displacement interface"
        basis = self.basis('GDSW*(T+R)-RGDSW')
        phi = basis.phi.tocsc()
        total = np.asarray(phi[:, basis.columns('u', 't_x')].sum(axis=1)).ravel()
        nodes = self.partition.interface_nodes
        self.assertTrue(np.allclose(total[4 * nodes], 1.0))
        self.assertTrue(np.allclose(total[4 * nodes + 1], 0.0))
        theta = np.asarray(phi[:, basis.columns('theta')].sum(axis=1)).ravel()
        self.assertTrue(np.allclose(theta[4 * nodes + 3], 1.0))

    def test_rotation_values(self):
        "Rotations about the box centre"
        basis = self.basis('GDSW(T+R)-GDSW')
        centre_node = self.mesh.node_index(2, 2, 2)
        column = basis.columns('u', 'r_1')
        phi = basis.phi.toarray()
        # the centre node does not move under any rotation
        self.assertTrue(np.allclose(phi[4 * centre_node:4 * centre_node + 3][:, column], 0.0))
        node = self.mesh.node_index(4, 2, 2)      # (1, 0.5, 0.5), r = (0.5, 0, 0)
        moved = phi[4 * node:4 * node + 3][:, column].sum(axis=1)
        self.assertTrue(np.allclose(moved, [0.0, -0.5, 0.0]))

    def test_constrained(self):
        "Constrained entries are zero, fully constrained components dropped"
        constrained = np.zeros(4 * self.mesh.n_nodes, dtype=bool)
        nodes = self.partition.interface_nodes
        constrained[(4 * nodes[:, None] + np.arange(3)).ravel()] = True
        basis = self.basis('RGDSW(T)-RGDSW', constrained=constrained)
        self.assertEqual((basis.n_u, basis.n_theta), (0, 1))
        node = self.mesh.node_index(2, 2, 2)
        partial = np.zeros_like(constrained)
        partial[4 * node] = True
        basis = self.basis('GDSW(T)-GDSW', constrained=partial)
        self.assertEqual(basis.n_phi, 76)
        self.assertEqual(basis.phi.tocsr()[4 * node].nnz, 0)

    def test_metadata(self):
        "Column metadata is written as JSON"
        basis = self.basis('RGDSW(T+R)-RGDSW')
        self.assertEqual([col['mode'] for col in basis.metadata()],
                         ['t_x', 't_y', 't_z', 'r_1', 'r_2', 'r_3', 'const_theta'])
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = basis.dump(os.path.join(tmpdir, 'phi.json'))
            with open(filename) as source:
                data = json.load(source)
        self.assertEqual((data['n_u'], data['n_theta']), (6, 1))
        self.assertEqual(data['columns'][-1]['field'], 'theta')


class TestExtension(unittest.TestCase):

    "Discrete harmonic extension of the interface values"

    def setUp(self):
        self.mesh = build_box_mesh((1.0, 1.0, 1.0), (4, 4, 4))
        self.partition = partition_structured(self.mesh, (2, 2, 2))
        self.dofmap = build_dof_map(self.mesh, BoundarySpec())
        state = random_state(self.mesh)
        self.matrix, _ = assemble(state, self.mesh, self.dofmap, MaterialTable())
        self.sets = component_sets(self.mesh, self.partition, self.dofmap, GDSW_STAR, RGDSW)
        self.config = CoarseConfig(truncation=0.0)

    def test_harmonic(self):
        "Interior values solve K_II phi_I = -K_IG phi_G"
        basis, split = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        values = interface_values(self.sets, self.config, self.mesh.coords,
                                  self.matrix.constrained)
        coupled = extend(split, values, decouple=False).phi.tocsr()
        phi_i, phi_g = coupled[split.interior], coupled[split.interface]
        residual = split.k_ii @ phi_i + split.k_ig @ phi_g
        self.assertLess(abs(residual).max(), 1e-10 * abs(split.k_ig @ phi_g).max())
        self.assertLess(abs(phi_g - values.phi.tocsr()[split.interface]).max(), 1e-14)

    def test_threads(self):
        "Threaded extension gives the same basis"
        values = interface_values(self.sets, self.config, self.mesh.coords,
                                  self.matrix.constrained)
        _, split = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        serial = extend(split, values).phi
        parallel = extend(split, values, threads=4).phi
        self.assertLess(abs(serial - parallel).max(), 1e-14)

    def test_decoupled(self):
        "After removing the coupling every column lives on its own field"
        basis, _ = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        phi = basis.phi.toarray()
        theta_rows = np.arange(phi.shape[0]) % 4 == 3
        self.assertTrue(np.allclose(phi[np.ix_(theta_rows, basis.columns('u'))], 0.0))
        self.assertTrue(np.allclose(phi[np.ix_(~theta_rows, basis.columns('theta'))], 0.0))

    def test_dirichlet_rows(self):
        "Rows of constrained DOFs stay zero"
        basis, _ = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        rows = basis.phi.tocsr()[self.dofmap.constrained_dofs]
        self.assertEqual(rows.nnz, 0)

    def test_interface_dofs(self):
        "Interface DOFs exclude constrained DOFs"
        dofs = interface_dofs(self.sets, self.matrix.constrained)
        self.assertFalse(np.any(self.matrix.constrained[dofs]))
        self.assertEqual(len(np.unique(dofs)), len(dofs))

    def test_step_constraints(self):
        "Temperatures prescribed for one step zero a column but keep the dimension"
        reference, _ = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        static = static_constraints(self.dofmap)
        for comp in self.sets['theta']:
            dofs = np.setdiff1d(4 * comp.nodes + THETA, static.dofs)
            extra = Constraints(dofs=dofs, values=np.full(len(dofs), 1500.0))
            matrix, _ = assemble(random_state(self.mesh), self.mesh, self.dofmap,
                                 MaterialTable(), constraints=static.merge(extra))
            basis, _ = build_coarse_basis(matrix, self.partition, self.sets, self.config)
            with self.subTest(nodes=len(comp.nodes)):
                self.assertEqual(basis.n_phi, reference.n_phi)
                self.assertEqual(basis.fields, reference.fields)
                column = basis.phi.tocsc()[:, basis.columns('theta')]
                self.assertEqual(abs(column).max(), 0.0)
                self.assertEqual(basis.phi.tocsr()[dofs].nnz, 0)

    def test_relative_truncation(self):
        "Kept entries of a truncated basis reach the tolerance times the largest entry"
        full, _ = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        largest = abs(full.phi).max()
        self.assertGreater(largest, 0.0)
        for tol in (1e-2, 0.5):
            with self.subTest(tol=tol):
                config = CoarseConfig(truncation=tol)
                basis, _ = build_coarse_basis(self.matrix, self.partition, self.sets, config)
                self.assertGreaterEqual(abs(basis.phi.data).min(), tol * largest)
                self.assertEqual(basis.n_phi, full.n_phi)
        halved, _ = build_coarse_basis(self.matrix, self.partition, self.sets,
                                       CoarseConfig(truncation=0.5))
        self.assertLess(halved.phi.nnz, full.phi.nnz)

    def test_galerkin(self):
        "K_0 equals Phi^T K Phi"
        basis, _ = build_coarse_basis(self.matrix, self.partition, self.sets, self.config)
        phi, dense = basis.phi.toarray(), self.matrix.matrix.toarray()
        k0 = galerkin(self.matrix, basis)
        self.assertEqual(k0.shape, (basis.n_phi, basis.n_phi))
        self.assertTrue(np.allclose(k0.toarray(), phi.T @ dense @ phi,
                                    atol=1e-10 * np.abs(dense).max()))


class TestTransforms(unittest.TestCase):

    "Truncation and block removal on hand made bases"

    def setUp(self):
        phi = sparse.csc_matrix(np.array([[1.0, 0.2], [1e-5, 0.0], [0.0, 0.0],
                                          [0.3, 1.0], [0.5, -2e-5], [0.0, 0.0],
                                          [0.0, 0.0], [0.0, 0.0]]))
        self.basis = CoarseBasis(phi=phi, fields=('u', 'theta'), components=(0, 0),
                                 modes=('t_x', 'const_theta'))

    def test_truncate(self):
        "Entries below the tolerance are removed"
        truncated = truncate(self.basis, 1e-4)
        self.assertEqual(truncated.phi.nnz, 5)
        self.assertEqual(truncated.phi[1, 0], 0.0)
        self.assertEqual(truncate(self.basis, 0.0).phi.nnz, self.basis.phi.nnz)
        with self.assertRaises(InvalidArgumentError):
            truncate(self.basis, -1.0)

    def test_truncate_relative(self):
        "A relative tolerance cuts the same entries whatever the scale of Phi"
        scaled = CoarseBasis(phi=1000.0 * self.basis.phi, fields=self.basis.fields,
                             components=self.basis.components, modes=self.basis.modes)
        self.assertEqual(truncate(scaled, 1e-4).phi.nnz, 7)
        pattern = truncate(self.basis, 1e-4).phi.toarray() != 0
        for basis in (self.basis, scaled):
            with self.subTest(scale=abs(basis.phi).max()):
                truncated = truncate(basis, 1e-4, relative=True).phi
                self.assertEqual(truncated.nnz, 5)
                self.assertTrue(np.array_equal(truncated.toarray() != 0, pattern))

    def test_remove_coupling(self):
        "The u column loses its theta entries and vice versa"
        phi = remove_coupling(self.basis).phi.toarray()
        self.assertEqual(phi[3, 0], 0.0)
        self.assertEqual(phi[0, 1], 0.0)
        self.assertEqual(phi[3, 1], 1.0)
        self.assertEqual(phi[4, 0], 0.5)


class TestCoarseSolver(unittest.TestCase):

    "LU or pseudo-inverse"

    def test_lu(self):
        "A regular operator is factorized with LU"
        k0 = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
        solver = CoarseSolver(sparse.csr_matrix(k0))
        self.assertEqual(solver.method, 'lu')
        rhs = np.array([1.0, 2.0, 3.0])
        self.assertTrue(np.allclose(solver.solve(rhs), np.linalg.solve(k0, rhs)))

    def test_pinv(self):
        "A rank deficient operator falls back to the pseudo-inverse with a warning"
        k0 = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 2.0]])
        with self.assertLogs('schwarz_lbw', level='WARNING'):
            solver = CoarseSolver(k0)
        self.assertEqual((solver.method, solver.rank), ('pinv', 2))
        rhs = np.array([1.0, -1.0, 4.0])
        self.assertTrue(np.allclose(solver.solve(rhs), np.linalg.pinv(k0) @ rhs))

    def test_zero(self):
        "An empty or zero operator cannot be factorized"
        for k0 in (np.zeros((2, 2)), np.zeros((0, 0))):
            with self.subTest(shape=k0.shape):
                with self.assertRaises(FactorizationError):
                    CoarseSolver(k0)


if __name__ == '__main__':
    unittest.main()
