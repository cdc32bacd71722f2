""" file:    coarse_space.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Thursday, 15 October 2026

    description: Monolithic GDSW-type coarse bases: interface values from null
        space modes, discrete harmonic extension, block removal, truncation
        and the Galerkin coarse operator
"""

from dataclasses import dataclass, replace
import json
import logging
import re

import numpy as np
from scipy import sparse, linalg
from scipy.sparse.linalg import splu

from .assembly import split_interface
from .decomposition import VARIANTS, GDSW_STAR, RGDSW
from .dofs import DOFS_PER_NODE, FIELD_COMPONENTS, THETA
from .errors import FactorizationError, InvalidArgumentError
from .rotation import ROTATION_MODES, TRANSLATION_MODES, rotation_modes
from .utilities import ordered_map

LOGGER = logging.getLogger('schwarz_lbw')

TEMPERATURE_MODE = 'const_theta'
LABEL_PATTERN = re.compile(r'^\s*(GDSW\*?|RGDSW)\s*\((T|T\+R)\)\s*-\s*(GDSW\*?|RGDSW)\s*$')


@dataclass(frozen=True)
class CoarseConfig:

    """
    Per-field choice of the coarse space

    Parameters:
        u_variant - variant for the displacement components
        theta_variant - variant for the temperature components
        rotations - if True add the three rotations to the translations
        center - rotation centre. Optional, None uses the mesh centroid.
        truncation - entries of Phi below this magnitude are dropped
        relative_truncation - if True (the default) the truncation is
            measured against the largest entry of Phi
    """

    u_variant: str = GDSW_STAR
    theta_variant: str = RGDSW
    rotations: bool = True
    center: tuple = None
    truncation: float = 1e-4
    relative_truncation: bool = True

    def __post_init__(self):
        for variant in (self.u_variant, self.theta_variant):
            if variant not in VARIANTS:
                raise InvalidArgumentError(f'unknown coarse space variant {variant!r}')
        if not self.truncation >= 0:
            raise InvalidArgumentError(f'truncation tolerance must be >= 0, got {self.truncation}')

    @property
    def label(self):
        "Label in the form 'GDSW*(T+R)-RGDSW'"
        modes = 'T+R' if self.rotations else 'T'
        return f'{self.u_variant}({modes})-{self.theta_variant}'

    @classmethod
    def parse(cls, label, **kwargs):
        """
        Build a configuration from a label such as 'GDSW(T)-RGDSW'

        Parameters:
            label - the combination label
            kwargs - further CoarseConfig fields (center, truncation, relative_truncation)
        """
        match = LABEL_PATTERN.match(label)
        if match is None:
            raise InvalidArgumentError(f'cannot parse coarse space label {label!r}')
        u_variant, modes, theta_variant = match.groups()
        return cls(u_variant=u_variant, theta_variant=theta_variant,
                   rotations=(modes == 'T+R'), **kwargs)


@dataclass(frozen=True)
class CoarseBasis:

    """
    A coarse basis Phi with per-column metadata

    Parameters:
        phi - a sparse (n_dofs, n_phi) CSC matrix
        fields - the field ('u' or 'theta') of each column
        components - the component index (within its field) of each column
        modes - the mode name of each column
    """

    phi: sparse.csc_matrix
    fields: tuple
    components: tuple
    modes: tuple

    @property
    def n_phi(self):
        return self.phi.shape[1]

    @property
    def n_u(self):
        return sum(1 for f in self.fields if f == 'u')

    @property
    def n_theta(self):
        return sum(1 for f in self.fields if f == 'theta')

    def columns(self, field_name=None, mode=None):
        "Indices of the columns matching a field and/or mode"
        return np.array([idx for idx, (f, m) in enumerate(zip(self.fields, self.modes))
                         if (field_name is None or f == field_name)
                         and (mode is None or m == mode)], dtype=int)

    def metadata(self):
        "Column metadata and nonzero counts as a list of dicts"
        nnz = np.diff(self.phi.tocsc().indptr)
        return [{'column': idx, 'field': f, 'component': int(c), 'mode': m, 'nnz': int(n)}
                for idx, (f, c, m, n) in enumerate(zip(self.fields, self.components,
                                                        self.modes, nnz))]

    def dump(self, filename):
        "Write the column metadata as JSON"
        with open(filename, 'w') as sink:
            json.dump({'n_u': self.n_u, 'n_theta': self.n_theta,
                       'columns': self.metadata()}, sink, indent=1)
        return filename


def interface_values(component_sets, config, coords, constrained=None, dropped=None):
    """
    Interface values Phi_Gamma of the coarse basis

    Displacement components get the three translations and, with rotations,
    (y, -x, 0), (-z, 0, x), (0, z, -y) relative to the configured centre.
    Temperature components get the constant. Every nodal value is scaled by
    the node weight of the component.

    Parameters:
        component_sets - a dict with 'u' and 'theta' ComponentSets
        config - a CoarseConfig
        coords - the (n_nodes, 3) node coordinates
        constrained - a boolean mask of Dirichlet DOFs. Optional. Constrained
            entries are zero.
        dropped - a boolean mask deciding which columns are dropped: a column
            goes when all of its component's field DOFs are in it. Optional,
            defaults to constrained.

    Returns:
        a CoarseBasis holding only interface values
    """
    coords = np.asarray(coords, dtype=float)
    n_dofs = DOFS_PER_NODE * len(coords)
    if constrained is None:
        constrained = np.zeros(n_dofs, dtype=bool)
    if dropped is None:
        dropped = constrained
    if config.center is None:
        center = (coords.min(axis=0) + coords.max(axis=0)) / 2
    else:
        center = np.asarray(config.center, dtype=float)

    rows, cols, vals = [], [], []
    fields, components, modes = [], [], []

    def add_column(dofs, values, field_name, comp_idx, mode):
        keep = ~constrained[dofs]
        rows.append(dofs[keep])
        vals.append(values[keep])
        cols.append(np.full(keep.sum(), len(fields)))
        fields.append(field_name)
        components.append(comp_idx)
        modes.append(mode)

    for comp_idx, comp in enumerate(component_sets['u']):
        base = DOFS_PER_NODE * comp.nodes
        field_dofs = (base[:, None] + np.arange(3)).ravel()
        if dropped[field_dofs].all():
            continue
        for axis, mode in enumerate(TRANSLATION_MODES):
            add_column(base + axis, comp.weights.copy(), 'u', comp_idx, mode)
        if config.rotations:
            rotated = rotation_modes(coords[comp.nodes], center)   # (3, n, 3)
            for rot, mode in zip(rotated, ROTATION_MODES):
                add_column(field_dofs, (rot * comp.weights[:, None]).ravel(),
                           'u', comp_idx, mode)

    for comp_idx, comp in enumerate(component_sets['theta']):
        dofs = DOFS_PER_NODE * comp.nodes + THETA
        if dropped[dofs].all():
            continue
        add_column(dofs, comp.weights.copy(), 'theta', comp_idx, TEMPERATURE_MODE)

    n_cols = len(fields)
    phi = sparse.csc_matrix(
        (np.concatenate(vals) if vals else np.zeros(0),
         (np.concatenate(rows) if rows else np.zeros(0, int),
          np.concatenate(cols) if cols else np.zeros(0, int))),
        shape=(n_dofs, n_cols))
    return CoarseBasis(phi=phi, fields=tuple(fields), components=tuple(components),
                       modes=tuple(modes))


def _field_mask(n_dofs, field_name):
    mask = np.zeros(n_dofs, dtype=bool)
    for comp in FIELD_COMPONENTS[field_name]:
        mask[comp::DOFS_PER_NODE] = True
    return mask


def remove_coupling(basis):
    "Zero the cross-field blocks so that every column lives on one field"
    phi = basis.phi.tocoo()
    u_rows = _field_mask(phi.shape[0], 'u')
    column_is_u = np.array([f == 'u' for f in basis.fields], dtype=bool)
    keep = u_rows[phi.row] == column_is_u[phi.col]
    phi = sparse.csc_matrix((phi.data[keep], (phi.row[keep], phi.col[keep])), shape=phi.shape)
    return replace(basis, phi=phi)


def extend(split, basis, threads=1, decouple=True):
    """
    Discrete harmonic extension of interface values into the subdomains

    Solves K_II phi_I = -K_IG phi_G one subdomain block at a time, each with
    a single sparse LU factorization shared by all columns touching it.

    Parameters:
        split - an InterfaceSplit with interior DOFs grouped by subdomain
        basis - a CoarseBasis holding interface values
        threads - the number of workers. Optional.
        decouple - if True (the default) zero the cross-field blocks afterwards

    Returns:
        a CoarseBasis with interior values
    """
    gamma_values = basis.phi.tocsr()[split.interface]
    rhs = (-(split.k_ig @ gamma_values)).tocsr()
    n_groups = len(split.offsets) - 1 if split.offsets is not None else 1
    offsets = split.offsets if split.offsets is not None else np.array([0, len(split.interior)])

    def solve_group(group):
        start, stop = offsets[group], offsets[group + 1]
        if stop == start:
            return None
        block_rhs = rhs[start:stop].tocsc()
        cols = np.flatnonzero(np.diff(block_rhs.indptr))
        if len(cols) == 0:
            return None
        try:
            lu = splu(split.k_ii[start:stop, start:stop].tocsc())
        except RuntimeError as err:
            raise FactorizationError(f'subdomain {group} interior', str(err))
        values = lu.solve(block_rhs[:, cols].toarray())
        rows, col_idx = np.nonzero(values)
        return split.interior[start:stop][rows], cols[col_idx], values[rows, col_idx]

    pieces = [piece for piece in ordered_map(solve_group, range(n_groups), threads=threads)
              if piece is not None]
    gamma = gamma_values.tocoo()
    rows = np.concatenate([split.interface[gamma.row]] + [p[0] for p in pieces])
    cols = np.concatenate([gamma.col] + [p[1] for p in pieces])
    vals = np.concatenate([gamma.data] + [p[2] for p in pieces])
    extended = replace(basis, phi=sparse.csc_matrix((vals, (rows, cols)), shape=basis.phi.shape))
    return remove_coupling(extended) if decouple else extended


def truncate(basis, tol, relative=False):
    """
    Drop entries of Phi with magnitude below a tolerance

    Rotation columns carry coordinates, so their magnitude follows the length
    unit of the mesh. A relative tolerance is measured against the largest
    entry of Phi; for translation-only bases that entry is about one.

    Parameters:
        basis - a CoarseBasis
        tol - the truncation tolerance, >= 0
        relative - if True, drop entries below tol * max|Phi|. Optional,
            defaults to False.
    """
    if not tol >= 0:
        raise InvalidArgumentError(f'truncation tolerance must be >= 0, got {tol}')
    phi = basis.phi.tocsc(copy=True)
    if relative and phi.nnz:
        tol = tol * np.abs(phi.data).max()
    phi.data[np.abs(phi.data) < tol] = 0.0
    phi.eliminate_zeros()
    return replace(basis, phi=phi)


def galerkin(matrix, phi):
    """
    Galerkin coarse operator K_0 = Phi^T K Phi

    Parameters:
        matrix - a sparse matrix or BlockMatrix
        phi - a sparse matrix or CoarseBasis
    """
    matrix = getattr(matrix, 'matrix', matrix)
    phi = sparse.csc_matrix(getattr(phi, 'phi', phi))
    return (phi.T @ sparse.csr_matrix(matrix) @ phi).tocsr()


def interface_dofs(component_sets, constrained):
    "Field DOFs of the interface nodes of each field, minus constrained DOFs"
    dofs = []
    for field_name, components in component_sets.items():
        nodes = np.unique(np.concatenate([c.nodes for c in components] or [np.zeros(0, int)]))
        dofs.append((DOFS_PER_NODE * nodes[:, None]
                     + np.asarray(FIELD_COMPONENTS[field_name])).ravel())
    dofs = np.unique(np.concatenate(dofs))
    return dofs[~constrained[dofs]]


def build_coarse_basis(matrix, partition, component_sets, config, threads=1, static=None):
    """
    Build the monolithic coarse basis for an assembled operator

    Parameters:
        matrix - the BlockMatrix (Dirichlet DOFs eliminated)
        partition - the Partition, for the interior DOF ownership
        component_sets - a dict with 'u' and 'theta' ComponentSets
        config - a CoarseConfig
        threads - the number of workers for the extensions. Optional.
        static - a boolean mask of the static Dirichlet DOFs; only components
            fully inside it lose their columns. Optional, defaults to none, as
            components classified from a DofMap hold no such nodes. DOFs that
            are constrained only at this step keep a zero entry.

    Returns:
        (CoarseBasis, InterfaceSplit)
    """
    constrained = matrix.constrained
    split = split_interface(matrix, interface_dofs(component_sets, constrained),
                            groups=partition.dof_owner())
    if static is None:
        static = np.zeros_like(constrained)
    basis = interface_values(component_sets, config, partition.mesh.coords, constrained,
                             dropped=static)
    basis = truncate(extend(split, basis, threads=threads), config.truncation,
                     relative=config.relative_truncation)
    LOGGER.debug(f'Coarse basis {config.label}: N_u={basis.n_u} N_theta={basis.n_theta} '
                 f'nnz={basis.phi.nnz}')
    return basis, split


class CoarseSolver:

    """
    Direct solver for the coarse problem

    K_0 is factorized with LU when it has full numerical rank. Rotations
    restricted to straight edges or single nodes duplicate translations, so
    otherwise a truncated SVD pseudo-inverse is used; the coarse correction
    Phi K_0^+ Phi^T r remains well defined.

    Parameters:
        k0 - the coarse operator (sparse or dense)
        rcond - relative singular value cutoff. Optional, defaults to 1e-10.
    """

    def __init__(self, k0, rcond=1e-10):
        dense = k0.toarray() if sparse.issparse(k0) else np.asarray(k0, dtype=float)
        self.shape = dense.shape
        if dense.size == 0 or not np.any(dense):
            raise FactorizationError('coarse', 'coarse operator is empty or zero')
        left, singular, right = linalg.svd(dense)
        self.rank = int(np.sum(singular > rcond * singular[0]))
        if self.rank == dense.shape[0]:
            self.method = 'lu'
            self._lu = linalg.lu_factor(dense)
        else:
            self.method = 'pinv'
            LOGGER.warning(f'Coarse operator of dimension {dense.shape[0]} has numerical rank '
                           f'{self.rank}, using a pseudo-inverse')
            self._pinv = (right[:self.rank].T / singular[:self.rank]) @ left[:, :self.rank].T

    def solve(self, rhs):
        "Apply K_0^-1 (or K_0^+)"
        if self.method == 'lu':
            return linalg.lu_solve(self._lu, rhs)
        return self._pinv @ rhs
