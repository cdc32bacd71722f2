""" file:    schwarz.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Thursday, 15 October 2026

    description: Two-level monolithic overlapping Schwarz preconditioner with
        restricted or additive first level and a GDSW-type coarse level
"""

from dataclasses import dataclass, field
import enum
import logging

import numpy as np
from scipy.sparse.linalg import splu

from .coarse_space import CoarseConfig, CoarseSolver, build_coarse_basis, galerkin
from .decomposition import grow_overlap
from .errors import ConfigurationError, FactorizationError, InvalidArgumentError, MisuseError
from .utilities import ordered_map, timed

LOGGER = logging.getLogger('schwarz_lbw')

ADDITIVE, RESTRICTED = 'additive', 'restricted'
FIRST_LEVELS = (ADDITIVE, RESTRICTED)


class RecyclePolicy(enum.Enum):

    "What is kept from the previous preconditioner on update"

    REBUILD_ALL = 'rebuild-all'
    REUSE_PHI = 'reuse-phi'
    REUSE_ALL = 'reuse-all'


@dataclass(frozen=True)
class SchwarzOptions:

    """
    Options of the Schwarz preconditioner

    Parameters:
        two_level - if False, the coarse level is omitted
        first_level - 'restricted' (default) or 'additive'
        overlap - element layers of overlap, used when the partition has
            not been grown yet
        coarse - the CoarseConfig
        threads - the number of workers for factorizations and solves
        coarse_rcond - singular value cutoff of the coarse solver
    """

    two_level: bool = True
    first_level: str = RESTRICTED
    overlap: int = 1
    coarse: CoarseConfig = field(default_factory=CoarseConfig)
    threads: int = 1
    coarse_rcond: float = 1e-10

    def __post_init__(self):
        if self.first_level not in FIRST_LEVELS:
            raise InvalidArgumentError(
                f'unknown first level {self.first_level!r}, expected one of {FIRST_LEVELS}')


def _factorize(matrix, indices, threads):
    "Sparse LU of every local matrix K_i = R_i K R_i^T"
    csr = matrix.tocsr()

    def factor(item):
        sub, idx = item
        try:
            return splu(csr[idx][:, idx].tocsc())
        except RuntimeError as err:
            raise FactorizationError(f'subdomain {sub} local', str(err))

    return ordered_map(factor, enumerate(indices), threads=threads)


class SchwarzPreconditioner:

    """
    B^-1 = Phi K_0^-1 Phi^T + sum_i Rt_i^T K_i^-1 R_i

    with Rt_i = R_i (additive) or the restriction to the DOFs owned by
    subdomain i (restricted). Build with `SchwarzPreconditioner.build`.
    The object works as a scipy LinearOperator through `shape`, `dtype`
    and `matvec`.
    """

    def __init__(self, matrix, partition, component_sets, options, indices, owned,
                 factors, basis=None, split=None, k0=None, coarse=None, coarse_stamp=None):
        self.matrix = matrix
        self.partition = partition
        self.component_sets = component_sets
        self.options = options
        self.indices = indices
        self.owned = owned
        self.factors = factors
        self.basis = basis
        self.split = split
        self.k0 = k0
        self.coarse = coarse
        self.coarse_stamp = coarse_stamp
        self.timings = {'local': 0.0, 'coarse': 0.0}
        self.n_applies = 0

    @property
    def stamp(self):
        "Stamp of the matrix the local factorizations were built from"
        return self.matrix.stamp

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def dtype(self):
        return np.dtype(float)

    @property
    def coarse_dim(self):
        return 0 if self.basis is None else self.basis.n_phi

    @classmethod
    def build(cls, matrix, partition, component_sets=None, options=None):
        """
        Build the preconditioner for an assembled operator

        Parameters:
            matrix - the BlockMatrix, Dirichlet DOFs eliminated
            partition - the Partition; grown by options.overlap if needed
            component_sets - a dict with 'u' and 'theta' ComponentSets.
                Required for two levels.
            options - SchwarzOptions. Optional.

        Returns:
            a SchwarzPreconditioner
        """
        options = options or SchwarzOptions()
        if partition.overlap is None:
            partition = grow_overlap(partition, options.overlap)
        owner = partition.dof_owner()
        indices = [partition.overlap_dofs(sub) for sub in range(partition.n_subdomains)]
        owned = [owner[idx] == sub for sub, idx in enumerate(indices)]
        factors = _factorize(matrix.matrix, indices, options.threads)
        LOGGER.debug(f'Factorized {len(indices)} local problems of sizes '
                     f'{min(map(len, indices))}..{max(map(len, indices))}')
        precond = cls(matrix, partition, component_sets, options, indices, owned, factors)
        if options.two_level:
            precond._build_coarse(matrix, rebuild_basis=True)
        return precond

    def _build_coarse(self, matrix, rebuild_basis):
        if self.component_sets is None:
            raise ConfigurationError('a two-level preconditioner needs interface components')
        if rebuild_basis:
            self.basis, self.split = build_coarse_basis(
                matrix, self.partition, self.component_sets, self.options.coarse,
                threads=self.options.threads)
        if self.basis.n_phi == 0:
            raise ConfigurationError('two-level preconditioner with an empty coarse space')
        self.k0 = galerkin(matrix, self.basis)
        self.coarse = CoarseSolver(self.k0, rcond=self.options.coarse_rcond)
        self.coarse_stamp = matrix.stamp
        LOGGER.debug(f'Coarse problem of dimension {self.basis.n_phi} ({self.coarse.method})')

    def apply(self, residual, stamp=None):
        """
        Apply the preconditioner to a residual

        Parameters:
            residual - a vector over all DOFs
            stamp - the stamp of the operator the caller works with.
                Optional; if given it must match the one the local
                factorizations were built from.

        Returns:
            the preconditioned vector
        """
        if stamp is not None and stamp != self.stamp:
            raise MisuseError(f'preconditioner built for operator {self.stamp} '
                              f'applied with operator {stamp}')
        residual = np.asarray(residual, dtype=float).ravel()
        if len(residual) != self.shape[0]:
            raise InvalidArgumentError(
                f'residual of length {len(residual)} for operator of size {self.shape[0]}')
        result = np.zeros_like(residual)

        with timed(self.timings, 'local'):
            solutions = ordered_map(
                lambda item: item[1].solve(residual[self.indices[item[0]]]),
                enumerate(self.factors), threads=self.options.threads)
            restricted = self.options.first_level == RESTRICTED
            for idx, owned, sol in zip(self.indices, self.owned, solutions):
                if restricted:
                    result[idx[owned]] = sol[owned]
                else:
                    result[idx] += sol

        if self.coarse is not None:
            with timed(self.timings, 'coarse'):
                phi = self.basis.phi
                result += phi @ self.coarse.solve(phi.T @ residual)
        self.n_applies += 1
        return result

    def matvec(self, residual):
        return self.apply(residual)

    __call__ = matvec

    def update(self, matrix, policy=RecyclePolicy.REBUILD_ALL):
        """
        A preconditioner for a new operator with the same structure

        Local factorizations are always rebuilt. The coarse level is rebuilt,
        recomputed from the kept basis (reuse-phi) or kept entirely
        (reuse-all).

        Parameters:
            matrix - the new BlockMatrix
            policy - a RecyclePolicy (or its value string)

        Returns:
            a new SchwarzPreconditioner
        """
        policy = RecyclePolicy(policy)
        if matrix.shape != self.shape:
            raise InvalidArgumentError(f'operator changed size from {self.shape} to {matrix.shape}')
        factors = _factorize(matrix.matrix, self.indices, self.options.threads)
        precond = SchwarzPreconditioner(
            matrix, self.partition, self.component_sets, self.options, self.indices,
            self.owned, factors, basis=self.basis, split=self.split, k0=self.k0,
            coarse=self.coarse, coarse_stamp=self.coarse_stamp)
        if self.options.two_level and policy is not RecyclePolicy.REUSE_ALL:
            precond._build_coarse(matrix, rebuild_basis=(policy is RecyclePolicy.REBUILD_ALL))
        return precond

    def dense(self):
        "The preconditioner as a dense matrix, column by column"
        identity = np.identity(self.shape[0])
        return np.column_stack([self.apply(col) for col in identity])
