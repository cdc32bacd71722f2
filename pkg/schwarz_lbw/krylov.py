""" file:    krylov.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Thursday, 15 October 2026

    description: Right-preconditioned restarted GMRES with an unpreconditioned
        residual stopping rule
"""

from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import solve_triangular
from scipy.sparse.linalg import aslinearoperator

from .errors import InvalidArgumentError

LOGGER = logging.getLogger('schwarz_lbw')

# Reorthogonalize when Gram-Schmidt removes more than this share of the norm
REORTHOGONALIZE = 0.7
REL_TOL, ABS_TOL, MAX_ITER = 'rel-tol', 'abs-tol', 'max-iter'


@dataclass(frozen=True)
class KrylovStats:

    """
    Outcome of a GMRES solve

    Parameters:
        iterations - the number of Arnoldi steps over all restarts
        residual - the final unpreconditioned residual norm ||b - K x||
        relative_residual - residual / ||b|| (zero if b is zero)
        converged - True if a tolerance was met
        reason - 'rel-tol', 'abs-tol' or 'max-iter'
        history - the (estimated) residual norm after each iteration
    """

    iterations: int
    residual: float
    relative_residual: float
    converged: bool
    reason: str
    history: tuple = ()


def _operator(operator):
    "A matvec function for a BlockMatrix, sparse or dense matrix, or LinearOperator"
    operator = getattr(operator, 'matrix', operator)
    return aslinearoperator(operator).matvec


def _preconditioner(preconditioner, stamp=None):
    if preconditioner is None:
        return lambda vec: vec
    if stamp is not None and hasattr(preconditioner, 'stamp'):
        return lambda vec: preconditioner.apply(vec, stamp)
    for name in ('apply', 'matvec'):
        if hasattr(preconditioner, name):
            return getattr(preconditioner, name)
    if callable(preconditioner):
        return preconditioner
    return aslinearoperator(preconditioner).matvec


def _reason(residual, b_norm, rtol, atol):
    if residual <= rtol * b_norm:
        return REL_TOL
    if residual <= atol:
        return ABS_TOL
    return None


def gmres(operator, rhs, preconditioner=None, rtol=1e-6, atol=1e-10, max_iter=1000,
          restart=200, x0=None):
    """
    Solve K x = b with right preconditioning, x = P z, K P z = b

    Arnoldi uses modified Gram-Schmidt with a second pass on loss of
    orthogonality and Givens rotations. The iteration stops when
    ||b - K x|| <= max(rtol ||b||, atol), checked on the true residual at
    the end of every restart cycle.

    Parameters:
        operator - the system matrix (BlockMatrix, sparse, dense or LinearOperator)
        rhs - the right hand side b
        preconditioner - an object with `apply` or `matvec`, or a callable.
            Optional, defaults to the identity.
            A preconditioner with a stamp is applied with the stamp of the
            operator and raises if they differ.
        rtol, atol - relative and absolute tolerances, both > 0
        max_iter - the maximum number of iterations over all cycles
        restart - the Krylov subspace dimension per cycle
        x0 - the initial guess. Optional, defaults to zero.

    Returns:
        (x, KrylovStats)
    """
    if not (rtol > 0 and atol > 0):
        raise InvalidArgumentError(f'tolerances must be positive, got rtol={rtol} atol={atol}')
    if restart < 1 or max_iter < 1:
        raise InvalidArgumentError('restart and max_iter must be at least one')
    matvec = _operator(operator)
    precond = _preconditioner(preconditioner, getattr(operator, 'stamp', None))
    rhs = np.asarray(rhs, dtype=float).ravel()
    n = len(rhs)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float).ravel()
    if len(x) != n:
        raise InvalidArgumentError(f'initial guess has length {len(x)}, expected {n}')

    b_norm = np.linalg.norm(rhs)
    threshold = max(rtol * b_norm, atol)
    residual = rhs - matvec(x) if x0 is not None else rhs.copy()
    beta = np.linalg.norm(residual)
    history, total = [], 0

    while beta > threshold and total < max_iter:
        size = min(restart, max_iter - total)
        basis = np.zeros((size + 1, n))
        hessenberg = np.zeros((size + 1, size))
        cosines, sines = np.zeros(size), np.zeros(size)
        givens = np.zeros(size + 1)
        givens[0] = beta
        basis[0] = residual / beta

        steps = 0
        for j in range(size):
            w = matvec(precond(basis[j]))
            norm_before = np.linalg.norm(w)
            for i in range(j + 1):
                h = basis[i] @ w
                hessenberg[i, j] += h
                w -= h * basis[i]
            if np.linalg.norm(w) < REORTHOGONALIZE * norm_before:
                for i in range(j + 1):
                    h = basis[i] @ w
                    hessenberg[i, j] += h
                    w -= h * basis[i]
            hessenberg[j + 1, j] = np.linalg.norm(w)

            # Previous rotations, then a new one to zero the subdiagonal
            for i in range(j):
                upper, lower = hessenberg[i, j], hessenberg[i + 1, j]
                hessenberg[i, j] = cosines[i] * upper + sines[i] * lower
                hessenberg[i + 1, j] = -sines[i] * upper + cosines[i] * lower
            radius = np.hypot(hessenberg[j, j], hessenberg[j + 1, j])
            breakdown = hessenberg[j + 1, j] == 0
            if radius == 0:
                cosines[j], sines[j] = 1.0, 0.0
            else:
                cosines[j], sines[j] = hessenberg[j, j] / radius, hessenberg[j + 1, j] / radius
            sub = hessenberg[j + 1, j]
            hessenberg[j, j] = radius
            hessenberg[j + 1, j] = 0.0
            givens[j + 1] = -sines[j] * givens[j]
            givens[j] = cosines[j] * givens[j]

            steps, total = j + 1, total + 1
            history.append(abs(givens[j + 1]))
            LOGGER.debug(f'GMRES iteration {total}: residual estimate {history[-1]:.3e}')
            if history[-1] <= threshold or breakdown:
                break
            basis[j + 1] = w / sub

        diag = np.abs(np.diag(hessenberg[:steps, :steps]))
        if np.any(diag == 0):
            # singular projected system; keep the largest nonsingular leading block
            steps = int(np.argmax(diag == 0))
            if steps == 0:
                break
        y = solve_triangular(hessenberg[:steps, :steps], givens[:steps])
        x = x + precond(basis[:steps].T @ y)
        residual = rhs - matvec(x)
        beta = np.linalg.norm(residual)

    reason = _reason(beta, b_norm, rtol, atol)
    stats = KrylovStats(
        iterations=total, residual=float(beta),
        relative_residual=float(beta / b_norm) if b_norm > 0 else 0.0,
        converged=reason is not None, reason=reason or MAX_ITER, history=tuple(history))
    if not stats.converged:
        LOGGER.warning(f'GMRES stopped after {total} iterations at residual {beta:.3e}')
    return x, stats
