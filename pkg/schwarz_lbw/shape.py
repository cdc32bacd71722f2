""" file:    shape.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Trilinear (Q1) shape functions and Gauss quadrature on hexahedra
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DegenerateElementError
from .mesh import REFERENCE_CORNERS


@dataclass(frozen=True)
class QuadratureRule:

    """
    Quadrature points and weights on the reference hex [-1, 1]^3

    Parameters:
        points - a (n_points, 3) array of reference coordinates
        weights - a (n_points,) array of weights, summing to 8
    """

    points: np.ndarray
    weights: np.ndarray

    @property
    def n_points(self):
        "The number of quadrature points"
        return self.points.shape[0]


@dataclass(frozen=True)
class ShapeValues:

    """
    Shape functions evaluated at the quadrature points of a batch of elements

    Parameters:
        values - (n_points, 8) shape function values N_a
        gradients - (n_elements, n_points, 8, 3) physical gradients of N_a
        jacobians - (n_elements, n_points, 3, 3) Jacobians dx/dxi
        determinants - (n_elements, n_points) Jacobian determinants
        volumes - (n_elements, n_points) quadrature weight times |J|
    """

    values: np.ndarray
    gradients: np.ndarray
    jacobians: np.ndarray
    determinants: np.ndarray
    volumes: np.ndarray


def gauss_rule(order=2):
    """
    Tensor-product Gauss-Legendre rule on the reference hex

    Parameters:
        order - points per direction. Optional, defaults to 2 (full
            integration for trilinear elements).
    """
    pts, wts = leggauss(order)
    zeta, eta, xi = np.meshgrid(pts, pts, pts, indexing='ij')
    wz, wy, wx = np.meshgrid(wts, wts, wts, indexing='ij')
    return QuadratureRule(
        points=np.column_stack([xi.ravel(), eta.ravel(), zeta.ravel()]),
        weights=(wx * wy * wz).ravel()
    )


def reference_shape(points):
    """
    Evaluate trilinear shape functions and their reference derivatives

    Parameters:
        points - an (n_points, 3) array of reference coordinates

    Returns:
        values with shape (n_points, 8) and derivatives with shape
        (n_points, 8, 3)
    """
    points = np.atleast_2d(points)
    factors = 1 + points[:, None, :] * REFERENCE_CORNERS[None, :, :]   # (q, 8, 3)
    values = np.prod(factors, axis=2) / 8
    derivs = np.empty(factors.shape)
    for axis in range(3):
        others = [ax for ax in range(3) if ax != axis]
        derivs[:, :, axis] = REFERENCE_CORNERS[None, :, axis] \
            * factors[:, :, others[0]] * factors[:, :, others[1]] / 8
    return values, derivs


def shape_eval(rule, element_coords):
    """
    Evaluate shape values, physical gradients and Jacobians on elements

    Parameters:
        rule - a QuadratureRule
        element_coords - an (8, 3) array of element node coordinates, or an
            (n_elements, 8, 3) batch

    Returns:
        a ShapeValues instance (batched even for a single element)
    """
    coords = np.asarray(element_coords, dtype=float)
    if coords.ndim == 2:
        coords = coords[None]
    values, derivs = reference_shape(rule.points)

    # J_ij = sum_a x_ai dN_a/dxi_j
    jacobians = np.einsum('eai,qaj->eqij', coords, derivs)
    determinants = np.linalg.det(jacobians)
    if np.any(determinants <= 0):
        bad = np.unique(np.nonzero(determinants <= 0)[0])
        raise DegenerateElementError(
            f'non-positive Jacobian determinant in element batch entries {bad.tolist()}')

    # dN_a/dx_i = sum_j dN_a/dxi_j (J^-1)_ji
    inverses = np.linalg.inv(jacobians)
    gradients = np.einsum('qaj,eqji->eqai', derivs, inverses)
    return ShapeValues(
        values=values,
        gradients=gradients,
        jacobians=jacobians,
        determinants=determinants,
        volumes=determinants * rule.weights[None, :]
    )
