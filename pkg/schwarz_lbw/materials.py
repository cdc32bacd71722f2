""" file:    materials.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Tuesday, 13 October 2026

    description: Temperature-dependent parameters of austenitic chrome-nickel steel (1.4301)
"""

from dataclasses import dataclass, field
import logging

import numpy as np
import pint
import yaml

from .errors import InvalidArgumentError, SingularMaterialError, ConfigurationError

LOGGER = logging.getLogger('schwarz_lbw')

# Units
UNITS = pint.UnitRegistry()
STRESS = 'N/mm**2'
CONDUCTIVITY = 'N/(s*K)'                  # = W/(m K) in the mm-N-s system
VOLUMETRIC_HEAT_CAPACITY = 'N/(mm**2*K)'  # = J/(m^3 K) * 1e-6
PARAMETERS = ('E', 'nu', 'alpha', 'lambda', 'c_rho')

# Breakpoints as printed, scale factors applied. Temperatures in degrees C.
STEEL_1_4301 = {
    'E': (                      # N/mm^2
        (20, 170, 400, 800, 1000, 1100, 1500),
        (20.0e4, 19.1e4, 17.5e4, 12.5e4, 7.2e4, 1.6e4, 0.1e4)
    ),
    'nu': (                     # -
        (20, 183, 484, 799, 994, 1994, 2000),
        (0.271, 0.284, 0.300, 0.319, 0.329, 0.364, 0.364)
    ),
    'alpha': (                  # 1/K
        (20, 200, 580, 1000, 1200, 1500, 2000),
        (1.6e-5, 1.81e-5, 1.98e-5, 2.13e-5, 2.23e-5, 2.23e-5, 2.33e-5)
    ),
    'lambda': (                 # W/(m K)
        (20, 200, 400, 600, 800, 1350, 1393, 1460),
        (15.6, 18.1, 21.0, 23.8, 26.6, 34.4, 35.0, 60.0)
    ),
    'c_rho': (                  # J/(kg K)
        (20, 200, 400, 600, 800, 1350, 1427, 1442, 1460),
        (5.11e5, 5.42e5, 5.75e5, 6.05e5, 6.30e5, 6.85e5, 7.30e5, 20.20e5, 50.00e5)
    ),
}
STEEL_DENSITY = 7.919


@dataclass(frozen=True)
class MaterialTable:

    """
    Piecewise-linear temperature curves for the material parameters

    Values are kept exactly as tabulated; unit handling for the thermal
    parameters is isolated in `conductivity_scale` and `heat_capacity_scale`.

    Parameters:
        curves - a dict mapping each of 'E', 'nu', 'alpha', 'lambda', 'c_rho'
            to a (temperatures, values) pair of sorted arrays
        density - the constant density, as printed
        density_unit - the unit the printed density is read in. The default
            'g/cm**3' reads 7.919 as 7.919e-9 t/mm^3.
        conductivity_unit - the unit of the 'lambda' curve
        heat_capacity_unit - the unit of the 'c_rho' curve
        reference_temperature - the stress free temperature, in degrees C
    """

    curves: dict = field(default_factory=lambda: {
        key: (np.asarray(temps, dtype=float), np.asarray(vals, dtype=float))
        for key, (temps, vals) in STEEL_1_4301.items()})
    density: float = STEEL_DENSITY
    density_unit: str = 'g/cm**3'
    conductivity_unit: str = 'W/(m*K)'
    heat_capacity_unit: str = 'J/(kg*K)'
    reference_temperature: float = 20.0

    def __post_init__(self):
        for key, (temps, vals) in self.curves.items():
            if len(temps) != len(vals) or len(temps) == 0:
                raise InvalidArgumentError(f'curve {key} needs matching, non-empty breakpoints')
            if np.any(np.diff(temps) <= 0):
                raise InvalidArgumentError(f'breakpoints of {key} must be strictly increasing')
        missing = set(PARAMETERS) - set(self.curves)
        if missing:
            raise InvalidArgumentError(f'material table is missing {sorted(missing)}')

    @property
    def conductivity_scale(self):
        "Factor taking the tabulated conductivity to N/(s K)"
        return UNITS.Quantity(1.0, self.conductivity_unit).to(CONDUCTIVITY).magnitude

    @property
    def heat_capacity_scale(self):
        "Factor taking tabulated c_rho to rho * c_rho in N/(mm^2 K)"
        rho = UNITS.Quantity(self.density, self.density_unit)
        return (rho * UNITS.Quantity(1.0, self.heat_capacity_unit))\
            .to(VOLUMETRIC_HEAT_CAPACITY).magnitude

    def with_curve(self, param, temperatures, values):
        "Return a copy of the table with one curve replaced"
        curves = dict(self.curves)
        curves[param] = (np.atleast_1d(np.asarray(temperatures, dtype=float)),
                         np.atleast_1d(np.asarray(values, dtype=float)))
        return MaterialTable(
            curves=curves, density=self.density, density_unit=self.density_unit,
            conductivity_unit=self.conductivity_unit,
            heat_capacity_unit=self.heat_capacity_unit,
            reference_temperature=self.reference_temperature)


def _curve(table, param):
    try:
        return table.curves[param]
    except KeyError:
        raise InvalidArgumentError(f'unknown material parameter {param!r}')


def interpolate(table, param, temperature):
    """
    Evaluate a material curve, linear between breakpoints and clamped outside

    Parameters:
        table - a MaterialTable
        param - one of 'E', 'nu', 'alpha', 'lambda', 'c_rho'
        temperature - a temperature (or array of temperatures) in degrees C

    Returns:
        the tabulated parameter, same shape as temperature
    """
    temps, vals = _curve(table, param)
    return np.interp(temperature, temps, vals)


def derivative(table, param, temperature):
    """
    Slope of a material curve with respect to temperature

    The slope of the segment containing the temperature; zero outside the
    tabulated range, where `interpolate` clamps. At a breakpoint the slope of
    the segment to the right is used.
    """
    temps, vals = _curve(table, param)
    temperature = np.asarray(temperature, dtype=float)
    if len(temps) < 2:
        return np.zeros_like(temperature)
    slopes = np.diff(vals) / np.diff(temps)
    segment = np.clip(np.searchsorted(temps, temperature, side='right') - 1,
                      0, len(slopes) - 1)
    inside = (temperature >= temps[0]) & (temperature < temps[-1])
    return np.where(inside, slopes[segment], 0.0)


def bulk_modulus(youngs, poisson):
    """
    Bulk modulus kappa = E / 3(1 - 2 nu)

    Parameters:
        youngs - Young's modulus E in N/mm^2
        poisson - Poisson's ratio nu, must be < 0.5
    """
    poisson = np.asarray(poisson, dtype=float)
    if np.any(poisson >= 0.5):
        raise SingularMaterialError(f'Poisson ratio must be below 0.5, got {np.max(poisson)}')
    return youngs / (3 * (1 - 2 * poisson))


def stress_temp_modulus(alpha, kappa):
    "Stress temperature modulus gamma = 3 alpha_T kappa"
    return 3 * alpha * kappa


def lame_parameters(youngs, poisson):
    """
    Lame parameters (lambda, mu) of an isotropic material

    Parameters:
        youngs - Young's modulus E
        poisson - Poisson's ratio nu, must be < 0.5
    """
    poisson = np.asarray(poisson, dtype=float)
    if np.any(poisson >= 0.5):
        raise SingularMaterialError(f'Poisson ratio must be below 0.5, got {np.max(poisson)}')
    lam = youngs * poisson / ((1 + poisson) * (1 - 2 * poisson))
    mu = youngs / (2 * (1 + poisson))
    return lam, mu


def isotropic_tensor(lam, mu):
    """
    Voigt matrix lam * m m^T + mu * diag(2, 2, 2, 1, 1, 1) for arrays of Lame parameters

    The strain vector is ordered [e11 e22 e33 g13 g12 g23] with engineering
    shear strains.

    Returns:
        an array of shape lam.shape + (6, 6)
    """
    lam, mu = np.asarray(lam, dtype=float), np.asarray(mu, dtype=float)
    volumetric = np.zeros((6, 6))
    volumetric[:3, :3] = 1
    deviatoric = np.diag([2.0, 2.0, 2.0, 1.0, 1.0, 1.0])
    return lam[..., None, None] * volumetric + mu[..., None, None] * deviatoric


def elastic_tangent(youngs, poisson):
    """
    Isotropic elasticity tensor C in Voigt notation

    Parameters:
        youngs - Young's modulus E, must be positive
        poisson - Poisson's ratio nu, must be < 0.5

    Returns:
        a (6, 6) array (or a batch of them for array inputs)
    """
    if np.any(np.asarray(youngs) <= 0):
        raise SingularMaterialError("Young's modulus must be positive")
    return isotropic_tensor(*lame_parameters(youngs, poisson))


def load_material_table(filename):
    """
    Read a material table from a YAML file

    The file holds a `curves` mapping of parameter -> {temperatures, values}
    and optionally `density`, `density_unit`, `conductivity_unit`,
    `heat_capacity_unit` and `reference_temperature`. Curves that are not
    given keep the 1.4301 defaults.

    Parameters:
        filename - path to the YAML file

    Returns:
        a MaterialTable
    """
    with open(filename, 'r') as src:
        try:
            data = yaml.safe_load(src) or {}
        except yaml.MarkedYAMLError as err:
            raise ConfigurationError(str(err.problem), line=err.problem_mark.line + 1,
                                     source=str(filename))
    table = MaterialTable(**{key: data[key] for key in (
        'density', 'density_unit', 'conductivity_unit', 'heat_capacity_unit',
        'reference_temperature') if key in data})
    for param, curve in (data.get('curves') or {}).items():
        if param not in PARAMETERS:
            raise ConfigurationError(f'unknown material parameter {param!r}', source=str(filename))
        try:
            table = table.with_curve(param, curve['temperatures'], curve['values'])
        except (KeyError, TypeError):
            raise ConfigurationError(
                f"curve {param!r} needs 'temperatures' and 'values' lists", source=str(filename))
    LOGGER.info(f'Loaded material table from {filename}')
    return table
