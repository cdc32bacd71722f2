""" file:    __init__.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Init script for schwarz_lbw
"""

from ._version import __version__
from .mesh import build_box_mesh
from .config import Scenario, load_scenario
from .schwarz import SchwarzPreconditioner
from .krylov import gmres
from . import (mesh, dofs, shape, materials, assembly, decomposition, rotation,
               coarse_space, schwarz, krylov, config, presets, driver, report,
               verify, utilities, cli)
