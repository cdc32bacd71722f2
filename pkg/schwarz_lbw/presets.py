""" file:    presets.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Thursday, 15 October 2026

    description: Built-in scenarios and the coarse space comparison matrix
"""

# Desk-scale cube with a 3D decomposition; the laser sits still in the
# middle and the load is applied from the beginning
CUBE = {
    'name': 'cube',
    'mesh': {'extent': [10.0, 10.0, 10.0], 'cells': [8, 8, 8]},
    'decomposition': {'grid': [2, 2, 2], 'overlap': 1, 'first_level': 'restricted'},
    'coarse': {'space': 'GDSW*(T+R)-RGDSW', 'truncation': 1e-4, 'recycle': 'reuse-all'},
    'time': {'dt': 1e-3, 'total': 5e-3},
    'laser': {'center': [5.0, 5.0], 'radius': 2.0, 'velocity': 0.0, 'init_duration': 0.1},
    'load': {'strain': 0.03, 'strain_rate': 0.06, 'start_time': 0.0},
}

# Thin plate with a 2D decomposition; the laser heats up at the left edge,
# then travels along x, and the load starts after the initialization
PLATE = {
    'name': 'plate',
    'mesh': {'extent': [30.0, 15.0, 1.0], 'cells': [32, 16, 2]},
    'decomposition': {'grid': [4, 4, 1], 'overlap': 1, 'first_level': 'restricted'},
    'coarse': {'space': 'GDSW*(T+R)-RGDSW', 'truncation': 1e-4, 'recycle': 'reuse-all'},
    'time': {'dt': 1e-3, 'total': 5e-3},
    'laser': {'center': [0.0, 7.5], 'radius': 2.0, 'velocity': 16.67, 'init_duration': 0.1},
    'load': {'strain': 0.03, 'strain_rate': 0.06, 'start_time': 0.1},
}

# Weldability test on a narrow plate: GDSW(T)-RGDSW with recycling, the
# laser starts at the left edge and the pull only begins at 0.8 s
CTW = {
    'name': 'ctw',
    'mesh': {'extent': [44.6, 8.0, 1.0], 'cells': [48, 8, 2]},
    'decomposition': {'grid': [8, 2, 1], 'overlap': 1, 'first_level': 'restricted'},
    'coarse': {'space': 'GDSW(T)-RGDSW', 'truncation': 1e-4, 'recycle': 'reuse-all'},
    'time': {'dt': 1e-3, 'total': 1.0},
    'laser': {'center': [0.0, 4.0], 'radius': 2.0, 'velocity': 16.67, 'init_duration': 0.1},
    'load': {'strain': 0.03, 'strain_rate': 0.03, 'start_time': 0.8},
}

PRESETS = {'cube': CUBE, 'plate': PLATE, 'ctw': CTW}

# Coarse space combinations of the comparison runs, displacement part first
COMPARISON_MATRIX = (
    'GDSW(T+R)-GDSW',
    'GDSW(T+R)-RGDSW',
    'GDSW*(T+R)-GDSW*',
    'GDSW*(T+R)-RGDSW',
    'RGDSW(T+R)-RGDSW',
    'GDSW(T)-GDSW',
    'GDSW(T)-RGDSW',
    'GDSW*(T)-GDSW*',
    'GDSW*(T)-RGDSW',
    'RGDSW(T)-RGDSW',
)
