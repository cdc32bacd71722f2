#!/usr/bin/env python3
""" file:   setup.py (schwarz_lbw)
    author: schwarz_lbw developers
    date:   October 2026

    description: Setuptools installer script for schwarz_lbw.
"""

from setuptools import setup, find_packages

REQUIREMENTS = [
    'numpy',
    'scipy',
    'pint',
    'tqdm',
    'click',
    'pyyaml',
    'pandas',
    'meshio'
]
DEV_REQUIREMENTS = [
    'pylint',
    'pytest',
    'pytest-runner',
    'pytest-cov',
    'coverage'
]

## PACKAGE INFORMATION
setup(
    name='schwarz_lbw',
    version="0.1.0",
    description='Overlapping Schwarz preconditioners for thermo-elastic laser beam welding',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    author='schwarz_lbw developers',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ],

    # Dependencies
    python_requires='>=3.8',
    install_requires=REQUIREMENTS,
    extras_require={
        'dev': DEV_REQUIREMENTS
    },
    tests_require=DEV_REQUIREMENTS,

    # Contents
    packages=find_packages(exclude=['test*']),
    include_package_data=True,
    test_suite="tests",

    # Some entry points for running CLIs
    entry_points={
        'console_scripts': [
            'schwarz_lbw = schwarz_lbw.cli:main',
        ],
    }
)
