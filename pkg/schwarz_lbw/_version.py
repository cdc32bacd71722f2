""" file:    _version.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Version number
"""

__version__ = "0.1.0"
