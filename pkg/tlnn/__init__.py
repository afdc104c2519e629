"""
TLNN - Temporal Logic Neural Network

A Python library for learning weighted signal temporal logic (wSTL) formulas
from labelled time series, with structure learning and formula extraction,
applied to rolling-bearing fault diagnosis.

Usage:
    import tlnn
    from tlnn import network
    from tlnn.learner import train
    from tlnn.extraction import extract_formula
"""

__version__ = "0.1.0"
__author__ = "nobrega8"
__email__ = "afonsognobrega@gmail.com"

# Import submodules to make them available
from . import common
from . import logic
from . import quantizer
from . import network
from . import learner
from . import extraction
from . import signals

__all__ = [
    'common',
    'logic',
    'quantizer',
    'network',
    'learner',
    'extraction',
    'signals'
]
