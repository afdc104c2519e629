"""
Extraction

Turns a trained network into a wSTL formula in the logic grammar, strips
weights to plain STL and exports the temporal regions of a formula.
"""

from .extract import (
    REGION_COLUMNS,
    ExtractionResult,
    atomic_formula,
    classic_robustness,
    extract,
    extract_formula,
    formula_regions,
    freeze_intervals,
    save_regions,
    strip_weights
)

__all__ = [
    'REGION_COLUMNS',
    'ExtractionResult',
    'atomic_formula',
    'classic_robustness',
    'extract',
    'extract_formula',
    'formula_regions',
    'freeze_intervals',
    'save_regions',
    'strip_weights'
]
