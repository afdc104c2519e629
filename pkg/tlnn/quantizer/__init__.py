"""
Quantizer

Maps real-valued encoder outputs onto the integer time grid. The soft form
is used while training; the hard form for inference and extraction.
"""

from .quantization import (
    QuantSpec,
    quantize_hard,
    quantize_soft,
    quantize_soft_grad
)

__all__ = [
    'QuantSpec',
    'quantize_hard',
    'quantize_soft',
    'quantize_soft_grad'
]
