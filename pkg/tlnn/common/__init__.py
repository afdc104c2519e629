"""
Common module for shared configurations and errors across all tlnn modules.
"""

from .configurations import (
    CONDITIONS,
    NEURON_KINDS,
    SCHEMA_VERSION,
    FaultConfiguration,
    NetworkConfiguration,
    PreprocessConfiguration,
    QuantizerConfiguration,
    SynthConfiguration,
    TlnnConfiguration,
    TrainConfig,
    TrainConfiguration,
    load_configuration,
    save_configuration,
)
from .errors import (
    CheckpointError,
    ConfigurationError,
    DatasetError,
    DatasetLengthError,
    DatasetParseError,
    EmptyDatasetError,
    FormulaError,
    FormulaIntervalError,
    FormulaSyntaxError,
    FormulaWeightError,
    HorizonError,
    NetworkStructureError,
    NonDifferentiableTraceError,
    SignalLengthError,
    TlnnError,
    ValidationError,
)

__all__ = [
    'CONDITIONS',
    'NEURON_KINDS',
    'SCHEMA_VERSION',
    'FaultConfiguration',
    'NetworkConfiguration',
    'PreprocessConfiguration',
    'QuantizerConfiguration',
    'SynthConfiguration',
    'TlnnConfiguration',
    'TrainConfig',
    'TrainConfiguration',
    'load_configuration',
    'save_configuration',
    'CheckpointError',
    'ConfigurationError',
    'DatasetError',
    'DatasetLengthError',
    'DatasetParseError',
    'EmptyDatasetError',
    'FormulaError',
    'FormulaIntervalError',
    'FormulaSyntaxError',
    'FormulaWeightError',
    'HorizonError',
    'NetworkStructureError',
    'NonDifferentiableTraceError',
    'SignalLengthError',
    'TlnnError',
    'ValidationError',
]
