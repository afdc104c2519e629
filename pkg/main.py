#!/usr/bin/env python3
"""
Main entry point for the TLNN library.

This file demonstrates the usage of the tlnn module.
"""

import sys

# Import tlnn directly (no path tricks needed)
try:
    import tlnn
    print(f"Successfully imported tlnn v{tlnn.__version__}")
    print(f"Available modules: {tlnn.__all__}")
except ImportError as e:
    print(f"Failed to import tlnn: {e}")
    print("Make sure the package is properly installed.")
    sys.exit(1)


def main():
    """
    Main function demonstrating usage of the tlnn library.

    Parses the fault formulas in the grammar, prints their canonical text
    and evaluates them on a feature signal from the synthetic generator.
    """
    print("\n=== TLNN Library Demo ===")
    print(f"Library version: {tlnn.__version__}")
    print(f"Author: {tlnn.__author__}")
    print(f"Email: {tlnn.__email__}")

    from tlnn.common import PreprocessConfiguration, SynthConfiguration
    from tlnn.logic import eval_boolean, format_formula, parse_formula, robustness_classic, robustness_weighted
    from tlnn.signals import preprocess_dataset, synth_dataset

    formulas = {
        "inner": "F[0,5] G[58,66] (x >= 0.05) & G[14,31] (x < 0.3) & G[45,52] (x < 0.04)",
        "outer": "F[60,68] (x < 0.1) & F[44,50] (x >= 0.08) & F[0,5] G[18,30] (x < 0.3)",
        "rolling": "F[0,5] G[20,25] (x < 0.1) & G[65,72] (x >= 0.3)",
        "normal": "F[0,5] G[15,25] (x >= 0.4) | G[0,5] (x >= 0.12)",
    }

    print("\nGenerating synthetic features...")
    raw = synth_dataset(SynthConfiguration(count_per_condition=5))
    features = preprocess_dataset(raw, PreprocessConfiguration())
    sample = features[0]
    print(f"  {len(features)} samples of length {features.length}, first is '{sample.condition}'")

    print("\nFormulas on the first sample:")
    for name, text in formulas.items():
        formula = parse_formula(text)
        print(f"  {name}: {format_formula(formula)}")
        print(f"    satisfied: {eval_boolean(formula, sample.signal)}")
        print(f"    classic robustness: {robustness_classic(formula, sample.signal):+.4f}")
        print(f"    weighted robustness: {robustness_weighted(formula, sample.signal):+.4f}")

    print("\nTo train and extract a formula, use the command line:")
    print("  tlnn synth --out raw.csv")
    print("  tlnn preprocess raw.csv --out-dir features")
    print("  tlnn train features/inner_train.csv --out inner.json")
    print("  tlnn extract inner.json features/inner_train.csv")


if __name__ == "__main__":
    main()
