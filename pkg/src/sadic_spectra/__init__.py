"""sadic-spectra - block substitutions, Fourier cocycles and S-adic patch statistics."""

__version__ = "0.1.0"

ARTIFACT_VERSION = f"sadic-spectra {__version__}"

__all__ = ["ARTIFACT_VERSION", "__version__"]
