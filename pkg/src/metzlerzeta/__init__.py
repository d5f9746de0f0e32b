"""Metzler matrices of digraphs, their determinant identities, spectra, walk zeta functions
and SIS decay-rate checks."""

__version__ = "0.1.0"
