"""Quaternion and Cl(3,1) matrix toolkit for lattice loop actions and quaternion Fourier transforms."""

__version__ = "0.1.0"
