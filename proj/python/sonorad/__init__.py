"""Photon-pair emission from a collapsing spherical cavity in a dielectric.

Thin python surface over the C++ core: spherical-mode machinery, collapse
profiles, the spectral engine, and the closed-form short-wavelength model.
"""

from sonorad._core import *  # noqa: F401,F403
from sonorad._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
