"""
riesz-lab - exact vector-lattice laboratory.

Decision procedures and constructions for ideals, bands and projection bands
of piecewise-linear functions with rational breakpoints, constructive Urysohn
lemmas, and pseudo-complement machinery on finite distributive lattices. Every
verdict comes with certificates that can be re-checked from the JSON report.
"""

__version__ = "0.1.0"

from .functions import PLFun
from .ideals import IdealSpec, SublatticeSpec
from .lattices import FinLattice, FinPoset
from .main import Laboratory
from .regions import Region, Space
from .schemas import Certificate, Command, LabConfig, LabReport

__all__ = [
    "Laboratory",
    "Space",
    "Region",
    "PLFun",
    "IdealSpec",
    "SublatticeSpec",
    "FinPoset",
    "FinLattice",
    "Certificate",
    "Command",
    "LabConfig",
    "LabReport",
]
