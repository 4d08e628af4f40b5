"""rittcalc: functional calculus and square-function workbench for Ritt matrices.

Modules
-------
numlin   dense complex linear algebra and the four norm models
stolz    Stolz-domain geometry and boundary quadrature
ritt     Ritt diagnostics (power/increment bounds, spectral type, verdict)
funcalc  contour functional calculus, fractional powers, calculus constants
sqfun    square functions, Rademacher averages, R-bound estimation
lab      theorem-level experiments (identities, similarity, galleries)
cli      command-line front end
"""

from . import funcalc, lab, numlin, ritt, sqfun, stolz, verify  # noqa: F401

__version__ = "0.1.0"
