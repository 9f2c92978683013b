"""nlo_quanta: Fock-space simulation and closed-form toolkit for quantum
nonlinear optics.

Subpackage map:

* ``fock``        truncated multimode Fock spaces, operators, states
* ``models``      chi2 / chi3 / parametric-oscillator Hamiltonians
* ``evolve``      unitary and Lindblad propagation, steady states
* ``diagnostics`` squeezing / entanglement / nonclassicality criteria
* ``closed_form`` analytic parametric, Kerr, and down-conversion results
* ``oscillator``  degenerate parametric oscillator threshold analysis
* ``media``       two-level susceptibilities and dispersion relations
* ``soliton``     fiber soliton profiles, split-step NLSE, mean field
* ``cli``         scenario runner (``nlo-quanta`` console script)
"""

__version__ = "0.1.0"

from . import fock, models, evolve, diagnostics, closed_form, oscillator, media, soliton

__all__ = [
    "fock",
    "models",
    "evolve",
    "diagnostics",
    "closed_form",
    "oscillator",
    "media",
    "soliton",
    "__version__",
]
