"""Thermodynamic formalism for quadratic interval maps at desk scale.

Pressure brackets, renormalization towers, Markov models of hyperbolic
sets, Bowen-dimension roots, and phase-transition detection for the
family f_a(x) = a x (1 - x).
"""

from .maps import (EntropyBracket, Itinerary, PeriodicOrbit, QuadraticMap,
                   derivative_along_orbit, find_periodic, iterate,
                   itinerary_of, superstable_period)
from .entropy import lap_count, top_entropy
from .renorm import (ParameterWindow, RenormalizationTower, RenormalizedMap,
                     RestrictiveInterval, auto_tower, build_tower,
                     cascade_search, chebyshev_end_search, detect_restrictive,
                     is_trivial, renormalize, window_search)
from .markov import (MarkovModel, SlopeBracket, SpectralComponent,
                     enumerate_periodic, lyapunov_bracket, markov_model,
                     refine_model, spectral_components)
from .pressure import (DimensionBracket, PhaseTransitionReport, PressureCurve,
                       assemble, bowen_dimension, component_curve,
                       cycle_pressure, find_crossing, fixed_point_pressure,
                       lift_pressure, negt_bound_check, transfer_pressure,
                       transitions, verify_inequalities)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
