"""

.. module:: recovery
	:platform: Unix
	:synopsis: First variation of the travel time and conversions between interior and complete scattering data


"""

from .variation import VariationFamily,traced_family,variation_terms,variation_residual,travel_time_field,eikonal_residual
from .conversion import DirectInteriorOracle,TableInteriorOracle,close_under_flow,exit_groups,recover_interior_from_complete,exit_family,recover_lightlike_tau_interior,recover_lightlike_table,collar_delta,CollarStepper,CompleteRecovery,recover_complete_from_interior
