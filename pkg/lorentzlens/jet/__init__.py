from .symbolic import SymbolicTerm,KMonomial,collect,expansion_recurrence,closed_form_terms,series_sum,jet_monomial,jet_coefficient,assembled_coefficient
from .probe import JetProbe,JetResult,probe_grid,boundary_direction,probe_travel_time,fit_expansion,recover_m1,reconstruct_jet,verify_jet_linearity
