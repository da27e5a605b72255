"""

.. module:: scattering
	:platform: Unix
	:synopsis: Scattering relations and sampled scattering tables


"""

from .relation import ScatteringSample,interior_scattering,complete_scattering,build_scattering_table,cone_states,cone_direction,probe_direction,future_frame,INTERIOR,COMPLETE
from .table import ScatteringTable,DIRECT,RECOVERED_INTERIOR,RECOVERED_LIGHTLIKE,RECOVERED_COMPLETE
