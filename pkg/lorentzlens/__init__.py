"""Numerical experiments on geodesic scattering data of Lorentzian manifolds with boundary: scattering relations, travel time recovery, boundary jets and rigidity constructions


"""

__version__ = "0.1"

import os,pkg_resources

from .geometry import ChartMetric,TangentVec,DomainSpec,boundary_frame,second_fundamental_form
from .catalog import load
from .simulations import integrate_geodesic,trace_through_domain,exp_map,shoot,NumericsSettings
from .scattering import ScatteringTable,interior_scattering,complete_scattering,build_scattering_table
from .jet import JetProbe,probe_travel_time,reconstruct_jet
from .rigidity import TimeSeparationField

#Path to the data folder
def data(name=None):

	if name is not None:

		full_path = pkg_resources.resource_filename("lorentzlens",os.path.join("data",name))
		if os.path.isfile(full_path):
			return full_path
		else:
			raise IOError("The file {0} does not exist!".format(full_path))

	else:

		#If no name provided just list all available resources
		full_path = pkg_resources.resource_filename("lorentzlens","data")
		return os.listdir(full_path)


def showData(name):

	path = data(name)
	with open(path,"r") as datafile:
		print(datafile.read())
