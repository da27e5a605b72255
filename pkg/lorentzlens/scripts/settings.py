"""

.. module:: settings
	:platform: Unix
	:synopsis: Validation of the scenario configurations run by the command line front end


"""

from __future__ import division

import numpy as np

from . import experiments
from .. import catalog
from ..simulations.settings import LLSettings,NumericsSettings,JSONParser
from ..utils.exceptions import ConfigError

#Top level keys of a scenario file
scenario_keys = ["experiment","metric","domain","parameters","numerics","seed","output_dir"]

#Experiment parameters and their defaults; None defaults accept any value and mean "not set"
_lightlike_cone = dict(family="tilt",tilts=[0.],angles=[0.25*np.pi,0.5*np.pi,0.75*np.pi])

parameter_defaults = {

"trace" : dict(x=[0.,0.,0.],v=[1.,0.,0.5],t_max=None,through_domain=True),
"scatter_table" : dict(boundary_grid=[[0.,0.]],component=0,kind="complete",cone=_lightlike_cone),
"convert_scattering" : dict(direction="complete_to_interior",boundary_grid=[[0.,0.]],component=0,cone=_lightlike_cone,tau_tol=1e-4),
"recover_tau" : dict(boundary_grid=[[0.,0.]],component=0,angles=[0.25*np.pi,0.5*np.pi,0.75*np.pi],step=1e-3,tau_tol=1e-4),
"recover_jet" : dict(u=[0.,0.],component=0,direction=[1.,0.5],order=7,noise=None),
"jet_linearity" : dict(m=2,q="dtheta2",direction=[1.,0.5],s_grid=[-0.1,-0.05,0.05,0.1],u=[0.,0.],component=0,width=0.3,eps_max=0.08,count=24,max_deviation=0.02),
"timesep_grid" : dict(x=[0.,0.,0.],points=[[2.,1.,0.]],method="chain",within_domain=True),
"lightcone_id" : dict(u=[0.,0.],component=0,t=[0.,4.,41],theta=[-np.pi,np.pi,37],method="closed_form",extension=dict(name="minkowski",params=dict()),refine=True),
"exterior_reconstruct" : dict(centers=[[0.,0.]],radii=[0.5],x=[0.,-2.,0.1],v=[1.,1.,0.],t_max=10.,i0=None,method="closed_form",angles=360),
"verify_isometry" : dict(shift=1.,rotation=np.pi/6,samples=50,sample_radius=0.8,directions=2,method="neighbours",t_max=10.),
"selftest" : dict(numeric=True),

}

#Experiments that need a metric with boundary
boundary_experiments = ["trace","scatter_table","convert_scattering","recover_tau","recover_jet","jet_linearity","lightcone_id","verify_isometry"]


def _check_type(pointer,value,default):

	if default is None:
		return value

	if isinstance(default,bool):
		if not isinstance(value,bool):
			raise ConfigError(pointer,"expected a boolean")
	elif isinstance(default,(int,float)):
		if isinstance(value,bool) or not isinstance(value,(int,float)):
			raise ConfigError(pointer,"expected a number")
		if isinstance(default,int) and not isinstance(value,int):
			raise ConfigError(pointer,"expected an integer")
	elif isinstance(default,list):
		if not isinstance(value,list):
			raise ConfigError(pointer,"expected a list")
	elif isinstance(default,dict):
		if not isinstance(value,dict):
			raise ConfigError(pointer,"expected an object")
	elif not isinstance(value,type(default)):
		raise ConfigError(pointer,"expected a string")

	return value

##############################################
############Scenario settings#################
##############################################

class ScenarioSettings(LLSettings):

	"""
	A single experiment on a catalog metric, with its parameters, numerical tolerances, seed and output directory

	"""

	def __init__(self,**kwargs):

		self.experiment = None
		self.metric_name = None
		self.metric_params = dict()
		self.collar_width = None
		self.parameters = dict()
		self.numerics = NumericsSettings()
		self.seed = 0
		self.output_dir = "."

		for key in kwargs:
			setattr(self,key,kwargs[key])

	def __repr__(self):
		return "<ScenarioSettings experiment={0} metric={1} seed={2}>".format(self.experiment,self.metric_name,self.seed)

	@classmethod
	def from_dict(cls,d,experiment=None):
		options = JSONParser()
		options._buffer = d
		options.filename = "buffer"
		return cls.get(options,experiment)

	@classmethod
	def get(cls,options,experiment=None):

		"""
		Validate a parsed scenario file; an experiment name passed explicitly overrides the one in the file

		:raises: :py:class:`ConfigError`

		"""

		if not isinstance(options,JSONParser):
			raise ConfigError("","scenarios are JSON files")

		if not isinstance(options._buffer,dict):
			raise ConfigError("","the scenario must be a JSON object")

		for key in options.sections():
			if key not in scenario_keys:
				raise ConfigError("/{0}".format(key),"unknown key")

		settings = cls()

		#Experiment
		if experiment is None:
			if not options.has_section("experiment"):
				raise ConfigError("/experiment","missing experiment name")
			experiment = options.value("experiment")

		if experiment not in experiments:
			raise ConfigError("/experiment","unknown experiment {0}, choose one of {1}".format(experiment,", ".join(sorted(experiments.keys()))))
		settings.experiment = experiment

		#Metric and domain
		settings._readMetric(options)

		#Experiment parameters
		settings.parameters = dict(parameter_defaults[experiment])
		if options.has_section("parameters"):
			given = options.value("parameters")
			if not isinstance(given,dict):
				raise ConfigError("/parameters","expected an object")
			for key in given:
				if key not in parameter_defaults[experiment]:
					raise ConfigError("/parameters/{0}".format(key),"unknown parameter of experiment {0}".format(experiment))
				settings.parameters[key] = _check_type("/parameters/{0}".format(key),given[key],parameter_defaults[experiment][key])

		#Numerics
		if options.has_section("numerics"):
			if not isinstance(options.value("numerics"),dict):
				raise ConfigError("/numerics","expected an object")
			settings.numerics = NumericsSettings.get(options)

		#Seed and output
		if options.has_section("seed"):
			seed = options.value("seed")
			if isinstance(seed,bool) or not isinstance(seed,int) or seed<0:
				raise ConfigError("/seed","expected a non negative integer")
			settings.seed = seed

		if options.has_section("output_dir"):
			output_dir = options.value("output_dir")
			if not isinstance(output_dir,str):
				raise ConfigError("/output_dir","expected a path")
			settings.output_dir = output_dir

		return settings

	def _readMetric(self,options):

		if not options.has_section("metric"):
			if self.experiment!="selftest":
				raise ConfigError("/metric","experiment {0} needs a metric".format(self.experiment))
			return

		section = options.value("metric")
		if not isinstance(section,dict):
			raise ConfigError("/metric","expected an object")

		for key in section:
			if key not in ["name","params"]:
				raise ConfigError("/metric/{0}".format(key),"unknown key")

		if "name" not in section:
			raise ConfigError("/metric/name","missing catalog name")
		if section["name"] not in catalog.catalogs:
			raise ConfigError("/metric/name","unknown catalog metric {0}".format(section["name"]))

		self.metric_name = section["name"]
		self.metric_params = dict(_check_type("/metric/params",section.get("params",dict()),dict()))

		#The domain comes with the catalog entry; its parameters complete the metric ones
		if options.has_section("domain"):

			domain = options.value("domain")
			if not isinstance(domain,dict):
				raise ConfigError("/domain","expected an object")

			for key in domain:
				if key not in ["name","params","collar_width"]:
					raise ConfigError("/domain/{0}".format(key),"unknown key")

			if "name" in domain and domain["name"]!=self.metric_name:
				raise ConfigError("/domain/name","the domain of catalog metric {0} is {0}".format(self.metric_name))

			for key,value in _check_type("/domain/params",domain.get("params",dict()),dict()).items():
				if key in self.metric_params and self.metric_params[key]!=value:
					raise ConfigError("/domain/params/{0}".format(key),"conflicts with /metric/params/{0}".format(key))
				self.metric_params[key] = value

			if "collar_width" in domain:
				width = _check_type("/domain/collar_width",domain["collar_width"],1.)
				if width<=0:
					raise ConfigError("/domain/collar_width","must be positive")
				self.collar_width = width

		#Build once to validate the parameters
		try:
			_,d = self.build()
		except (TypeError,ValueError,AssertionError) as e:
			raise ConfigError("/metric/params","{0}".format(e))

		if d is None and self.experiment in boundary_experiments:
			raise ConfigError("/metric/name","experiment {0} needs a catalog metric with boundary".format(self.experiment))

	def build(self):

		"""
		Catalog metric and domain of the scenario

		:returns: (metric,domain)

		"""

		params = dict(self.metric_params)
		if self.collar_width is not None:
			params["collar_width"] = self.collar_width

		return catalog.load(self.metric_name,params)
