"""

.. module:: settings
	:platform: Unix
	:synopsis: JSON scenario parsing and the numerical tolerances shared by the package


"""

import json
from abc import ABCMeta,abstractmethod

import numpy as np

from ..utils.exceptions import ConfigError

def select_parser(filename,read=True):

	if not filename.endswith(".json"):
		raise ConfigError("","scenario {0} is not a JSON file".format(filename))

	options = JSONParser()
	if read:
		with open(filename,"r") as fp:
			options._buffer = options.load(fp)
			options.filename = filename

	return options

##############################
#Generic lorentzlens settings#
##############################

class LLSettings(object):

	__metaclass__ = ABCMeta

	@abstractmethod
	def __init__(self,*args,**kwargs):
		pass

	#Read
	@classmethod
	def read(cls,config_file,*args):
		options = select_parser(config_file)
		return cls.get(options,*args)

	#Read from dictionary
	@classmethod
	def from_dict(cls,d,*args):
		options = JSONParser()
		options._buffer = d
		options.filename = "buffer"
		return cls.get(options,*args)

	#Convert into dictionary
	def to_dict(self):

		obj_dict = dict()

		#Make JSON serialization possible
		self_dict = self.__dict__
		for key in self_dict:

			if key.startswith("_"):
				continue
			elif isinstance(self_dict[key],LLSettings):
				obj_dict[key] = self_dict[key].to_dict()
			elif type(self_dict[key])==np.ndarray:
				obj_dict[key] = list(self_dict[key])
			else:
				obj_dict[key] = self_dict[key]

		return obj_dict

#############
#JSON parser#
#############

class JSONParser(object):

	"""
	Top level keys of a JSON object act as sections; nested objects hold the options

	"""

	def has_section(self,section):
		return section in self._buffer

	def sections(self):
		return list(self._buffer.keys())

	def value(self,option):
		if option in self._buffer:
			return self._buffer[option]
		raise ConfigError("/{0}".format(option),"missing key")

	def options(self,section):
		return list(self._buffer[section].keys())

	def raw(self,section,option):
		if option in self._buffer[section]:
			return self._buffer[section][option]
		raise ConfigError("/{0}/{1}".format(section,option),"missing key")

	def getint(self,section,option):
		value = self.raw(section,option)
		if isinstance(value,bool) or int(value)!=value:
			raise ValueError("{0} is not an integer".format(value))
		return int(value)

	def getfloat(self,section,option):
		value = self.raw(section,option)
		if isinstance(value,bool):
			raise ValueError("{0} is not a number".format(value))
		return float(value)

	@staticmethod
	def dumps(obj):
		return json.dumps(obj.to_dict())

	@staticmethod
	def loads(s):
		return json.loads(s)

	@classmethod
	def dump(cls,obj,fp):
		fp.write(cls.dumps(obj))

	@classmethod
	def load(cls,fp):
		return cls.loads(fp.read())

###############################################
#############Numerical settings################
###############################################

class NumericsSettings(LLSettings):

	"""
	Tolerances and budgets shared by the numerical modules

	"""

	#Name -> (type,default); None defaults mean "computed when needed"
	_schema = {

	"ode_tol" : (float,1e-10),
	"probe_tol" : (float,1e-12),
	"event_tol" : (float,1e-11),
	"tangent_threshold" : (float,1e-6),
	"class_tol" : (float,1e-9),
	"t_max" : (float,10.0),
	"eps_max" : (float,0.15),
	"eps_count" : (int,24),
	"delta" : (float,None),
	"shoot_tol" : (float,1e-10),
	"max_iter" : (int,30),
	"conj_tol" : (float,1e-7),
	"max_events" : (int,64),
	"max_rejections" : (int,1000),
	"chain_segments" : (int,8),
	"chain_max_segments" : (int,64),
	"chain_rtol" : (float,1e-5),
	"chain_slack" : (float,1e-4),
	"iso_tol" : (float,1e-6),
	"cone_width" : (float,0.15),

	}

	def __init__(self,**kwargs):

		for key,(kind,default) in self._schema.items():
			setattr(self,key,default)

		for key,value in kwargs.items():
			if key not in self._schema:
				raise ConfigError("/numerics/{0}".format(key),"unknown numerics option")
			setattr(self,key,value)

	@classmethod
	def get(cls,options,section="numerics",pointer="/numerics"):

		settings = cls()
		if not options.has_section(section):
			return settings

		for key in options.options(section):

			if key not in cls._schema:
				raise ConfigError("{0}/{1}".format(pointer,key),"unknown numerics option")

			kind = cls._schema[key][0]
			try:
				value = options.getint(section,key) if kind==int else options.getfloat(section,key)
			except (TypeError,ValueError):
				raise ConfigError("{0}/{1}".format(pointer,key),"expected a number")

			if value<=0:
				raise ConfigError("{0}/{1}".format(pointer,key),"must be positive")

			setattr(settings,key,value)

		return settings
