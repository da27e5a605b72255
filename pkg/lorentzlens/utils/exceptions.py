"""

.. module:: exceptions
	:platform: Unix
	:synopsis: Exception hierarchy shared by all the lorentzlens sub-packages


"""

#############################
#Base class for every error##
#############################

class LorentzLensError(Exception):
	pass

###################
#Geometry errors###
###################

class ChartDomainError(LorentzLensError,ValueError):
	pass

class DegenerateMetricError(LorentzLensError,RuntimeError):
	pass

class SignatureError(LorentzLensError,ValueError):
	pass

class DegenerateBoundaryError(LorentzLensError,ValueError):
	pass

class PreconditionError(LorentzLensError,ValueError):
	pass

###################
#Geodesic errors###
###################

class StiffnessError(LorentzLensError,RuntimeError):
	pass

class EventOverflowError(LorentzLensError,RuntimeError):
	pass

class BoundaryContactError(LorentzLensError,RuntimeError):
	pass

class ShootingError(LorentzLensError,RuntimeError):
	pass

class SingularJacobianError(ShootingError):
	pass

class SamplingError(LorentzLensError,RuntimeError):
	pass

#####################
#Scattering errors###
#####################

class NonTerminatingError(LorentzLensError,RuntimeError):
	pass

class ZeroMeasureError(LorentzLensError,ValueError):
	pass

######################
#Recovery errors######
######################

class UndefinedDerivativeError(LorentzLensError,ValueError):
	pass

class RecoveryError(LorentzLensError,RuntimeError):
	pass

class InterpolationError(RecoveryError):

	def __init__(self,message,required_density=None):
		super(InterpolationError,self).__init__(message)
		self.required_density = required_density

class IncompleteTableError(LorentzLensError,ValueError):
	pass

class ConsistencyError(LorentzLensError,RuntimeError):
	pass

##################
#Jet errors#######
##################

class ConvexityError(LorentzLensError,ArithmeticError):
	pass

class IllConditionedFitError(LorentzLensError,RuntimeError):
	pass

class InconclusiveError(LorentzLensError,RuntimeError):

	def __init__(self,message,diagnostics=None):
		super(InconclusiveError,self).__init__(message)
		self.diagnostics = diagnostics

#####################
#Rigidity errors#####
#####################

class ConvergenceError(LorentzLensError,RuntimeError):
	pass

class StallError(LorentzLensError,RuntimeError):
	pass

class ResolutionError(LorentzLensError,RuntimeError):
	pass

class InconsistencyError(LorentzLensError,RuntimeError):
	pass

class DifferentialError(LorentzLensError,RuntimeError):
	pass

##################
#Configuration####
##################

class ConfigError(LorentzLensError,ValueError):

	"""
	Invalid scenario configuration; the offending key is reported as a JSON pointer

	"""

	def __init__(self,pointer,message):
		self.pointer = pointer
		super(ConfigError,self).__init__("{0}: {1}".format(pointer,message))
