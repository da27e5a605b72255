from __future__ import division

import numpy as np

from .exceptions import IllConditionedFitError

#Optimal central difference step for first derivatives
fd_step = lambda x: np.finfo(float).eps**(1./3)*np.maximum(1.0,np.abs(x))

#################################################################################################
##################Finite difference stencils (derivatives of sampled families)##################
#################################################################################################

#Symmetric 5 point stencil, offsets -2h..2h
central5_offsets = np.array([-2.,-1.,0.,1.,2.])
central5_weights = np.array([1.,-8.,0.,8.,-1.])/12.

#One sided 5 point stencil, offsets 0..4h
forward5_offsets = np.array([0.,1.,2.,3.,4.])
forward5_weights = np.array([-25.,48.,-36.,16.,-3.])/12.

def stencil_derivative(values,h,kind="central"):

	"""
	Derivative at the stencil anchor from values sampled on a 5 point stencil

	:param values: samples (first axis runs over the stencil), scalars or arrays
	:type values: array.

	:param h: stencil spacing
	:type h: float.

	:param kind: "central" (offsets -2h..2h) or "forward" (offsets 0..4h)
	:type kind: str.

	:returns: derivative estimate
	:rtype: array

	"""

	values = np.asarray(values,dtype=float)
	assert values.shape[0]==5,"A 5 point stencil needs 5 samples!"

	if kind=="central":
		weights = central5_weights
	elif kind=="forward":
		weights = forward5_weights
	else:
		raise NotImplementedError("Stencil kind {0} not implemented!".format(kind))

	return np.tensordot(weights,values,axes=(0,0))/h


def stencil_points(x0,h,kind="central"):
	offsets = central5_offsets if kind=="central" else forward5_offsets
	return x0 + h*offsets


def derivative(f,x0,h,kind="central"):

	"""
	5 point derivative of f at x0, with the Richardson estimate of its error (difference
	with the same stencil at spacing 2h)

	:returns: (derivative,error estimate)

	"""

	fine = stencil_derivative([f(x) for x in stencil_points(x0,h,kind)],h,kind)
	coarse = stencil_derivative([f(x) for x in stencil_points(x0,2*h,kind)],2*h,kind)
	return fine,np.abs(coarse-fine)/15.


def gradient(f,x,h=None):

	"""
	Central difference gradient of a scalar function of a n-vector

	"""

	x = np.asarray(x,dtype=float)
	if h is None:
		h = fd_step(x)
	else:
		h = h*np.ones_like(x)

	grad = np.zeros_like(x)
	for k in range(len(x)):
		e = np.zeros_like(x)
		e[k] = h[k]
		grad[k] = (f(x+e) - f(x-e))/(2*h[k])

	return grad

#################################################################################################
####################Weighted least squares for polynomials through the origin####################
#################################################################################################

class PolynomialFit(object):

	"""
	Result of a weighted polynomial fit: coefficients, covariance and diagnostics

	"""

	def __init__(self,powers,coefficients,covariance,residual,condition):
		self.powers = powers
		self.coefficients = coefficients
		self.covariance = covariance
		self.residual = residual
		self.condition = condition

	@property
	def sigma(self):
		return np.sqrt(np.abs(np.diag(self.covariance)))

	def coefficient(self,power):
		return self.coefficients[list(self.powers).index(power)]

	def uncertainty(self,power):
		return self.sigma[list(self.powers).index(power)]

	def __call__(self,x):
		x = np.asarray(x,dtype=float)
		return sum(c*x**p for c,p in zip(self.coefficients,self.powers))

	def __repr__(self):
		return "<PolynomialFit powers={0} condition={1:.2e} residual={2:.2e}>".format(list(self.powers),self.condition,self.residual)


def polyfit_powers(x,y,powers,weights=None,noise=None,max_condition=1e12):

	"""
	Weighted least squares fit of y = sum_p c_p x^p over the selected powers (no constant
	term is implied). Columns are rescaled by max|x|^p before solving.

	:param noise: known noise level of y; when None the residual variance is used
	:type noise: float.

	:raises: :py:class:`IllConditionedFitError`

	"""

	x = np.asarray(x,dtype=float)
	y = np.asarray(y,dtype=float)
	powers = np.asarray(powers,dtype=int)
	assert x.shape==y.shape
	assert len(x)>=len(powers),"Not enough points for {0} coefficients!".format(len(powers))

	if weights is None:
		weights = np.ones_like(x)

	scale = np.abs(x).max()
	design = (x[:,None]/scale)**powers[None]
	sw = np.sqrt(weights)

	a = design*sw[:,None]
	b = y*sw

	condition = np.linalg.cond(a)
	if not np.isfinite(condition) or condition>max_condition:
		raise IllConditionedFitError("Condition number {0:.2e} exceeds {1:.0e}: reduce eps_max or tighten the integrator tolerance".format(condition,max_condition))

	coefficients,_,_,_ = np.linalg.lstsq(a,b,rcond=None)
	r = b - a.dot(coefficients)
	dof = max(len(x)-len(powers),1)

	if noise is None:
		variance = (r**2).sum()/dof
	else:
		variance = noise**2

	covariance = variance*np.linalg.inv(a.T.dot(a))

	#Undo the column scaling
	unscale = scale**(-powers.astype(float))
	coefficients = coefficients*unscale
	covariance = covariance*np.outer(unscale,unscale)

	return PolynomialFit(powers,coefficients,covariance,np.sqrt((r**2).sum()/len(x)),condition)
