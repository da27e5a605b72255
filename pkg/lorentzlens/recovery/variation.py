"""

.. module:: variation
	:platform: Unix
	:synopsis: One parameter families of geodesics, first variation of the travel time and eikonal residuals of travel time fields


"""

from __future__ import division

import numpy as np

from ..simulations.logs import logrecovery
from ..simulations.geodesics import trace_through_domain,shoot,default_tol,default_tangent_threshold
from ..utils.algorithms import stencil_points,stencil_derivative
from ..utils.exceptions import UndefinedDerivativeError,NonTerminatingError

#Default lambda spacing of the derivative stencils
lambda_step = 1e-3

#########################################################
################VariationFamily class###################
#########################################################

class VariationFamily(object):

	"""
	One parameter family of geodesics lambda -> (x(lambda),v(lambda)), with optional endpoint data lambda -> (tau,y,dy/dt at tau). Evaluations are cached, derivatives are taken with 5 point stencils and checked against the same stencil at twice the spacing

	:param metric: metric
	:type metric: :py:class:`ChartMetric`

	:param starts: callback lambda -> (x,v)
	:type starts: callable

	:param endpoints: callback lambda -> (tau,y,velocity at y); None for families without endpoint data
	:type endpoints: callable

	:param step: stencil spacing
	:type step: float.

	:param kind: "central" or "forward" stencils (forward stencils only sample lambda >= lambda0)
	:type kind: str.

	"""

	def __init__(self,metric,starts,endpoints=None,step=lambda_step,kind="central"):

		self.metric = metric
		self._starts = starts
		self._endpoints = endpoints
		self.step = step
		self.kind = kind

		self._start_cache = dict()
		self._end_cache = dict()

	def __repr__(self):
		return "<VariationFamily step={0} kind={1} evaluated={2}>".format(self.step,self.kind,len(self._start_cache))

	@property
	def has_endpoints(self):
		return self._endpoints is not None

	##########################
	#Cached evaluations#######
	##########################

	def start(self,l):
		key = float(l)
		if key not in self._start_cache:
			x,v = self._starts(key)
			self._start_cache[key] = (np.asarray(x,dtype=float),np.asarray(v,dtype=float))
		return self._start_cache[key]

	def endpoint(self,l):

		if self._endpoints is None:
			raise UndefinedDerivativeError("This family carries no endpoint data")

		key = float(l)
		if key not in self._end_cache:
			tau,y,w = self._endpoints(key)
			self._end_cache[key] = (float(tau),np.asarray(y,dtype=float),np.asarray(w,dtype=float))
		return self._end_cache[key]

	def energy(self,l):
		x,v = self.start(l)
		return self.metric.norm2(x,v)

	@property
	def lambdas(self):
		return np.array(sorted(self._start_cache.keys()))

	##########################
	#Derivatives##############
	##########################

	def _derive(self,f,lambda0):

		fine = stencil_derivative([f(l) for l in stencil_points(lambda0,self.step,self.kind)],self.step,self.kind)
		coarse = stencil_derivative([f(l) for l in stencil_points(lambda0,2*self.step,self.kind)],2*self.step,self.kind)
		return fine,np.abs(coarse-fine).max()/15.

	def derivatives(self,lambda0=0.):

		"""
		First derivatives at lambda0 of x, v, h=g(v,v) and, when endpoint data is available, of tau and y

		:returns: dictionary of values, derivatives and Richardson error estimates
		:rtype: dict.

		"""

		x0,v0 = self.start(lambda0)
		out = dict(x=x0,v=v0,h=self.energy(lambda0))
		errors = dict()

		out["x_prime"],errors["x_prime"] = self._derive(lambda l:self.start(l)[0],lambda0)
		out["v_prime"],errors["v_prime"] = self._derive(lambda l:self.start(l)[1],lambda0)
		out["h_prime"],errors["h_prime"] = self._derive(self.energy,lambda0)

		if self.has_endpoints:
			tau,y,w = self.endpoint(lambda0)
			out.update(tau=tau,y=y,w=w)
			out["tau_prime"],errors["tau_prime"] = self._derive(lambda l:self.endpoint(l)[0],lambda0)
			out["y_prime"],errors["y_prime"] = self._derive(lambda l:self.endpoint(l)[1],lambda0)

		out["errors"] = errors
		return out


def traced_family(m,d,starts,t_max,step=lambda_step,kind="central",tol=default_tol,tangent_threshold=default_tangent_threshold):

	"""
	Family whose endpoints are the first boundary events after 0 of each member, computed by tracing

	:raises: :py:class:`UndefinedDerivativeError` when a member reaches the boundary tangentially

	"""

	def endpoints(l):

		x,v = starts(l)
		trace = trace_through_domain(m,d,(x,v),t_max,tol=tol,tangent_threshold=tangent_threshold)
		if not trace.events:
			raise NonTerminatingError("Family member lambda={0} does not reach the boundary within t_max={1}".format(l,t_max))

		event = trace.events[0]
		if abs(event.transversality)<=tangent_threshold:
			raise UndefinedDerivativeError("Family member lambda={0} reaches the boundary tangentially".format(l))

		return event.t,event.point,event.velocity

	return VariationFamily(m,starts,endpoints,step=step,kind=kind)

#########################################################
################First variation residual################
#########################################################

def variation_terms(fam,lambda0=0.):

	"""
	Both sides of the first variation identity 2h tau' + h' tau = 2g(y',dy/dt) - 2g(x',dx/dt) at lambda0

	:returns: (left hand side,right hand side,derivative data)

	"""

	m = fam.metric
	data = fam.derivatives(lambda0)

	lhs = 2*data["h"]*data["tau_prime"] + data["h_prime"]*data["tau"]
	rhs = 2*m.inner(data["y"],data["y_prime"],data["w"]) - 2*m.inner(data["x"],data["x_prime"],data["v"])

	return lhs,rhs,data


def variation_residual(fam,lambda0=0.):

	"""
	Residual |2h tau' + h' tau - 2g(y',gamma'(tau)) + 2g(x',gamma'(0))| of the first variation of the travel time

	:param fam: family with endpoint data
	:type fam: :py:class:`VariationFamily`

	:raises: :py:class:`UndefinedDerivativeError`

	"""

	if not fam.has_endpoints:
		raise UndefinedDerivativeError("The first variation residual needs endpoint data")

	lhs,rhs,data = variation_terms(fam,lambda0)
	logrecovery.debug("First variation at lambda={0}: lhs={1:.12f} rhs={2:.12f} (tau'={3:.10f} error {4:.2e})".format(lambda0,lhs,rhs,data["tau_prime"],data["errors"]["tau_prime"]))

	return abs(lhs-rhs)

#########################################################
################Eikonal residuals#######################
#########################################################

def travel_time_field(m,y,shoot_tol=1e-12,max_iter=30):

	"""
	Proper time tau(p) of the timelike geodesic from p to the fixed point y, found by shooting; the previous solution is reused as initial guess

	:returns: callable p -> tau(p)

	"""

	y = np.asarray(y,dtype=float)
	guess = dict(v=None)

	def tau(p):
		v = shoot(m,p,y,v0=guess["v"],tol=shoot_tol,max_iter=max_iter)
		guess["v"] = v.vec
		return np.sqrt(-m.norm2(v.base,v.vec))

	return tau


def eikonal_residual(m,y,points,h=1e-4,shoot_tol=1e-12):

	"""
	Residual |g^{ij} d_i tau d_j tau + 1| of the travel time field to y at each point, with central difference gradients

	:param y: fixed exit point
	:type y: array

	:param points: interior points, one row each
	:type points: array

	:returns: residuals
	:rtype: array

	"""

	tau = travel_time_field(m,y,shoot_tol=shoot_tol)
	residuals = list()

	for p in np.atleast_2d(points):

		p = np.asarray(p,dtype=float)
		grad = np.zeros(len(p))
		for k in range(len(p)):
			e = np.zeros(len(p))
			e[k] = h
			grad[k] = (tau(p+e) - tau(p-e))/(2*h)

		ginv = np.linalg.inv(m.g(p))
		residuals.append(abs(grad.dot(ginv).dot(grad) + 1.))

	residuals = np.array(residuals)
	logrecovery.debug("Eikonal residuals on {0} points: max {1:.3e}".format(len(residuals),residuals.max()))

	return residuals
