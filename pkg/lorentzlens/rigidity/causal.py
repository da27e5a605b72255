"""

.. module:: causal
	:platform: Unix
	:synopsis: Causal relations between points, null cut locus probes and recovery of null directions from gradients of the time separation


"""

from __future__ import division

import numpy as np

from ..simulations.logs import logrigidity
from ..simulations.geodesics import integrate_geodesic,exp_map,shoot,shoot_tol,_unpack
from ..simulations.jacobi import first_conjugate_time
from ..geometry.metric import LIGHTLIKE,TIMELIKE
from ..utils.exceptions import LorentzLensError,ConvergenceError,PreconditionError,ChartDomainError

#Causal relations
CHRONOLOGICAL = "chronological"
NULL_BOUNDARY = "null_boundary"
NON_CAUSAL = "non_causal"
INDETERMINATE = "indeterminate"

#Cut locus witnesses
CONJUGATE_POINT = "conjugate_point"
SECOND_GEODESIC = "second_geodesic"
NONE_WITHIN_BUDGET = "none_within_budget"

separation_tol = 1e-6
null_tol = 1e-8

###################################################
###############Causal relations####################
###################################################

def _null_connection(m,x,y,tol):

	"""
	Future pointing null geodesic from x to y among the chart images of y, None if shooting finds none

	"""

	failures = 0
	for image in m.images(y):
		try:
			v = shoot(m,x,image,tol=tol)
		except LorentzLensError:
			failures += 1
			continue

		if abs(m.norm2(x,v.vec))<=null_tol*max(v.vec.dot(v.vec),1.) and m.isFuturePointing(x,v.vec):
			return v

	if failures==len(m.images(y)):
		raise ConvergenceError("Shooting from {0} to {1} failed on every chart image".format(np.asarray(x).tolist(),np.asarray(y).tolist()))

	return None


def causal_boundary_class(field,x,y,tol=separation_tol,shoot_tol=shoot_tol):

	"""
	Classify y relative to x: chronological if d(x,y) > tol, null_boundary if d(x,y) <= tol and a future pointing null geodesic joins x to y, non_causal otherwise; indeterminate when d vanishes and shooting fails

	:param field: time separation
	:type field: :py:class:`TimeSeparationField`

	:rtype: str.

	"""

	if field(x,y)>tol:
		return CHRONOLOGICAL

	try:
		v = _null_connection(field.metric,np.asarray(x,dtype=float),np.asarray(y,dtype=float),shoot_tol)
	except ConvergenceError as e:
		logrigidity.warning("Causal class of {0} from {1} indeterminate: {2}".format(np.asarray(y).tolist(),np.asarray(x).tolist(),e))
		return INDETERMINATE

	return NULL_BOUNDARY if v is not None else NON_CAUSAL

###################################################
###############Cut locus probes####################
###################################################

class CutLocusProbe(object):

	"""
	Estimate of the null (or timelike) cut function rho(x,v) and what witnesses it

	"""

	def __init__(self,start,rho,witness,conjugate_time=None,second_geodesic=None,budget=None):

		self.start = start
		self.rho = rho
		self.witness = witness
		self.conjugate_time = conjugate_time
		self.second_geodesic = second_geodesic
		self.budget = budget

	def __repr__(self):
		return "<CutLocusProbe rho={0} witness={1}>".format(self.rho,self.witness)

	def toDict(self):
		return dict(x=self.start[0].tolist(),v=self.start[1].tolist(),rho=None if np.isinf(self.rho) else float(self.rho),witness=self.witness,conjugate_time=self.conjugate_time,
			second_geodesic=None if self.second_geodesic is None else self.second_geodesic.tolist(),budget=self.budget)


def _second_geodesic(m,x,v,s,tol):

	"""
	A geodesic from x to gamma_{x,v}(s) other than the one with initial velocity s v, searched among the chart images of the endpoint

	"""

	trace = integrate_geodesic(m,(x,v),s,tol=1e-12)
	y = trace.endpoint[0]

	for image in m.images(y)[1:]:
		try:
			u = shoot(m,x,image,tol=tol)
		except LorentzLensError:
			continue
		if not np.allclose(u.vec,s*v,atol=1e-6):
			return u.vec

	return None


def cut_locus_probe(field,start,budget,tol=1e-3,samples=16,separation_tol=separation_tol):

	"""
	First parameter s where d(x,gamma(s)) > 0 (null starts) or d(x,gamma(s)) > s|v| (timelike starts), located on a coarse grid and refined by bisection; conjugate points and second geodesics are reported as witnesses

	:param field: time separation
	:type field: :py:class:`TimeSeparationField`

	:param start: lightlike or timelike state
	:type start: :py:class:`TangentVec` or (x,v)

	:param budget: largest parameter probed
	:type budget: float.

	:param tol: bisection tolerance on s
	:type tol: float.

	:returns: :py:class:`CutLocusProbe`

	"""

	m = field.metric
	x,v = _unpack(start)

	cls = m.causalClass(x,v)
	if cls not in (LIGHTLIKE,TIMELIKE):
		raise PreconditionError("Cut locus probes need lightlike or timelike starts, got {0}".format(cls))

	speed = 0. if cls==LIGHTLIKE else np.sqrt(-m.norm2(x,v))
	trace = integrate_geodesic(m,(x,v),budget,tol=1e-12)

	def beyond(s):
		return field(x,trace.state(s)[0])>s*speed+separation_tol

	#Coarse scan
	grid = np.linspace(0.,trace.t_end,samples+1)[1:]
	lower,upper = 0.,None
	for s in grid:
		if beyond(s):
			upper = s
			break
		lower = s

	#Bisection
	if upper is not None:
		while upper-lower>tol:
			mid = 0.5*(lower+upper)
			if beyond(mid):
				upper = mid
			else:
				lower = mid
		rho = upper
	else:
		rho = np.inf

	t_conj = first_conjugate_time(trace)
	if t_conj is not None and t_conj<rho:
		rho = t_conj

	second = None
	if np.isfinite(rho):
		second = _second_geodesic(m,x,v,rho,field.shoot_tol)

	if t_conj is not None and abs(t_conj-rho)<=tol:
		witness = CONJUGATE_POINT
	elif np.isfinite(rho):
		witness = SECOND_GEODESIC
	else:
		witness = NONE_WITHIN_BUDGET

	logrigidity.debug("Cut locus from {0},{1}: rho={2} witness={3}".format(x.tolist(),v.tolist(),rho,witness))
	return CutLocusProbe((x,v),rho,witness,conjugate_time=t_conj,second_geodesic=second,budget=budget)


def cut_lower_bound(field,states,budget,**kwargs):

	"""
	Estimate of the uniform lower bound i0 of rho along the states: half of the smallest sampled cut parameter (the budget when no cut is found)

	:returns: (estimate,probes)

	"""

	probes = [cut_locus_probe(field,s,budget,**kwargs) for s in states]
	rho = min([p.rho for p in probes])
	if np.isinf(rho):
		rho = budget

	logrigidity.info("Estimated cut lower bound i0={0:.6f} from {1} probes".format(rho,len(probes)))
	return 0.5*rho,probes

###################################################
###########Null directions from gradients##########
###################################################

def separation_gradient(field,x,y,wrt,h=1e-7):

	"""
	Central difference gradient of d with respect to one of its arguments, index raised with the metric at that point

	"""

	x = np.asarray(x,dtype=float)
	y = np.asarray(y,dtype=float)
	p = x if wrt==0 else y

	grad = np.zeros(len(p))
	for k in range(len(p)):
		e = np.zeros(len(p))
		e[k] = h
		if wrt==0:
			grad[k] = (field(x+e,y) - field(x-e,y))/(2*h)
		else:
			grad[k] = (field(x,y+e) - field(x,y-e))/(2*h)

	return np.linalg.solve(field.metric.g(p),grad)


def _extrapolate(r,values,degree=2):

	"""
	Limit at r=0 of a vector sequence by polynomial fits through its last terms

	"""

	r = np.asarray(r)
	values = np.asarray(values)
	degree = min(degree,len(r)-1)
	return np.array([np.polyfit(r,values[:,k],degree)[-1] for k in range(values.shape[1])])


def recover_null_direction_via_gradient(field,z1,y,approach_seq,h=1e-7,conv_tol=1e-4,roundtrip_tol=1e-6,min_terms=4):

	"""
	Velocities at z1 and at y of the null geodesic from z1 to y (parametrized on [0,1]) as limits of u_j = d(z1,y_j) grad_z d(.,y_j)|z1 and w_j = -d(z1,y_j) grad_y d(z1,.)|y_j along y_j -> y with d(z1,y_j) > 0; the orientation is fixed by requiring exp_z1(u) = y

	:param approach_seq: points approaching y from the chronological future of z1
	:type approach_seq: array

	:returns: (u,w)

	:raises: :py:class:`ConvergenceError`

	"""

	m = field.metric
	z1 = np.asarray(z1,dtype=float)
	y = np.asarray(y,dtype=float)
	approach_seq = np.atleast_2d(approach_seq)

	if len(approach_seq)<min_terms:
		raise PreconditionError("At least {0} approach points are needed".format(min_terms))

	r,us,ws = list(),list(),list()
	for yj in approach_seq:
		dj = field(z1,yj)
		if dj<=0:
			raise PreconditionError("Approach point {0} is not in the chronological future of {1}".format(yj.tolist(),z1.tolist()))
		r.append(np.linalg.norm(yj-y))
		us.append(dj*separation_gradient(field,z1,yj,0,h))
		ws.append(-dj*separation_gradient(field,z1,yj,1,h))

	#Limits, with the previous term dropped as convergence check
	u = _extrapolate(r[-min_terms:],us[-min_terms:])
	w = _extrapolate(r[-min_terms:],ws[-min_terms:])
	u_prev = _extrapolate(r[-min_terms-1:-1],us[-min_terms-1:-1])

	if np.linalg.norm(u-u_prev)>conv_tol*max(np.linalg.norm(u),1.):
		raise ConvergenceError("Gradient sequence does not converge: successive limits differ by {0:.2e}".format(np.linalg.norm(u-u_prev)))

	#Orientation from the exp roundtrip
	residuals = list()
	for sign in (1.,-1.):
		try:
			residuals.append(np.linalg.norm(exp_map(m,z1,sign*u)[0]-y))
		except ChartDomainError:
			residuals.append(np.inf)

	sign = 1. if residuals[0]<=residuals[1] else -1.
	residual = min(residuals)
	if residual>roundtrip_tol*max(np.linalg.norm(u),1.):
		raise ConvergenceError("exp roundtrip residual {0:.2e} exceeds {1:.0e}".format(residual,roundtrip_tol))

	logrigidity.debug("Recovered null direction at {0}: u={1} (roundtrip {2:.2e})".format(z1.tolist(),(sign*u).tolist(),residual))
	return sign*u,sign*w
