"""

.. module:: probe
	:platform: Unix
	:synopsis: Travel time probes near strictly convex boundary directions and recovery of normal derivatives of the metric from their small angle expansion


"""

from __future__ import division

import json
import time

import numpy as np

from .symbolic import jet_coefficient
from ..simulations.logs import logjet
from ..simulations.geodesics import default_tangent_threshold,default_max_events
from ..scattering.relation import complete_scattering,future_frame,probe_direction
from ..geometry.metric import LORENTZIAN,TIMELIKE
from ..geometry.domain import second_fundamental_form
from ..catalog import catalog
from ..utils.algorithms import polyfit_powers
from ..utils.exceptions import LorentzLensError,PreconditionError,ConvexityError,InconclusiveError

#Probe integration tolerances
probe_tol = 1e-12
probe_event_tol = 1e-13

#Ratio between the largest and the smallest eps of the default grids
grid_ratio = 20.

#Default relative uncertainty above which a jet entry is discarded
jet_sigma_max = 1e-3

def probe_grid(eps_max=0.15,count=24,ratio=grid_ratio):

	"""
	Log spaced probe angles in (0,eps_max]

	"""

	assert eps_max>0 and count>=1
	return np.geomspace(eps_max/ratio,eps_max,count)


def boundary_direction(m,d,p,coefficients):

	"""
	Boundary tangent with the given components on the future pointing boundary frame at p (timelike tangent first on lorentzian metrics)

	"""

	frame = future_frame(m,d,p)
	return np.asarray(coefficients,dtype=float).dot(frame.tangent_basis)

##########################################################
##################JetProbe class##########################
##########################################################

class JetProbe(object):

	"""
	Travel times tau(eps) of the probe family about a strictly convex boundary direction

	:param base: boundary point
	:type base: array

	:param direction: boundary tangent v
	:type direction: array

	:param epsilons: probe angles
	:type epsilons: array

	:param taus: measured travel times
	:type taus: array

	:param K: 1/2 d_n g(v,v) computed from the second fundamental form, -II(v,v)
	:type K: float.

	"""

	def __init__(self,base,direction,epsilons,taus,K,metric_id=None):

		self.base = np.asarray(base,dtype=float)
		self.direction = np.asarray(direction,dtype=float)
		self.epsilons = np.asarray(epsilons,dtype=float)
		self.taus = np.asarray(taus,dtype=float)
		self.K = K
		self.metric_id = metric_id
		self.fit = None

		assert self.epsilons.shape==self.taus.shape

	def __repr__(self):
		return "<JetProbe p={0} v={1} K={2:.6f} points={3}>".format(self.base.tolist(),self.direction.tolist(),self.K,len(self.epsilons))

	@property
	def fitted_K(self):
		if self.fit is None:
			raise AttributeError("The probe has not been fitted yet")
		return -2./self.fit.coefficient(1)

	def toJSON(self):
		return dict(base_point=self.base.tolist(),direction=self.direction.tolist(),K=float(self.K),metric=self.metric_id,epsilons=self.epsilons.tolist(),taus=self.taus.tolist())


class _ProbeWorker(object):

	def __init__(self,m,d,p,v,frame,t_max,options):
		self.m = m
		self.d = d
		self.p = p
		self.v = v
		self.frame = frame
		self.t_max = t_max
		self.options = options

	def __call__(self,eps):

		v_eps = probe_direction(self.m,self.frame,self.v,eps)
		try:
			sample = complete_scattering(self.m,self.d,(self.p,v_eps),self.t_max,**self.options)
		except LorentzLensError as e:
			return eps,None,"{0}: {1}".format(e.__class__.__name__,e)

		y,w = sample.outbound.base,sample.outbound.vec
		if abs(self.d.transversality(y,w))<=self.options["tangent_threshold"]:
			return eps,None,"tangential exit at {0}".format(y.tolist())

		return eps,sample.tau,None


def probe_travel_time(m,d,p,v,eps_grid,t_max=None,tol=probe_tol,event_tol=probe_event_tol,tangent_threshold=default_tangent_threshold,max_events=default_max_events,pool=None):

	"""
	Travel times of the probe geodesics v_eps = sqrt(1+eps^2)v + eps N (sqrt(1-eps^2) on riemannian metrics), traced with the complete scattering relation

	:param m: metric
	:type m: :py:class:`ChartMetric`

	:param d: domain
	:type d: :py:class:`DomainSpec`

	:param p: boundary point
	:type p: array

	:param v: boundary tangent; must be timelike on lorentzian metrics
	:type v: array

	:param eps_grid: probe angles
	:type eps_grid: array

	:param t_max: affine parameter budget; a multiple of the leading order chord time when None
	:type t_max: float.

	:returns: :py:class:`JetProbe`

	:raises: :py:class:`PreconditionError` when II(v,v) <= 0 or v is not timelike

	"""

	p = np.asarray(p,dtype=float)
	v = np.asarray(v,dtype=float)
	eps_grid = np.sort(np.asarray(eps_grid,dtype=float))

	if m.signature==LORENTZIAN and m.causalClass(p,v)!=TIMELIKE:
		raise PreconditionError("Probe directions must be timelike, got {0} with g(v,v)={1:.3e}".format(v.tolist(),m.norm2(p,v)))

	II = second_fundamental_form(m,d,p,v)
	if II<=0:
		raise PreconditionError("Direction {0} at {1} is not strictly convex: II(v,v)={2:.3e}".format(v.tolist(),p.tolist(),II))

	K = -II
	if t_max is None:
		t_max = 4.*eps_grid.max()/II + 1.

	frame = future_frame(m,d,p)
	worker = _ProbeWorker(m,d,p,v,frame,t_max,dict(tol=tol,event_tol=event_tol,tangent_threshold=tangent_threshold,max_events=max_events))

	start = time.time()
	if pool is not None:
		M = pool.map
	else:
		M = map

	epsilons = list()
	taus = list()

	for eps,tau,problem in M(worker,eps_grid):
		if problem is not None:
			logjet.warning("Removing eps={0:.4e} from the probe grid: {1}".format(eps,problem))
			continue
		epsilons.append(eps)
		taus.append(tau)

	logjet.info("Probed {0} angles at p={1} (II={2:.6f}) in {3:.2f}s".format(len(epsilons),p.tolist(),II,time.time()-start))

	return JetProbe(p,v,epsilons,taus,K,metric_id=getattr(m,"catalog_id",None))

##########################################################
##################Expansion fits##########################
##########################################################

def fit_expansion(probe,order,noise=None,max_condition=1e12):

	"""
	Least squares fit of tau(eps) = a_1 eps + ... + a_order eps^order; the fit is repeated on every other grid point and the coefficient differences are stored as fit.richardson

	:param probe: measured probe
	:type probe: :py:class:`JetProbe`

	:param order: highest power
	:type order: int.

	:returns: :py:class:`PolynomialFit`, also attached to the probe

	:raises: :py:class:`PreconditionError` on too small grids, :py:class:`IllConditionedFitError`

	"""

	npoints = len(probe.epsilons)
	if npoints<2*order:
		raise PreconditionError("Fitting up to eps^{0} requires at least {1} grid points, got {2}".format(order,2*order,npoints))

	powers = np.arange(1,order+1)
	fit = polyfit_powers(probe.epsilons,probe.taus,powers,noise=noise,max_condition=max_condition)

	#Cross check on the nested sub grid
	fit.richardson = dict()
	sub = slice(None,None,2)
	if len(probe.epsilons[sub])>order:
		coarse = polyfit_powers(probe.epsilons[sub],probe.taus[sub],powers,noise=noise,max_condition=max_condition)
		fit.richardson = dict((int(p),float(abs(c-f))) for p,c,f in zip(powers,coarse.coefficients,fit.coefficients))

	logjet.debug("Expansion fit to order {0}: a1={1:.10f}+/-{2:.2e}, condition={3:.2e}, residual={4:.2e}".format(order,fit.coefficient(1),fit.uncertainty(1),fit.condition,fit.residual))

	probe.fit = fit
	return fit


def recover_m1(probe,rel_tol=1e-4):

	"""
	d_n g(v,v) = 2K with K = -2/a_1 read from the leading coefficient of the fit

	:param probe: fitted probe, or the fit itself
	:type probe: :py:class:`JetProbe`

	:returns: (d_n g(v,v),uncertainty)

	:raises: :py:class:`ConvexityError` when a_1 vanishes

	"""

	fit = getattr(probe,"fit",probe)
	if fit is None:
		raise PreconditionError("The probe has not been fitted yet")

	a1 = fit.coefficient(1)
	sigma = fit.uncertainty(1)

	if not np.isfinite(a1) or abs(a1)<=max(sigma,1e-14):
		raise ConvexityError("Leading coefficient a1={0:.3e} (uncertainty {1:.1e}) vanishes: the direction is not strictly convex".format(a1,sigma))

	if sigma>rel_tol*abs(a1):
		logjet.warning("Leading coefficient uncertainty {0:.2e} exceeds {1:.0e} relative".format(sigma/abs(a1),rel_tol))

	K = -2./a1
	return 2*K,4.*sigma/a1**2

##########################################################
##################JetResult class#########################
##########################################################

class JetResult(object):

	"""
	Normal derivatives d_n^m g(v,v) recovered at a boundary point, with the fit they came from

	"""

	def __init__(self,probe,entries,coefficients_used):
		self.probe = probe
		self.entries = entries
		self.coefficients_used = coefficients_used

	def __getitem__(self,m):
		for entry in self.entries:
			if entry["m"]==m:
				return entry["value"]
		raise KeyError(m)

	def toJSON(self):

		fit = self.probe.fit
		return dict(base_point=self.probe.base.tolist(),direction=self.probe.direction.tolist(),K=float(self.probe.K),entries=self.entries,coefficients_used=self.coefficients_used,
			fit=dict(coefficients=[float(c) for c in fit.coefficients],sigma=[float(s) for s in fit.sigma],residual=float(fit.residual),condition=float(fit.condition),richardson=fit.richardson))

	def save(self,filename):
		with open(filename,"w") as fp:
			json.dump(self.toJSON(),fp,indent=1)


def reconstruct_jet(probe,order=None,sigma_max=jet_sigma_max,noise=None):

	"""
	Fit the probe and collect the recovered normal derivatives; the eps^{2m-1} coefficients are reported for every m the fit resolves

	:param order: fit order, 7 when None
	:type order: int.

	:param sigma_max: relative uncertainty above which entries are dropped
	:type sigma_max: float.

	:returns: :py:class:`JetResult`

	"""

	if order is None:
		order = 7

	fit = fit_expansion(probe,order,noise=noise)

	coefficients_used = list()
	for p in range(1,order+1,2):
		coefficients_used.append(dict(m=(p+1)//2,power=p,value=float(fit.coefficient(p)),sigma=float(fit.uncertainty(p))))

	entries = list()
	value,sigma = recover_m1(probe)
	if sigma<=sigma_max*abs(value):
		entries.append(dict(m=1,value=float(value),sigma=float(sigma)))
	else:
		logjet.warning("Dropping m=1: relative uncertainty {0:.2e} above {1:.0e}".format(sigma/abs(value),sigma_max))

	return JetResult(probe,entries,coefficients_used)

##########################################################
##################Linearity in the jet####################
##########################################################

def verify_jet_linearity(base,m,q,direction,s_grid=(-0.1,-0.05,0.05,0.1),u=(0.,0.),component=0,base_params=None,width=0.3,eps_max=0.08,count=24,extra_powers=6,max_deviation=None,pool=None):

	"""
	Perturb a catalog metric by s chi(d) d^m/m! q and fit the eps^{2m-1} coefficient of the travel time difference as a function of s; the slope is compared with jet_coefficient(m,K) q(v,v)

	:param base: catalog name of the base metric
	:type base: str.

	:param m: perturbation order
	:type m: int.

	:param q: perturbation tensor, see :py:func:`lorentzlens.catalog.jet_perturbed`
	:type q: str. or array

	:param direction: components of v on the boundary frame
	:type direction: array

	:param s_grid: perturbation strengths, symmetric about 0
	:type s_grid: tuple.

	:param u: boundary coordinates of the base point
	:type u: tuple.

	:returns: dictionary with measured slope, its uncertainty, predicted slope, relative deviation and per s coefficients

	:raises: :py:class:`PreconditionError` for m < 2, :py:class:`InconclusiveError` when the slope uncertainty exceeds 10%, or the deviation exceeds max_deviation

	"""

	if m<2:
		raise PreconditionError("Jet linearity needs a perturbation order m >= 2, got m={0}".format(m))

	if base_params is None:
		base_params = dict()

	metric0,domain = catalog.load(base,base_params)
	p = domain.boundaryPoint(np.asarray(u,dtype=float),component)
	v = boundary_direction(metric0,domain,p,direction)
	eps_grid = probe_grid(eps_max,count)

	reference = probe_travel_time(metric0,domain,p,v,eps_grid,pool=pool)
	K = reference.K

	powers = np.arange(2*m-1,2*m+extra_powers)
	coefficients = list()

	for s in s_grid:

		metric_s,_ = catalog.jet_perturbed(base,m=m,s=s,q=q,width=width,base_params=base_params)
		probe = probe_travel_time(metric_s,domain,p,v,reference.epsilons,pool=pool)
		if not np.array_equal(probe.epsilons,reference.epsilons):
			raise InconclusiveError("Probe grids differ between s=0 and s={0}".format(s),diagnostics=dict(s=s))

		fit = polyfit_powers(probe.epsilons,probe.taus-reference.taus,powers)
		coefficients.append(fit.coefficient(2*m-1))
		logjet.debug("s={0:+.3f}: eps^{1} coefficient of the travel time difference {2:.10f}".format(s,2*m-1,coefficients[-1]))

	s_grid = np.asarray(s_grid,dtype=float)
	coefficients = np.array(coefficients)

	slope_powers = [1,2] if len(s_grid)>=3 else [1]
	slope_fit = polyfit_powers(s_grid,coefficients,slope_powers)
	slope,slope_sigma = slope_fit.coefficient(1),slope_fit.uncertainty(1)

	Q,_ = metric_s.qfield(p)
	qvv = v.dot(Q).dot(v)
	predicted = jet_coefficient(m,K)*qvv

	if predicted!=0:
		deviation = abs(slope-predicted)/abs(predicted)
	else:
		deviation = abs(slope)

	report = dict(m=m,K=float(K),qvv=float(qvv),slope=float(slope),slope_sigma=float(slope_sigma),predicted=float(predicted),relative_deviation=float(deviation),s=s_grid.tolist(),coefficients=coefficients.tolist())
	logjet.info("Jet linearity m={0}: slope {1:.6f}+/-{2:.1e}, predicted {3:.6f}, deviation {4:.2e}".format(m,slope,slope_sigma,predicted,deviation))

	#Null perturbations only need a vanishing slope
	if predicted!=0 and slope_sigma>0.1*abs(slope):
		raise InconclusiveError("Slope uncertainty {0:.2e} exceeds 10% of the slope {1:.3e}".format(slope_sigma,slope),diagnostics=report)

	if max_deviation is not None and deviation>max_deviation:
		raise InconclusiveError("Relative deviation {0:.2e} from the predicted slope exceeds {1:.0e}".format(deviation,max_deviation),diagnostics=report)

	return report
