"""

.. module:: geodesics
	:platform: Unix
	:synopsis: Geodesic integration on a chart, detection and classification of boundary events, shooting and transversal perturbations


"""

from __future__ import division

import json
import time

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.optimize import brentq,minimize_scalar

from .logs import loggeo
from ..geometry.metric import TangentVec,LORENTZIAN,TIMELIKE,LIGHTLIKE
from ..utils.exceptions import StiffnessError,EventOverflowError,BoundaryContactError,ShootingError,SingularJacobianError,SamplingError,ChartDomainError

#Event kinds
ENTER = "enter"
EXIT = "exit"
TANGENTIAL = "tangential"

#Termination reasons
REACHED_T_MAX = "reached_t_max"
LEFT_CHART = "left_chart"
EVENT_STOP = "event_stop"

#Numerical defaults
default_tol = 1e-10
default_event_tol = 1e-11
default_tangent_threshold = 1e-6
default_max_events = 64
default_scan_dt = 1e-2
probe_dt = 1e-6
shoot_tol = 1e-10

def _unpack(start):

	if isinstance(start,TangentVec):
		return np.array(start.base),np.array(start.vec)

	x,v = start
	return np.asarray(x,dtype=float),np.asarray(v,dtype=float)

######################################################
#################BoundaryEvent class##################
######################################################

class BoundaryEvent(object):

	"""
	Intersection of a geodesic with the boundary

	"""

	def __init__(self,t,point,velocity,kind,transversality,after=None):
		self.t = t
		self.point = point
		self.velocity = velocity
		self.kind = kind
		self.transversality = transversality
		self.after = after

	@property
	def leaves(self):

		"""
		True if the geodesic is outside of the domain right after the event

		"""

		return self.after is not None and self.after<0

	def state(self):
		return TangentVec(self.point,self.velocity)

	def toDict(self):
		return dict(t=self.t,point=self.point.tolist(),velocity=self.velocity.tolist(),kind=self.kind,transversality=self.transversality)

	def __repr__(self):
		return "<BoundaryEvent t={0:.10f} kind={1} transversality={2:.3e}>".format(self.t,self.kind,self.transversality)

######################################################
#################GeodesicTrace class##################
######################################################

class GeodesicTrace(object):

	"""
	Integrated geodesic: samples at the integration steps, dense output, energy and boundary events

	"""

	def __init__(self,metric,t,x,v,energy,solution,termination,events=None):

		self.metric = metric
		self.t = t
		self.x = x
		self.v = v
		self.energy = energy
		self.solution = solution
		self.termination = termination
		self.events = list() if events is None else events

	def __repr__(self):
		return "<GeodesicTrace t_end={0:.6f} samples={1} events={2} termination={3}>".format(self.t[-1],len(self.t),len(self.events),self.termination)

	@property
	def t_end(self):
		return self.t[-1]

	@property
	def start(self):
		return self.x[0],self.v[0]

	@property
	def endpoint(self):
		return self.x[-1],self.v[-1]

	def state(self,t):

		"""
		Position and velocity at parameter t (dense output)

		"""

		y = self.solution(t)
		n = self.metric.dimension
		return y[:n],y[n:]

	def energyDrift(self):

		"""
		Maximum deviation of g(v,v) from its initial value over the samples

		"""

		drift = 0.
		for x,v in zip(self.x,self.v):
			drift = max(drift,abs(self.metric.norm2(x,v)-self.energy))

		return drift

	#######################
	#Output################
	#######################

	def toDataFrame(self):

		n = self.metric.dimension
		columns = ["t"] + ["x{0}".format(i) for i in range(n)] + ["v{0}".format(i) for i in range(n)]
		return pd.DataFrame(np.hstack((self.t[:,None],self.x,self.v)),columns=columns)

	def toCSV(self,filename):
		self.toDataFrame().to_csv(filename,index=False,float_format="%.17g")

	def eventsJSON(self):
		return [e.toDict() for e in self.events]

	def saveEvents(self,filename):
		with open(filename,"w") as fp:
			json.dump(self.eventsJSON(),fp,indent=1)

######################################################
##################Integration#########################
######################################################

def geodesic_rhs(metric):

	"""
	Right hand side of the first order geodesic system y = (x,v), dy/dt = (v,-Gamma(v,v))

	"""

	n = metric.dimension

	def rhs(t,y):
		x,v = y[:n],y[n:]
		gamma = metric.gammaRaw(x)
		return np.concatenate((v,-np.einsum("kij,i,j->k",gamma,v,v)))

	return rhs

def _chart_event(metric):

	lower,upper = metric.bounds
	n = metric.dimension
	finite_lower = np.isfinite(lower)
	finite_upper = np.isfinite(upper)

	if not (finite_lower.any() or finite_upper.any()):
		return None

	def leave(t,y):
		x = y[:n]
		distances = np.concatenate(((x-lower)[finite_lower],(upper-x)[finite_upper]))
		return distances.min()

	leave.terminal = True
	leave.direction = -1

	return leave


def integrate_geodesic(m,start,t_max,tol=default_tol,max_step=np.inf,extra_events=None):

	"""
	Integrate the geodesic equation with an adaptive explicit Runge-Kutta method of order 8 with dense output

	:param m: metric
	:type m: :py:class:`ChartMetric`

	:param start: initial state
	:type start: :py:class:`TangentVec` or (x,v)

	:param t_max: affine parameter budget (negative values integrate backwards)
	:type t_max: float.

	:param tol: relative and absolute local error tolerance
	:type tol: float.

	:param extra_events: additional terminal event functions f(t,y) in the solve_ivp convention
	:type extra_events: list.

	:returns: :py:class:`GeodesicTrace`

	:raises: :py:class:`StiffnessError`, :py:class:`ChartDomainError`

	"""

	x0,v0 = _unpack(start)
	x0 = m.checkPoint(x0)
	assert t_max!=0,"t_max must be non zero!"

	events = list()
	chart_event = _chart_event(m)
	if chart_event is not None:
		events.append(chart_event)
	if extra_events is not None:
		events += list(extra_events)

	start_time = time.time()
	solution = solve_ivp(geodesic_rhs(m),(0.,t_max),np.concatenate((x0,v0)),method="DOP853",rtol=tol,atol=tol,dense_output=True,events=events or None,max_step=max_step)

	if solution.status==-1:
		raise StiffnessError("Geodesic integration from {0} failed: {1}".format(x0.tolist(),solution.message))

	n = m.dimension
	termination = REACHED_T_MAX
	if solution.status==1:
		if chart_event is not None and len(solution.t_events[0]):
			termination = LEFT_CHART
		else:
			termination = EVENT_STOP

	loggeo.debug("Integrated geodesic from {0} up to t={1:.6f} in {2} steps ({3:.3f}s)".format(x0.tolist(),solution.t[-1],len(solution.t),time.time()-start_time))

	trace = GeodesicTrace(m,solution.t,solution.y[:n].T,solution.y[n:].T,m.norm2(x0,v0),solution.sol,termination)
	trace.t_events = solution.t_events
	return trace

######################################################
###############Boundary event detection###############
######################################################

def _classify(d,x,v,tangent_threshold):

	tr = d.transversality(x,v)
	if abs(tr)<=tangent_threshold:
		return TANGENTIAL,tr
	elif tr>0:
		return ENTER,tr
	else:
		return EXIT,tr


def find_boundary_events(trace,d,event_tol=default_event_tol,tangent_threshold=default_tangent_threshold,max_events=default_max_events,scan_dt=default_scan_dt,graze_tol=None):

	"""
	Locate all the roots of phi along a trace: sign changes on a scan of the dense output refined by Brent's method, grazes as local minima of |phi| below graze_tol

	:returns: ordered list of :py:class:`BoundaryEvent`

	:raises: :py:class:`EventOverflowError`, :py:class:`BoundaryContactError`

	"""

	if graze_tol is None:
		graze_tol = 10*event_tol

	n = trace.metric.dimension
	t_end = trace.t_end
	if t_end<=probe_dt:
		return list()

	#Scan grid: integration steps refined to at most scan_dt
	grid = [probe_dt]
	for a,b in zip(trace.t[:-1],trace.t[1:]):
		a = max(a,probe_dt)
		if b<=a:
			continue
		nsub = int(np.ceil((b-a)/scan_dt))
		grid += list(np.linspace(a,b,nsub+1)[1:])
	grid = np.array(grid)

	phi_along = lambda t:d.phi(trace.solution(t)[:n])
	phi = np.array([d.phi(x) for x in trace.solution(grid)[:n].T])

	roots = list()

	#Sign changes
	for i in range(len(grid)-1):
		if phi[i]==0.:
			roots.append(grid[i])
		elif phi[i]*phi[i+1]<0:
			roots.append(brentq(phi_along,grid[i],grid[i+1],xtol=1e-15,rtol=4*np.finfo(float).eps))

	#Grazes: local minima of |phi| without sign change
	contact = 0
	for i in range(1,len(grid)-1):

		if abs(phi[i])<graze_tol:
			contact += 1
			if contact>=3:
				raise BoundaryContactError("Geodesic runs inside the boundary around t={0:.6f}".format(grid[i]))
		else:
			contact = 0

		if not (abs(phi[i])<=abs(phi[i-1]) and abs(phi[i])<=abs(phi[i+1])):
			continue
		if phi[i-1]*phi[i]<=0 or phi[i]*phi[i+1]<=0:
			continue

		s = np.sign(phi[i])
		result = minimize_scalar(lambda t:s*phi_along(t),bounds=(grid[i-1],grid[i+1]),method="bounded",options=dict(xatol=1e-14))
		t_min,phi_min = result.x,s*result.fun

		if s*phi_min<0:
			#Two close crossings hidden between scan points
			roots.append(brentq(phi_along,grid[i-1],t_min,xtol=1e-15,rtol=4*np.finfo(float).eps))
			roots.append(brentq(phi_along,t_min,grid[i+1],xtol=1e-15,rtol=4*np.finfo(float).eps))
		elif abs(phi_min)<graze_tol:
			roots.append(t_min)

	roots = sorted(set(roots))
	if len(roots)>max_events:
		raise EventOverflowError("{0} boundary events exceed max_events={1}".format(len(roots),max_events))

	#Build and classify the events
	events = list()
	for k,t in enumerate(roots):

		y = trace.solution(t)
		x,v = y[:n],y[n:]
		kind,tr = _classify(d,x,v,tangent_threshold)

		#Side of the domain right after the event
		t_next = roots[k+1] if k+1<len(roots) else t_end
		t_after = t + min(1e-3*max(1.,abs(t)),0.5*(t_next-t))
		after = np.sign(phi_along(t_after)) if t_after<=t_end and t_after>t else None

		events.append(BoundaryEvent(t,x,v,kind,tr,after))

	#Merge pairs of tangential roots produced by the same graze
	merged = list()
	for e in events:
		if merged and e.kind==TANGENTIAL and merged[-1].kind==TANGENTIAL and e.t-merged[-1].t<1e-6:
			merged[-1].after = e.after
			continue
		merged.append(e)

	return merged


def trace_through_domain(m,d,start,t_max,tol=default_tol,event_tol=default_event_tol,tangent_threshold=default_tangent_threshold,max_events=default_max_events,scan_dt=None,max_step=np.inf):

	"""
	Integrate a geodesic and record all its boundary events in (0,t_max]

	:param m: metric
	:type m: :py:class:`ChartMetric`

	:param d: domain
	:type d: :py:class:`DomainSpec`

	:returns: :py:class:`GeodesicTrace` with events

	"""

	trace = integrate_geodesic(m,start,t_max,tol=tol,max_step=max_step)
	if scan_dt is None:
		scan_dt = min(default_scan_dt,abs(t_max)/64.)

	trace.events = find_boundary_events(trace,d,event_tol=event_tol,tangent_threshold=tangent_threshold,max_events=max_events,scan_dt=scan_dt)
	loggeo.debug("Trace from {0}: {1} boundary events {2}".format(trace.x[0].tolist(),len(trace.events),[e.kind for e in trace.events]))

	return trace

######################################################
#####################Shooting#########################
######################################################

def exp_map(m,x,v,t=1.0,tol=1e-12):

	"""
	exp_x(t v), integrating the geodesic without boundary

	"""

	trace = integrate_geodesic(m,(x,v),t,tol=tol)
	if trace.termination!=REACHED_T_MAX:
		raise ChartDomainError("Geodesic from {0} leaves the chart before t={1}".format(np.asarray(x).tolist(),t))

	return trace.endpoint


def shoot(m,x,y,v0=None,t_fixed=None,tol=shoot_tol,max_iter=30,ode_tol=1e-12):

	"""
	Find v with exp_x(t v) = y (t = t_fixed or 1) by damped Newton iteration on the endpoint map; the Jacobian is computed by central differences

	:param v0: initial guess (chart difference y-x if None)
	:type v0: array

	:returns: :py:class:`TangentVec`

	:raises: :py:class:`ShootingError`, :py:class:`SingularJacobianError`

	"""

	x = m.checkPoint(x)
	y = np.asarray(y,dtype=float)
	T = 1.0 if t_fixed is None else t_fixed

	if v0 is None:
		v = (y-x)/T
	else:
		v = np.asarray(v0,dtype=float).copy()

	def residual(v):
		return exp_map(m,x,v,T,tol=ode_tol)[0] - y

	F = residual(v)
	for iteration in range(max_iter):

		error = np.linalg.norm(F)
		loggeo.debug("Shooting iteration {0}: residual {1:.3e}".format(iteration,error))
		if error<tol:
			return m.tangent(x,v)

		#Central difference Jacobian of the endpoint map
		h = 1e-6*max(1.,np.linalg.norm(v))
		J = np.zeros((m.dimension,m.dimension))
		for k in range(m.dimension):
			e = np.zeros(m.dimension)
			e[k] = h
			J[:,k] = (residual(v+e) - residual(v-e))/(2*h)

		singular = np.linalg.svd(J,compute_uv=False)
		if singular[-1]<1e-10*singular[0]:
			raise SingularJacobianError("Endpoint map degenerate at v={0} (conjugate endpoint?)".format(v.tolist()))

		step = np.linalg.solve(J,-F)

		#Damping
		alpha = 1.
		for _ in range(12):
			try:
				F_new = residual(v+alpha*step)
			except (ChartDomainError,StiffnessError):
				F_new = None
			if F_new is not None and np.linalg.norm(F_new)<error:
				break
			alpha *= 0.5
		else:
			raise ShootingError("Newton line search failed shooting from {0} to {1}".format(x.tolist(),y.tolist()))

		v = v + alpha*step
		F = F_new

	if np.linalg.norm(F)<tol:
		return m.tangent(x,v)

	raise ShootingError("Shooting from {0} to {1} did not converge in {2} iterations (residual {3:.3e})".format(x.tolist(),y.tolist(),max_iter,np.linalg.norm(F)))

######################################################
###########Transversal perturbation sampler###########
######################################################

def project_to_light_cone(m,x,v):

	"""
	Replace the time component of v so that g(v,v) = 0, keeping its sign

	"""

	g = m.g(x)
	v = np.array(v,dtype=float)
	a = g[0,0]
	b = g[0,1:].dot(v[1:])
	c = v[1:].dot(g[1:,1:]).dot(v[1:])
	disc = b**2 - a*c
	if disc<0:
		return None

	roots = [(-b+np.sqrt(disc))/a,(-b-np.sqrt(disc))/a]
	same_sign = [r for r in roots if np.sign(r)==np.sign(v[0])]
	if not same_sign:
		return None

	v[0] = min(same_sign,key=lambda r:abs(r-v[0]))
	return v


def cone_draw(rng,m,x,v,cone_radius):

	"""
	Uniform draw in the ball of radius cone_radius|v| about v, projected back on the light cone for lightlike v; returns None when the draw changes causal class

	"""

	n = len(v)
	u = rng.normal(size=n)
	u *= rng.uniform()**(1./n)/np.linalg.norm(u)
	w = v + cone_radius*np.linalg.norm(v)*u

	if m.signature!=LORENTZIAN:
		return w

	cls = m.causalClass(x,v)
	if cls==LIGHTLIKE:
		return project_to_light_cone(m,x,w)
	elif m.causalClass(x,w)!=cls or np.sign(w[0])!=np.sign(v[0]):
		return None

	return w


def sample_transversal_perturbation(m,d,x,v,cone_radius,seed,t_max,max_rejections=1000,require_inward=None,tol=default_tol,tangent_threshold=default_tangent_threshold):

	"""
	Rejection sample a direction in the cone about v whose geodesic meets the boundary only transversally

	:param require_inward: demand a strictly inward direction (defaults to True when x lies on the boundary)
	:type require_inward: bool.

	:returns: :py:class:`TangentVec`

	:raises: :py:class:`SamplingError`

	"""

	x = m.checkPoint(x)
	v = np.asarray(v,dtype=float)
	rng = np.random.RandomState(seed)

	if require_inward is None:
		require_inward = abs(d.phi(x))<1e-9

	for draw in range(max_rejections):

		w = cone_draw(rng,m,x,v,cone_radius)
		if w is None:
			continue

		if require_inward and d.transversality(x,w)<=tangent_threshold:
			continue

		trace = trace_through_domain(m,d,(x,w),t_max,tol=tol,tangent_threshold=tangent_threshold)
		if all(e.kind!=TANGENTIAL for e in trace.events):
			loggeo.debug("Transversal perturbation accepted after {0} rejections".format(draw))
			return m.tangent(x,w)

	raise SamplingError("No transversal direction found in {0} draws (cone radius {1:.2e})".format(max_rejections,cone_radius))
