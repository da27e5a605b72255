"""

.. module:: relation
	:platform: Unix
	:synopsis: Interior and complete scattering relations, travel times and lens lengths of geodesics starting on the boundary


"""

from __future__ import division

import time

import numpy as np

from ..simulations.logs import logscatter
from ..simulations.geodesics import trace_through_domain,integrate_geodesic,probe_dt,default_tol,default_event_tol,default_tangent_threshold,default_max_events,_unpack
from ..geometry.metric import TangentVec,LORENTZIAN
from ..geometry.domain import boundary_frame
from ..utils.exceptions import LorentzLensError,NonTerminatingError,ZeroMeasureError,PreconditionError

#Sample kinds
INTERIOR = "interior"
COMPLETE = "complete"

#Tolerance on phi for points accepted as boundary points
boundary_tol = 1e-9

##########################################################
##################ScatteringSample class##################
##########################################################

class ScatteringSample(object):

	"""
	Scattering datum of a boundary state: inbound (x,v), outbound (y,w), travel time tau and lens length tau|g(v,v)|^{1/2}

	"""

	def __init__(self,inbound,outbound,tau,length,kind,event_count,events=None):

		self.inbound = inbound
		self.outbound = outbound
		self.tau = tau
		self.length = length
		self.kind = kind
		self.event_count = event_count

		#Boundary events traversed in (0,tau]
		self.events = list() if events is None else events

	@classmethod
	def build(cls,m,inbound,outbound,tau,kind,event_count,events=None):
		x,v = inbound.base,inbound.vec
		length = tau*np.sqrt(abs(m.norm2(x,v)))
		return cls(inbound,outbound,tau,length,kind,event_count,events)

	def __repr__(self):
		return "<ScatteringSample {0} tau={1:.10f} events={2}>".format(self.kind,self.tau,self.event_count)

	def reversed(self):

		"""
		Inbound state of the reversed geodesic (y,-w)

		"""

		return TangentVec(self.outbound.base,-self.outbound.vec)

###############################
#Start state checks############
###############################

def _check_start(m,d,start,tangent_threshold):

	x,v = _unpack(start)
	x = m.checkPoint(x)

	if abs(d.phi(x))>boundary_tol:
		raise PreconditionError("Start point {0} is not on the boundary (phi={1:.3e})".format(x.tolist(),d.phi(x)))

	return x,v,d.transversality(x,v)


def _enters(m,d,x,v,tol):

	"""
	Probe whether the geodesic from a tangential start lies inside the domain right after 0

	"""

	trace = integrate_geodesic(m,(x,v),probe_dt,tol=tol)
	return d.phi(trace.endpoint[0])>0

###########################################################
##################Scattering relations#####################
###########################################################

def interior_scattering(m,d,start,t_max,tol=default_tol,event_tol=default_event_tol,tangent_threshold=default_tangent_threshold,max_events=default_max_events):

	"""
	Interior scattering relation: state and parameter of the first boundary event after 0

	:param m: metric
	:type m: :py:class:`ChartMetric`

	:param d: domain
	:type d: :py:class:`DomainSpec`

	:param start: inward (or tangential, entering) boundary state
	:type start: :py:class:`TangentVec` or (x,v)

	:param t_max: affine parameter budget
	:type t_max: float.

	:returns: :py:class:`ScatteringSample` of kind interior

	:raises: :py:class:`NonTerminatingError`, :py:class:`ZeroMeasureError`

	"""

	x,v,tr = _check_start(m,d,start,tangent_threshold)

	if tr< -tangent_threshold:
		raise ZeroMeasureError("Start state {0},{1} points outwards".format(x.tolist(),v.tolist()))

	if abs(tr)<=tangent_threshold and not _enters(m,d,x,v,tol):
		raise ZeroMeasureError("Tangential start state {0},{1} does not enter the domain".format(x.tolist(),v.tolist()))

	trace = trace_through_domain(m,d,(x,v),t_max,tol=tol,event_tol=event_tol,tangent_threshold=tangent_threshold,max_events=max_events)
	if not trace.events:
		raise NonTerminatingError("No boundary event within t_max={0} from {1},{2} ({3})".format(t_max,x.tolist(),v.tolist(),trace.termination))

	first = trace.events[0]
	return ScatteringSample.build(m,TangentVec(x,v),first.state(),first.t,INTERIOR,1,trace.events[:1])


def complete_scattering(m,d,start,t_max,tol=default_tol,event_tol=default_event_tol,tangent_threshold=default_tangent_threshold,max_events=default_max_events):

	"""
	Complete scattering relation: state and parameter of the event after which the geodesic is outside of the domain; tangential grazes that return inside are traversed

	:returns: :py:class:`ScatteringSample` of kind complete

	:raises: :py:class:`NonTerminatingError`, :py:class:`PreconditionError`

	"""

	x,v,tr = _check_start(m,d,start,tangent_threshold)

	if tr< -tangent_threshold:
		raise PreconditionError("Start state {0},{1} points outwards".format(x.tolist(),v.tolist()))

	#Tangential start leaving right away
	if abs(tr)<=tangent_threshold and not _enters(m,d,x,v,tol):
		logscatter.debug("Tangential start {0} leaves immediately, tau=0".format(x.tolist()))
		return ScatteringSample.build(m,TangentVec(x,v),TangentVec(x,v),0.,COMPLETE,0)

	trace = trace_through_domain(m,d,(x,v),t_max,tol=tol,event_tol=event_tol,tangent_threshold=tangent_threshold,max_events=max_events)
	for k,event in enumerate(trace.events):
		if event.leaves:
			return ScatteringSample.build(m,TangentVec(x,v),event.state(),event.t,COMPLETE,k+1,trace.events[:k+1])

	raise NonTerminatingError("Geodesic from {0},{1} does not leave the domain within t_max={2} ({3})".format(x.tolist(),v.tolist(),t_max,trace.termination))


scattering_relations = {

INTERIOR : interior_scattering,
COMPLETE : complete_scattering,

}

###########################################################
###############Direction cones on the boundary#############
###########################################################

def future_frame(m,d,x):

	"""
	Boundary frame with a future pointing timelike tangent

	"""

	frame = boundary_frame(m,d,x,tol=boundary_tol)
	if m.signature==LORENTZIAN and not m.isFuturePointing(x,frame.tangent_basis[0]):
		frame.tangent_basis[0] = -frame.tangent_basis[0]

	return frame


def cone_direction(m,d,x,tilt,angle,frame=None):

	"""
	Direction in the cone about the light cone: v = T + (1-tilt)(cos(angle)E + sin(angle)N), T the timelike boundary tangent, E the first spacelike boundary tangent and N the inward normal; tilt=0 is lightlike, 0 < tilt < 1 timelike. On riemannian metrics v = cos(angle)E + sin(angle)N

	"""

	if frame is None:
		frame = future_frame(m,d,x)

	N = frame.inward_normal
	if m.signature==LORENTZIAN:
		T,E = frame.tangent_basis[0],frame.tangent_basis[1]
		return T + (1.-tilt)*(np.cos(angle)*E + np.sin(angle)*N)
	else:
		E = frame.tangent_basis[0]
		return np.cos(angle)*E + np.sin(angle)*N


def probe_direction(m,frame,v,eps):

	"""
	Probe family about a boundary tangent v: sqrt(1+eps^2)v + eps N (lorentzian) or sqrt(1-eps^2)v + eps N (riemannian), N the inward unit normal

	"""

	if m.signature==LORENTZIAN:
		return np.sqrt(1.+eps**2)*np.asarray(v) + eps*frame.inward_normal
	else:
		return np.sqrt(1.-eps**2)*np.asarray(v) + eps*frame.inward_normal


def cone_states(m,d,boundary_grid,cone_params,component=0):

	"""
	Enumerate the boundary states selected by a boundary grid and a cone description

	:param boundary_grid: boundary coordinates, one row per point
	:type boundary_grid: array

	:param cone_params: {"family":"tilt","tilts":[...],"angles":[...]} or {"family":"probe","direction":[frame coefficients],"epsilons":[...]}
	:type cone_params: dict.

	:returns: list of (label,TangentVec)

	"""

	family = cone_params.get("family","tilt")
	states = list()

	for u in np.atleast_2d(boundary_grid):

		x = d.boundaryPoint(u,component)
		frame = future_frame(m,d,x)

		if family=="tilt":
			for tilt in cone_params.get("tilts",[0.]):
				for angle in cone_params.get("angles",[0.5*np.pi]):
					label = dict(u=list(u),component=component,tilt=tilt,angle=angle)
					states.append((label,TangentVec(x,cone_direction(m,d,x,tilt,angle,frame))))

		elif family=="probe":
			v = np.asarray(cone_params["direction"],dtype=float).dot(frame.tangent_basis)
			for eps in cone_params["epsilons"]:
				label = dict(u=list(u),component=component,eps=eps)
				states.append((label,TangentVec(x,probe_direction(m,frame,v,eps))))

		else:
			raise NotImplementedError("Cone family {0} not implemented!".format(family))

	return states

###########################################################
#####################Table building########################
###########################################################

class _SampleWorker(object):

	"""
	Scatter a single labelled state, turning per sample errors into failure records

	"""

	def __init__(self,m,d,kind,t_max,options):
		self.m = m
		self.d = d
		self.relation = scattering_relations[kind]
		self.t_max = t_max
		self.options = options

	def __call__(self,labelled):

		label,state = labelled
		try:
			return self.relation(self.m,self.d,state,self.t_max,**self.options),None
		except LorentzLensError as e:
			failure = dict(input=dict(label,x=state.base.tolist(),v=state.vec.tolist()),error=e.__class__.__name__,message=str(e))
			return None,failure


def build_scattering_table(m,d,boundary_grid,cone_params,kind=COMPLETE,t_max=10.,component=0,pool=None,**kwargs):

	"""
	Sample a scattering relation over a boundary grid and a direction cone; per sample failures are recorded in the table failure ledger

	:param kind: "interior" or "complete"
	:type kind: str.

	:param pool: object exposing a map method (MPI pool, multiprocessing pool); None means serial
	:type pool: pool

	:param kwargs: tolerances passed to the scattering relation
	:type kwargs: dict.

	:returns: :py:class:`ScatteringTable`

	"""

	from .table import ScatteringTable

	if kind not in scattering_relations:
		raise ValueError("Scattering kind {0} not recognized!".format(kind))

	states = cone_states(m,d,boundary_grid,cone_params,component)
	worker = _SampleWorker(m,d,kind,t_max,kwargs)

	start = time.time()
	if pool is not None:
		M = pool.map
	else:
		M = map

	results = list(M(worker,states))

	samples = [s for s,f in results if s is not None]
	failures = [f for s,f in results if f is not None]
	for f in failures:
		logscatter.warning("Sample {0} failed: {1} ({2})".format(f["input"],f["error"],f["message"]))

	logscatter.info("Built {0} table: {1} samples, {2} failures in {3:.2f}s".format(kind,len(samples),len(failures),time.time()-start))

	grid_meta = dict(boundary_grid=np.atleast_2d(boundary_grid).tolist(),component=component,cone_params=cone_params,kind=kind,t_max=t_max)
	return ScatteringTable.fromSamples(samples,grid_meta=grid_meta,failures=failures)
