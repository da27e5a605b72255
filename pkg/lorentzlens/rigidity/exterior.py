"""

.. module:: exterior
	:platform: Unix
	:synopsis: Lightlike travel time data across an unknown compact region, reconstructed from the exterior metric and the time separation function


"""

from __future__ import division

import numpy as np
from scipy.optimize import minimize_scalar

from .causal import recover_null_direction_via_gradient,cut_lower_bound
from ..simulations.logs import logrigidity
from ..simulations.geodesics import trace_through_domain,EXIT,_unpack
from ..geometry.metric import TangentVec,LIGHTLIKE
from ..geometry.domain import DomainSpec
from ..utils.exceptions import StallError,PreconditionError

#Largest step taken back from an entry point
step_cap = 0.1

#Tolerance on the coincidence of two light cone arrival times
arrival_tol = 1e-8

#####################################################
###############ObstacleRegion class##################
#####################################################

class ObstacleRegion(object):

	"""
	Compact region K made of spatial disks times the time axis, in a 2+1 cartesian chart; disks must be disjoint

	:param centers: spatial centers, one row per disk
	:type centers: array

	:param radii: disk radii
	:type radii: array

	"""

	def __init__(self,centers,radii):

		self.centers = np.atleast_2d(np.asarray(centers,dtype=float))
		self.radii = np.atleast_1d(np.asarray(radii,dtype=float))
		assert self.centers.shape==(len(self.radii),2),"Obstacles are disks in the plane"

	def __repr__(self):
		return "<ObstacleRegion {0} disks>".format(len(self.radii))

	def _gaps(self,x):
		return np.linalg.norm(x[None,1:3]-self.centers,axis=1) - self.radii

	def contains(self,x):
		return bool(self._gaps(np.asarray(x,dtype=float)).min()<0)

	def component(self,x):
		return int(np.argmin(np.abs(self._gaps(np.asarray(x,dtype=float)))))

	def boundaryPoint(self,t,theta,component=0):
		c,r = self.centers[component],self.radii[component]
		return np.array([t,c[0]+r*np.cos(theta),c[1]+r*np.sin(theta)])

	def exteriorDomain(self,collar_width=0.05):

		"""
		Domain K^c, phi = distance from the nearest disk

		"""

		def phi(x):
			return self._gaps(x).min()

		def dphi(x):
			i = int(np.argmin(self._gaps(x)))
			s = x[1:3] - self.centers[i]
			grad = np.zeros(3)
			grad[1:3] = s/np.linalg.norm(s)
			return grad

		def hessian(x):
			i = int(np.argmin(self._gaps(x)))
			s = x[1:3] - self.centers[i]
			r = np.linalg.norm(s)
			hess = np.zeros((3,3))
			hess[1:3,1:3] = (np.eye(2)-np.outer(s,s)/r**2)/r
			return hess

		def parametrization(u,component=0):
			return self.boundaryPoint(u[0],u[1],component)

		return DomainSpec(phi,dphi,collar_width=collar_width,defining_hessian=hessian,depth=phi,parametrization=parametrization,name="obstacle_exterior")

#####################################################
###############ExteriorDatum class###################
#####################################################

class ExteriorDatum(object):

	"""
	Lightlike travel time datum of a start state: first entry into K, final exit from K and the parameter at the final exit; None entries when the geodesic misses K

	"""

	def __init__(self,start,entry,exit,parameter,steps,i0,i0_estimated):

		self.start = start
		self.entry = entry
		self.exit = exit
		self.parameter = parameter
		self.steps = steps
		self.i0 = i0
		self.i0_estimated = i0_estimated

	@property
	def advances(self):
		return len(self.steps)

	def __repr__(self):
		return "<ExteriorDatum advances={0} parameter={1}>".format(self.advances,self.parameter)

	def toDict(self):

		state = lambda s:None if s is None else dict(x=s.base.tolist(),v=s.vec.tolist())
		return dict(start=state(self.start),entry=state(self.entry),exit=state(self.exit),parameter=self.parameter,advances=self.advances,steps=self.steps,i0=self.i0,i0_estimated=self.i0_estimated)

#####################################################
###############Light cone intersections##############
#####################################################

def arrival_time(field,z,point_at,t_span=4.,tol=1e-13,max_doublings=20):

	"""
	Earliest t with d(z,point_at(t)) > 0, by bisection; point_at(t) describes a timelike line

	"""

	lower = z[0]
	upper = z[0] + t_span
	for _ in range(max_doublings):
		if field(z,point_at(upper))>0:
			break
		lower,upper = upper,z[0]+2*(upper-z[0])
	else:
		raise StallError("The light cone of {0} does not reach the timelike line".format(np.asarray(z).tolist()))

	while upper-lower>tol*max(1.,abs(upper)):
		mid = 0.5*(lower+upper)
		if field(z,point_at(mid))>0:
			upper = mid
		else:
			lower = mid

	return upper


def cone_exit(field,region,component,z0,z1,t_entry,angles=360):

	"""
	Exit point from a disk of the null generator through z0 and z1: the point of the disk boundary, later than the entry, where the light cones of z0 and z1 arrive at the same time

	:returns: exit point
	:rtype: array

	"""

	def T(z,theta):
		return arrival_time(field,z,lambda t:region.boundaryPoint(t,theta,component))

	def gap(theta):
		return T(z1,theta) - T(z0,theta)

	grid = np.linspace(-np.pi,np.pi,angles,endpoint=False)
	step = grid[1] - grid[0]
	values = np.array([gap(theta) for theta in grid])

	candidates = list()
	for k in range(angles):

		if not (values[k]<=values[k-1] and values[k]<=values[(k+1)%angles]):
			continue

		result = minimize_scalar(gap,bounds=(grid[k]-step,grid[k]+step),method="bounded",options=dict(xatol=1e-11))
		if result.fun<=arrival_tol:
			candidates.append((T(z1,result.x),result.x))

	later = [c for c in candidates if c[0]>t_entry+arrival_tol]
	if not later:
		logrigidity.debug("No exit later than the entry on disk {0}: grazing generator".format(component))
		return None

	t_exit,theta = max(later)
	return region.boundaryPoint(t_exit,theta,component)

#####################################################
###############Travel time loop######################
#####################################################

def exterior_lightlike_traveltime(field,region,start,t_max=10.,i0=None,cut_budget=None,max_advances=None,approach_terms=10,approach_scale=0.1,angles=360):

	"""
	Follow a null geodesic from the exterior of K: trace it with the exterior metric until it enters K, locate where it leaves K by intersecting the light cones of two earlier points, recover the exit velocity with the gradient of the time separation, and repeat until the geodesic no longer enters K

	:param field: time separation, evaluated on exterior points only
	:type field: :py:class:`TimeSeparationField`

	:param region: compact region K
	:type region: :py:class:`ObstacleRegion`

	:param start: null state in K^c
	:type start: :py:class:`TangentVec` or (x,v)

	:param i0: lower bound of the null cut function; estimated from cut locus probes along the traced geodesic when None
	:type i0: float.

	:returns: :py:class:`ExteriorDatum`

	:raises: :py:class:`StallError` when a step does not advance

	"""

	m = field.metric
	x,v = _unpack(start)
	if region.contains(x):
		raise PreconditionError("Start point {0} lies inside K".format(x.tolist()))
	if m.causalClass(x,v)!=LIGHTLIKE:
		raise PreconditionError("Exterior travel times are defined for null starts")

	domain = region.exteriorDomain()
	if max_advances is None:
		max_advances = 4*len(region.radii)

	#Cut lower bound
	i0_estimated = i0 is None
	if i0 is None:
		if np.isfinite(m.injectivity_scale):
			i0 = 0.25*m.injectivity_scale
		else:
			budget = t_max if cut_budget is None else cut_budget
			i0,_ = cut_lower_bound(field,[(x,v)],budget)

	eps = min(0.45*i0,step_cap)
	logrigidity.debug("Exterior loop from {0}: i0={1:.4f}, step back {2:.4f}".format(x.tolist(),i0,eps))

	state = (x,v)
	offset = 0.
	entry = None
	exit = None
	steps = list()

	while True:

		trace = trace_through_domain(m,domain,state,t_max-offset)
		entering = [e for e in trace.events if e.kind==EXIT]
		if not entering:
			break

		event = entering[0]
		if entry is None:
			entry = TangentVec(event.point,event.velocity)

		if len(steps)>=max_advances:
			raise StallError("More than {0} advances through K".format(max_advances))

		#Two points on the generator before the entry
		back = min(eps,event.t/3.)
		z1,u1 = trace.state(event.t-back)
		z0,_ = trace.state(event.t-2*back)

		component = region.component(event.point)
		y = cone_exit(field,region,component,z0,z1,event.point[0],angles=angles)
		if y is None:
			y = event.point.copy()

		approach = np.array([y + np.array([approach_scale*2.**(-j),0.,0.]) for j in range(1,approach_terms+1)])
		u,w = recover_null_direction_via_gradient(field,z1,y,approach)

		#Rescale to the parametrization of the traced geodesic
		c = u.dot(u1)/u1.dot(u1)
		if c<=0 or 1./c<back*(1.-1e-6):
			raise StallError("Step from {0} does not advance beyond the entry point (scale {1:.3e})".format(z1.tolist(),c))

		s_in = offset + event.t
		s_exit = offset + event.t - back + 1./c

		exit = TangentVec(y,w/c)
		steps.append(dict(component=component,entry_parameter=float(s_in),exit_parameter=float(s_exit),entry=event.point.tolist(),exit=y.tolist()))
		logrigidity.debug("Advance {0} through disk {1}: parameter {2:.8f} -> {3:.8f}".format(len(steps),component,s_in,s_exit))

		state = (y,w/c)
		offset = s_exit

	parameter = steps[-1]["exit_parameter"] if steps else None
	return ExteriorDatum(TangentVec(x,v),entry,exit,parameter,steps,float(i0),i0_estimated)
