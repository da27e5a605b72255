"""

.. module:: isometry
	:platform: Unix
	:synopsis: Construction of the map between two manifolds with matching lightlike scattering data, and numerical verification that it is an isometry


"""

from __future__ import division

import json

import numpy as np
from scipy.spatial import cKDTree

from ..simulations.logs import logrigidity
from ..simulations.geodesics import trace_through_domain,exp_map,EXIT
from ..scattering.table import state_columns
from ..utils.exceptions import InconsistencyError,ConsistencyError,DifferentialError,PreconditionError

iso_tol = 1e-6
pushforward_tol = 1e-6
jacobian_step = 1e-6

def jacobian(f,x,h=jacobian_step):

	"""
	Central difference jacobian of a point map

	"""

	x = np.asarray(x,dtype=float)
	columns = list()
	for k in range(len(x)):
		e = np.zeros(len(x))
		e[k] = h
		columns.append((np.asarray(f(x+e))-np.asarray(f(x-e)))/(2*h))

	return np.array(columns).T


def null_frame_directions(m,x,count,offset=0.):

	"""
	Future pointing null vectors e_0 + cos(a)e_1 + sin(a)e_2 on a g-orthonormal frame at x, for count equally spaced angles a

	"""

	g = m.g(x)
	n = len(x)

	#Gram-Schmidt on the coordinate basis, time first
	frame = list()
	for k in range(n):
		e = np.zeros(n)
		e[k] = 1.
		for f in frame:
			e = e - (e.dot(g).dot(f)/f.dot(g).dot(f))*f
		frame.append(e/np.sqrt(abs(e.dot(g).dot(e))))

	if not m.isFuturePointing(x,frame[0]):
		frame[0] = -frame[0]

	angles = offset + 2*np.pi*np.arange(count)/count
	return [frame[0] + np.cos(a)*frame[1] + np.sin(a)*frame[2] for a in angles]

####################################################
###########IsometryCandidate class##################
####################################################

class IsometryCandidate(object):

	"""
	Sampled map phi: M1 -> M2 with the construction metadata of each sample

	:param points: sample points in M1
	:type points: array

	:param images: phi of the sample points
	:type images: array

	:param records: entry states, exit times and direction discrepancies of each sample
	:type records: list.

	:param mapper: callable x -> phi(x) rebuilding the map at new points
	:type mapper: callable

	"""

	def __init__(self,points,images,records,mapper=None):

		self.points = np.asarray(points,dtype=float)
		self.images = np.asarray(images,dtype=float)
		self.records = records
		self.mapper = mapper
		self.max_error = None

	def __len__(self):
		return len(self.points)

	def __repr__(self):
		return "<IsometryCandidate samples={0} max_error={1}>".format(len(self),self.max_error)

	@property
	def max_discrepancy(self):
		values = [r["discrepancy"] for r in self.records if r.get("discrepancy") is not None]
		return max(values) if values else 0.

	def toJSON(self):
		return dict(samples=[dict(x=x.tolist(),phi_x=y.tolist()) for x,y in zip(self.points,self.images)],max_error=self.max_error,max_discrepancy=self.max_discrepancy,records=self.records)

	def save(self,filename):
		with open(filename,"w") as fp:
			json.dump(self.toJSON(),fp,indent=1)

####################################################
###########Data matching############################
####################################################

def check_pushforward(table1,table2,phi0,dphi0=None,tol=pushforward_tol):

	"""
	Check that phi0 maps the lightlike scattering data of M1 onto the data of M2: every inbound state of table1 pushed forward has a counterpart in table2 with the pushed outbound state and the same travel time

	:raises: :py:class:`ConsistencyError`

	:returns: largest mismatch
	:rtype: float.

	"""

	if dphi0 is None:
		dphi0 = lambda x:jacobian(phi0,x)

	n = table1.dimension
	inbound2 = table2[state_columns("x",n)+state_columns("v",n)].values.astype(float)
	tree = cKDTree(inbound2)

	worst = 0.
	for i in range(table1.nsamples):

		s = table1.sample(i)
		pushed_in = np.concatenate((phi0(s.inbound.base),dphi0(s.inbound.base).dot(s.inbound.vec)))
		distance,j = tree.query(pushed_in)
		if distance>tol:
			raise ConsistencyError("Inbound state {0} of the first table has no counterpart (distance {1:.2e})".format(i,distance))

		t = table2.sample(j)
		pushed_out = np.concatenate((phi0(s.outbound.base),dphi0(s.outbound.base).dot(s.outbound.vec)))
		mismatch = max(np.abs(pushed_out-np.concatenate((t.outbound.base,t.outbound.vec))).max(),abs(s.tau-t.tau))
		if mismatch>tol:
			raise ConsistencyError("Sample {0}: pushed forward data differs by {1:.2e}".format(i,mismatch))

		worst = max(worst,distance,mismatch)

	logrigidity.info("Scattering tables matched under phi0: {0} samples, largest mismatch {1:.2e}".format(table1.nsamples,worst))
	return worst

####################################################
###########Construction#############################
####################################################

class _Constructor(object):

	"""
	phi(x,v) = exp^{g2}_{phi0(y)}(t (phi0)_* w), (y,w) the state where the past pointing null geodesic from (x,-v) leaves M1 and t its exit parameter

	"""

	def __init__(self,m1,d1,m2,phi0,dphi0,t_max,directions):
		self.m1 = m1
		self.d1 = d1
		self.m2 = m2
		self.phi0 = phi0
		self.dphi0 = dphi0
		self.t_max = t_max
		self.directions = directions

	def single(self,x,v):

		trace = trace_through_domain(self.m1,self.d1,(x,-v),self.t_max)
		exits = [e for e in trace.events if e.kind==EXIT]
		if not exits:
			raise PreconditionError("Past null geodesic from {0} does not leave M1 within t_max={1}".format(x.tolist(),self.t_max))

		event = exits[0]
		y,w,t = event.point,-event.velocity,event.t
		image = exp_map(self.m2,self.phi0(y),t*self.dphi0(y).dot(w),1.)[0]
		return image,dict(y=y.tolist(),w=w.tolist(),t=float(t))

	def __call__(self,x):

		x = np.asarray(x,dtype=float)
		if self.d1.phi(x)<=0:
			return np.asarray(self.phi0(x),dtype=float),dict(exterior=True,discrepancy=None)

		images = list()
		entries = list()
		for v in null_frame_directions(self.m1,x,self.directions,offset=0.1):
			image,entry = self.single(x,v)
			images.append(image)
			entries.append(entry)

		discrepancy = max([np.linalg.norm(i-images[0]) for i in images])
		return images[0],dict(exterior=False,entries=entries,discrepancy=float(discrepancy))

	def point(self,x):
		return self(x)[0]


def construct_isometry(m1,d1,m2,phi0,interior_samples,dphi0=None,table1=None,table2=None,directions=2,t_max=10.,iso_tol=iso_tol):

	"""
	Build phi on sample points of M1 from the boundary data: each sample is sent along the past null geodesics of several directions to the boundary of M1, pushed across by phi0 and followed forward in M2; the images must not depend on the direction

	:param phi0: map on the exterior and collar of M1, and its differential dphi0 (central differences when None)
	:type phi0: callable

	:param interior_samples: sample points of M1; points outside of M1 are mapped by phi0
	:type interior_samples: array

	:param table1: lightlike scattering table of M1, checked against table2 under phi0 when both are given
	:type table1: :py:class:`ScatteringTable`

	:param directions: null directions per sample
	:type directions: int.

	:returns: :py:class:`IsometryCandidate`

	:raises: :py:class:`InconsistencyError` when images depend on the direction beyond iso_tol

	"""

	if dphi0 is None:
		dphi0 = lambda x:jacobian(phi0,x)

	if table1 is not None and table2 is not None:
		check_pushforward(table1,table2,phi0,dphi0)

	construct = _Constructor(m1,d1,m2,phi0,dphi0,t_max,directions)

	points = np.atleast_2d(np.asarray(interior_samples,dtype=float))
	images = list()
	records = list()

	for x in points:

		image,record = construct(x)
		if record["discrepancy"] is not None and record["discrepancy"]>iso_tol:
			raise InconsistencyError("Images of {0} depend on the null direction: discrepancy {1:.2e} > {2:.0e}".format(x.tolist(),record["discrepancy"],iso_tol))

		images.append(image)
		records.append(record)

	candidate = IsometryCandidate(points,images,records,mapper=construct.point)
	logrigidity.info("Constructed phi on {0} samples, largest direction discrepancy {1:.2e}".format(len(points),candidate.max_discrepancy))

	return candidate

####################################################
###########Verification#############################
####################################################

def _neighbour_differential(points,images,i,tree,k):

	"""
	Differential at sample i from an affine least squares fit over its k nearest samples

	"""

	_,idx = tree.query(points[i],k=k)
	dx = points[idx] - points[i]
	dy = images[idx] - images[i]

	design = np.hstack((np.ones((len(idx),1)),dx))
	if np.linalg.matrix_rank(design)<design.shape[1]:
		raise DifferentialError("Neighbours of sample {0} do not span the chart".format(i))

	solution,_,_,_ = np.linalg.lstsq(design,dy,rcond=None)
	return solution[1:].T


def verify_isometry(candidate,m1,m2,method="neighbours",h=1e-4,neighbours=None):

	"""
	Largest relative discrepancy |g1 - phi^*g2|/|g1| over the samples; the differential of phi is fitted on neighbouring samples or rebuilt on a stencil with the candidate mapper

	:param method: "neighbours" or "stencil"
	:type method: str.

	:returns: max error, also stored in candidate.max_error
	:rtype: float.

	:raises: :py:class:`DifferentialError`

	"""

	n = m1.dimension
	if len(candidate)<10:
		raise DifferentialError("Verification needs at least 10 samples, got {0}".format(len(candidate)))

	if method=="neighbours":
		k = min(len(candidate),3*n) if neighbours is None else neighbours
		if k<n+1:
			raise DifferentialError("Need at least {0} neighbours".format(n+1))
		tree = cKDTree(candidate.points)
		differential = lambda i:_neighbour_differential(candidate.points,candidate.images,i,tree,k)
	elif method=="stencil":
		if candidate.mapper is None:
			raise DifferentialError("Stencil verification needs the candidate mapper")
		differential = lambda i:jacobian(candidate.mapper,candidate.points[i],h)
	else:
		raise ValueError("Verification method {0} not recognized!".format(method))

	worst = 0.
	for i in range(len(candidate)):
		D = differential(i)
		g1 = m1.g(candidate.points[i])
		pullback = D.T.dot(m2.g(candidate.images[i])).dot(D)
		worst = max(worst,np.linalg.norm(g1-pullback)/np.linalg.norm(g1))

	candidate.max_error = float(worst)
	logrigidity.info("Pullback metric discrepancy over {0} samples: {1:.3e}".format(len(candidate),worst))

	return candidate.max_error
