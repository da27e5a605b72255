"""

.. module:: timesep
	:platform: Unix
	:synopsis: Time separation functions by closed forms, geodesic shooting and optimization over causal chains


"""

from __future__ import division

import time

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import minimize,minimize_scalar

from ..simulations.logs import logrigidity
from ..simulations.geodesics import shoot,shoot_tol
from ..utils.exceptions import LorentzLensError,PreconditionError

#Methods
CLOSED_FORM = "closed_form"
SHOOTING = "shooting"
CHAIN = "chain"

#Chain defaults
chain_segments = 8
chain_max_segments = 64
chain_rtol = 1e-5
chain_slack = 1e-4

#Constraint violation tolerated on optimized chains
feasibility_tol = 1e-9

#Quadrature nodes on [0,1] for segment proper times
_nodes,_weights = leggauss(3)
quad_nodes = 0.5*(_nodes+1.)
quad_weights = 0.5*_weights

#Coarse samples along each segment, refined around every sampled local minimum
segment_samples = np.linspace(0.,1.,9)
segment_xtol = 1e-10

def segment_minimum(f,samples=segment_samples,xtol=segment_xtol):

	"""
	Minimum of f(s) over s in [0,1]: coarse sampling followed by a bounded Brent search in the bracket of each sampled local minimum

	:param f: scalar function of the segment fraction
	:type f: callable

	:returns: minimum value
	:rtype: float.

	"""

	values = np.array([f(s) for s in samples])
	low = values.min()

	#Constant along the segment (flat metrics)
	if values.max()-low<=1e-14*max(1.,abs(low)):
		return low

	for j in range(len(samples)):

		if (j>0 and values[j-1]<values[j]) or (j<len(samples)-1 and values[j+1]<values[j]):
			continue

		bracket = (samples[max(j-1,0)],samples[min(j+1,len(samples)-1)])
		result = minimize_scalar(f,bounds=bracket,method="bounded",options=dict(xatol=xtol))
		low = min(low,float(result.fun))

	return low

#############################################################
#################SeparationValue class#######################
#############################################################

class SeparationValue(object):

	"""
	Result of a time separation evaluation; approximate values are lower bounds

	"""

	def __init__(self,value,method,approximate=False,segments=None,nodes=None):
		self.value = value
		self.method = method
		self.approximate = approximate
		self.segments = segments
		self.nodes = nodes

	def __float__(self):
		return float(self.value)

	def __repr__(self):
		flag = " (approximate)" if self.approximate else ""
		return "<SeparationValue {0} d={1:.10f}{2}>".format(self.method,self.value,flag)

#############################################################
#################TimeSeparationField class###################
#############################################################

class TimeSeparationField(object):

	"""
	Time separation d(x,y), the supremum of the proper time of causal curves from x to y inside the domain

	:param metric: metric
	:type metric: :py:class:`ChartMetric`

	:param domain: domain the curves must stay in; None for the whole chart
	:type domain: :py:class:`DomainSpec`

	:param method: "closed_form" (catalog oracle), "shooting" (maximum over connecting causal geodesics, valid without cut points) or "chain" (optimization over piecewise linear causal chains, a lower bound for d)
	:type method: str.

	:param chain_segments: initial number of chain segments
	:type chain_segments: int.

	:param chain_max_segments: refinement cap
	:type chain_max_segments: int.

	:param chain_rtol: relative improvement below which refinement stops
	:type chain_rtol: float.

	Chains use the first coordinate as time function: node times must increase along the chain.

	"""

	def __init__(self,metric,domain=None,method=CHAIN,chain_segments=chain_segments,chain_max_segments=chain_max_segments,chain_rtol=chain_rtol,shoot_tol=shoot_tol,max_iter=30,bends=(0.,0.5,-0.5)):

		if method not in (CLOSED_FORM,SHOOTING,CHAIN):
			raise ValueError("Time separation method {0} not recognized!".format(method))

		if method==CLOSED_FORM and metric.closed_form_separation is None:
			raise PreconditionError("Metric {0} has no closed form time separation".format(metric.catalog_id))

		self.metric = metric
		self.domain = domain
		self.method = method
		self.chain_segments = chain_segments
		self.chain_max_segments = chain_max_segments
		self.chain_rtol = chain_rtol
		self.shoot_tol = shoot_tol
		self.max_iter = max_iter
		self.bends = bends

	def __repr__(self):
		return "<TimeSeparationField {0} method={1}>".format(self.metric.catalog_id,self.method)

	def __call__(self,x,y):
		return self.evaluate(x,y).value

	def evaluate(self,x,y):

		"""
		d(x,y) together with the method diagnostics, maximized over the chart images of y

		:rtype: :py:class:`SeparationValue`

		"""

		x = np.asarray(x,dtype=float)
		y = np.asarray(y,dtype=float)

		if self.method==CLOSED_FORM:
			return SeparationValue(float(self.metric.closed_form_separation(x,y)),CLOSED_FORM)

		best = None
		for image in self.metric.images(y):

			if self.method==SHOOTING:
				result = self._shooting(x,image)
			else:
				result = self._chain(x,image)

			if best is None or result.value>best.value:
				best = result

		return best

	#####################
	#Shooting############
	#####################

	def _shooting(self,x,y):

		if np.allclose(x,y):
			return SeparationValue(0.,SHOOTING)

		m = self.metric
		try:
			v = shoot(m,x,y,tol=self.shoot_tol,max_iter=self.max_iter)
		except LorentzLensError as e:
			logrigidity.debug("Shooting from {0} to {1} failed: {2}".format(x.tolist(),y.tolist(),e))
			return SeparationValue(0.,SHOOTING,approximate=True)

		h = m.norm2(x,v.vec)
		if h>0 or not m.isFuturePointing(x,v.vec):
			return SeparationValue(0.,SHOOTING)

		return SeparationValue(np.sqrt(-h),SHOOTING)

	#####################
	#Causal chains#######
	#####################

	def chainTime(self,nodes):

		"""
		Proper time of the piecewise linear chain through the nodes (non causal segments contribute 0)

		"""

		total = 0.
		for a,b in zip(nodes[:-1],nodes[1:]):
			delta = b - a
			for s,w in zip(quad_nodes,quad_weights):
				total += w*np.sqrt(max(-delta.dot(self.metric.g(a+s*delta)).dot(delta),0.))

		return total

	def chainConstraints(self,nodes):

		"""
		Inequality constraints (all >= 0) of a causal chain: increasing time, and the minimum along every segment of the causal character and, when a domain is set, of phi

		"""

		g = self.metric.g
		out = list()
		for a,b in zip(nodes[:-1],nodes[1:]):

			delta = b - a
			out.append(delta[0])
			out.append(segment_minimum(lambda s:-delta.dot(g(a+s*delta)).dot(delta)))

			if self.domain is not None:
				out.append(segment_minimum(lambda s:self.domain.phi(a+s*delta)))

		return np.array(out)

	def _initial_chains(self,x,y,k):

		"""
		Straight chain and chains bent in the first spatial plane; node times follow the spatial arc length

		"""

		n = len(x)
		s = np.linspace(0.,1.,k+1)[:,None]
		spatial = y[1:] - x[1:]
		span = np.linalg.norm(spatial)

		normal = np.zeros(n-1)
		if span>0 and n>=3:
			normal[0],normal[1] = -spatial[1]/span,spatial[0]/span
		else:
			normal[0] = 1.

		bends = self.bends if self.domain is not None else (0.,)

		chains = list()
		for bend in bends:

			path = x[1:] + s*spatial + bend*span*np.sin(np.pi*s)*normal
			arc = np.concatenate(([0.],np.cumsum(np.linalg.norm(np.diff(path,axis=0),axis=1))))
			fraction = arc/arc[-1] if arc[-1]>0 else s[:,0]

			nodes = np.zeros((k+1,n))
			nodes[:,0] = x[0] + fraction*(y[0]-x[0])
			nodes[:,1:] = path
			nodes[0],nodes[-1] = x,y
			chains.append(nodes)

		return chains

	def _optimize(self,x,y,nodes):

		"""
		Maximize the chain proper time over the interior nodes with SLSQP

		"""

		k = len(nodes) - 1
		n = len(x)

		def unpack(z):
			return np.vstack((x,z.reshape(k-1,n),y))

		result = minimize(lambda z:-self.chainTime(unpack(z)),nodes[1:-1].flatten(),method="SLSQP",constraints=[dict(type="ineq",fun=lambda z:self.chainConstraints(unpack(z)))],options=dict(maxiter=500,ftol=1e-12))
		optimized = unpack(result.x)

		feasible = self.chainConstraints(optimized).min()>=-feasibility_tol
		if not feasible:
			return None,False

		return optimized,bool(result.success)

	def _chain(self,x,y):

		if y[0]<=x[0] or np.allclose(x,y):
			return SeparationValue(0.,CHAIN)

		start = time.time()
		k = self.chain_segments

		#Multistart at the coarsest level
		best_nodes,best_value,converged = None,0.,True
		for nodes in self._initial_chains(x,y,k):
			optimized,success = self._optimize(x,y,nodes)
			if optimized is None:
				continue
			value = self.chainTime(optimized)
			if best_nodes is None or value>best_value:
				best_nodes,best_value,converged = optimized,value,success

		if best_nodes is None:
			logrigidity.debug("No causal chain from {0} to {1}".format(x.tolist(),y.tolist()))
			return SeparationValue(0.,CHAIN,segments=k)

		#Refinement by segment doubling: midpoints embed the coarser chain
		while 2*k<=self.chain_max_segments:

			fine = np.zeros((2*k+1,len(x)))
			fine[::2] = best_nodes
			fine[1::2] = 0.5*(best_nodes[:-1]+best_nodes[1:])

			optimized,success = self._optimize(x,y,fine)
			k *= 2
			if optimized is None:
				converged = False
				break

			value = self.chainTime(optimized)
			improvement = (value-best_value)/max(best_value,1e-300)

			if value>=best_value:
				best_nodes,best_value,converged = optimized,value,success
			else:
				best_nodes = fine

			if improvement<self.chain_rtol:
				break

		logrigidity.debug("Chain from {0} to {1}: d={2:.10f} with {3} segments in {4:.2f}s".format(x.tolist(),y.tolist(),best_value,len(best_nodes)-1,time.time()-start))
		return SeparationValue(best_value,CHAIN,approximate=not converged,segments=len(best_nodes)-1,nodes=best_nodes)

	######################
	#Grids and checks#####
	######################

	def grid(self,x,points,pool=None):

		"""
		d(x,p) for every row p of points

		"""

		worker = _SeparationWorker(self,x)
		if pool is not None:
			M = pool.map
		else:
			M = map

		return np.array(list(M(worker,np.atleast_2d(points))))

	def triangleViolations(self,triples,slack=chain_slack):

		"""
		Sampled triples (x,y,z) violating the reverse triangle inequality d(x,y) + d(y,z) <= d(x,z) + slack, among those with y causally between x and z

		"""

		violations = list()
		for x,y,z in triples:
			dxy,dyz,dxz = self(x,y),self(y,z),self(x,z)
			if dxy>0 and dyz>0 and dxy+dyz>dxz+slack:
				violations.append((x,y,z,dxy+dyz-dxz))

		return violations


class _SeparationWorker(object):

	def __init__(self,field,x):
		self.field = field
		self.x = x

	def __call__(self,p):
		return self.field(self.x,p)
