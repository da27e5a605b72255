"""

.. module:: metric
	:platform: Unix
	:synopsis: Semi-Riemannian metrics on a single coordinate chart: metric, inverse, Christoffel symbols and causal classification of tangent vectors


"""

from __future__ import division

import numpy as np

from ..utils.algorithms import fd_step
from ..utils.exceptions import ChartDomainError,DegenerateMetricError,SignatureError

#Signatures
RIEMANNIAN = "riemannian"
LORENTZIAN = "lorentzian"

#Causal classes
TIMELIKE = "timelike"
LIGHTLIKE = "lightlike"
SPACELIKE = "spacelike"
ZERO = "zero"

#Default tolerances
class_tol = 1e-9
symmetry_tol = 1e-12
inverse_tol = 1e-10
max_condition = 1e12

###################################################
#########Tangent vectors with cached class#########
###################################################

class TangentVec(object):

	"""
	A tangent vector (base point + components); when the vector is built through :py:meth:`ChartMetric.tangent` its causal class is computed once and cached

	"""

	__slots__ = ("base","vec","causal_class")

	def __init__(self,base,vec,causal_class=None):

		base = np.array(base,dtype=float)
		vec = np.array(vec,dtype=float)
		assert base.shape==vec.shape,"Base point and vector must have the same dimension!"

		base.setflags(write=False)
		vec.setflags(write=False)

		object.__setattr__(self,"base",base)
		object.__setattr__(self,"vec",vec)
		object.__setattr__(self,"causal_class",causal_class)

	def __setattr__(self,name,value):
		raise AttributeError("TangentVec instances are immutable")

	def scaled(self,c):
		return TangentVec(self.base,c*self.vec,self.causal_class if c>0 else None)

	def reversed(self):
		return TangentVec(self.base,-self.vec,self.causal_class)

	def __repr__(self):
		return "<TangentVec base={0} vec={1} class={2}>".format(self.base.tolist(),self.vec.tolist(),self.causal_class)


###################################################
################ChartMetric class##################
###################################################

class ChartMetric(object):

	"""
	A metric field on a single chart, evaluated through callbacks

	:param dimension: chart dimension n
	:type dimension: int.

	:param metric: callback x -> g_ij(x), n x n symmetric matrix
	:type metric: callable

	:param derivative: callback x -> dg[k,i,j] = d_k g_ij(x); if None, central finite differences of the metric are used
	:type derivative: callable

	:param signature: "riemannian" or "lorentzian" (-,+,...,+)
	:type signature: str.

	:param bounds: (lower,upper) corners of the axis aligned box of valid chart coordinates; None means unbounded
	:type bounds: tuple.

	:param catalog_id: name of the catalog entry that built the metric, if any
	:type catalog_id: str.

	:param identifications: callback x -> list of chart points representing the same manifold point as x (periodic coordinates)
	:type identifications: callable

	:param injectivity_scale: documented injectivity scale of the catalog geometry (inf when geodesics never refocus)
	:type injectivity_scale: float.

	"""

	#Catalog oracles, when a closed form is known
	closed_form_separation = None
	squared_separation = None

	def __init__(self,dimension,metric,derivative=None,signature=LORENTZIAN,bounds=None,catalog_id=None,identifications=None,injectivity_scale=np.inf,params=None):

		assert dimension>=2,"Chart dimension must be at least 2!"
		if signature not in [RIEMANNIAN,LORENTZIAN]:
			raise SignatureError("Signature {0} not supported!".format(signature))

		self.dimension = dimension
		self.signature = signature
		self.catalog_id = catalog_id
		self.injectivity_scale = injectivity_scale
		self.params = dict() if params is None else dict(params)

		self._metric = metric
		self._derivative = derivative
		self._identifications = identifications

		if bounds is None:
			self.bounds = (-np.inf*np.ones(dimension),np.inf*np.ones(dimension))
		else:
			self.bounds = (np.array(bounds[0],dtype=float),np.array(bounds[1],dtype=float))

	def __repr__(self):
		return "<ChartMetric {0} dimension={1} signature={2}>".format(self.catalog_id or "custom",self.dimension,self.signature)

	@property
	def has_analytic_derivative(self):
		return self._derivative is not None

	@property
	def is_lorentzian(self):
		return self.signature==LORENTZIAN

	################
	#Chart handling#
	################

	def inBounds(self,x):
		x = np.asarray(x)
		return bool(np.all(x>self.bounds[0]) and np.all(x<self.bounds[1]))

	def checkPoint(self,x):

		x = np.asarray(x,dtype=float)
		if x.shape!=(self.dimension,):
			raise ChartDomainError("Point {0} does not have dimension {1}".format(x.tolist(),self.dimension))
		if not np.all(np.isfinite(x)) or not self.inBounds(x):
			raise ChartDomainError("Point {0} is outside of the chart bounds".format(x.tolist()))

		return x

	def images(self,x):

		"""
		All the chart representatives of the manifold point x (x itself first)

		"""

		x = np.asarray(x,dtype=float)
		if self._identifications is None:
			return [x]

		return [x] + [np.asarray(y,dtype=float) for y in self._identifications(x) if self.inBounds(y)]

	############################################
	#Raw evaluation (no checks, used in the ODE)#
	############################################

	def g(self,x):
		return np.asarray(self._metric(x),dtype=float)

	def dg(self,x):

		if self._derivative is not None:
			return np.asarray(self._derivative(x),dtype=float)

		return self.fdDerivative(x)

	def fdDerivative(self,x):

		x = np.asarray(x,dtype=float)
		h = fd_step(x)
		n = self.dimension
		dg = np.zeros((n,n,n))

		for k in range(n):
			e = np.zeros(n)
			e[k] = h[k]
			dg[k] = (self.g(x+e) - self.g(x-e))/(2*h[k])

		return dg

	def gammaRaw(self,x,g=None):

		if g is None:
			g = self.g(x)

		ginv = np.linalg.inv(g)
		return christoffel_from(ginv,self.dg(x))

	#######################
	#Checked evaluation####
	#######################

	def eval(self,x):

		"""
		Metric and inverse metric at x, with symmetry, degeneracy, inverse residual and signature checks

		:returns: (g,g^-1)

		:raises: :py:class:`ChartDomainError`, :py:class:`DegenerateMetricError`, :py:class:`SignatureError`

		"""

		x = self.checkPoint(x)
		g = self.g(x)
		norm = np.abs(g).max()

		if np.abs(g-g.T).max()>symmetry_tol*norm:
			raise DegenerateMetricError("Metric not symmetric at {0}".format(x.tolist()))

		if np.linalg.cond(g)>max_condition:
			raise DegenerateMetricError("Metric numerically singular at {0}".format(x.tolist()))

		ginv = np.linalg.inv(g)
		if np.abs(g.dot(ginv)-np.eye(self.dimension)).max()>inverse_tol:
			raise DegenerateMetricError("Metric inverse residual too large at {0}".format(x.tolist()))

		negative = (np.linalg.eigvalsh(g)<0).sum()
		expected = 1 if self.signature==LORENTZIAN else 0
		if negative!=expected:
			raise SignatureError("Metric at {0} has {1} negative eigenvalues, {2} signature requires {3}".format(x.tolist(),negative,self.signature,expected))

		return g,ginv

	def christoffel(self,x):

		"""
		Christoffel symbols Gamma^k_ij at x, indexed [k,i,j]

		"""

		g,ginv = self.eval(x)
		return christoffel_from(ginv,self.dg(x))

	#######################
	#Inner products########
	#######################

	def inner(self,x,u,v):
		return np.asarray(u).dot(self.g(x)).dot(np.asarray(v))

	def norm2(self,x,v):
		return self.inner(x,v,v)

	def causalClass(self,x,v,tol=class_tol):

		"""
		Causal class of v in T_xM: timelike if g(v,v) < -tol|v|^2, lightlike if |g(v,v)| <= tol|v|^2, spacelike otherwise

		"""

		if self.signature!=LORENTZIAN:
			raise SignatureError("Causal classes are defined for lorentzian metrics only")

		v = np.asarray(v,dtype=float)
		scale = v.dot(v)
		if scale==0.:
			return ZERO

		q = self.norm2(x,v)
		if q< -tol*scale:
			return TIMELIKE
		elif abs(q)<=tol*scale:
			return LIGHTLIKE
		else:
			return SPACELIKE

	def tangent(self,x,v):

		"""
		Build a :py:class:`TangentVec` with its causal class cached (None for riemannian metrics)

		"""

		x = self.checkPoint(x)
		cls = self.causalClass(x,v) if self.signature==LORENTZIAN else None
		return TangentVec(x,v,cls)

	def isFuturePointing(self,x,v,time_direction=None):

		"""
		A causal vector is future pointing if g(v,T) < 0 for the time orientation T (default d/dx^0)

		"""

		if time_direction is None:
			time_direction = np.zeros(self.dimension)
			time_direction[0] = 1.0

		return self.inner(x,v,time_direction)<0

	##########################
	#Sanity checks############
	##########################

	def validate(self,points,rtol=1e-6):

		"""
		Check symmetry, signature and (if supplied) the analytic derivative against central differences at the given points

		:returns: maximum relative derivative discrepancy
		:rtype: float.

		"""

		worst = 0.
		for x in points:
			self.eval(x)
			if self._derivative is not None:
				analytic = self.dg(x)
				numeric = self.fdDerivative(x)
				scale = max(np.abs(numeric).max(),1.0)
				worst = max(worst,np.abs(analytic-numeric).max()/scale)

		if worst>rtol:
			raise DegenerateMetricError("Analytic metric derivative disagrees with finite differences (relative error {0:.2e})".format(worst))

		return worst


##################################################
############Module level operations###############
##################################################

def christoffel_from(ginv,dg):

	"""
	Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij), with dg indexed [k,i,j] = d_k g_ij

	"""

	t = np.einsum("ilj->lij",dg) + np.einsum("jli->lij",dg) - dg
	return 0.5*np.einsum("kl,lij->kij",ginv,t)

def eval_metric(m,x):
	return m.eval(x)

def christoffel(m,x):
	return m.christoffel(x)

def causal_class(m,v):

	"""
	:param v: tangent vector
	:type v: :py:class:`TangentVec`

	"""

	return m.causalClass(v.base,v.vec)

def compatibility_residual(m,x):

	"""
	Metric compatibility residual max|d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|

	"""

	g,ginv = m.eval(x)
	dg = m.dg(x)
	gamma = christoffel_from(ginv,dg)
	lowered = np.einsum("lki,lj->kij",gamma,g)
	return np.abs(dg - lowered - np.einsum("kij->kji",lowered)).max()
