"""

.. module:: domain
	:platform: Unix
	:synopsis: Domains with boundary inside a chart: defining function, collar classification, boundary frames and second fundamental form


"""

from __future__ import division

import numpy as np

from .metric import LORENTZIAN,class_tol
from ..utils.algorithms import gradient,fd_step
from ..utils.exceptions import DegenerateBoundaryError,SignatureError,PreconditionError

#Point classes
INTERIOR = "interior"
COLLAR = "collar"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

event_tol = 1e-11
tangent_tol = 1e-8

##########################################
#############DomainSpec class#############
##########################################

class DomainSpec(object):

	"""
	Region {phi > 0} of a chart

	:param defining_fn: phi, interior iff phi > 0
	:type defining_fn: callable

	:param defining_gradient: dphi; central differences if None
	:type defining_gradient: callable

	:param defining_hessian: second derivatives of phi; central differences of the gradient if None
	:type defining_hessian: callable

	:param collar_width: width of the known collar region
	:type collar_width: float.

	:param chart_bounds: (lower,upper) valid chart box
	:type chart_bounds: tuple.

	:param depth: signed distance from the boundary (positive inside); phi/|dphi| if None
	:type depth: callable

	:param timelike_boundary: whether the induced boundary metric is lorentzian
	:type timelike_boundary: bool.

	:param parametrization: callback (u,component) -> boundary point, u a (n-1)-vector of boundary coordinates
	:type parametrization: callable

	"""

	def __init__(self,defining_fn,defining_gradient=None,collar_width=0.1,chart_bounds=None,defining_hessian=None,depth=None,timelike_boundary=True,parametrization=None,name=None):

		assert collar_width>0,"Collar width must be positive!"

		self.name = name
		self.collar_width = collar_width
		self.chart_bounds = chart_bounds
		self.timelike_boundary = timelike_boundary

		self._phi = defining_fn
		self._dphi = defining_gradient
		self._hessian = defining_hessian
		self._depth = depth
		self._parametrization = parametrization

	def __repr__(self):
		return "<DomainSpec {0} collar_width={1}>".format(self.name or "custom",self.collar_width)

	def phi(self,x):
		return float(self._phi(np.asarray(x,dtype=float)))

	def dphi(self,x):

		x = np.asarray(x,dtype=float)
		if self._dphi is not None:
			return np.asarray(self._dphi(x),dtype=float)

		return gradient(self.phi,x)

	def hessian(self,x):

		x = np.asarray(x,dtype=float)
		if self._hessian is not None:
			return np.asarray(self._hessian(x),dtype=float)

		h = fd_step(x)
		n = len(x)
		hess = np.zeros((n,n))
		for k in range(n):
			e = np.zeros(n)
			e[k] = h[k]
			hess[k] = (self.dphi(x+e) - self.dphi(x-e))/(2*h[k])

		return 0.5*(hess+hess.T)

	def depth(self,x):

		if self._depth is not None:
			return float(self._depth(np.asarray(x,dtype=float)))

		return self.phi(x)/np.linalg.norm(self.dphi(x))

	def classify(self,x,tol=event_tol):

		phi = self.phi(x)
		if abs(phi)<tol:
			return BOUNDARY
		elif phi<0:
			return EXTERIOR
		elif self.depth(x)<self.collar_width:
			return COLLAR
		else:
			return INTERIOR

	def boundaryPoint(self,u,component=0):

		"""
		Boundary point with boundary coordinates u (on the selected boundary component)

		"""

		if self._parametrization is None:
			raise NotImplementedError("This domain does not provide a boundary parametrization!")

		return np.asarray(self._parametrization(np.asarray(u,dtype=float),component),dtype=float)

	def transversality(self,x,v):

		"""
		Normalized transversality dphi(v)/(|dphi||v|), positive for inward pointing vectors

		"""

		dphi = self.dphi(x)
		v = np.asarray(v,dtype=float)
		return dphi.dot(v)/(np.linalg.norm(dphi)*np.linalg.norm(v))

	def validate(self,points):

		"""
		Check dphi != 0 at the given boundary points

		"""

		for x in points:
			if np.linalg.norm(self.dphi(x))<=1e-8:
				raise DegenerateBoundaryError("dphi vanishes at boundary point {0}".format(np.asarray(x).tolist()))


##########################################
#############BoundaryFrame################
##########################################

class BoundaryFrame(object):

	"""
	Outward unit normal and g-orthonormal tangent basis at a boundary point (timelike vector first in the lorentzian case)

	"""

	def __init__(self,point,outward_normal,tangent_basis,normal_norm):
		self.point = point
		self.outward_normal = outward_normal
		self.tangent_basis = tangent_basis
		self.normal_norm = normal_norm

	@property
	def inward_normal(self):
		return -self.outward_normal

	@property
	def timelike_tangent(self):
		return self.tangent_basis[0]

	def __repr__(self):
		return "<BoundaryFrame point={0} normal={1}>".format(self.point.tolist(),self.outward_normal.tolist())


def _normal_norm(m,d,x):

	dphi = d.dphi(x)
	if np.linalg.norm(dphi)<=1e-8:
		raise DegenerateBoundaryError("dphi vanishes at {0}".format(np.asarray(x).tolist()))

	ginv = np.linalg.inv(m.g(x))
	q = dphi.dot(ginv).dot(dphi)
	if q<=class_tol*dphi.dot(dphi):
		raise SignatureError("Boundary at {0} is not timelike: dphi is not spacelike".format(np.asarray(x).tolist()))

	return dphi,ginv,np.sqrt(q)


def boundary_frame(m,d,x,tol=event_tol):

	"""
	Boundary frame at x: nu = -grad(phi)/|dphi|_g and a g-orthonormal basis of ker dphi

	:param m: metric
	:type m: :py:class:`ChartMetric`

	:param d: domain
	:type d: :py:class:`DomainSpec`

	:raises: :py:class:`DegenerateBoundaryError`, :py:class:`SignatureError`, :py:class:`PreconditionError`

	"""

	x = m.checkPoint(x)
	if abs(d.phi(x))>=tol:
		raise PreconditionError("Point {0} is not on the boundary (phi={1:.3e})".format(x.tolist(),d.phi(x)))

	dphi,ginv,norm = _normal_norm(m,d,x)
	nu = -ginv.dot(dphi)/norm

	#Euclidean basis of ker dphi
	_,_,vt = np.linalg.svd(dphi[None])
	kernel = vt[1:].T

	#Orthonormalize with respect to the induced metric
	g = m.g(x)
	induced = kernel.T.dot(g).dot(kernel)
	eigenvalues,eigenvectors = np.linalg.eigh(induced)
	if np.abs(eigenvalues).min()<=class_tol*np.abs(eigenvalues).max():
		raise SignatureError("Induced boundary metric at {0} is degenerate (null restriction)".format(x.tolist()))

	negative = (eigenvalues<0).sum()
	if m.signature==LORENTZIAN and negative!=1:
		raise SignatureError("Induced boundary metric at {0} is not lorentzian".format(x.tolist()))

	basis = list()
	for k in np.argsort(eigenvalues):
		e = kernel.dot(eigenvectors[:,k])/np.sqrt(abs(eigenvalues[k]))
		if e[np.abs(e).argmax()]<0:
			e = -e
		basis.append(e)

	return BoundaryFrame(x,nu,np.array(basis),norm)


def second_fundamental_form(m,d,x,v,tol=tangent_tol):

	"""
	II(v,v) = g(nabla_v nu,v) = -Hess(phi)(v,v)/|dphi|_g for boundary tangent v; positive values certify strictly convex directions

	"""

	x = m.checkPoint(x)
	v = np.asarray(v,dtype=float)
	dphi = d.dphi(x)

	if abs(dphi.dot(v))>=tol*np.linalg.norm(v)*max(np.linalg.norm(dphi),1.0):
		raise PreconditionError("Vector {0} is not tangent to the boundary".format(v.tolist()))

	dphi,ginv,norm = _normal_norm(m,d,x)
	gamma = m.gammaRaw(x)
	covariant_hessian = d.hessian(x) - np.einsum("kij,k->ij",gamma,dphi)

	return -v.dot(covariant_hessian).dot(v)/norm
