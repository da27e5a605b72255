"""

.. module:: catalog
	:platform: Unix
	:synopsis: Built in analytic metrics and domains with closed form geodesic oracles


"""

from __future__ import division

from math import factorial

import numpy as np

from ..geometry.metric import ChartMetric,LORENTZIAN,RIEMANNIAN
from ..geometry.domain import DomainSpec

###################################################
###############Common building blocks##############
###################################################

def _minkowski_metric(n):
	eta = np.eye(n)
	eta[0,0] = -1.
	return eta

def minkowski_separation(x,y):

	"""
	Time separation of Minkowski space in cartesian coordinates

	"""

	delta = np.asarray(y,dtype=float) - np.asarray(x,dtype=float)
	if delta[0]<=0:
		return 0.
	return np.sqrt(max(delta[0]**2 - (delta[1:]**2).sum(),0.))

def minkowski_squared_separation(x,y):
	delta = np.asarray(y,dtype=float) - np.asarray(x,dtype=float)
	return delta[0]**2 - (delta[1:]**2).sum()

def _flat(n):
	eta = _minkowski_metric(n)
	zero = np.zeros((n,n,n))
	return (lambda x:eta),(lambda x:zero)

def _disk_domain(R,n,collar_width,name,center=None):

	"""
	Solid cylinder {r < R} over the (x^1,x^2) plane, phi = (R^2-r^2)/(2R)

	"""

	if center is None:
		center = np.zeros(2)
	center = np.asarray(center,dtype=float)

	def phi(x):
		s = x[1:3]-center
		return (R**2 - s.dot(s))/(2*R)

	def dphi(x):
		grad = np.zeros(n)
		grad[1:3] = -(x[1:3]-center)/R
		return grad

	hess = np.zeros((n,n))
	hess[1,1] = hess[2,2] = -1./R

	def depth(x):
		return R - np.linalg.norm(x[1:3]-center)

	def parametrization(u,component=0):
		x = np.zeros(n)
		x[0] = u[0]
		x[1:3] = center + R*np.array([np.cos(u[1]),np.sin(u[1])])
		x[3:] = u[2:]
		return x

	return DomainSpec(phi,dphi,collar_width=collar_width,defining_hessian=lambda x:hess,depth=depth,parametrization=parametrization,name=name)

###################################################
###############Catalog entries######################
###################################################

def minkowski(n=3):

	"""
	Minkowski space R^{1,n-1} in cartesian coordinates, without boundary

	"""

	metric,derivative = _flat(n)
	m = ChartMetric(n,metric,derivative,LORENTZIAN,catalog_id="minkowski",params=dict(n=n))
	m.closed_form_separation = minkowski_separation
	m.squared_separation = minkowski_squared_separation

	return m,None


def minkowski_polar():

	"""
	Minkowski space R^{1,2} in polar coordinates (t,r,theta): -dt^2 + dr^2 + r^2 dtheta^2

	"""

	def metric(x):
		return np.diag([-1.,1.,x[1]**2])

	def derivative(x):
		dg = np.zeros((3,3,3))
		dg[1,2,2] = 2*x[1]
		return dg

	bounds = ([-np.inf,0.,-np.inf],[np.inf,np.inf,np.inf])
	identifications = lambda x:[x+np.array([0.,0.,2*np.pi]),x-np.array([0.,0.,2*np.pi])]
	m = ChartMetric(3,metric,derivative,LORENTZIAN,bounds=bounds,catalog_id="minkowski_polar",identifications=identifications)

	return m,None


def minkowski_slab(L=1.0,n=3,collar_width=None):

	"""
	Slab {0 < x^n < L} of Minkowski space, phi = x^n(L-x^n); the last coordinate is normal to both faces

	"""

	if collar_width is None:
		collar_width = 0.25*L

	metric,derivative = _flat(n)
	m = ChartMetric(n,metric,derivative,LORENTZIAN,catalog_id="minkowski_slab",params=dict(L=L,n=n))
	m.closed_form_separation = minkowski_separation
	m.squared_separation = minkowski_squared_separation

	def phi(x):
		return x[-1]*(L-x[-1])

	def dphi(x):
		grad = np.zeros(n)
		grad[-1] = L - 2*x[-1]
		return grad

	hess = np.zeros((n,n))
	hess[-1,-1] = -2.

	def depth(x):
		return min(x[-1],L-x[-1])

	def parametrization(u,component=0):
		return np.concatenate([u,[0. if component==0 else L]])

	d = DomainSpec(phi,dphi,collar_width=collar_width,defining_hessian=lambda x:hess,depth=depth,parametrization=parametrization,name="minkowski_slab")
	return m,d


def minkowski_cylinder(R=1.0,n=3,chart="cartesian",collar_width=None):

	"""
	Solid cylinder {r < R} of Minkowski space, either in cartesian coordinates (t,x,y,...) or in boundary normal coordinates (t,theta,x^n) where g = -dt^2 + (R-x^n)^2 dtheta^2 + (dx^n)^2

	"""

	if collar_width is None:
		collar_width = 0.25*R

	if chart=="cartesian":

		metric,derivative = _flat(n)
		m = ChartMetric(n,metric,derivative,LORENTZIAN,catalog_id="minkowski_cylinder",params=dict(R=R,n=n,chart=chart))
		m.closed_form_separation = minkowski_separation
		m.squared_separation = minkowski_squared_separation
		return m,_disk_domain(R,n,collar_width,"minkowski_cylinder")

	elif chart=="boundary_normal":

		assert n==3,"Boundary normal chart is implemented in dimension 3 only"

		def metric(x):
			return np.diag([-1.,(R-x[2])**2,1.])

		def derivative(x):
			dg = np.zeros((3,3,3))
			dg[2,1,1] = -2*(R-x[2])
			return dg

		def to_cartesian(x):
			r = R - x[2]
			return np.array([x[0],r*np.cos(x[1]),r*np.sin(x[1])])

		bounds = ([-np.inf,-np.inf,-np.inf],[np.inf,np.inf,R])
		identifications = lambda x:[x+np.array([0.,2*np.pi,0.]),x-np.array([0.,2*np.pi,0.])]
		m = ChartMetric(3,metric,derivative,LORENTZIAN,bounds=bounds,catalog_id="minkowski_cylinder",identifications=identifications,params=dict(R=R,n=3,chart=chart))
		m.to_cartesian = to_cartesian
		m.closed_form_separation = lambda x,y:minkowski_separation(to_cartesian(x),to_cartesian(y))
		m.squared_separation = lambda x,y:minkowski_squared_separation(to_cartesian(x),to_cartesian(y))

		def parametrization(u,component=0):
			return np.array([u[0],u[1],0.])

		d = DomainSpec(lambda x:x[2],lambda x:np.array([0.,0.,1.]),collar_width=collar_width,defining_hessian=lambda x:np.zeros((3,3)),depth=lambda x:x[2],parametrization=parametrization,name="minkowski_cylinder")
		return m,d

	else:
		raise NotImplementedError("Chart {0} not implemented for the cylinder!".format(chart))


def minkowski_annulus(r0=0.5,R=1.0,n=3,collar_width=None):

	"""
	Annular cylinder {r0 < r < R} of Minkowski space, phi = (r-r0)(R-r); the inner circle is a non convex boundary component

	"""

	assert 0<r0<R,"Need 0 < r0 < R!"
	if collar_width is None:
		collar_width = 0.2*(R-r0)

	metric,derivative = _flat(n)
	m = ChartMetric(n,metric,derivative,LORENTZIAN,catalog_id="minkowski_annulus",params=dict(r0=r0,R=R,n=n))
	m.squared_separation = minkowski_squared_separation

	def phi(x):
		r = np.hypot(x[1],x[2])
		return (r-r0)*(R-r)

	def dphi(x):
		grad = np.zeros(n)
		r = np.hypot(x[1],x[2])
		if r==0.:
			return grad
		grad[1:3] = (r0+R-2*r)*x[1:3]/r
		return grad

	def hessian(x):
		hess = np.zeros((n,n))
		r = np.hypot(x[1],x[2])
		if r==0.:
			return hess
		e = x[1:3]/r
		fprime = r0 + R - 2*r
		hess[1:3,1:3] = -2*np.outer(e,e) + fprime*(np.eye(2)-np.outer(e,e))/r
		return hess

	def depth(x):
		r = np.hypot(x[1],x[2])
		return min(r-r0,R-r)

	def parametrization(u,component=0):
		x = np.zeros(n)
		radius = R if component==0 else r0
		x[0] = u[0]
		x[1:3] = radius*np.array([np.cos(u[1]),np.sin(u[1])])
		x[3:] = u[2:]
		return x

	d = DomainSpec(phi,dphi,collar_width=collar_width,defining_hessian=hessian,depth=depth,parametrization=parametrization,name="minkowski_annulus")
	return m,d


def product_sphere():

	"""
	Product of a time line with the round unit sphere, -dt^2 + dtheta^2 + sin^2(theta) dvarphi^2

	"""

	def metric(x):
		return np.diag([-1.,1.,np.sin(x[1])**2])

	def derivative(x):
		dg = np.zeros((3,3,3))
		dg[1,2,2] = 2*np.sin(x[1])*np.cos(x[1])
		return dg

	bounds = ([-np.inf,0.,-3*np.pi],[np.inf,np.pi,3*np.pi])
	identifications = lambda x:[x+np.array([0.,0.,2*np.pi]),x-np.array([0.,0.,2*np.pi])]
	m = ChartMetric(3,metric,derivative,LORENTZIAN,bounds=bounds,catalog_id="product_sphere",identifications=identifications,injectivity_scale=np.pi)

	return m,None


def product_conformal(a=0.2,sigma=0.5,center=(0.,0.),R=1.0,collar_width=None):

	"""
	-dt^2 + c(x)^2 (dx^2 + dy^2) with c = 1 + a exp(-|x-center|^2/sigma^2), restricted to the disk r < R

	"""

	center = np.asarray(center,dtype=float)
	if collar_width is None:
		collar_width = 0.25*R

	def conformal(x):
		s = x[1:3]-center
		bump = a*np.exp(-s.dot(s)/sigma**2)
		return 1.+bump,-2*bump*s/sigma**2

	def metric(x):
		c,_ = conformal(x)
		return np.diag([-1.,c**2,c**2])

	def derivative(x):
		c,dc = conformal(x)
		dg = np.zeros((3,3,3))
		for k in (1,2):
			dg[k,1,1] = dg[k,2,2] = 2*c*dc[k-1]
		return dg

	m = ChartMetric(3,metric,derivative,LORENTZIAN,catalog_id="product_conformal",params=dict(a=a,sigma=sigma,R=R))
	if a==0:
		m.closed_form_separation = minkowski_separation
		m.squared_separation = minkowski_squared_separation

	return m,_disk_domain(R,3,collar_width,"product_conformal")


def euclidean_disk(R=1.0,collar_width=None):

	"""
	Riemannian unit disk of the euclidean plane

	"""

	if collar_width is None:
		collar_width = 0.25*R

	identity = np.eye(2)
	zero = np.zeros((2,2,2))
	m = ChartMetric(2,lambda x:identity,lambda x:zero,RIEMANNIAN,catalog_id="euclidean_disk",params=dict(R=R))

	def parametrization(u,component=0):
		return R*np.array([np.cos(u[0]),np.sin(u[0])])

	hess = -np.eye(2)/R
	d = DomainSpec(lambda x:(R**2-x.dot(x))/(2*R),lambda x:-x/R,collar_width=collar_width,defining_hessian=lambda x:hess,depth=lambda x:R-np.linalg.norm(x),timelike_boundary=False,parametrization=parametrization,name="euclidean_disk")

	return m,d

###################################################
###########Perturbed jets near the boundary########
###################################################

def _cutoff(d,width):

	"""
	Smooth cutoff chi(|d|): 1 for |d| <= width/2, 0 for |d| >= width; returns (chi,dchi/dd)

	"""

	half = 0.5*width
	u = (abs(d)-half)/half
	if u<=0:
		return 1.,0.
	if u>=1:
		return 0.,0.

	f = lambda s:np.exp(-1./s)
	fp = lambda s:np.exp(-1./s)/s**2
	a,b = f(1-u),f(u)
	chi = a/(a+b)
	dchi_du = -(fp(1-u)*b + a*fp(u))/(a+b)**2

	return chi,dchi_du*np.sign(d)/half


def _dtheta2(x):

	"""
	dtheta (x) dtheta in the (x,y) plane of a cartesian (t,x,y) chart, and its derivative [k,i,j]

	"""

	n = len(x)
	X,Y = x[1],x[2]
	r2 = X**2 + Y**2

	theta = np.zeros(n)
	theta[1],theta[2] = -Y/r2,X/r2

	dtheta = np.zeros((n,n))
	dtheta[1,1] = 2*X*Y/r2**2
	dtheta[2,1] = dtheta[1,2] = (Y**2-X**2)/r2**2
	dtheta[2,2] = -2*X*Y/r2**2

	q = np.outer(theta,theta)
	dq = np.einsum("ki,j->kij",dtheta,theta) + np.einsum("i,kj->kij",theta,dtheta)

	return q,dq


def jet_perturbed(base="minkowski_cylinder",m=2,s=0.1,q="dtheta2",width=0.3,base_params=None):

	"""
	Perturbation g_s = g_0 + s chi(d) d^m/m! q of a base catalog metric, d the boundary depth; the perturbation vanishes to order m at the boundary

	:param q: "dtheta2" (cylinder only), "zero", or a constant symmetric matrix
	:type q: str. or array

	"""

	assert m>=1,"The perturbation order must be at least 1"

	if base_params is None:
		base_params = dict()
	metric0,domain = load(base,base_params)
	n = metric0.dimension

	if isinstance(q,str) and q=="dtheta2":
		assert base=="minkowski_cylinder","dtheta2 perturbations are defined on the cylinder"
		qfield = _dtheta2
	elif isinstance(q,str) and q=="zero":
		qfield = lambda x:(np.zeros((n,n)),np.zeros((n,n,n)))
	else:
		Q = np.asarray(q,dtype=float)
		assert Q.shape==(n,n)
		qfield = lambda x:(Q,np.zeros((n,n,n)))

	mfact = factorial(m)
	mfact1 = factorial(m-1)

	def profile(x):
		d = domain.depth(x)
		chi,dchi = _cutoff(d,width)
		return d,chi*d**m/mfact,dchi*d**m/mfact + chi*d**(m-1)/mfact1

	def metric(x):
		d,p,_ = profile(x)
		if p==0.:
			return metric0.g(x)
		Q,_ = qfield(x)
		return metric0.g(x) + s*p*Q

	def derivative(x):

		dg = metric0.dg(x)
		d,p,dp = profile(x)
		if p==0. and dp==0.:
			return dg

		Q,dQ = qfield(x)
		dd = domain.dphi(x)/np.linalg.norm(domain.dphi(x))

		return dg + s*(dp*np.einsum("k,ij->kij",dd,Q) + p*dQ)

	params = dict(base=base,m=m,s=s,width=width)
	if isinstance(q,str):
		params["q"] = q
	pert = ChartMetric(n,metric,derivative,metric0.signature,bounds=metric0.bounds,catalog_id="jet_perturbed",params=params)
	pert.base = metric0
	pert.qfield = qfield

	return pert,domain

###################################################
################Catalog registry####################
###################################################

catalogs = {

"minkowski" : (minkowski,"Minkowski space in cartesian coordinates, no boundary"),
"minkowski_polar" : (minkowski_polar,"Minkowski space in polar coordinates, no boundary"),
"minkowski_slab" : (minkowski_slab,"Flat slab between two timelike hyperplanes"),
"minkowski_cylinder" : (minkowski_cylinder,"Flat solid cylinder, strictly null convex boundary"),
"minkowski_annulus" : (minkowski_annulus,"Flat annular cylinder with a non convex inner boundary"),
"product_sphere" : (product_sphere,"Time line times the round 2-sphere, conjugate points at pi"),
"product_conformal" : (product_conformal,"Conformally flat disk with a gaussian bump"),
"euclidean_disk" : (euclidean_disk,"Riemannian euclidean disk"),
"jet_perturbed" : (jet_perturbed,"Base catalog metric perturbed at order m in the boundary depth"),

}

def load(name,params=None):

	"""
	Build a catalog metric and its domain

	:param name: catalog name
	:type name: str.

	:param params: keyword parameters of the catalog builder
	:type params: dict.

	:returns: (metric,domain) with domain None for catalogs without boundary
	:rtype: tuple

	"""

	if name not in catalogs:
		raise ValueError("Catalog metric {0} not recognized! Available: {1}".format(name,", ".join(sorted(catalogs.keys()))))

	if params is None:
		params = dict()

	return catalogs[name][0](**params)
