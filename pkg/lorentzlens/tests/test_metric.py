import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..geometry import ChartMetric,TangentVec,DomainSpec,boundary_frame,second_fundamental_form,eval_metric,christoffel,causal_class,LORENTZIAN,RIEMANNIAN,TIMELIKE,LIGHTLIKE,SPACELIKE,ZERO
from ..geometry.metric import compatibility_residual
from ..geometry.domain import INTERIOR,COLLAR,BOUNDARY,EXTERIOR
from ..utils.exceptions import ChartDomainError,DegenerateMetricError,SignatureError,DegenerateBoundaryError,PreconditionError

#Catalog metrics shared by the tests
minkowski,_ = catalog.load("minkowski")
polar,_ = catalog.load("minkowski_polar")
slab,slab_domain = catalog.load("minkowski_slab",dict(L=1.))
cylinder,cylinder_domain = catalog.load("minkowski_cylinder",dict(R=1.))
annulus,annulus_domain = catalog.load("minkowski_annulus",dict(r0=0.5,R=1.))

def test_minkowski_eval():

	g,ginv = eval_metric(minkowski,np.array([0.3,-1.,2.]))
	assert_allclose(g,np.diag([-1.,1.,1.]))
	assert np.abs(g.dot(ginv)-np.eye(3)).max()<1e-10

def test_polar_eval():

	g,_ = polar.eval(np.array([0.,0.5,0.]))
	assert_allclose(g,np.diag([-1.,1.,0.25]))

def test_out_of_chart():

	with pytest.raises(ChartDomainError):
		polar.eval(np.array([0.,-0.5,0.]))

	with pytest.raises(ChartDomainError):
		minkowski.eval(np.array([0.,1.]))

def test_degenerate_metric():

	m = ChartMetric(2,lambda x:np.array([[0.,0.],[0.,1.]]),signature=RIEMANNIAN)
	with pytest.raises(DegenerateMetricError):
		m.eval(np.zeros(2))

	with pytest.raises(DegenerateMetricError):
		ChartMetric(2,lambda x:np.array([[1.,0.5],[0.,1.]]),signature=RIEMANNIAN).eval(np.zeros(2))

def test_wrong_signature():

	m = ChartMetric(2,lambda x:np.eye(2),signature=LORENTZIAN)
	with pytest.raises(SignatureError):
		m.eval(np.zeros(2))

	with pytest.raises(SignatureError):
		ChartMetric(2,lambda x:np.eye(2),signature="kleinian")

def test_polar_christoffel():

	r = 0.7
	gamma = christoffel(polar,np.array([0.,r,0.]))

	#Gamma^r_thetatheta = -r, Gamma^theta_rtheta = 1/r
	assert_allclose(gamma[1,2,2],-r,rtol=1e-12)
	assert_allclose(gamma[2,1,2],1./r,rtol=1e-12)
	assert_allclose(gamma[2,2,1],1./r,rtol=1e-12)
	assert np.abs(gamma[0]).max()==0.

def test_analytic_derivatives():

	rng = np.random.RandomState(3)
	points = np.column_stack((rng.uniform(size=10),0.2+0.5*rng.uniform(size=10),rng.uniform(size=10)))

	for name in ["minkowski_polar","product_sphere","product_conformal"]:
		m,_ = catalog.load(name)
		assert m.validate(points)<1e-6

	perturbed,_ = catalog.load("jet_perturbed",dict(m=2,s=0.1))
	ring = np.column_stack((np.zeros(5),0.85*np.cos(np.arange(5)),0.85*np.sin(np.arange(5))))
	assert perturbed.validate(ring)<1e-6

def test_finite_difference_fallback():

	analytic,_ = catalog.load("product_conformal")
	fd = ChartMetric(3,analytic.g,None,LORENTZIAN)
	x = np.array([0.,0.2,-0.1])

	assert not fd.has_analytic_derivative
	assert_allclose(fd.dg(x),analytic.dg(x),atol=1e-8)

def test_compatibility():

	sphere,_ = catalog.load("product_sphere")
	conformal,_ = catalog.load("product_conformal")

	assert compatibility_residual(sphere,np.array([0.,1.,0.5]))<1e-12
	assert compatibility_residual(conformal,np.array([0.,0.3,0.2]))<1e-12

def test_causal_classes():

	x = np.zeros(3)
	assert minkowski.causalClass(x,[1.,1.,0.])==LIGHTLIKE
	assert minkowski.causalClass(x,[1.,0.,0.])==TIMELIKE
	assert minkowski.causalClass(x,[0.,1.,0.])==SPACELIKE
	assert minkowski.causalClass(x,[0.,0.,0.])==ZERO
	assert causal_class(minkowski,minkowski.tangent(x,[1.,0.6,0.8]))==LIGHTLIKE

	with pytest.raises(SignatureError):
		catalog.load("euclidean_disk")[0].causalClass(np.zeros(2),[1.,0.])

def test_tangent_vec_immutable():

	v = minkowski.tangent(np.zeros(3),[1.,0.,0.])
	assert v.causal_class==TIMELIKE

	with pytest.raises(AttributeError):
		v.vec = np.ones(3)

	with pytest.raises(ValueError):
		v.vec[0] = 2.

	assert v.reversed().vec[0]==-1.

def test_domain_classification():

	assert slab_domain.classify(np.array([0.,0.,0.5]))==INTERIOR
	assert slab_domain.classify(np.array([0.,0.,0.1]))==COLLAR
	assert slab_domain.classify(np.array([0.,0.,0.]))==BOUNDARY
	assert slab_domain.classify(np.array([0.,0.,1.5]))==EXTERIOR

def test_slab_frame():

	frame = boundary_frame(slab,slab_domain,np.zeros(3))
	g = slab.g(np.zeros(3))

	assert_allclose(frame.outward_normal,[0.,0.,-1.],atol=1e-12)
	assert_allclose(frame.outward_normal.dot(g).dot(frame.outward_normal),1.,atol=1e-10)
	for e in frame.tangent_basis:
		assert abs(frame.outward_normal.dot(g).dot(e))<1e-10

	#Timelike tangent first
	assert frame.timelike_tangent.dot(g).dot(frame.timelike_tangent)<0

def test_annulus_inner_normal():

	x = annulus_domain.boundaryPoint([0.,0.],component=1)
	frame = boundary_frame(annulus,annulus_domain,x)
	assert_allclose(frame.outward_normal,[0.,-1.,0.],atol=1e-12)

def test_frame_off_boundary():

	with pytest.raises(PreconditionError):
		boundary_frame(slab,slab_domain,np.array([0.,0.,0.5]))

def test_degenerate_boundary():

	d = DomainSpec(lambda x:x[2]**2,lambda x:np.array([0.,0.,2*x[2]]))
	with pytest.raises(DegenerateBoundaryError):
		boundary_frame(minkowski,d,np.zeros(3))

def test_spacelike_boundary():

	#The hypersurface t=0 is not timelike
	d = DomainSpec(lambda x:x[0],lambda x:np.array([1.,0.,0.]))
	with pytest.raises(SignatureError):
		boundary_frame(minkowski,d,np.zeros(3))

def test_second_fundamental_form():

	x = np.array([0.,1.,0.])
	for b in (0.3,0.5,0.8):
		assert_allclose(second_fundamental_form(cylinder,cylinder_domain,x,[1.,0.,b]),b**2,rtol=1e-10)

	assert abs(second_fundamental_form(slab,slab_domain,np.zeros(3),[1.,0.3,0.]))<1e-14

	#The inner circle of the annulus is concave
	inner = annulus_domain.boundaryPoint([0.,0.],component=1)
	assert second_fundamental_form(annulus,annulus_domain,inner,[1.,0.,0.5])<0

	with pytest.raises(PreconditionError):
		second_fundamental_form(cylinder,cylinder_domain,x,[1.,-0.5,0.])
