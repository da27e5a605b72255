import logging

import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..rigidity import TimeSeparationField,CLOSED_FORM,SHOOTING,CHAIN
from ..rigidity.timesep import segment_minimum,chain_slack
from ..rigidity import causal_boundary_class,cut_locus_probe,recover_null_direction_via_gradient,CHRONOLOGICAL,NULL_BOUNDARY,NON_CAUSAL,CONJUGATE_POINT
from ..rigidity import ObstacleRegion,exterior_lightlike_traveltime
from ..rigidity import boundary_lightcone_id,null_residuals
from ..rigidity import IsometryCandidate,construct_isometry,verify_isometry
from ..scattering import build_scattering_table,COMPLETE
from ..utils.exceptions import DifferentialError,PreconditionError

logging.basicConfig(level=logging.DEBUG)

minkowski,_ = catalog.load("minkowski")
cylinder,cylinder_domain = catalog.load("minkowski_cylinder",dict(R=1.))
annulus,annulus_domain = catalog.load("minkowski_annulus",dict(r0=0.5,R=1.))

exact = TimeSeparationField(minkowski,method=CLOSED_FORM)

#####################################################
###############Time separation#######################
#####################################################

def test_chain_minkowski():

	field = TimeSeparationField(minkowski,method=CHAIN)
	value = field.evaluate(np.zeros(3),[2.,1.,0.])

	assert value.method==CHAIN
	assert_allclose(value.value,np.sqrt(3.),rtol=1e-6)

	rng = np.random.RandomState(5)
	for k in range(100):
		x = rng.uniform(-1,1,size=3)
		y = x + np.array([2.,0.,0.]) + 0.6*np.concatenate(([0.],rng.uniform(-1,1,size=2)))
		assert_allclose(field(x,y),exact(x,y),rtol=1e-6)

def test_chain_annulus():

	x,y = np.array([0.,1.,0.]),np.array([3.,-1.,0.])

	#The optimal curve wraps around the hole: two tangent segments and an arc of the inner circle
	length = np.sqrt(3.) + np.pi/6
	d = np.sqrt(9.-length**2)

	coarse = TimeSeparationField(annulus,annulus_domain,method=CHAIN,chain_max_segments=8)(x,y)
	fine = TimeSeparationField(annulus,annulus_domain,method=CHAIN,chain_max_segments=16)(x,y)

	#Chains never cut through the hole, and refinement never loses proper time
	assert coarse<=d+1e-9
	assert fine<=d+1e-9
	assert fine>=coarse
	assert_allclose(fine,d,rtol=2e-2)

def test_segment_minimum():

	#A dip between the coarse samples
	assert_allclose(segment_minimum(lambda s:(s-0.3)**2-1e-4),-1e-4,atol=1e-12)
	assert_allclose(segment_minimum(lambda s:s*(1.-s)),0.,atol=1e-14)
	assert segment_minimum(lambda s:2.)==2.

	#A chord clipping the inner circle between the sampled fractions
	a,b = np.array([0.,0.8,-0.499]),np.array([1.,-0.4,-0.499])
	values = [annulus_domain.phi(a+s*(b-a)) for s in np.linspace(0.,1.,9)]
	assert min(values)>0
	assert segment_minimum(lambda s:annulus_domain.phi(a+s*(b-a)))<0

def test_separation_grid():

	points = np.array([[1.,0.,0.],[1.,1.,0.],[0.,1.,0.],[2.,0.,1.]])
	assert_allclose(exact.grid(np.zeros(3),points),[1.,0.,0.,np.sqrt(3.)],atol=1e-12)

def _causal_triples(count,seed):

	rng = np.random.RandomState(seed)
	triples = list()
	for k in range(count):
		x = rng.uniform(-1,1,size=3)
		y = x + np.concatenate(([1.],0.4*rng.uniform(-1,1,size=2)))
		z = y + np.concatenate(([1.],0.4*rng.uniform(-1,1,size=2)))
		triples.append((x,y,z))

	return triples

def test_reverse_triangle():

	assert not exact.triangleViolations(_causal_triples(1000,2))

	chain = TimeSeparationField(minkowski,method=CHAIN,chain_max_segments=8)
	assert not chain.triangleViolations(_causal_triples(10,3),slack=chain_slack)

#####################################################
###############Causal structure######################
#####################################################

def test_causal_boundary_class():

	x = np.zeros(3)
	assert causal_boundary_class(exact,x,[2.,1.,0.])==CHRONOLOGICAL
	assert causal_boundary_class(exact,x,[1.,1.,0.])==NULL_BOUNDARY
	assert causal_boundary_class(exact,x,[0.,1.,0.])==NON_CAUSAL

def test_sphere_cut_locus():

	sphere,_ = catalog.load("product_sphere")
	field = TimeSeparationField(sphere,method=SHOOTING)

	probe = cut_locus_probe(field,(np.array([0.,0.5*np.pi,0.]),np.array([1.,0.,1.])),4.)
	assert_allclose(probe.rho,np.pi,atol=1e-3)
	assert probe.witness==CONJUGATE_POINT

	with pytest.raises(PreconditionError):
		cut_locus_probe(field,(np.array([0.,0.5*np.pi,0.]),np.array([0.,0.,1.])),4.)

def test_gradient_null_direction():

	z1 = np.zeros(3)
	y = np.array([1.,1.,0.])

	#Approach from the future in time and from inside the light cone in space
	for offset in [np.array([1.,0.,0.]),np.array([0.,-1.,0.])]:
		approach = np.array([y + 2.**(-j)*offset for j in range(1,9)])
		u,w = recover_null_direction_via_gradient(exact,z1,y,approach)

		assert_allclose(u,[1.,1.,0.],atol=1e-5)
		assert_allclose(w,[1.,1.,0.],atol=1e-5)

	with pytest.raises(PreconditionError):
		recover_null_direction_via_gradient(exact,z1,y,[y+np.array([0.5,0.,0.])])

#####################################################
###############Exterior travel times#################
#####################################################

def test_exterior_single_disk():

	region = ObstacleRegion([[0.,0.]],[0.5])
	datum = exterior_lightlike_traveltime(exact,region,(np.array([0.,-2.,0.1]),np.array([1.,1.,0.])),i0=1.)

	half_chord = np.sqrt(0.24)
	assert datum.advances==1
	assert_allclose(datum.entry.base,[2.-half_chord,-half_chord,0.1],atol=1e-8)
	assert_allclose(datum.exit.base[1:],[half_chord,0.1],atol=1e-5)
	assert_allclose(datum.parameter,2.+half_chord,atol=1e-5)
	assert_allclose(datum.exit.vec,[1.,1.,0.],atol=1e-4)

def test_exterior_two_disks():

	region = ObstacleRegion([[-1.,0.],[1.,0.]],[0.3,0.3])
	datum = exterior_lightlike_traveltime(exact,region,(np.array([0.,-3.,0.05]),np.array([1.,1.,0.])),i0=1.)

	assert datum.advances==2
	assert [s["component"] for s in datum.steps]==[0,1]
	assert_allclose(datum.parameter,4.+np.sqrt(0.0875),atol=1e-5)
	assert datum.toDict()["advances"]==2

def test_exterior_miss():

	region = ObstacleRegion([[0.,0.]],[0.5])
	datum = exterior_lightlike_traveltime(exact,region,(np.array([0.,-2.,1.]),np.array([1.,1.,0.])),i0=1.)

	assert datum.advances==0
	assert datum.parameter is None and datum.entry is None

	with pytest.raises(PreconditionError):
		exterior_lightlike_traveltime(exact,region,(np.zeros(3),np.array([1.,1.,0.])),i0=1.)

#####################################################
###############Boundary light cones##################
#####################################################

def test_cylinder_lightcone():

	field = TimeSeparationField(cylinder,cylinder_domain,method=CLOSED_FORM)
	x = cylinder_domain.boundaryPoint([0.,0.])

	t,theta = np.meshgrid(np.linspace(0.,4.,41),np.linspace(-np.pi,np.pi,37),indexing="ij")
	grid = np.column_stack((t.ravel(),theta.ravel()))
	cone = boundary_lightcone_id(field,exact,cylinder_domain,x,grid)

	selected = cone.selected
	assert len(selected)>0
	assert selected["in_set"].all()

	#Selected points sit just below the chord arrival time 2|sin(theta/2)|
	arrival = 2*np.abs(np.sin(0.5*selected["u1"].values))
	lag = arrival - selected["u0"].values
	assert (lag>=-1e-12).all()
	assert (lag<3*0.1).all()

	#Away from x itself the refined points are null separated from x
	refined = cone.points()
	refined = refined[refined[:,0]>1e-3]
	assert_allclose(refined[:,0],2*np.abs(np.sin(0.5*np.arctan2(refined[:,2],refined[:,1]))),atol=1e-8)
	assert null_residuals(cylinder,x,refined).max()<1e-8

#####################################################
###############Isometry construction#################
#####################################################

def _interior_samples(count=12,seed=4):

	rng = np.random.RandomState(seed)
	radius = 0.6*np.sqrt(rng.uniform(size=count))
	angle = rng.uniform(-np.pi,np.pi,size=count)
	return np.column_stack((rng.uniform(0.,1.,size=count),radius*np.cos(angle),radius*np.sin(angle)))

def test_identity_isometry():

	table = build_scattering_table(cylinder,cylinder_domain,[[0.,0.],[0.5,1.]],dict(family="tilt",tilts=[0.],angles=[0.5,1.5]),kind=COMPLETE)
	points = _interior_samples()

	candidate = construct_isometry(cylinder,cylinder_domain,cylinder,lambda x:np.asarray(x,dtype=float),points,table1=table,table2=table)
	assert_allclose(candidate.images,points,atol=1e-7)
	assert verify_isometry(candidate,cylinder,cylinder)<1e-5
	assert candidate.max_error is not None

def test_rotation_isometry():

	c,s = np.cos(np.pi/6),np.sin(np.pi/6)
	rotation = np.array([[1.,0.,0.],[0.,c,-s],[0.,s,c]])
	phi0 = lambda x:rotation.dot(x) + np.array([1.,0.,0.])

	points = _interior_samples()
	candidate = construct_isometry(cylinder,cylinder_domain,cylinder,phi0,points)

	assert_allclose(candidate.images,[phi0(x) for x in points],atol=1e-4)
	assert candidate.max_discrepancy<1e-6
	assert verify_isometry(candidate,cylinder,cylinder)<1e-3

	#A stretched map is not an isometry
	stretched = IsometryCandidate(points,points*np.array([1.,1.05,1.05]),[])
	assert verify_isometry(stretched,cylinder,cylinder)>1e-2

	with pytest.raises(DifferentialError):
		verify_isometry(IsometryCandidate(points[:5],points[:5],[]),cylinder,cylinder)

	with pytest.raises(DifferentialError):
		verify_isometry(stretched,cylinder,cylinder,method="stencil")
