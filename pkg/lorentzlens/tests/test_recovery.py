import logging

import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..geometry import TangentVec
from ..scattering import interior_scattering,complete_scattering,build_scattering_table,cone_direction,INTERIOR,COMPLETE
from ..recovery import traced_family,variation_terms,variation_residual,eikonal_residual,VariationFamily
from ..recovery import DirectInteriorOracle,TableInteriorOracle,close_under_flow,recover_interior_from_complete,recover_lightlike_tau_interior,recover_lightlike_table,recover_complete_from_interior,collar_delta,CollarStepper
from ..utils.exceptions import UndefinedDerivativeError,InterpolationError,ConsistencyError

logging.basicConfig(level=logging.DEBUG)

slab,slab_domain = catalog.load("minkowski_slab",dict(L=1.))
cylinder,cylinder_domain = catalog.load("minkowski_cylinder",dict(R=1.))
annulus,annulus_domain = catalog.load("minkowski_annulus",dict(r0=0.5,R=1.))
conformal,conformal_domain = catalog.load("product_conformal")

#Directions near the light cone on the annulus, two of them graze the inner circle
annulus_cone = dict(family="tilt",tilts=[0.,0.05],angles=[np.pi/3,0.5*np.pi,2*np.pi/3])
annulus_grid = [[0.,0.],[0.5,1.],[1.,-2.]]

#Near null cone over four boundary points, 208 directions in all
round_trip_grid = [[0.,0.],[0.5,1.],[1.,-2.],[1.5,2.5]]
round_trip_cone = dict(family="tilt",tilts=[0.,0.02,0.05,0.1],angles=list(np.linspace(0.35,2.8,12))+[np.pi/3])

#####################################################
###############First variation#######################
#####################################################

def test_slab_first_variation():

	family = traced_family(slab,slab_domain,lambda l:(np.zeros(3),np.array([1.,0.,0.5+l])),10.)
	lhs,rhs,data = variation_terms(family)

	assert_allclose(data["h"],-0.75,atol=1e-14)
	assert_allclose(data["h_prime"],1.,atol=1e-8)
	assert_allclose(data["tau_prime"],-4.,atol=1e-7)
	assert_allclose(data["y_prime"],[-4.,0.,0.],atol=1e-7)
	assert_allclose(lhs,8.,atol=1e-6)
	assert_allclose(rhs,8.,atol=1e-6)
	assert variation_residual(family)<1e-8

def test_sliding_family():

	family = traced_family(slab,slab_domain,lambda l:(np.array([0.,l,0.]),np.array([1.,0.,0.5])),10.)
	lhs,rhs,_ = variation_terms(family)

	assert abs(lhs)<1e-8 and abs(rhs)<1e-8

def test_random_families():

	rng = np.random.RandomState(11)

	for m,d,center in [(cylinder,cylinder_domain,np.zeros(3)),(conformal,conformal_domain,np.zeros(3))]:
		for k in range(5):

			x = center + np.array([0.,0.3,0.])*rng.uniform(-1,1) + np.array([0.,0.,0.3])*rng.uniform(-1,1)
			direction = rng.normal(size=2)
			direction /= np.linalg.norm(direction)
			a = rng.normal(size=3)

			starts = lambda l,x=x,direction=direction,a=a:(x+l*np.array([0.,a[1],a[2]]),np.concatenate(([1.],0.5*direction))+l*a)
			family = traced_family(m,d,starts,10.)
			_,rhs,_ = variation_terms(family)

			assert variation_residual(family)<1e-5*max(1.,abs(rhs))

def test_family_without_endpoints():

	family = VariationFamily(slab,lambda l:(np.zeros(3),np.array([1.,0.,0.5+l])))
	with pytest.raises(UndefinedDerivativeError):
		variation_residual(family)

def test_eikonal():

	y = cylinder_domain.boundaryPoint([3.,0.])
	points = [[0.,0.,0.],[0.2,0.3,-0.1],[0.5,-0.2,0.4]]
	assert eikonal_residual(cylinder,y,points).max()<1e-4

	residuals = eikonal_residual(conformal,np.array([3.,0.5,0.]),[[0.,0.,0.],[0.1,0.2,0.1]])
	assert residuals.max()<1e-4

#####################################################
###############Interior from complete################
#####################################################

def _compare_with_direct(table,m,d,relation,rtol=1e-4,atol=1e-6):

	for s in table.samples():
		direct = relation(m,d,s.inbound,10.)
		assert_allclose(s.tau,direct.tau,rtol=rtol)
		assert_allclose(s.outbound.base,direct.outbound.base,atol=atol)
		assert_allclose(s.outbound.vec,direct.outbound.vec,atol=atol)

def test_slab_interior_equals_complete():

	complete = build_scattering_table(slab,slab_domain,[[0.,0.],[0.5,0.5]],dict(family="tilt",tilts=[0.,0.3],angles=[0.3,1.,2.]),kind=COMPLETE)
	interior = recover_interior_from_complete(complete)

	assert (interior["kind"]==INTERIOR).all()
	assert (interior["provenance"]=="recovered_interior").all()
	assert_allclose(interior["tau"].values.astype(float),complete["tau"].values.astype(float),rtol=1e-14)

def test_annulus_interior_from_complete():

	complete = build_scattering_table(annulus,annulus_domain,annulus_grid,annulus_cone,kind=COMPLETE)
	closed = close_under_flow(annulus,annulus_domain,complete,10.)

	#The grazing directions add their tangential states
	assert closed.nsamples>complete.nsamples

	interior = recover_interior_from_complete(closed)
	_compare_with_direct(interior,annulus,annulus_domain,interior_scattering)

	#Tangent chord: interior travel time to the graze
	x = annulus_domain.boundaryPoint([0.,0.])
	row = interior.lookup(TangentVec(x,cone_direction(annulus,annulus_domain,x,0.,np.pi/3)))
	assert row is not None
	assert_allclose(interior["tau"].iloc[row],0.5*np.sqrt(3.),atol=1e-6)
	assert_allclose(closed["tau"].iloc[closed.lookup(interior.inbound(row))],np.sqrt(3.),atol=1e-8)

#####################################################
###############Lightlike interior travel time########
#####################################################

def test_lightlike_slab():

	oracle = DirectInteriorOracle(slab,slab_domain,10.)
	outbound,tau = recover_lightlike_tau_interior(oracle,slab,slab_domain,TangentVec(np.zeros(3),np.array([1.,0.,1.])))

	assert_allclose(tau,1.,rtol=1e-6)
	assert_allclose(outbound.base,[1.,0.,1.],atol=1e-9)

def test_lightlike_cylinder():

	oracle = DirectInteriorOracle(cylinder,cylinder_domain,10.)
	x = cylinder_domain.boundaryPoint([0.,0.])

	_,tau = recover_lightlike_tau_interior(oracle,cylinder,cylinder_domain,TangentVec(x,np.array([1.,-1.,0.])))
	assert_allclose(tau,2.,rtol=1e-4)

	targets = [TangentVec(x,cone_direction(cylinder,cylinder_domain,x,0.,a)) for a in np.linspace(0.3,2.8,6)]
	table = recover_lightlike_table(oracle,cylinder,cylinder_domain,targets)

	assert table.nsamples==len(targets)
	assert (table["provenance"]=="recovered_lightlike").all()
	for s in table.samples():
		assert_allclose(s.tau,interior_scattering(cylinder,cylinder_domain,s.inbound,10.).tau,rtol=1e-4)

#####################################################
###############Table oracle##########################
#####################################################

def test_table_oracle():

	table = build_scattering_table(slab,slab_domain,[[0.,0.]],dict(family="tilt",tilts=[0.1,0.11,0.12],angles=list(np.linspace(1.2,1.4,5))),kind=INTERIOR)
	oracle = TableInteriorOracle(table,neighbours=4,max_distance=0.05)

	#Stored states come back unchanged
	stored = table.sample(4)
	assert_allclose(oracle.query(stored.inbound).tau,stored.tau,rtol=1e-14)

	#In between the table is interpolated
	x = np.zeros(3)
	v = cone_direction(slab,slab_domain,x,0.105,1.3)
	assert_allclose(oracle.query(TangentVec(x,v)).tau,interior_scattering(slab,slab_domain,(x,v),10.).tau,rtol=1e-2)

	with pytest.raises(InterpolationError):
		oracle.query(TangentVec(x,cone_direction(slab,slab_domain,x,0.5,0.5)))

	with pytest.raises(ValueError):
		TableInteriorOracle(build_scattering_table(slab,slab_domain,[[0.,0.]],dict(family="tilt",tilts=[0.1],angles=[1.]),kind=COMPLETE))

#####################################################
###############Complete from interior################
#####################################################

def test_slab_complete_from_interior():

	oracle = DirectInteriorOracle(slab,slab_domain,10.)
	x = np.zeros(3)
	starts = [TangentVec(x,cone_direction(slab,slab_domain,x,tilt,a)) for tilt in (0.,0.3) for a in (0.6,1.2,2.)]

	table = recover_complete_from_interior(oracle,slab,slab_domain,starts,10.,lightlike_step2=False)
	assert table.nsamples==len(starts)
	assert table["converged"].all()
	_compare_with_direct(table,slab,slab_domain,complete_scattering,rtol=1e-8)

def test_slab_exterior_variation():

	oracle = DirectInteriorOracle(slab,slab_domain,10.)
	stepper = CollarStepper(oracle,slab,slab_domain,10.,collar_delta(slab,slab_domain,[np.zeros(3)],10.))

	result = stepper.recover(TangentVec(np.zeros(3),np.array([1.,0.,1.])))
	assert_allclose(result.sample.tau,1.,rtol=1e-9)
	assert_allclose(result.tau_step2,1.,rtol=1e-4)

def test_annulus_complete_from_interior():

	oracle = DirectInteriorOracle(annulus,annulus_domain,10.)
	delta = collar_delta(annulus,annulus_domain,[annulus_domain.boundaryPoint([0.,0.])],10.)
	assert delta>0

	x = annulus_domain.boundaryPoint([0.,0.])
	starts = [TangentVec(x,cone_direction(annulus,annulus_domain,x,tilt,a)) for tilt in (0.,0.05) for a in (np.pi/3,0.5*np.pi)]

	table = recover_complete_from_interior(oracle,annulus,annulus_domain,starts,10.,delta=delta,lightlike_step2=False)
	assert table.nsamples==len(starts)
	assert (table["iterations"]<=int(np.ceil(10./delta))+1).all()
	_compare_with_direct(table,annulus,annulus_domain,complete_scattering,atol=1e-5)

	#Tangent chord: the complete travel time runs past the graze to the outer circle
	graze = table.lookup(starts[0])
	assert_allclose(table["tau"].iloc[graze],np.sqrt(3.),rtol=1e-4)

def _impact_start(b):

	#Lightlike chord from (1,0) with distance b from the axis
	return TangentVec(annulus_domain.boundaryPoint([0.,0.]),np.array([1.,-np.sqrt(1.-b**2),b]))

def test_annulus_near_tangent():

	oracle = DirectInteriorOracle(annulus,annulus_domain,10.)
	x = annulus_domain.boundaryPoint([0.,0.])
	delta = collar_delta(annulus,annulus_domain,[x],10.)
	stepper = CollarStepper(oracle,annulus,annulus_domain,10.,delta)

	#Just inside the inner circle the chord ends there, just outside it runs to the outer circle
	for b,tau in [(0.499,np.sqrt(1.-0.499**2)-np.sqrt(0.25-0.499**2)),(0.501,2*np.sqrt(1.-0.501**2))]:

		start = _impact_start(b)
		sample,anchors,converged = stepper.step1(start)
		direct = complete_scattering(annulus,annulus_domain,start,10.)

		assert converged
		assert_allclose(sample.tau,tau,rtol=1e-6)
		assert_allclose(sample.tau,direct.tau,rtol=1e-4)
		assert_allclose(sample.outbound.base,direct.outbound.base,atol=1e-5)
		assert_allclose(sample.outbound.vec,direct.outbound.vec,atol=1e-5)

		assert (np.diff(anchors)>=delta).all()
		assert len(anchors)-1<=int(np.ceil(10./delta))

def test_step_progress():

	oracle = DirectInteriorOracle(annulus,annulus_domain,10.)
	stepper = CollarStepper(oracle,annulus,annulus_domain,10.,5.)

	with pytest.raises(ConsistencyError):
		stepper.step1(_impact_start(0.499))

	#Through the failure ledger of the table builder
	table = recover_complete_from_interior(oracle,annulus,annulus_domain,[_impact_start(0.499),_impact_start(0.501)],10.,delta=5.,lightlike_step2=False)
	assert table.nsamples==0
	assert [f["error"] for f in table.failures]==["ConsistencyError","ConsistencyError"]

def test_annulus_round_trips():

	complete = build_scattering_table(annulus,annulus_domain,round_trip_grid,round_trip_cone,kind=COMPLETE)
	assert complete.nsamples>=200
	assert not len(complete.failures)

	#Interior relation from the complete one
	interior = recover_interior_from_complete(close_under_flow(annulus,annulus_domain,complete,10.))
	assert interior.nsamples>=complete.nsamples
	_compare_with_direct(interior,annulus,annulus_domain,interior_scattering)

	#Complete relation from the interior one
	oracle = DirectInteriorOracle(annulus,annulus_domain,10.)
	recovered = recover_complete_from_interior(oracle,annulus,annulus_domain,[s.inbound for s in complete.samples()],10.,lightlike_step2=False)
	assert recovered.nsamples==complete.nsamples

	delta = recovered.grid_meta["delta"]
	assert (recovered["iterations"]<=int(np.ceil(10./delta))+1).all()

	for s in recovered.samples():
		row = complete.lookup(s.inbound)
		assert row is not None
		assert_allclose(s.tau,complete["tau"].iloc[row],rtol=1e-4)
		assert_allclose(s.outbound.base,complete.sample(row).outbound.base,atol=1e-5)
