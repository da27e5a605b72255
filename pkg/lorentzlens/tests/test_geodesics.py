import logging

import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..simulations import integrate_geodesic,trace_through_domain,exp_map,shoot
from ..simulations.geodesics import sample_transversal_perturbation,ENTER,EXIT,TANGENTIAL,REACHED_T_MAX
from ..simulations.jacobi import first_conjugate_time,jacobi_field
from ..utils.exceptions import EventOverflowError,SamplingError

logging.basicConfig(level=logging.DEBUG)

slab,slab_domain = catalog.load("minkowski_slab",dict(L=1.))
annulus,annulus_domain = catalog.load("minkowski_annulus",dict(r0=0.5,R=1.))

#Null direction from the outer circle that grazes the inner one
graze_x = np.array([0.,1.,0.])
graze_v = np.array([1.,-0.5*np.sqrt(3.),0.5])

def test_slab_chord():

	trace = trace_through_domain(slab,slab_domain,(np.zeros(3),np.array([1.,0.,0.5])),4.)
	exits = [e for e in trace.events if e.kind==EXIT]

	assert len(exits)==1
	assert_allclose(exits[0].t,2.,atol=1e-9)
	assert_allclose(exits[0].point,[2.,0.,1.],atol=1e-9)

def test_energy_conservation():

	m,_ = catalog.load("product_conformal")
	trace = integrate_geodesic(m,(np.array([0.,0.1,0.]),np.array([1.,0.3,0.2])),1.)

	assert trace.termination==REACHED_T_MAX
	assert trace.energyDrift()<1e-8

def test_chart_independence():

	polar,_ = catalog.load("minkowski_polar")
	b = 0.5

	#The same straight line in polar and cartesian coordinates
	x,_ = exp_map(polar,np.array([0.,1.,0.]),np.array([1.,0.,b]),2.)
	assert_allclose(x,[2.,np.sqrt(2.),0.25*np.pi],atol=1e-9)

def test_annulus_graze():

	trace = trace_through_domain(annulus,annulus_domain,(graze_x,graze_v),4.)
	kinds = [e.kind for e in trace.events]

	assert TANGENTIAL in kinds
	assert kinds[-1]==EXIT

	tangential = [e for e in trace.events if e.kind==TANGENTIAL][0]
	assert_allclose(tangential.t,0.5*np.sqrt(3.),atol=1e-6)
	assert_allclose(np.linalg.norm(tangential.point[1:]),0.5,atol=1e-9)
	assert_allclose(trace.events[-1].t,np.sqrt(3.),atol=1e-8)

def test_annulus_through_hole():

	trace = trace_through_domain(annulus,annulus_domain,(graze_x,np.array([1.,-1.,0.])),4.)
	assert [e.kind for e in trace.events]==[EXIT,ENTER,EXIT]
	assert_allclose([e.t for e in trace.events],[0.5,1.5,2.],atol=1e-9)

	with pytest.raises(EventOverflowError):
		trace_through_domain(annulus,annulus_domain,(graze_x,np.array([1.,-1.,0.])),4.,max_events=2)

def test_shooting():

	minkowski,_ = catalog.load("minkowski")
	v = shoot(minkowski,np.zeros(3),[2.,1.,0.])
	assert_allclose(v.vec,[2.,1.,0.],atol=1e-10)

	sphere,_ = catalog.load("product_sphere")
	x,y = np.array([0.,0.5*np.pi,0.]),np.array([0.5,1.2,0.4])
	v = shoot(sphere,x,y)
	assert_allclose(exp_map(sphere,x,v.vec)[0],y,atol=1e-9)

def test_conjugate_point():

	sphere,_ = catalog.load("product_sphere")
	trace = integrate_geodesic(sphere,(np.array([0.,0.5*np.pi,0.]),np.array([1.,0.,1.])),4.)

	#Null geodesics along the equator refocus at the antipode
	assert_allclose(first_conjugate_time(trace),np.pi,atol=1e-6)

	J = jacobi_field(trace,np.zeros(3),np.array([0.,1.,0.]))
	assert_allclose(J.first_zero,np.pi,atol=1e-6)
	assert_allclose(J(0.5*np.pi)[1],1.,atol=1e-7)

def test_no_conjugate_point_flat():

	minkowski,_ = catalog.load("minkowski")
	trace = integrate_geodesic(minkowski,(np.zeros(3),np.array([1.,1.,0.])),5.)
	assert first_conjugate_time(trace) is None

def test_transversal_sampler():

	for seed in range(20):
		w = sample_transversal_perturbation(annulus,annulus_domain,graze_x,graze_v,1e-3,seed,4.)
		trace = trace_through_domain(annulus,annulus_domain,(graze_x,w.vec),4.)

		assert all([e.kind!=TANGENTIAL for e in trace.events])
		assert abs(annulus.norm2(graze_x,w.vec))<1e-10
		assert np.linalg.norm(w.vec-graze_v)<1e-2

	#The same seed gives the same draw
	a = sample_transversal_perturbation(annulus,annulus_domain,graze_x,graze_v,1e-3,7,4.)
	b = sample_transversal_perturbation(annulus,annulus_domain,graze_x,graze_v,1e-3,7,4.)
	assert_allclose(a.vec,b.vec)

def test_sampler_exhaustion():

	with pytest.raises(SamplingError):
		sample_transversal_perturbation(annulus,annulus_domain,graze_x,graze_v,1e-3,0,4.,max_rejections=0)
