import os
import pickle

import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..scattering import ScatteringTable,interior_scattering,complete_scattering,build_scattering_table,cone_direction,INTERIOR,COMPLETE
from ..utils.exceptions import ZeroMeasureError,PreconditionError,ConsistencyError,NonTerminatingError

L = 1.
slab,slab_domain = catalog.load("minkowski_slab",dict(L=L))
cylinder,cylinder_domain = catalog.load("minkowski_cylinder",dict(R=1.))
annulus,annulus_domain = catalog.load("minkowski_annulus",dict(r0=0.5,R=1.))

tilts = [0.,0.2,0.5]
angles = list(np.linspace(0.1*np.pi,0.9*np.pi,10))
slab_grid = [[0.,0.],[1.,0.5]]

def test_slab_table():

	table = build_scattering_table(slab,slab_domain,slab_grid,dict(family="tilt",tilts=tilts,angles=angles),kind=COMPLETE,t_max=20.)
	assert table.nsamples==len(slab_grid)*len(tilts)*len(angles)
	assert not len(table.failures)

	#Straight chords across the slab
	for s in table.samples():
		x,v = s.inbound.base,s.inbound.vec
		assert_allclose(s.tau,L/v[-1],rtol=1e-9)
		assert_allclose(s.outbound.base,x+s.tau*v,atol=1e-9)
		assert_allclose(s.outbound.vec,v,atol=1e-12)
		assert s.event_count==1

	assert (table["provenance"]=="direct").all()
	assert table.grid_meta["kind"]==COMPLETE

def test_slab_lens_length():

	x = np.zeros(3)
	v = cone_direction(slab,slab_domain,x,0.5,0.5*np.pi)
	assert_allclose(v,[1.,0.,0.5],atol=1e-12)

	sample = interior_scattering(slab,slab_domain,(x,v),10.)
	assert_allclose(sample.tau,2.,rtol=1e-10)
	assert_allclose(sample.length,2.*np.sqrt(0.75),rtol=1e-10)

def test_cylinder_chords():

	x = cylinder_domain.boundaryPoint([0.,0.])
	assert_allclose(x,[0.,1.,0.],atol=1e-14)

	for a in angles:
		v = cone_direction(cylinder,cylinder_domain,x,0.,a)
		sample = complete_scattering(cylinder,cylinder_domain,(x,v),10.)
		assert_allclose(sample.tau,2*np.sin(a),rtol=1e-9)
		assert_allclose(sample.outbound.base,x+sample.tau*v,atol=1e-9)

	#Diameter
	sample = interior_scattering(cylinder,cylinder_domain,(x,np.array([1.,-1.,0.])),10.)
	assert_allclose(sample.tau,2.,rtol=1e-10)
	assert_allclose(sample.outbound.base,[2.,-1.,0.],atol=1e-9)

def test_interior_vs_complete():

	x = annulus_domain.boundaryPoint([0.,0.])
	v = cone_direction(annulus,annulus_domain,x,0.,np.pi/3)
	assert_allclose(v,[1.,-0.5*np.sqrt(3.),0.5],atol=1e-12)

	interior = interior_scattering(annulus,annulus_domain,(x,v),10.)
	complete = complete_scattering(annulus,annulus_domain,(x,v),10.)

	#The graze of the inner circle stops the interior relation only
	assert_allclose(interior.tau,0.5*np.sqrt(3.),atol=1e-6)
	assert_allclose(complete.tau,np.sqrt(3.),atol=1e-8)
	assert complete.event_count>=2
	assert interior.kind==INTERIOR and complete.kind==COMPLETE

def test_reversibility():

	x = cylinder_domain.boundaryPoint([0.3,0.7])
	v = cone_direction(cylinder,cylinder_domain,x,0.2,1.1)

	forward = complete_scattering(cylinder,cylinder_domain,(x,v),10.)
	backward = complete_scattering(cylinder,cylinder_domain,forward.reversed(),10.)

	assert_allclose(backward.outbound.base,x,atol=1e-8)
	assert_allclose(backward.outbound.vec,-v,atol=1e-8)
	assert_allclose(backward.tau,forward.tau,rtol=1e-9)

def test_start_checks():

	with pytest.raises(PreconditionError):
		interior_scattering(slab,slab_domain,(np.array([0.,0.,0.5]),np.array([1.,0.,1.])),10.)

	with pytest.raises(ZeroMeasureError):
		interior_scattering(slab,slab_domain,(np.zeros(3),np.array([1.,0.,-1.])),10.)

	#Tangential start along a flat face
	with pytest.raises(ZeroMeasureError):
		interior_scattering(slab,slab_domain,(np.zeros(3),np.array([1.,1.,0.])),10.)

	sample = complete_scattering(slab,slab_domain,(np.zeros(3),np.array([1.,1.,0.])),10.)
	assert sample.tau==0. and sample.event_count==0

	with pytest.raises(NonTerminatingError):
		interior_scattering(slab,slab_domain,(np.zeros(3),np.array([1.,0.,0.5])),1.)

def test_failure_ledger():

	table = build_scattering_table(slab,slab_domain,[[0.,0.]],dict(family="tilt",tilts=[0.],angles=[0.,0.5*np.pi]),kind=INTERIOR)

	assert table.nsamples==1
	assert len(table.failures)==1
	assert table.failures[0]["error"]=="ZeroMeasureError"
	assert table.failures[0]["input"]["angle"]==0.

def test_probe_cone():

	table = build_scattering_table(cylinder,cylinder_domain,[[0.,0.]],dict(family="probe",direction=[1.,0.5],epsilons=[0.05,0.1]),kind=INTERIOR)
	assert table.nsamples==2
	assert (table["tau"]>0).all()

def test_duplicate_rows():

	sample = interior_scattering(slab,slab_domain,(np.zeros(3),np.array([1.,0.,1.])),10.)
	with pytest.raises(ConsistencyError):
		ScatteringTable.fromSamples([sample,sample])

def test_table_io(tmp_path):

	table = build_scattering_table(slab,slab_domain,slab_grid,dict(family="tilt",tilts=[0.,0.5],angles=angles[:3]),t_max=20.)

	for name in ["table.csv","table.json"]:

		filename = os.path.join(str(tmp_path),name)
		table.save(filename)
		loaded = ScatteringTable.read(filename)

		assert loaded.nsamples==table.nsamples
		assert_allclose(loaded["tau"].values.astype(float),table["tau"].values.astype(float),rtol=0.,atol=0.)
		assert loaded.lookup(table.inbound(3))==3

	assert loaded.grid_meta["kind"]==COMPLETE

	with pytest.raises(ValueError):
		table.save(os.path.join(str(tmp_path),"table.txt"))

def test_table_pickle():

	table = build_scattering_table(slab,slab_domain,[[0.,0.]],dict(family="tilt",tilts=[0.],angles=[0.,0.5*np.pi]),kind=INTERIOR)
	loaded = pickle.loads(pickle.dumps(table))

	assert isinstance(loaded,ScatteringTable)
	assert loaded.nsamples==1
	assert loaded.grid_meta==table.grid_meta
	assert loaded.failures[0]["error"]=="ZeroMeasureError"
	assert_allclose(loaded["tau"].values.astype(float),table["tau"].values.astype(float),rtol=0.,atol=0.)
