import logging
from fractions import Fraction
from math import factorial

import numpy as np
from numpy.testing import assert_allclose

import pytest

from .. import catalog
from ..jet import SymbolicTerm,KMonomial,expansion_recurrence,closed_form_terms,series_sum,jet_monomial,jet_coefficient,assembled_coefficient
from ..jet import probe_grid,boundary_direction,probe_travel_time,fit_expansion,recover_m1,reconstruct_jet,verify_jet_linearity
from ..utils.algorithms import polyfit_powers
from ..utils.exceptions import ConvexityError,PreconditionError

logging.basicConfig(level=logging.DEBUG)

cylinder,cylinder_domain = catalog.load("minkowski_cylinder",dict(R=1.))
p = np.array([0.,1.,0.])

def chord(eps,b):
	return 2*eps/(b**2+eps**2*(1+b**2))

#####################################################
###############Exact combinatorics###################
#####################################################

def test_series_sum():

	for m in range(1,13):
		assert series_sum(m)==Fraction(factorial(m),factorial(2*m))

def test_recurrence_closed_form():

	for l in range(11):
		assert expansion_recurrence(l)==closed_form_terms(l)

	#V^2(R^{0,1}) = R^{2,3} + K R^{0,2}
	assert expansion_recurrence(2)==[SymbolicTerm(2,3,1,0),SymbolicTerm(0,2,1,1)]

def test_assembly():

	for m in range(1,9):
		assert assembled_coefficient(m)==jet_monomial(m)

	K = Fraction(3,7)
	assert jet_coefficient(2,K)==(-2/K)**3/24
	assert jet_coefficient(1,K)==1/K**2

def test_linearity_constants():

	#Predicted slopes of the jet_perturbed cylinder at b=0.5 (K=-1/4, q(v,v)=1/4)
	assert jet_coefficient(2,Fraction(-1,4))*Fraction(1,4)==Fraction(16,3)
	assert_allclose(jet_coefficient(3,-0.25)*0.25,64./15,rtol=1e-14)

def test_zero_curvature():

	with pytest.raises(ConvexityError):
		jet_coefficient(2,0)

def test_immutable_terms():

	t = SymbolicTerm(1,2,3,0)
	with pytest.raises(AttributeError):
		t.coeff = 4

	with pytest.raises(AssertionError):
		SymbolicTerm(0,0,1,0)

	assert KMonomial(1,-2)+KMonomial(2,-2)==KMonomial(3,-2)

#####################################################
###############Probes################################
#####################################################

def test_chord_oracle():

	b = 0.5
	v = boundary_direction(cylinder,cylinder_domain,p,[1.,b])
	assert_allclose(v,[1.,0.,b],atol=1e-14)

	eps = np.geomspace(1e-3,0.15,16)
	probe = probe_travel_time(cylinder,cylinder_domain,p,v,eps)

	assert_allclose(probe.K,-b**2,rtol=1e-10)
	assert_allclose(probe.epsilons,eps)
	assert_allclose(probe.taus,chord(eps,b),rtol=1e-8)

def test_expansion_coefficients():

	v = np.array([1.,0.,0.5])
	probe = probe_travel_time(cylinder,cylinder_domain,p,v,probe_grid(0.05,24))
	fit = fit_expansion(probe,9)

	assert_allclose(fit.coefficient(1),8.,rtol=1e-6)
	assert_allclose(fit.coefficient(3),-40.,rtol=1e-3)
	assert_allclose(probe.fitted_K,-0.25,rtol=1e-6)

	with pytest.raises(PreconditionError):
		fit_expansion(probe,13)

def test_first_normal_derivative():

	#d_n g(v,v) = 2K = -2b^2, i.e. d_n g_thetatheta = -2 whatever b
	for b in (0.3,0.5,0.8):

		v = np.array([1.,0.,b])
		probe = probe_travel_time(cylinder,cylinder_domain,p,v,probe_grid(0.05*b/0.5,24))
		fit_expansion(probe,9)
		value,sigma = recover_m1(probe)

		assert_allclose(value/b**2,-2.,rtol=1e-3)
		assert sigma<1e-3*abs(value)

def test_perturbed_first_derivative():

	m,d = catalog.load("jet_perturbed",dict(m=1,s=0.1))
	v = np.array([1.,0.,0.5])

	probe = probe_travel_time(m,d,p,v,probe_grid(0.05,24))
	result = reconstruct_jet(probe,order=9)

	assert_allclose(result[1]/0.25,-1.9,rtol=1e-3)
	assert result.toJSON()["coefficients_used"][0]["power"]==1

def test_probe_preconditions():

	slab,slab_domain = catalog.load("minkowski_slab",dict(L=1.))
	with pytest.raises(PreconditionError):
		probe_travel_time(slab,slab_domain,np.zeros(3),[1.,0.5,0.],probe_grid())

	with pytest.raises(PreconditionError):
		probe_travel_time(cylinder,cylinder_domain,p,[1.,0.,1.5],probe_grid())

def test_flat_expansion():

	eps = probe_grid(0.1,24)
	fit = polyfit_powers(eps,eps**3,np.arange(1,8),noise=1e-6)
	with pytest.raises(ConvexityError):
		recover_m1(fit)

def test_jet_linearity_second_order():

	report = verify_jet_linearity("minkowski_cylinder",2,"dtheta2",[1.,0.5],eps_max=0.08)
	assert_allclose(report["predicted"],16./3,rtol=1e-12)
	assert report["relative_deviation"]<0.02

def test_jet_linearity_third_order():

	report = verify_jet_linearity("minkowski_cylinder",3,"dtheta2",[1.,0.5],eps_max=0.08)
	assert_allclose(report["predicted"],64./15,rtol=1e-12)
	assert report["relative_deviation"]<0.02

def test_jet_linearity_null_perturbation():

	report = verify_jet_linearity("minkowski_cylinder",2,"zero",[1.,0.5],eps_max=0.08)
	assert report["predicted"]==0.
	assert_allclose(report["slope"],0.,atol=1e-6)
	assert_allclose(report["coefficients"],0.,atol=1e-6)

	with pytest.raises(PreconditionError):
		verify_jet_linearity("minkowski_cylinder",1,"dtheta2",[1.,0.5])
