"""

.. module:: selftest
	:platform: Unix
	:synopsis: Exact rational identities of the travel time expansion and fast numerical invariants, reported item by item


"""

from __future__ import division

import time
from fractions import Fraction
from math import factorial

import numpy as np

from .. import catalog
from ..simulations.logs import logdriver
from ..geometry.metric import compatibility_residual
from ..scattering import interior_scattering
from ..recovery import traced_family,variation_terms
from ..jet import series_sum,expansion_recurrence,closed_form_terms,assembled_coefficient,jet_monomial,jet_coefficient
from ..rigidity import TimeSeparationField
from ..utils.exceptions import LorentzLensError

def _item(block,name,passed,detail=None):
	return dict(block=block,name=name,passed=bool(passed),detail=detail)

def _guarded(block,name,check):

	"""
	Run a numerical check, turning package errors into failed items

	"""

	start = time.time()
	try:
		passed,detail = check()
	except LorentzLensError as e:
		passed,detail = False,"{0}: {1}".format(e.__class__.__name__,e)

	item = _item(block,name,passed,detail)
	item["wall_time"] = time.time() - start
	return item

##########################################
#Exact blocks#############################
##########################################

def exact_items():

	items = list()

	for m in range(1,13):
		value = series_sum(m)
		expected = Fraction(factorial(m),factorial(2*m))
		items.append(_item("series_sum","m={0}".format(m),value==expected,"{0} vs {1}".format(value,expected)))

	for l in range(11):
		items.append(_item("recurrence","l={0}".format(l),expansion_recurrence(l)==closed_form_terms(l)))

	for m in range(1,9):
		assembled = assembled_coefficient(m)
		items.append(_item("assembly","m={0}".format(m),assembled==jet_monomial(m),repr(assembled)))

	#Worked second order value at a rational K
	K = Fraction(3,7)
	items.append(_item("assembly","m=2 closed value",jet_coefficient(2,K)==(-2/K)**3/24))

	return items

##########################################
#Numerical blocks#########################
##########################################

def _slab_chord():
	m,d = catalog.load("minkowski_slab",dict(L=1.))
	sample = interior_scattering(m,d,(np.zeros(3),np.array([1.,0.,0.5])),10.)
	return abs(sample.tau-2.)<1e-8 and np.allclose(sample.outbound.base,[2.,0.,1.],atol=1e-8),"tau={0:.12f}".format(sample.tau)

def _slab_reversibility():
	m,d = catalog.load("minkowski_slab",dict(L=1.))
	forward = interior_scattering(m,d,(np.array([0.,0.2,0.]),np.array([1.,0.3,0.6])),10.)
	backward = interior_scattering(m,d,forward.reversed(),10.)
	ok = np.allclose(backward.outbound.base,forward.inbound.base,atol=1e-8) and np.allclose(backward.outbound.vec,-forward.inbound.vec,atol=1e-8) and abs(backward.tau-forward.tau)<1e-8
	return ok,"tau={0:.12f}/{1:.12f}".format(forward.tau,backward.tau)

def _slab_first_variation():
	m,d = catalog.load("minkowski_slab",dict(L=1.))
	family = traced_family(m,d,lambda l:(np.zeros(3),np.array([1.,0.,0.5+l])),10.)
	lhs,rhs,_ = variation_terms(family)
	return abs(lhs-8.)<1e-6 and abs(rhs-8.)<1e-6,"lhs={0:.10f} rhs={1:.10f}".format(lhs,rhs)

def _sphere_compatibility():
	m,_ = catalog.load("product_sphere")
	residual = max([compatibility_residual(m,np.array([0.,theta,0.3])) for theta in (0.4,1.1,2.5)])
	return residual<1e-10,"residual={0:.2e}".format(residual)

def _minkowski_chain():
	m,_ = catalog.load("minkowski")
	value = TimeSeparationField(m,method="chain").evaluate(np.zeros(3),np.array([2.,1.,0.]))
	return abs(value.value-np.sqrt(3.))<1e-6,"d={0:.10f}".format(value.value)

def _cylinder_chord():
	m,d = catalog.load("minkowski_cylinder",dict(R=1.))
	b,eps = 0.5,0.1
	s = np.sqrt(1.+eps**2)
	v_eps = np.array([s,-eps,s*b])
	sample = interior_scattering(m,d,(np.array([0.,1.,0.]),v_eps),10.,tol=1e-12)
	expected = 2*eps/(b**2+eps**2*(1+b**2))
	return abs(sample.tau-expected)<1e-8*expected,"tau={0:.12f} expected {1:.12f}".format(sample.tau,expected)


numeric_checks = [

("slab","chord",_slab_chord),
("slab","reversibility",_slab_reversibility),
("slab","first variation",_slab_first_variation),
("metric","sphere compatibility",_sphere_compatibility),
("time separation","minkowski chain",_minkowski_chain),
("cylinder","probe chord",_cylinder_chord),

]


def selftest(numeric=True):

	"""
	Run the exact rational suites and, optionally, the fast numerical invariants; failures are reported, never raised

	:returns: list of items {block,name,passed,detail}
	:rtype: list.

	"""

	start = time.time()
	items = exact_items()

	if numeric:
		items += [_guarded(block,name,check) for block,name,check in numeric_checks]

	failed = [i for i in items if not i["passed"]]
	logdriver.info("Selftest: {0}/{1} items passed in {2:.2f}s".format(len(items)-len(failed),len(items),time.time()-start))
	for i in failed:
		logdriver.warning("Selftest item {0}/{1} failed: {2}".format(i["block"],i["name"],i["detail"]))

	return items
