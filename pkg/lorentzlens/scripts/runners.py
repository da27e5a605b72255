"""

.. module:: runners
	:platform: Unix
	:synopsis: One runner per experiment; each writes its artifacts in the output directory and returns them with the failure ledger and a summary


"""

from __future__ import division

import os
import json

import numpy as np
import pandas as pd

from .. import catalog
from ..simulations.logs import logdriver
from ..simulations.geodesics import trace_through_domain,integrate_geodesic,EXIT
from ..scattering import build_scattering_table,cone_states,INTERIOR,COMPLETE
from ..scattering.table import state_columns
from ..recovery import DirectInteriorOracle,close_under_flow,recover_interior_from_complete,recover_lightlike_table,recover_complete_from_interior
from ..jet import probe_grid,boundary_direction,probe_travel_time,reconstruct_jet,verify_jet_linearity
from ..rigidity import TimeSeparationField,ObstacleRegion,exterior_lightlike_traveltime,boundary_lightcone_id,null_residuals,construct_isometry,verify_isometry
from ..utils.exceptions import InconclusiveError
from .selftest import selftest as run_selftest

class Outcome(object):

	"""
	Artifacts, failure ledger and summary of an experiment run

	"""

	def __init__(self,artifacts=None,failures=None,summary=None,passed=True):
		self.artifacts = list() if artifacts is None else artifacts
		self.failures = list() if failures is None else failures
		self.summary = dict() if summary is None else summary
		self.passed = passed


def _path(settings,name):
	return os.path.join(settings.output_dir,name)

def _dump(obj,filename):
	with open(filename,"w") as fp:
		json.dump(obj,fp,indent=1)

def _scatter_options(numerics):
	return dict(tol=numerics.ode_tol,event_tol=numerics.event_tol,tangent_threshold=numerics.tangent_threshold,max_events=numerics.max_events)

def _field_options(numerics):
	return dict(chain_segments=numerics.chain_segments,chain_max_segments=numerics.chain_max_segments,chain_rtol=numerics.chain_rtol,shoot_tol=numerics.shoot_tol,max_iter=numerics.max_iter)

###########################################
#Table comparisons#########################
###########################################

def compare_tables(direct,recovered):

	"""
	Match the rows of a recovered table to a direct one through the inbound states; the state deviation is measured on the outbound states

	:returns: (comparison frame,failures for direct rows without a recovered counterpart)

	"""

	n = direct.dimension
	outbound = state_columns("y",n) + state_columns("w",n)

	rows = list()
	missing = list()
	for i in range(direct.nsamples):

		sample = direct.sample(i)
		j = recovered.lookup(sample.inbound)
		if j is None:
			missing.append(dict(input=dict(x=sample.inbound.base.tolist(),v=sample.inbound.vec.tolist()),error="MissingSample",message="no recovered sample with this inbound state"))
			continue

		state_deviation = np.abs(direct[outbound].values[i].astype(float)-recovered[outbound].values[j].astype(float)).max()
		tau_direct,tau_recovered = float(direct["tau"].values[i]),float(recovered["tau"].values[j])
		rows.append(dict(row=i,tau_direct=tau_direct,tau_recovered=tau_recovered,tau_deviation=abs(tau_direct-tau_recovered)/max(abs(tau_direct),1.),state_deviation=state_deviation))

	columns = ["row","tau_direct","tau_recovered","tau_deviation","state_deviation"]
	return pd.DataFrame(rows,columns=columns),missing


def _comparison_summary(comparison,tau_tol):

	if not len(comparison):
		return dict(compared=0,max_tau_deviation=None,max_state_deviation=None,within_tolerance=False)

	tau_max = float(comparison["tau_deviation"].max())
	return dict(compared=len(comparison),max_tau_deviation=tau_max,max_state_deviation=float(comparison["state_deviation"].max()),within_tolerance=tau_max<tau_tol)

###########################################
#Runners###################################
###########################################

def trace(settings,m,d):

	p = settings.parameters
	t_max = settings.numerics.t_max if p["t_max"] is None else p["t_max"]
	start = (np.array(p["x"],dtype=float),np.array(p["v"],dtype=float))

	if p["through_domain"]:
		tr = trace_through_domain(m,d,start,t_max,**_scatter_options(settings.numerics))
	else:
		tr = integrate_geodesic(m,start,t_max,tol=settings.numerics.ode_tol)

	tr.toCSV(_path(settings,"trace.csv"))
	tr.saveEvents(_path(settings,"events.json"))

	exits = [e.t for e in tr.events if e.kind==EXIT]
	summary = dict(events=len(tr.events),first_exit=float(exits[0]) if exits else None,termination=tr.termination,energy_drift=float(tr.energyDrift()))
	return Outcome(["trace.csv","events.json"],summary=summary)


def scatter_table(settings,m,d):

	p = settings.parameters
	table = build_scattering_table(m,d,p["boundary_grid"],p["cone"],kind=p["kind"],t_max=settings.numerics.t_max,component=p["component"],**_scatter_options(settings.numerics))

	table.save(_path(settings,"table.csv"))
	table.save(_path(settings,"table.json"))

	return Outcome(["table.csv","table.json"],table.failures,dict(samples=table.nsamples,failures=len(table.failures)))


def convert_scattering(settings,m,d):

	p = settings.parameters
	t_max = settings.numerics.t_max
	options = _scatter_options(settings.numerics)

	if p["direction"]=="complete_to_interior":

		complete = build_scattering_table(m,d,p["boundary_grid"],p["cone"],kind=COMPLETE,t_max=t_max,component=p["component"],**options)
		closed = close_under_flow(m,d,complete,t_max,**options)
		recovered = recover_interior_from_complete(closed)
		direct = build_scattering_table(m,d,p["boundary_grid"],p["cone"],kind=INTERIOR,t_max=t_max,component=p["component"],**options)
		failures = complete.failures + direct.failures

	elif p["direction"]=="interior_to_complete":

		oracle = DirectInteriorOracle(m,d,t_max,**options)
		starts = [s for _,s in cone_states(m,d,p["boundary_grid"],p["cone"],p["component"])]
		recovered = recover_complete_from_interior(oracle,m,d,starts,t_max,delta=settings.numerics.delta,seed=settings.seed,max_rejections=settings.numerics.max_rejections)
		direct = build_scattering_table(m,d,p["boundary_grid"],p["cone"],kind=COMPLETE,t_max=t_max,component=p["component"],**options)
		failures = recovered.failures + direct.failures

	else:
		raise ValueError("Conversion direction {0} not recognized!".format(p["direction"]))

	comparison,missing = compare_tables(direct,recovered)

	direct.save(_path(settings,"direct.csv"))
	recovered.save(_path(settings,"recovered.csv"))
	comparison.to_csv(_path(settings,"comparison.csv"),index=False,float_format="%.17g")

	summary = _comparison_summary(comparison,p["tau_tol"])
	summary.update(direction=p["direction"],direct_samples=direct.nsamples,recovered_samples=recovered.nsamples)
	logdriver.info("Conversion {0}: max tau deviation {1}".format(p["direction"],summary["max_tau_deviation"]))

	return Outcome(["direct.csv","recovered.csv","comparison.csv"],failures+missing,summary)


def recover_tau(settings,m,d):

	p = settings.parameters
	t_max = settings.numerics.t_max
	options = _scatter_options(settings.numerics)

	cone = dict(family="tilt",tilts=[0.],angles=p["angles"])
	targets = [s for _,s in cone_states(m,d,p["boundary_grid"],cone,p["component"])]

	oracle = DirectInteriorOracle(m,d,t_max,**options)
	recovered = recover_lightlike_table(oracle,m,d,targets,step=p["step"])
	direct = build_scattering_table(m,d,p["boundary_grid"],cone,kind=INTERIOR,t_max=t_max,component=p["component"],**options)

	comparison,missing = compare_tables(direct,recovered)
	recovered.save(_path(settings,"recovered.csv"))
	comparison.to_csv(_path(settings,"comparison.csv"),index=False,float_format="%.17g")

	summary = _comparison_summary(comparison,p["tau_tol"])
	summary.update(targets=len(targets),recovered_samples=recovered.nsamples)

	return Outcome(["recovered.csv","comparison.csv"],recovered.failures+direct.failures+missing,summary)


def recover_jet(settings,m,d):

	p = settings.parameters
	numerics = settings.numerics

	x = d.boundaryPoint(np.array(p["u"],dtype=float),p["component"])
	v = boundary_direction(m,d,x,p["direction"])
	probe = probe_travel_time(m,d,x,v,probe_grid(numerics.eps_max,numerics.eps_count),tol=numerics.probe_tol,tangent_threshold=numerics.tangent_threshold,max_events=numerics.max_events)
	result = reconstruct_jet(probe,order=p["order"],noise=p["noise"])

	pd.DataFrame(dict(eps=probe.epsilons,tau=probe.taus)).to_csv(_path(settings,"probe.csv"),index=False,float_format="%.17g")
	result.save(_path(settings,"jet.json"))

	summary = dict(K=float(probe.K),fitted_K=float(probe.fitted_K),entries=result.entries)
	return Outcome(["probe.csv","jet.json"],summary=summary)


def jet_linearity(settings,m,d):

	p = settings.parameters
	filename = _path(settings,"linearity.json")

	try:
		report = verify_jet_linearity(settings.metric_name,p["m"],p["q"],p["direction"],s_grid=tuple(p["s_grid"]),u=tuple(p["u"]),component=p["component"],
			base_params=settings.metric_params,width=p["width"],eps_max=p["eps_max"],count=p["count"],max_deviation=p["max_deviation"])
	except InconclusiveError as e:
		_dump(dict(error=str(e),diagnostics=e.diagnostics),filename)
		raise

	_dump(report,filename)
	return Outcome(["linearity.json"],summary=dict(slope=report["slope"],predicted=report["predicted"],relative_deviation=report["relative_deviation"]))


def timesep_grid(settings,m,d):

	p = settings.parameters
	field = TimeSeparationField(m,d if p["within_domain"] else None,method=p["method"],**_field_options(settings.numerics))

	x = np.array(p["x"],dtype=float)
	points = np.atleast_2d(np.array(p["points"],dtype=float))

	values = [field.evaluate(x,y) for y in points]
	frame = pd.DataFrame(points,columns=["p{0}".format(k) for k in range(points.shape[1])])
	frame["d"] = [v.value for v in values]
	frame["approximate"] = [v.approximate for v in values]
	frame["segments"] = [v.segments for v in values]
	frame.to_csv(_path(settings,"timesep.csv"),index=False,float_format="%.17g")

	return Outcome(["timesep.csv"],summary=dict(points=len(points),approximate=int(frame["approximate"].sum())))


def lightcone_id(settings,m,d):

	p = settings.parameters
	field = TimeSeparationField(m,d,method=p["method"],**_field_options(settings.numerics))
	m_ext,_ = catalog.load(p["extension"]["name"],p["extension"].get("params"))
	extended = TimeSeparationField(m_ext,None,method=p["method"],**_field_options(settings.numerics))

	t = np.linspace(p["t"][0],p["t"][1],int(p["t"][2]))
	theta = np.linspace(p["theta"][0],p["theta"][1],int(p["theta"][2]))
	grid = np.array([(a,b) for a in t for b in theta])

	x = d.boundaryPoint(np.array(p["u"],dtype=float),p["component"])
	lightcone = boundary_lightcone_id(field,extended,d,x,grid,component=p["component"],tol=settings.numerics.class_tol,refine=p["refine"])
	lightcone.save(_path(settings,"lightcone.csv"))

	residuals = null_residuals(m,x,lightcone.points(),tol=settings.numerics.shoot_tol)
	summary = dict(grid_points=len(grid),selected=int(lightcone["in_set"].sum()),max_null_residual=float(residuals.max()) if len(residuals) else None)
	return Outcome(["lightcone.csv"],summary=summary)


def exterior_reconstruct(settings,m,d):

	p = settings.parameters
	region = ObstacleRegion(p["centers"],p["radii"])
	field = TimeSeparationField(m,None,method=p["method"],**_field_options(settings.numerics))

	start = (np.array(p["x"],dtype=float),np.array(p["v"],dtype=float))
	datum = exterior_lightlike_traveltime(field,region,start,t_max=p["t_max"],i0=p["i0"],angles=p["angles"])

	_dump(datum.toDict(),_path(settings,"exterior.json"))
	return Outcome(["exterior.json"],summary=dict(advances=datum.advances,parameter=datum.parameter,i0=datum.i0))


def _rigid_motion(shift,rotation):

	c,s = np.cos(rotation),np.sin(rotation)
	R = np.array([[1.,0.,0.],[0.,c,-s],[0.,s,c]])
	offset = np.array([shift,0.,0.])

	def phi0(x):
		return R.dot(x) + offset

	return phi0,(lambda x:R)


def verify_isometry_run(settings,m,d):

	p = settings.parameters
	rng = np.random.RandomState(settings.seed)

	#Uniform samples in a smaller disk times [0,1]
	r = p["sample_radius"]*np.sqrt(rng.uniform(size=p["samples"]))
	a = rng.uniform(0.,2*np.pi,size=p["samples"])
	samples = np.column_stack((rng.uniform(size=p["samples"]),r*np.cos(a),r*np.sin(a)))

	phi0,dphi0 = _rigid_motion(p["shift"],p["rotation"])
	candidate = construct_isometry(m,d,m,phi0,samples,dphi0=dphi0,directions=p["directions"],t_max=p["t_max"],iso_tol=settings.numerics.iso_tol)
	error = verify_isometry(candidate,m,m,method=p["method"])
	candidate.save(_path(settings,"isometry.json"))

	known = np.abs(candidate.images-np.array([phi0(x) for x in samples])).max()
	return Outcome(["isometry.json"],summary=dict(samples=len(candidate),max_error=error,max_discrepancy=candidate.max_discrepancy,known_map_deviation=float(known)))


def selftest(settings,m,d):

	items = run_selftest(numeric=settings.parameters["numeric"])
	_dump(items,_path(settings,"selftest.json"))

	failed = [i for i in items if not i["passed"]]
	return Outcome(["selftest.json"],summary=dict(items=len(items),passed=len(items)-len(failed),failed=[i["name"] for i in failed]),passed=not failed)


runners = {

"trace" : trace,
"scatter_table" : scatter_table,
"convert_scattering" : convert_scattering,
"recover_tau" : recover_tau,
"recover_jet" : recover_jet,
"jet_linearity" : jet_linearity,
"timesep_grid" : timesep_grid,
"lightcone_id" : lightcone_id,
"exterior_reconstruct" : exterior_reconstruct,
"verify_isometry" : verify_isometry_run,
"selftest" : selftest,

}
