import os
import json

import numpy as np
from numpy.testing import assert_allclose

import pytest

from ..scripts.settings import ScenarioSettings
from ..scripts.scenario import RunReport,run_scenario,main,EXIT_OK,EXIT_CONFIG,EXIT_NUMERIC,OK,ERROR
from ..utils.exceptions import ConfigError

slab_trace = dict(experiment="trace",metric=dict(name="minkowski_slab",params=dict(L=1.)),parameters=dict(x=[0.,0.,0.],v=[1.,0.,0.5]),numerics=dict(t_max=4.))

def _pointer(d,experiment=None):

	with pytest.raises(ConfigError) as e:
		ScenarioSettings.from_dict(d,experiment)

	return e.value.pointer

def _variant(**kwargs):
	d = json.loads(json.dumps(slab_trace))
	d.update(kwargs)
	return d

#####################################################
###############Validation############################
#####################################################

def test_valid_scenario():

	settings = ScenarioSettings.from_dict(slab_trace)
	assert settings.experiment=="trace"
	assert settings.metric_name=="minkowski_slab"
	assert settings.numerics.t_max==4.
	assert settings.parameters["through_domain"] is True

	m,d = settings.build()
	assert d is not None

	#Explicit experiment names win over the file
	assert ScenarioSettings.from_dict(slab_trace,"scatter_table").experiment=="scatter_table"

def test_config_pointers():

	assert _pointer(_variant(colour="blue"))=="/colour"
	assert _pointer(_variant(experiment="teleport"))=="/experiment"
	assert _pointer(_variant(parameters=dict(speed=1.)))=="/parameters/speed"
	assert _pointer(_variant(parameters=dict(x="origin")))=="/parameters/x"
	assert _pointer(_variant(parameters=dict(through_domain=1)))=="/parameters/through_domain"
	assert _pointer(_variant(seed=-1))=="/seed"
	assert _pointer(_variant(seed=1.5))=="/seed"
	assert _pointer(_variant(numerics=dict(ode_tol=-1.)))=="/numerics/ode_tol"
	assert _pointer(_variant(numerics=dict(precision=3)))=="/numerics/precision"

	missing = _variant()
	del missing["experiment"]
	assert _pointer(missing)=="/experiment"

def test_metric_pointers():

	no_metric = _variant()
	del no_metric["metric"]
	assert _pointer(no_metric)=="/metric"

	assert _pointer(_variant(metric=dict(name="anti_de_sitter")))=="/metric/name"
	assert _pointer(_variant(metric=dict(params=dict(L=1.))))=="/metric/name"
	assert _pointer(_variant(metric=dict(name="minkowski_slab",chart="polar")))=="/metric/chart"

	#Boundary experiments need a domain
	assert _pointer(_variant(metric=dict(name="minkowski")))=="/metric/name"

	#The selftest runs without a metric
	assert ScenarioSettings.from_dict(dict(experiment="selftest")).metric_name is None

def test_domain_pointers():

	assert _pointer(_variant(domain=dict(name="minkowski_cylinder")))=="/domain/name"
	assert _pointer(_variant(domain=dict(params=dict(L=2.))))=="/domain/params/L"
	assert _pointer(_variant(domain=dict(collar_width=0.)))=="/domain/collar_width"
	assert _pointer(_variant(domain=dict(shape="round")))=="/domain/shape"

	settings = ScenarioSettings.from_dict(_variant(domain=dict(params=dict(L=1.),collar_width=0.1)))
	assert settings.collar_width==0.1

#####################################################
###############Runs##################################
#####################################################

def test_run_trace(tmp_path):

	report = run_scenario(_variant(output_dir=str(tmp_path)))
	assert report.ok and report.exit_code==EXIT_OK

	entry = report.entries[0]
	assert entry["status"]==OK
	assert_allclose(entry["summary"]["first_exit"],2.,atol=1e-9)

	for name in ["trace.csv","events.json","report.json"]:
		assert os.path.isfile(os.path.join(str(tmp_path),name))

	with open(os.path.join(str(tmp_path),"report.json")) as fp:
		saved = json.load(fp)

	assert saved["ok"]
	assert saved["config"]["experiment"]=="trace"

def test_run_selftest(tmp_path):

	report = run_scenario(dict(experiment="selftest",parameters=dict(numeric=False),output_dir=str(tmp_path)))
	assert report.ok

	with open(os.path.join(str(tmp_path),"selftest.json")) as fp:
		items = json.load(fp)

	assert len(items)>0
	assert all([i["passed"] for i in items])

def test_report_exit_codes():

	report = RunReport(ScenarioSettings.from_dict(slab_trace))
	report.add("trace",OK,0.1)
	assert report.exit_code==EXIT_OK

	report.add("selftest",ERROR,0.2,error=dict(error="ConvergenceError",message="no root"))
	assert not report.ok
	assert report.exit_code==EXIT_NUMERIC

	with pytest.raises(AssertionError):
		report.add("trace",OK,0.1)

def test_main(tmp_path):

	config = os.path.join(str(tmp_path),"scenario.json")
	with open(config,"w") as fp:
		json.dump(slab_trace,fp)

	out = os.path.join(str(tmp_path),"run")
	assert main(["trace","-c",config,"-o",out,"-s","3"])==EXIT_OK
	assert os.path.isfile(os.path.join(out,"report.json"))

	with open(config,"w") as fp:
		json.dump(_variant(seed="three"),fp)
	assert main(["trace","-c",config,"-o",out])==EXIT_CONFIG

	with open(config,"w") as fp:
		fp.write("{not json")
	assert main(["trace","-c",config,"-o",out])==EXIT_CONFIG
