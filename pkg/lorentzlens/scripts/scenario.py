"""

.. module:: scenario
	:platform: Unix
	:synopsis: Command line entry point: validate a scenario file, run its experiment and write the run report


"""

from __future__ import division

import os
import json
import time
import logging
import argparse

from . import experiments
from .settings import ScenarioSettings
from .runners import runners
from .. import data
from ..simulations.logs import logdriver,logstderr,peakMemory
from ..utils.exceptions import LorentzLensError,ConfigError

#Exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

#Experiment statuses
OK = "ok"
ERROR = "error"

#####################################
#############RunReport###############
#####################################

class RunReport(object):

	"""
	Status, wall time, artifacts and failure ledger of the experiments of a run

	"""

	def __init__(self,settings):
		self.settings = settings
		self.entries = list()
		self.peak_memory = None

	def __repr__(self):
		return "<RunReport {0}>".format(", ".join(["{0}:{1}".format(e["experiment"],e["status"]) for e in self.entries]))

	def add(self,experiment,status,wall_time,artifacts=None,failures=None,summary=None,error=None):
		assert experiment not in [e["experiment"] for e in self.entries],"Experiment {0} already reported".format(experiment)
		self.entries.append(dict(experiment=experiment,status=status,wall_time=wall_time,artifacts=artifacts or list(),failures=failures or list(),summary=summary or dict(),error=error))

	@property
	def ok(self):
		return all([e["status"]==OK for e in self.entries])

	@property
	def exit_code(self):
		return EXIT_OK if self.ok else EXIT_NUMERIC

	def toJSON(self):
		return dict(config=self.settings.to_dict(),experiments=self.entries,peak_memory_gb=self.peak_memory,ok=self.ok)

	def save(self,filename=None):
		if filename is None:
			filename = os.path.join(self.settings.output_dir,"report.json")
		with open(filename,"w") as fp:
			json.dump(self.toJSON(),fp,indent=1)
		return filename

#####################################
#############Running#################
#####################################

def run_scenario(settings):

	"""
	Run the experiment of a validated scenario; numerical errors that stop the experiment are reported with status "error"

	:param settings: scenario
	:type settings: :py:class:`ScenarioSettings` or dict.

	:returns: :py:class:`RunReport`, also saved as report.json in the output directory

	"""

	if isinstance(settings,dict):
		settings = ScenarioSettings.from_dict(settings)

	if not os.path.isdir(settings.output_dir):
		os.makedirs(settings.output_dir)

	report = RunReport(settings)
	experiment = settings.experiment

	if settings.metric_name is not None:
		m,d = settings.build()
	else:
		m,d = None,None

	logdriver.info("Running {0} on {1} (seed {2}), artifacts in {3}".format(experiment,settings.metric_name,settings.seed,settings.output_dir))
	start = time.time()

	try:
		outcome = runners[experiment](settings,m,d)
	except LorentzLensError as e:
		logstderr.error("Experiment {0} failed: {1}: {2}".format(experiment,e.__class__.__name__,e))
		report.add(experiment,ERROR,time.time()-start,error=dict(error=e.__class__.__name__,message=str(e)))
	else:
		status = OK if outcome.passed else ERROR
		report.add(experiment,status,time.time()-start,[os.path.join(settings.output_dir,a) for a in outcome.artifacts],outcome.failures,outcome.summary)
		logdriver.info("Experiment {0} finished with status {1} in {2:.2f}s, {3} failures recorded".format(experiment,status,time.time()-start,len(outcome.failures)))

	report.peak_memory = peakMemory()
	logdriver.info("Peak memory usage: {0:.3f} GB".format(report.peak_memory))

	report.save()
	return report


def main(args=None):

	parser = argparse.ArgumentParser(description="Run a lorentzlens scenario")
	parser.add_argument("experiment",choices=sorted(experiments.keys()),help="experiment to run")
	parser.add_argument("-c","--config",dest="config",default=None,help="scenario JSON file; the packaged default of the experiment when omitted")
	parser.add_argument("-o","--out",dest="out",default=None,help="output directory, overrides output_dir")
	parser.add_argument("-s","--seed",dest="seed",type=int,default=None,help="random seed, overrides seed")
	parser.add_argument("-v","--verbose",dest="verbose",action="store_true",default=False,help="debug logging")

	args = parser.parse_args(args)

	if args.verbose:
		for name in ["driver","geodesics","scattering","recovery","jet","rigidity"]:
			logging.getLogger("lorentzlens.{0}".format(name)).setLevel(logging.DEBUG)
	else:
		logdriver.setLevel(logging.INFO)

	config = args.config if args.config is not None else data("{0}.json".format(args.experiment))

	try:
		settings = ScenarioSettings.read(config,args.experiment)
	except ConfigError as e:
		logstderr.error("Invalid scenario {0}: {1}".format(config,e))
		return EXIT_CONFIG
	except (IOError,ValueError) as e:
		logstderr.error("Could not read scenario {0}: {1}".format(config,e))
		return EXIT_CONFIG

	if args.out is not None:
		settings.output_dir = args.out
	if args.seed is not None:
		settings.seed = args.seed

	report = run_scenario(settings)
	return report.exit_code
