"""

.. module:: table
	:platform: Unix
	:synopsis: Tables of scattering samples, stored as pandas DataFrames with grid and failure metadata


"""

from __future__ import division

import json

import numpy as np
import pandas as pd

from .relation import ScatteringSample
from ..geometry.metric import TangentVec
from ..utils.exceptions import ConsistencyError

#Provenance tags
DIRECT = "direct"
RECOVERED_INTERIOR = "recovered_interior"
RECOVERED_LIGHTLIKE = "recovered_lightlike"
RECOVERED_COMPLETE = "recovered_complete"

#Decimals used to compare inbound states
key_decimals = 9

def state_columns(prefix,n):
	return ["{0}{1}".format(prefix,i) for i in range(n)]

#####################################################
###############ScatteringTable class#################
#####################################################

class ScatteringTable(pd.DataFrame):

	"""
	Scattering samples, one row each: inbound state x,v, outbound state y,w, tau, length, kind, event_count and provenance. Inherits from pandas DataFrame

	"""

	################################################################
	##############DataFrame subclassing#############################
	################################################################

	_metadata = ["grid_meta","failures"]

	@property
	def _constructor(self):
		return self.__class__

	def __init__(self,data=None,grid_meta=None,failures=None,**kwargs):

		super(ScatteringTable,self).__init__(data=data,**kwargs)

		self.grid_meta = dict() if grid_meta is None else grid_meta
		self.failures = list() if failures is None else failures

	##################
	####Properties####
	##################

	@property
	def dimension(self):
		return len([c for c in self.columns if c.startswith("x")])

	@property
	def nsamples(self):
		return self.shape[0]

	##################################
	########Construction##############
	##################################

	@classmethod
	def fromSamples(cls,samples,grid_meta=None,failures=None,provenance=DIRECT,n=None):

		"""
		Build a table from a list of :py:class:`ScatteringSample`

		:raises: :py:class:`ConsistencyError` on duplicate inbound states

		"""

		if n is None:
			assert len(samples),"Cannot infer the dimension of an empty table!"
			n = len(samples[0].inbound.base)

		columns = state_columns("x",n) + state_columns("v",n) + state_columns("y",n) + state_columns("w",n)
		rows = list()
		kinds = list()
		counts = list()

		for s in samples:
			rows.append(np.concatenate((s.inbound.base,s.inbound.vec,s.outbound.base,s.outbound.vec,[s.tau,s.length])))
			kinds.append(s.kind)
			counts.append(s.event_count)

		table = cls(pd.DataFrame(np.array(rows).reshape(len(rows),4*n+2),columns=columns+["tau","length"]),grid_meta=grid_meta,failures=failures)
		table["kind"] = kinds
		table["event_count"] = np.array(counts,dtype=int)

		if isinstance(provenance,str):
			table["provenance"] = [provenance]*len(samples)
		else:
			table["provenance"] = list(provenance)

		table.checkKeys()
		return table

	def checkKeys(self,decimals=key_decimals):

		"""
		Reject tables with two rows sharing the same inbound state

		"""

		keys = self[state_columns("x",self.dimension)+state_columns("v",self.dimension)].round(decimals)
		duplicated = keys.duplicated()
		if duplicated.any():
			raise ConsistencyError("{0} duplicate inbound states in the scattering table".format(duplicated.sum()))

	##################################
	########Access####################
	##################################

	def inbound(self,i):
		n = self.dimension
		row = self.iloc[i]
		return TangentVec(row[state_columns("x",n)].values.astype(float),row[state_columns("v",n)].values.astype(float))

	def outbound(self,i):
		n = self.dimension
		row = self.iloc[i]
		return TangentVec(row[state_columns("y",n)].values.astype(float),row[state_columns("w",n)].values.astype(float))

	def sample(self,i):
		row = self.iloc[i]
		return ScatteringSample(self.inbound(i),self.outbound(i),float(row["tau"]),float(row["length"]),row["kind"],int(row["event_count"]))

	def samples(self):
		return [self.sample(i) for i in range(self.nsamples)]

	def lookup(self,state,decimals=key_decimals):

		"""
		Row index of an inbound state, None if absent

		"""

		n = self.dimension
		key = np.round(np.concatenate((state.base,state.vec)),decimals)
		values = self[state_columns("x",n)+state_columns("v",n)].values.astype(float).round(decimals)
		match = np.where(np.all(values==key[None],axis=1))[0]
		return int(match[0]) if len(match) else None

	####################################
	#############I/O####################
	####################################

	def save(self,filename,format=None):

		"""
		Save the table in csv (floats with 17 significant digits) or json (with the grid and failure metadata)

		:param format: "csv" or "json"; detected from the extension when None
		:type format: str.

		"""

		if format is None:
			if filename.endswith(".csv"):
				format = "csv"
			elif filename.endswith(".json"):
				format = "json"
			else:
				raise ValueError("Format not recognized!")

		if format=="csv":
			pd.DataFrame(self).to_csv(filename,index=False,float_format="%.17g")
		elif format=="json":
			with open(filename,"w") as fp:
				json.dump(self.toJSON(),fp)
		else:
			raise ValueError("Format {0} not supported!".format(format))

	def toJSON(self):
		records = json.loads(pd.DataFrame(self).to_json(orient="records",double_precision=15))
		floats = [c for c in self.columns if c not in ["kind","event_count","provenance"]]
		for record,values in zip(records,self[floats].values.astype(float)):
			record.update(dict(zip(floats,[float(v) for v in values])))
		return dict(grid_meta=self.grid_meta,failures=self.failures,samples=records)

	@classmethod
	def read(cls,filename):

		"""
		Read a table saved with :py:meth:`save`

		"""

		if filename.endswith(".csv"):
			return cls(pd.read_csv(filename,float_precision="round_trip"))

		elif filename.endswith(".json"):
			with open(filename,"r") as fp:
				loaded = json.load(fp)
			return cls(pd.DataFrame(loaded["samples"]),grid_meta=loaded["grid_meta"],failures=loaded["failures"])

		else:
			raise ValueError("Format not recognized!")
