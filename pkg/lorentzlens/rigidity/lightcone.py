"""

.. module:: lightcone
	:platform: Unix
	:synopsis: Identification of the light cone of a boundary point on a grid of boundary points


"""

from __future__ import division

import numpy as np
import pandas as pd
from scipy.spatial import cKDTree

from ..simulations.logs import logrigidity
from ..simulations.geodesics import shoot
from ..utils.exceptions import ResolutionError

separation_tol = 1e-9

###############################################
############LightconeGrid class################
###############################################

class LightconeGrid(pd.DataFrame):

	"""
	Boundary grid classified against the light cone of a boundary point: boundary coordinates u*, chart coordinates x*, d, extended d, and membership of the light cone set; inherits from pandas DataFrame

	"""

	_metadata = ["origin"]

	@property
	def _constructor(self):
		return self.__class__

	def __init__(self,data=None,origin=None,**kwargs):
		super(LightconeGrid,self).__init__(data=data,**kwargs)
		self.origin = origin

	@property
	def selected(self):
		return self[self["in_set"]]

	def points(self,refined=True):
		columns = [c for c in self.columns if c.startswith("x")]
		if refined and "r0" in self.columns:
			columns = [c for c in self.columns if c.startswith("r")]
		return self.selected[columns].values.astype(float)

	def save(self,filename):
		pd.DataFrame(self).to_csv(filename,index=False,float_format="%.17g")


def _neighbours(coordinates,spacing):

	tree = cKDTree(coordinates/spacing[None])
	return tree.query_ball_point(coordinates/spacing[None],r=1.5)


def boundary_lightcone_id(field,extended_field,domain,x,boundary_grid,component=0,tol=separation_tol,refine=True,pool=None):

	"""
	Grid points on the topological boundary of {y : d(x,y) > tol} where the time separation of the extended manifold also vanishes; the selected points lie on null geodesics from x

	:param field: time separation of M
	:type field: :py:class:`TimeSeparationField`

	:param extended_field: time separation of an extension of M across its boundary
	:type extended_field: :py:class:`TimeSeparationField`

	:param x: boundary point
	:type x: array

	:param boundary_grid: boundary coordinates, one row per point, on a regular lattice whose first coordinate is time
	:type boundary_grid: array

	:param refine: locate the exact light cone crossing between each selected point and its later neighbour
	:type refine: bool.

	:returns: :py:class:`LightconeGrid`

	:raises: :py:class:`ResolutionError` when no neighbourhood of the grid sees the level set

	"""

	x = np.asarray(x,dtype=float)
	coordinates = np.atleast_2d(np.asarray(boundary_grid,dtype=float))
	points = np.array([domain.boundaryPoint(u,component) for u in coordinates])

	d = field.grid(x,points,pool=pool)
	positive = d>tol

	#Lattice spacing per boundary coordinate
	spacing = np.array([np.diff(np.unique(coordinates[:,k])).min() if len(np.unique(coordinates[:,k]))>1 else 1. for k in range(coordinates.shape[1])])
	neighbours = _neighbours(coordinates,spacing)

	on_boundary = np.array([(not positive[i]) and positive[neighbours[i]].any() for i in range(len(points))])
	if not on_boundary.any():
		raise ResolutionError("No grid neighbourhood resolves the boundary of the chronological future of {0}: refine the boundary grid".format(x.tolist()))

	d_ext = np.full(len(points),np.nan)
	candidates = np.where(on_boundary)[0]
	d_ext[candidates] = extended_field.grid(x,points[candidates],pool=pool)
	in_set = on_boundary & (d_ext<=tol)

	table = pd.DataFrame(coordinates,columns=["u{0}".format(k) for k in range(coordinates.shape[1])])
	for k in range(points.shape[1]):
		table["x{0}".format(k)] = points[:,k]
	table["d"] = d
	table["d_ext"] = d_ext
	table["on_boundary"] = on_boundary
	table["in_set"] = in_set

	if refine:
		refined = np.full(points.shape,np.nan)
		for i in np.where(in_set)[0]:
			refined[i] = _refine_crossing(field,domain,x,coordinates[i],spacing[0],component,tol)
		for k in range(points.shape[1]):
			table["r{0}".format(k)] = refined[:,k]

	logrigidity.info("Light cone of {0}: {1} of {2} grid points selected".format(x.tolist(),in_set.sum(),len(points)))
	return LightconeGrid(table,origin=x.tolist())


def _refine_crossing(field,domain,x,u,dt,component,tol,iterations=60):

	"""
	Bisection in the time coordinate for the first boundary point after u in the chronological future of x

	"""

	lower = np.array(u,dtype=float)
	upper = lower.copy()
	upper[0] += dt
	for _ in range(8):
		if field(x,domain.boundaryPoint(upper,component))>tol:
			break
		upper[0] += dt

	for _ in range(iterations):
		mid = 0.5*(lower+upper)
		if field(x,domain.boundaryPoint(mid,component))>tol:
			upper = mid
		else:
			lower = mid

	return domain.boundaryPoint(lower,component)


def null_residuals(m,x,points,tol=1e-10):

	"""
	|g(v,v)|/|v|^2 of the geodesics shot from x to each point

	"""

	x = np.asarray(x,dtype=float)
	residuals = list()
	for p in np.atleast_2d(points):
		if np.allclose(p,x,atol=1e-12):
			residuals.append(0.)
			continue
		v = shoot(m,x,p,tol=tol).vec
		residuals.append(abs(m.norm2(x,v))/v.dot(v))

	return np.array(residuals)
