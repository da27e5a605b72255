"""

.. module:: jacobi
	:platform: Unix
	:synopsis: Jacobi fields along integrated geodesics and detection of conjugate points


"""

from __future__ import division

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq,minimize_scalar

from .logs import loggeo
from ..utils.exceptions import StiffnessError

curvature_step = 1e-5
conj_tol = 1e-7

##############################################
#############JacobiSolution class#############
##############################################

class JacobiSolution(object):

	"""
	Jacobi field along a geodesic trace: J and its covariant derivative J' at the sample parameters, plus dense output

	"""

	def __init__(self,along,t,J,J_prime,solution,first_zero=None):
		self.along = along
		self.t = t
		self.J = J
		self.J_prime = J_prime
		self.solution = solution
		self.first_zero = first_zero

	def __call__(self,t):
		n = self.along.metric.dimension
		return self.solution(t)[:n]

	def __repr__(self):
		return "<JacobiSolution samples={0} first_zero={1}>".format(len(self.t),self.first_zero)


def christoffel_derivative(metric,x,h=curvature_step):

	"""
	Central differences of the Christoffel symbols, indexed [m,k,i,j] = d_m Gamma^k_ij

	"""

	n = metric.dimension
	dgamma = np.zeros((n,n,n,n))
	for m in range(n):
		e = np.zeros(n)
		e[m] = h
		dgamma[m] = (metric.gammaRaw(x+e) - metric.gammaRaw(x-e))/(2*h)

	return dgamma


def _variational_rhs(trace,columns):

	metric = trace.metric
	n = metric.dimension

	def rhs(t,y):

		state = trace.solution(t)
		x,v = state[:n],state[n:]
		X = y[:n*columns].reshape(n,columns)
		W = y[n*columns:].reshape(n,columns)

		gamma = metric.gammaRaw(x)
		dgamma = christoffel_derivative(metric,x)

		accel = -np.einsum("mkij,ma,i,j->ka",dgamma,X,v,v) - 2*np.einsum("kij,i,ja->ka",gamma,v,W)
		return np.concatenate((W.ravel(),accel.ravel()))

	return rhs


def _integrate_variations(trace,X0,W0,tol):

	n = trace.metric.dimension
	columns = X0.shape[1]
	y0 = np.concatenate((X0.ravel(),W0.ravel()))
	solution = solve_ivp(_variational_rhs(trace,columns),(trace.t[0],trace.t_end),y0,method="DOP853",rtol=tol,atol=tol,dense_output=True)

	if solution.status==-1:
		raise StiffnessError("Jacobi integration failed: {0}".format(solution.message))

	return solution


def jacobi_field(trace,J0,J0_prime,tol=1e-10):

	"""
	Integrate the Jacobi equation along a trace through the variational system of the geodesic equation

	:param trace: geodesic with dense output
	:type trace: :py:class:`GeodesicTrace`

	:param J0: J(0)
	:type J0: array

	:param J0_prime: covariant derivative J'(0)
	:type J0_prime: array

	:returns: :py:class:`JacobiSolution`

	"""

	metric = trace.metric
	n = metric.dimension
	J0 = np.asarray(J0,dtype=float)
	J0_prime = np.asarray(J0_prime,dtype=float)

	x0,v0 = trace.state(trace.t[0])
	gamma0 = metric.gammaRaw(x0)

	#Covariant to coordinate derivative
	W0 = J0_prime - np.einsum("kij,i,j->k",gamma0,v0,J0)
	solution = _integrate_variations(trace,J0[:,None],W0[:,None],tol)

	J = solution.y[:n].T
	J_prime = np.zeros_like(J)
	for k,t in enumerate(solution.t):
		x,v = trace.state(t)
		J_prime[k] = solution.y[n:,k] + np.einsum("kij,i,j->k",metric.gammaRaw(x),v,J[k])

	result = JacobiSolution(trace,solution.t,J,J_prime,solution.sol)

	#First nontrivial zero
	if np.linalg.norm(J0)==0. and np.linalg.norm(J0_prime)>0.:
		grid = np.linspace(trace.t[0],trace.t_end,400)[1:]
		norms = np.array([np.linalg.norm(solution.sol(t)[:n]) for t in grid])
		scale = norms.max()
		for i in range(1,len(grid)-1):
			if norms[i]<=norms[i-1] and norms[i]<=norms[i+1]:
				res = minimize_scalar(lambda t:np.linalg.norm(solution.sol(t)[:n]),bounds=(grid[i-1],grid[i+1]),method="bounded",options=dict(xatol=1e-12))
				if res.fun<1e-6*scale:
					result.first_zero = res.x
					break

	return result


def first_conjugate_time(trace,conj_tol=conj_tol,tol=1e-10,samples=400):

	"""
	First parameter t > 0 where the fields with J(0) = 0 span a degenerate subspace: sign changes of det(A(t)/t) refined by Brent's method, and minima of the smallest singular value below conj_tol

	:param trace: geodesic with dense output
	:type trace: :py:class:`GeodesicTrace`

	:returns: conjugate parameter or None
	:rtype: float.

	"""

	n = trace.metric.dimension

	#J(0)=0, J'(0)=e_i for each coordinate direction
	X0 = np.zeros((n,n))
	W0 = np.eye(n)
	solution = _integrate_variations(trace,X0,W0,tol)

	def scaled(t):
		return solution.sol(t)[:n*n].reshape(n,n)/(t-trace.t[0])

	det = lambda t:np.linalg.det(scaled(t))
	smin = lambda t:np.linalg.svd(scaled(t),compute_uv=False)[-1]

	grid = np.linspace(trace.t[0],trace.t_end,samples)[1:]
	dets = np.array([det(t) for t in grid])
	mins = np.array([smin(t) for t in grid])

	for i in range(len(grid)-1):

		if dets[i]*dets[i+1]<0:
			t_conj = brentq(det,grid[i],grid[i+1],xtol=1e-13)
			loggeo.debug("Conjugate point at t={0:.10f} (determinant sign change)".format(t_conj))
			return t_conj

		if i>0 and mins[i]<=mins[i-1] and mins[i]<=mins[i+1]:
			res = minimize_scalar(smin,bounds=(grid[i-1],grid[i+1]),method="bounded",options=dict(xatol=1e-12))
			if res.fun<conj_tol:
				loggeo.debug("Conjugate point at t={0:.10f} (singular value minimum)".format(res.x))
				return res.x

	return None
