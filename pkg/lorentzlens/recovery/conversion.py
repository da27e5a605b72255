"""

.. module:: conversion
	:platform: Unix
	:synopsis: Conversions between interior and complete scattering data: interior data from complete tables, lightlike interior travel times from the interior relation, complete data from interior data and a known collar


"""

from __future__ import division

import time

import numpy as np
import pandas as pd
from scipy.spatial import cKDTree
from scipy.sparse.csgraph import connected_components
from scipy.sparse import coo_matrix

from ..simulations.logs import logrecovery
from ..simulations.geodesics import integrate_geodesic,find_boundary_events,trace_through_domain,shoot,sample_transversal_perturbation,ENTER,TANGENTIAL,default_tol,default_event_tol,default_tangent_threshold,default_scan_dt,probe_dt,_unpack
from ..scattering.relation import ScatteringSample,interior_scattering,complete_scattering,future_frame,INTERIOR,COMPLETE,boundary_tol
from ..scattering.table import ScatteringTable,state_columns,RECOVERED_INTERIOR,RECOVERED_LIGHTLIKE,RECOVERED_COMPLETE
from ..geometry.metric import TangentVec,LORENTZIAN,LIGHTLIKE
from ..geometry.domain import boundary_frame
from ..utils.algorithms import derivative
from ..utils.exceptions import LorentzLensError,RecoveryError,InterpolationError,IncompleteTableError,ConsistencyError,NonTerminatingError,ShootingError,SamplingError

#Distance below which two exit states are identified
exit_tol = 1e-6

#Lambda spacing of the one sided stencils
lambda_step = 1e-3

#Exterior approximation schedule
sigma_start = 1e-3
limit_tol = 1e-6
limit_repeat = 3
max_refinements = 30

#Anchors of the exterior first variation
anchor_count = 32

############################################################
###################Interior oracles#########################
############################################################

class DirectInteriorOracle(object):

	"""
	Interior scattering relation evaluated by tracing with the true metric

	"""

	def __init__(self,m,d,t_max,**kwargs):
		self.metric = m
		self.domain = d
		self.t_max = t_max
		self.options = kwargs

	def __repr__(self):
		return "<DirectInteriorOracle {0}>".format(self.metric)

	def query(self,state):
		return interior_scattering(self.metric,self.domain,state,self.t_max,**self.options)


class TableInteriorOracle(object):

	"""
	Interior scattering relation read from a table: exact matches are returned as stored, other states are interpolated linearly from their nearest inbound neighbours

	:param table: interior scattering table
	:type table: :py:class:`ScatteringTable`

	:param neighbours: number of neighbours used in the local linear fit
	:type neighbours: int.

	:param max_distance: largest admissible distance to the nearest tabulated inbound state
	:type max_distance: float.

	"""

	def __init__(self,table,neighbours=8,max_distance=0.05):

		if (table["kind"]!=INTERIOR).any():
			raise ValueError("TableInteriorOracle needs an interior table!")

		n = table.dimension
		self.table = table
		self.neighbours = min(neighbours,table.nsamples)
		self.max_distance = max_distance

		self._features = table[state_columns("x",n)+state_columns("v",n)].values.astype(float)
		self._targets = np.hstack((table[state_columns("y",n)+state_columns("w",n)].values.astype(float),table[["tau","length"]].values.astype(float)))
		self._tree = cKDTree(self._features)

	def __repr__(self):
		return "<TableInteriorOracle samples={0}>".format(self.table.nsamples)

	def query(self,state):

		n = self.table.dimension
		q = np.concatenate((state.base,state.vec))
		distances,indices = self._tree.query(q,k=self.neighbours)
		distances,indices = np.atleast_1d(distances),np.atleast_1d(indices)

		if distances[0]>self.max_distance:
			raise InterpolationError("Nearest tabulated state at distance {0:.3e} > {1:.3e}".format(distances[0],self.max_distance),required_density=distances[0]/self.max_distance)

		if distances[0]<1e-12 or len(indices)<2:
			target = self._targets[indices[0]]
		else:
			#Local linear fit about the query
			F = self._features[indices] - q
			Y = self._targets[indices]
			design = np.hstack((np.ones((len(indices),1)),F))
			weights = 1./(distances+1e-12)
			coefficients,_,_,_ = np.linalg.lstsq(design*weights[:,None],Y*weights[:,None],rcond=None)
			target = coefficients[0]

		return ScatteringSample(TangentVec(state.base,state.vec),TangentVec(target[:n],target[n:2*n]),target[2*n],target[2*n+1],INTERIOR,1)

############################################################
######Interior data from complete data (closed tables)######
############################################################

def close_under_flow(m,d,table,t_max,**kwargs):

	"""
	Add to a complete table the tangential boundary states traversed by its geodesics, so that each group of states sharing the same final exit is complete

	:returns: :py:class:`ScatteringTable`

	"""

	samples = table.samples()
	extra = list()

	for s in samples:
		full = complete_scattering(m,d,s.inbound,t_max,**kwargs)
		for event in full.events[:-1]:
			if event.kind==TANGENTIAL and not event.leaves:
				state = event.state()
				if table.lookup(state) is None:
					extra.append(complete_scattering(m,d,state,t_max,**kwargs))

	#Tangential states reached by more than one tabulated geodesic
	unique = list()
	for s in extra:
		key = np.round(np.concatenate((s.inbound.base,s.inbound.vec)),9)
		if not any(np.all(key==k) for k,_ in unique):
			unique.append((key,s))

	logrecovery.info("Closed complete table under the flow: {0} tangential states added".format(len(unique)))

	provenance = list(table["provenance"]) + ["direct"]*len(unique)
	return ScatteringTable.fromSamples(samples+[s for _,s in unique],grid_meta=table.grid_meta,failures=table.failures,provenance=provenance,n=table.dimension)


def exit_groups(table,tol=exit_tol):

	"""
	Label the rows of a table by final exit state: rows whose outbound states are within tol share a label

	"""

	n = table.dimension
	exits = table[state_columns("y",n)+state_columns("w",n)].values.astype(float)
	pairs = cKDTree(exits).query_pairs(tol,output_type="ndarray")

	adjacency = coo_matrix((np.ones(len(pairs)),(pairs[:,0],pairs[:,1])),shape=(len(exits),len(exits)))
	_,labels = connected_components(adjacency,directed=False)

	return labels


def recover_interior_from_complete(table,tol=exit_tol,time_tol=1e-9):

	"""
	Interior scattering data from a complete table closed under the flow: rows sharing the final exit lie on the same geodesic, ordered by their remaining travel time; the interior state of a row is the next state along the flow, the row with the largest travel time below its own

	:param table: complete table, closed under the flow (see :py:func:`close_under_flow`)
	:type table: :py:class:`ScatteringTable`

	:returns: interior :py:class:`ScatteringTable` with provenance recovered_interior

	:raises: :py:class:`IncompleteTableError`

	"""

	if (table["kind"]!=COMPLETE).any():
		raise ValueError("recover_interior_from_complete needs a complete table!")

	n = table.dimension
	frame = pd.DataFrame(table)
	frame["group"] = exit_groups(table,tol)

	samples = list()
	for index,row in frame.iterrows():

		group = frame[frame["group"]==row["group"]]
		earlier = group[group["tau"]<row["tau"]-time_tol]
		inbound = TangentVec(row[state_columns("x",n)].values.astype(float),row[state_columns("v",n)].values.astype(float))
		#No boundary state in between: the first event is the final exit
		if not len(earlier):
			if row["event_count"]>1:
				raise IncompleteTableError("Row {0} traverses {1} boundary events but its group has no intermediate state".format(index,row["event_count"]))
			outbound = TangentVec(row[state_columns("y",n)].values.astype(float),row[state_columns("w",n)].values.astype(float))
			samples.append(ScatteringSample(inbound,outbound,float(row["tau"]),float(row["length"]),INTERIOR,1))
			continue

		nxt = earlier.loc[earlier["tau"].idxmax()]
		outbound = TangentVec(nxt[state_columns("x",n)].values.astype(float),nxt[state_columns("v",n)].values.astype(float))
		tau = float(row["tau"]-nxt["tau"])
		length = float(row["length"]-nxt["length"])
		samples.append(ScatteringSample(inbound,outbound,tau,length,INTERIOR,1))

	logrecovery.info("Recovered {0} interior samples from a complete table with {1} exit groups".format(len(samples),frame["group"].nunique()))
	return ScatteringTable.fromSamples(samples,grid_meta=table.grid_meta,failures=table.failures,provenance=RECOVERED_INTERIOR,n=n)

############################################################
#######Lightlike interior travel time from S^in only#######
############################################################

def exit_family(m,d,y,w):

	"""
	Family of exit velocities w(lambda) = alpha(T + (1-lambda/alpha^2)E) at the exit point y, with w(0) = w lightlike, T the future timelike unit boundary tangent, alpha = -g(w,T) and g(w(lambda),w(lambda)) = -2 lambda + lambda^2/alpha^2

	:returns: (callable lambda -> w(lambda),alpha)

	"""

	T = future_frame(m,d,y).timelike_tangent
	alpha = -m.inner(y,w,T)
	if alpha<=0:
		raise RecoveryError("Exit velocity {0} is not future pointing".format(np.asarray(w).tolist()))

	E = np.asarray(w)/alpha - T
	return (lambda l:alpha*(T + (1.-l/alpha**2)*E)),alpha


def recover_lightlike_tau_interior(oracle,m,d,target,step=lambda_step,rtol=1e-3):

	"""
	Interior travel time of a lightlike inward state from the interior scattering relation alone. The exit velocity is deformed into timelike directions w(lambda) with h'(0)=-2; the starts x(lambda) of the geodesics exiting with (y,w(lambda)) are read from the relation on the reversed states, and tau = -2g(x'(0),v)/h'(0) = g(x'(0),v)

	:param oracle: interior scattering relation
	:type oracle: :py:class:`DirectInteriorOracle` or :py:class:`TableInteriorOracle`

	:param m: metric, used at the boundary only
	:type m: :py:class:`ChartMetric`

	:param target: lightlike inward state
	:type target: :py:class:`TangentVec`

	:returns: (outbound state,tau)

	:raises: :py:class:`RecoveryError`

	"""

	x,v = _unpack(target)
	exit_state = oracle.query(TangentVec(x,v)).outbound
	y,w = exit_state.base,exit_state.vec

	family,alpha = exit_family(m,d,y,w)

	def start(l):
		reversed_sample = oracle.query(TangentVec(y,-family(l)))
		return reversed_sample.outbound.base

	#x(lambda) only exists for lambda >= 0 (timelike side)
	x_prime,error = derivative(start,0.,step,kind="forward")
	h_prime = -2.

	scale = max(np.abs(x_prime).max(),1.)
	if not np.all(np.isfinite(x_prime)) or error.max()>rtol*scale:
		raise RecoveryError("Starting point family not differentiable at lambda=0 (Richardson error {0:.2e})".format(error.max()))

	tau = -2*m.inner(x,x_prime,v)/h_prime
	logrecovery.debug("Lightlike interior travel time from {0}: tau={1:.10f} (alpha={2:.4f}, stencil error {3:.2e})".format(x.tolist(),tau,alpha,error.max()))

	return exit_state,tau


def recover_lightlike_table(oracle,m,d,targets,**kwargs):

	"""
	Apply :py:func:`recover_lightlike_tau_interior` to a list of lightlike states, recording failures

	:returns: interior :py:class:`ScatteringTable` with provenance recovered_lightlike

	"""

	samples = list()
	failures = list()

	for target in targets:
		try:
			outbound,tau = recover_lightlike_tau_interior(oracle,m,d,target,**kwargs)
			samples.append(ScatteringSample(target,outbound,tau,0.,INTERIOR,1))
		except LorentzLensError as e:
			failures.append(dict(input=dict(x=target.base.tolist(),v=target.vec.tolist()),error=e.__class__.__name__,message=str(e)))
			logrecovery.warning("Lightlike recovery from {0} failed: {1}".format(target.base.tolist(),e))

	return ScatteringTable.fromSamples(samples,failures=failures,provenance=RECOVERED_LIGHTLIKE,n=m.dimension)

############################################################
########Complete data from interior data and a collar#######
############################################################

def collar_delta(m,d,boundary_points,t_max,tol=default_tol):

	"""
	Step bound: half of the smallest time a unit inward normal geodesic takes to cross the collar, floored at 1e-3 t_max

	"""

	times = list()
	for x in boundary_points:

		frame = boundary_frame(m,d,x,tol=boundary_tol)
		event = _collar_event(d)
		trace = integrate_geodesic(m,(x,frame.inward_normal),t_max,tol=tol,extra_events=[event])
		hits = trace.t_events[-1]
		if len(hits):
			times.append(hits[0])

	if not times:
		return 1e-3*t_max

	return max(0.5*min(times),1e-3*t_max)


def _collar_event(d):

	def reach(t,y):
		return d.depth(y[:len(y)//2]) - d.collar_width

	reach.terminal = True
	reach.direction = 1

	return reach


class CompleteRecovery(object):

	"""
	Outcome of the recovery of one complete scattering datum: the recovered sample, the Step 1 anchors and the diagnostics of the exterior limits

	"""

	def __init__(self,sample,anchors,converged,tau_step2=np.nan,step2_monotone=True):
		self.sample = sample
		self.anchors = anchors
		self.converged = converged
		self.tau_step2 = tau_step2
		self.step2_monotone = step2_monotone

	@property
	def iterations(self):
		return len(self.anchors)

	@property
	def discrepancy(self):
		return abs(self.sample.tau-self.tau_step2)

	def __repr__(self):
		return "<CompleteRecovery tau={0:.10f} iterations={1} converged={2}>".format(self.sample.tau,self.iterations,self.converged)


class CollarStepper(object):

	"""
	Complete scattering from the interior relation and the metric on a collar of the boundary. Geodesics are followed with the known metric until they leave the domain or go deeper than the collar width; in the second case the interior relation is queried at the last boundary touch, through exterior approximations when that touch is tangential

	:param oracle: interior scattering relation
	:type oracle: :py:class:`DirectInteriorOracle` or :py:class:`TableInteriorOracle`

	:param m: metric, evaluated in the collar and outside of the domain only
	:type m: :py:class:`ChartMetric`

	:param d: domain with its collar width
	:type d: :py:class:`DomainSpec`

	:param delta: progress bound; see :py:func:`collar_delta`
	:type delta: float.

	"""

	def __init__(self,oracle,m,d,t_max,delta,tol=default_tol,event_tol=default_event_tol,tangent_threshold=default_tangent_threshold,seed=0,max_rejections=1000):

		self.oracle = oracle
		self.metric = m
		self.domain = d
		self.t_max = t_max
		self.delta = delta
		self.tol = tol
		self.event_tol = event_tol
		self.tangent_threshold = tangent_threshold
		self.seed = seed
		self.max_rejections = max_rejections

		self.max_iterations = int(np.ceil(t_max/delta))

	def __repr__(self):
		return "<CollarStepper delta={0:.4e} max_iterations={1}>".format(self.delta,self.max_iterations)

	###############################
	#Collar tracing################
	###############################

	def traceCollar(self,state,budget):

		"""
		Follow a geodesic in the collar

		:returns: (leaving event or None,last boundary touch before the collar depth is reached (parameter,state),collar exit parameter)

		"""

		m,d = self.metric,self.domain
		x,v = _unpack(state)

		trace = integrate_geodesic(m,(x,v),budget,tol=self.tol,max_step=0.25*d.collar_width,extra_events=[_collar_event(d)])
		scan_dt = min(default_scan_dt,abs(budget)/64.)
		events = find_boundary_events(trace,d,event_tol=self.event_tol,tangent_threshold=self.tangent_threshold,scan_dt=scan_dt)

		for event in events:
			if event.leaves:
				return event,None,None

		hits = trace.t_events[-1]
		if not len(hits):
			raise NonTerminatingError("Geodesic from {0} neither leaves the domain nor the collar within the budget".format(x.tolist()))

		t_collar = hits[0]
		last = (0.,TangentVec(x,v))
		for event in events:
			if event.t<t_collar:
				last = (event.t,event.state())

		return None,last,t_collar

	###############################
	#Exterior approximations#######
	###############################

	def _approximation(self,z,u,target,sigma,seed):

		m,d = self.metric,self.domain
		nu = boundary_frame(m,d,z,tol=boundary_tol).outward_normal
		p = z + sigma*nu - sigma*u

		aim = shoot(m,p,target[0],v0=(target[0]-p)/(target[1]+sigma),t_fixed=target[1]+sigma,ode_tol=self.tol)
		budget = target[1]+2*sigma
		eta = sample_transversal_perturbation(m,d,p,aim.vec,sigma,seed,budget,max_rejections=self.max_rejections,require_inward=False,tol=self.tol,tangent_threshold=self.tangent_threshold)

		trace = trace_through_domain(m,d,eta,budget,tol=self.tol,event_tol=self.event_tol,tangent_threshold=self.tangent_threshold)
		entries = [e for e in trace.events if e.kind==ENTER]
		if not entries:
			return None

		return self.oracle.query(entries[-1].state())

	def queryLimit(self,z,u,t_collar):

		"""
		Interior scattering of the (tangential) state (z,u) as the limit of the interior scattering of transversal states entering from outside the domain

		:returns: (limit sample,converged)

		"""

		m = self.metric
		target = integrate_geodesic(m,(z,u),0.5*t_collar,tol=self.tol).endpoint[0],0.5*t_collar

		history = list()
		stable = 0
		sigma = sigma_start

		for j in range(max_refinements):

			try:
				sample = self._approximation(z,u,target,sigma,self.seed+j)
			except (ShootingError,SamplingError) as e:
				logrecovery.debug("Exterior approximation at sigma={0:.2e} failed: {1}".format(sigma,e))
				sample = None

			if sample is not None:
				value = np.concatenate((sample.outbound.base,sample.outbound.vec,[sample.tau]))
				if history and np.abs(value-history[-1][0]).max()<limit_tol:
					stable += 1
				else:
					stable = 0
				history.append((value,sample))
				logrecovery.debug("Exterior approximation sigma={0:.2e}: tau_in={1:.10f}".format(sigma,sample.tau))

				if stable>=limit_repeat:
					return sample,True

			sigma *= 0.5

		if not history:
			raise RecoveryError("No exterior approximation of {0},{1} enters the domain".format(z.tolist(),u.tolist()))

		logrecovery.warning("Exterior approximations of {0} did not settle within {1} refinements".format(z.tolist(),max_refinements))
		return history[-1][1],False

	###############################
	#Step 1########################
	###############################

	def _checkOnFlow(self,energy,u,limit):

		m = self.metric
		y,w = limit.base,limit.vec
		if abs(self.domain.phi(y))>boundary_tol:
			raise ConsistencyError("Limit state {0} is not on the boundary".format(y.tolist()))

		scale = max(1.,np.abs(u).max()**2)
		if abs(m.norm2(y,w)-energy)>1e-6*scale:
			raise ConsistencyError("Limit state {0} does not conserve g(v,v) ({1:.3e} vs {2:.3e})".format(y.tolist(),m.norm2(y,w),energy))

	def step1(self,start):

		"""
		Follow the geodesic from a boundary state to its final exit, alternating collar tracing and interior relation queries

		:returns: (:py:class:`ScatteringSample`,anchors,converged)

		:raises: :py:class:`NonTerminatingError`, :py:class:`ConsistencyError`

		"""

		m,d = self.metric,self.domain
		x,v = _unpack(start)
		energy = m.norm2(x,v)

		state = TangentVec(x,v)
		tau = 0.
		events = 0
		anchors = [0.]
		converged = True

		#Tangential starts leaving the domain at once
		if abs(d.transversality(x,v))<=self.tangent_threshold:
			probe = integrate_geodesic(m,(x,v),probe_dt,tol=self.tol)
			if d.phi(probe.endpoint[0])<=0:
				return ScatteringSample.build(m,state,state,0.,COMPLETE,0),anchors,converged

		for iteration in range(self.max_iterations+1):

			leaving,last,t_collar = self.traceCollar(state,self.t_max-tau)

			#Case (i): the geodesic leaves the domain inside the collar
			if leaving is not None:
				tau += leaving.t
				events += 1
				logrecovery.debug("Step 1 from {0}: leaves at tau={1:.10f} after {2} iterations".format(x.tolist(),tau,iteration))
				return ScatteringSample.build(m,TangentVec(x,v),leaving.state(),tau,COMPLETE,events),anchors,converged

			#Case (ii): it goes deeper than the collar, query the interior relation at the last touch
			t_touch,touch = last
			z,u = touch.base,touch.vec

			if d.transversality(z,u)>self.tangent_threshold:
				sample = self.oracle.query(touch)
				ok = True
			else:
				sample,ok = self.queryLimit(z,u,t_collar-t_touch)

			converged = converged and ok
			self._checkOnFlow(energy,u,sample.outbound)

			previous = tau
			tau += t_touch + sample.tau
			events += 1
			anchors.append(tau)

			if tau-previous<self.delta:
				raise ConsistencyError("Step 1 from {0} progressed by {1:.3e} < delta={2:.3e} at iteration {3}".format(x.tolist(),tau-previous,self.delta,iteration))
			logrecovery.debug("Step 1 iteration {0}: anchor tau={1:.10f} (progress {2:.3e})".format(iteration,tau,tau-previous))

			state = sample.outbound
			if tau>self.t_max:
				break

			#Transversal exit: final
			if d.transversality(state.base,state.vec)< -self.tangent_threshold:
				return ScatteringSample.build(m,TangentVec(x,v),state,tau,COMPLETE,events),anchors,converged

		raise NonTerminatingError("Step 1 from {0} did not terminate within {1} iterations (delta={2:.3e})".format(x.tolist(),self.max_iterations,self.delta))

	###############################
	#Step 2########################
	###############################

	def step2(self,start,step=lambda_step,anchors=anchor_count):

		"""
		Complete travel time of a lightlike state by the first variation in the exterior: v(lambda) = v + lambda a with a = -T/g(v,T) (h'(0)=-2), each member followed to its final exit with Step 1 and further to a hyperplane through an exterior anchor z on the continuation of the exit; tau = -g(z'(0),u) minus the exterior parameter of the anchor, infimum over the anchors

		:returns: (tau,monotone flag)

		"""

		m,d = self.metric,self.domain
		x,v = _unpack(start)

		T = future_frame(m,d,x).timelike_tangent
		a = -T/m.inner(x,v,T)

		exits = dict()
		def exit_state(l):
			if l not in exits:
				sample,_,_ = self.step1(TangentVec(x,v+l*a))
				exits[l] = sample.outbound
			return exits[l]

		y,w = exit_state(0.).base,exit_state(0.).vec
		t0s = np.geomspace(d.collar_width,1e-3*d.collar_width,anchors)/max(np.linalg.norm(w),1e-12)

		values = list()
		for t0 in t0s:

			z,u = integrate_geodesic(m,(y,w),t0,tol=self.tol).endpoint
			normal = u/np.linalg.norm(u)

			def crossing(l):
				state = exit_state(l)
				hyperplane = lambda t,Y:(Y[:len(Y)//2]-z).dot(normal)
				hyperplane.terminal = True
				trace = integrate_geodesic(m,(state.base,state.vec),4*t0+1.,tol=self.tol,extra_events=[hyperplane])
				hits = trace.t_events[-1]
				if not len(hits):
					raise RecoveryError("Exterior continuation does not reach the anchor hyperplane")
				return trace.state(hits[0])[0]

			z_prime,_ = derivative(crossing,0.,step,kind="forward")
			values.append(-m.inner(z,z_prime,u) - t0)

		values = np.array(values)
		running = np.minimum.accumulate(values)
		monotone = bool(np.all(values[1:]<=running[:-1]+1e-5*max(1.,abs(running[-1]))))
		if not monotone:
			logrecovery.warning("Exterior first variation values from {0} are not monotone (spread {1:.3e})".format(x.tolist(),values.max()-values.min()))

		return running[-1],monotone

	def recover(self,start,lightlike_step2=True):

		sample,anchors,converged = self.step1(start)
		result = CompleteRecovery(sample,anchors,converged)

		if lightlike_step2 and self.metric.signature==LORENTZIAN and sample.tau>0 and self.metric.causalClass(sample.inbound.base,sample.inbound.vec)==LIGHTLIKE:
			result.tau_step2,result.step2_monotone = self.step2(start)

		return result


class _RecoveryWorker(object):

	def __init__(self,stepper,lightlike_step2):
		self.stepper = stepper
		self.lightlike_step2 = lightlike_step2

	def __call__(self,state):
		try:
			return self.stepper.recover(state,self.lightlike_step2),None
		except LorentzLensError as e:
			logrecovery.warning("Complete recovery from {0} failed: {1}".format(state.base.tolist(),e))
			return None,dict(input=dict(x=state.base.tolist(),v=state.vec.tolist()),error=e.__class__.__name__,message=str(e))


def recover_complete_from_interior(oracle,m,d,starts,t_max,delta=None,lightlike_step2=True,pool=None,**kwargs):

	"""
	Complete scattering data from the interior relation and the collar metric

	:param starts: boundary states (inward or tangential)
	:type starts: list of :py:class:`TangentVec`

	:param delta: progress bound; computed with :py:func:`collar_delta` at the start points when None
	:type delta: float.

	:returns: complete :py:class:`ScatteringTable` with provenance recovered_complete, Step 2 and diagnostic columns

	"""

	if delta is None:
		delta = collar_delta(m,d,[s.base for s in starts],t_max)

	stepper = CollarStepper(oracle,m,d,t_max,delta,**kwargs)
	logrecovery.info("Recovering {0} complete samples with {1}".format(len(starts),stepper))

	start_time = time.time()

	M = map if pool is None else pool.map
	results = list(M(_RecoveryWorker(stepper,lightlike_step2),starts))

	recovered = [r for r,f in results if r is not None]
	failures = [f for r,f in results if f is not None]

	table = ScatteringTable.fromSamples([r.sample for r in recovered],grid_meta=dict(delta=delta,t_max=t_max),failures=failures,provenance=RECOVERED_COMPLETE,n=m.dimension)
	table["iterations"] = [r.iterations for r in recovered]
	table["converged"] = [r.converged for r in recovered]
	table["tau_step2"] = [r.tau_step2 for r in recovered]
	table["step_discrepancy"] = [r.discrepancy for r in recovered]

	logrecovery.info("Recovered {0} complete samples ({1} failures) in {2:.2f}s".format(len(recovered),len(failures),time.time()-start_time))
	return table
