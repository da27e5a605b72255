"""

.. module:: geometry
	:platform: Unix
	:synopsis: Metrics on a coordinate chart and domains with boundary


"""

from .metric import ChartMetric,TangentVec,eval_metric,christoffel,causal_class,RIEMANNIAN,LORENTZIAN,TIMELIKE,LIGHTLIKE,SPACELIKE,ZERO
from .domain import DomainSpec,BoundaryFrame,boundary_frame,second_fundamental_form
