from .geodesics import GeodesicTrace,BoundaryEvent,integrate_geodesic,trace_through_domain,find_boundary_events,exp_map,shoot,sample_transversal_perturbation,ENTER,EXIT,TANGENTIAL,REACHED_T_MAX,LEFT_CHART,EVENT_STOP
from .jacobi import JacobiSolution,jacobi_field,first_conjugate_time
from .settings import NumericsSettings,LLSettings,select_parser
