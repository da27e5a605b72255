from .timesep import TimeSeparationField,SeparationValue,CLOSED_FORM,SHOOTING,CHAIN
from .causal import causal_boundary_class,CutLocusProbe,cut_locus_probe,cut_lower_bound,separation_gradient,recover_null_direction_via_gradient,CHRONOLOGICAL,NULL_BOUNDARY,NON_CAUSAL,INDETERMINATE,CONJUGATE_POINT,SECOND_GEODESIC,NONE_WITHIN_BUDGET
from .exterior import ObstacleRegion,ExteriorDatum,arrival_time,cone_exit,exterior_lightlike_traveltime
from .lightcone import LightconeGrid,boundary_lightcone_id,null_residuals
from .isometry import IsometryCandidate,jacobian,null_frame_directions,check_pushforward,construct_isometry,verify_isometry
