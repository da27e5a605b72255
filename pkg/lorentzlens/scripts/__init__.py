"""

.. module:: scripts
	:platform: Unix
	:synopsis: Scenario driven command line front end


"""

experiments = {

"trace" : "Integrate a geodesic through the domain and export the trace and its boundary events",
"scatter_table" : "Sample the interior or complete scattering relation over a boundary grid and a direction cone",
"convert_scattering" : "Convert complete data into interior data (or interior into complete) and compare with direct tables",
"recover_tau" : "Recover lightlike interior travel times from timelike interior scattering families",
"recover_jet" : "Probe the travel time about a convex boundary direction and recover the normal jet of the metric",
"jet_linearity" : "Check that the travel time expansion depends linearly on a perturbation of the m-th normal derivative",
"timesep_grid" : "Evaluate the time separation function from a point on a list of points",
"lightcone_id" : "Identify the light cone of a boundary point on a boundary grid",
"exterior_reconstruct" : "Lightlike travel time data across an obstacle from exterior measurements",
"verify_isometry" : "Construct the map between two copies of a metric from boundary data and verify it is an isometry",
"selftest" : "Exact rational identities and fast numerical invariants",

}
