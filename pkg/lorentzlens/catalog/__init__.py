from .catalog import catalogs,load,minkowski,minkowski_polar,minkowski_slab,minkowski_cylinder,minkowski_annulus,product_sphere,product_conformal,euclidean_disk,jet_perturbed,minkowski_separation
