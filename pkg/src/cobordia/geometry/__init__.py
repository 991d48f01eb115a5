"Point-cloud geometry: alpha filtrations and their Voronoi duals."
