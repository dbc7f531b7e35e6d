# Graph-TSP approximation package
