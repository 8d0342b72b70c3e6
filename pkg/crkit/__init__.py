"""Complex hyperbolic plane toolkit: isometries, flows, surgery slopes, figure-eight family."""
