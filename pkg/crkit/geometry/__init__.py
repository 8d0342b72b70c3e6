"""Numerics of the complex hyperbolic plane: models, isometries, flows, surgery, figure-eight family."""
