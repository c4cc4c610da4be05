"""Discrete curve shortening on polygons and its affine solitons."""
