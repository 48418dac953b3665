"""Shared helpers: formatting, grids, quadrature, summation, CSV and SVG output."""
