"""Knot Floer homology of braid closures from grid diagrams."""
