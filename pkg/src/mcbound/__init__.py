"""Projection-based lower bounds of multipartite concurrence."""
__version__ = "0.1.0"
