"""Double forms, generalized double duals of curvature, and chart-based checks."""
__version__ = "0.1.0"
