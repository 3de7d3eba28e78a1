"""Steiner ratio experiments on constant-curvature surfaces and their quotients."""

__version__ = "0.1.0"
