"""Soliton curvature verification engine."""
