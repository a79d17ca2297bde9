"""Ricci sign and orbit-volume convexity on toric Kähler manifolds and on CP^3."""

__version__ = "0.1.0"
