"""Accessible street-level panorama navigation engine.

A keyboard-first navigator over a graph of geolocated panoramas: octant
panning, step/jump/teleport movement, diff-based spoken status messages,
and a context-aware AI layer with a deterministic offline mock provider.
Worlds are self-contained JSON fixtures, so everything runs and verifies
without any live map or model service.
"""

__version__ = "0.1.0"
