"""Beam power prediction for mmWave vehicle-to-infrastructure links.

A synthetic urban-canyon simulator (scene, ray tracer, channel, beam sweep)
produces labelled datasets; in-repo learners predict beam powers from the
locations of surrounding vehicles.
"""
from .learn import BACKEND as CART_BACKEND

__version__ = "0.1.0"

__all__ = ["CART_BACKEND", "__version__"]
